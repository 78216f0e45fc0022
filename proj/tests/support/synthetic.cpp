#include "synthetic.hpp"

#include <string>

#include "xgbias/rng.hpp"
#include "xgbias/xg_core/features.hpp"

namespace xgbias::testing {

ShotDataset synthetic_dataset(const xg::XgModel& generator, const SyntheticSpec& spec) {
  ShotDataset ds;
  ds.provenance = "synthetic";
  Rng rng(spec.seed);
  for (std::size_t p = 0; p < spec.players; ++p) {
    PlayerProfile prof;
    prof.player_id = static_cast<Id>(p + 1);
    prof.name = "player " + std::to_string(p + 1);
    prof.primary_position = static_cast<Position>(p % 3);
    prof.total_minutes = 300 + static_cast<int>(p % 10) * 300;
    ds.players[prof.player_id] = prof;
  }
  for (std::size_t t = 0; t < spec.teams; ++t) {
    TeamRating team;
    team.team_id = static_cast<Id>(100 + t);
    team.name = "team " + std::to_string(t);
    team.tier = static_cast<TeamTier>(t % 3);
    team.elo = 1800.0 + 50.0 * static_cast<double>(t);
    ds.teams[team.team_id] = team;
  }
  ds.shots.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    ShotRecord s;
    s.shot_id = "s" + std::to_string(i);
    s.match_id = static_cast<Id>(i / 25);
    s.player_id = static_cast<Id>(i % spec.players + 1);
    s.team_id = static_cast<Id>(100 + s.player_id % static_cast<Id>(spec.teams));
    s.minute = static_cast<int>(i % 90);
    s.start_x = spec.x_lo + (spec.x_hi - spec.x_lo) * rng.uniform();
    s.start_y = spec.y_lo + (spec.y_hi - spec.y_lo) * rng.uniform();
    const double u = rng.uniform();
    s.body_part = u < spec.p_other ? BodyPart::kOther
                  : u < spec.p_other + spec.p_head ? BodyPart::kHead
                                                   : BodyPart::kFoot;
    s.is_deflected = rng.uniform() < 0.05;
    s.is_goal = rng.bernoulli(generator.predict(xg::extract_features(s)));
    ds.shots.push_back(std::move(s));
  }
  for (const auto& s : ds.shots) ds.players[s.player_id].total_shots += 1;
  return ds;
}

}  // namespace xgbias::testing
