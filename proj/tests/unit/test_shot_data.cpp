#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "synthetic.hpp"
#include "xgbias/error.hpp"
#include "xgbias/shot_data/shot_cache.hpp"
#include "xgbias/shot_data/split.hpp"
#include "xgbias/shot_data/statsbomb.hpp"
#include "xgbias/shot_data/team_ratings.hpp"

namespace xgbias::data {
namespace {

namespace fs = std::filesystem;
const fs::path kData = XGBIAS_TEST_DATA_DIR;

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("xgbias_shot_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ShotRecord, ValidateRejectsOffPitchLocations) {
  ShotRecord s;
  s.shot_id = "x";
  s.start_x = 108;
  s.start_y = 40;
  EXPECT_NO_THROW(validate(s));
  s.start_x = 121;
  EXPECT_THROW(validate(s), DataError);
  s.start_x = 100;
  s.start_y = -0.5;
  EXPECT_THROW(validate(s), DataError);
}

TEST(Enums, RoundTripThroughText) {
  for (auto p : {BodyPart::kFoot, BodyPart::kHead, BodyPart::kOther}) {
    EXPECT_EQ(parse_body_part(to_string(p)), p);
  }
  for (auto p : {Position::kDefender, Position::kMidfielder, Position::kAttacker}) {
    EXPECT_EQ(parse_position(to_string(p)), p);
  }
  for (auto t : {TeamTier::kUclWinner, TeamTier::kTop25, TeamTier::kOther}) {
    EXPECT_EQ(parse_team_tier(to_string(t)), t);
  }
  EXPECT_THROW(parse_body_part("knee"), DataError);
}

TEST(Positions, MapStatsBombNamesOntoThreeClasses) {
  EXPECT_EQ(classify_position("Goalkeeper"), Position::kDefender);
  EXPECT_EQ(classify_position("Left Center Back"), Position::kDefender);
  EXPECT_EQ(classify_position("Right Wing Back"), Position::kDefender);
  EXPECT_EQ(classify_position("Center Defensive Midfield"), Position::kMidfielder);
  EXPECT_EQ(classify_position("Left Attacking Midfield"), Position::kMidfielder);
  EXPECT_EQ(classify_position("Right Wing"), Position::kAttacker);
  EXPECT_EQ(classify_position("Center Forward"), Position::kAttacker);
  EXPECT_EQ(classify_position("Secondary Striker"), Position::kAttacker);
  EXPECT_EQ(classify_position("Substitute"), std::nullopt);
}

class Fixture : public ::testing::Test {
 protected:
  static IngestResult parse(IngestFilter filter = {}) {
    return parse_event_data(kData / "statsbomb", filter, 2);
  }
};

TEST_F(Fixture, KeepsOpenPlayShotsAndReportsBadFiles) {
  const auto r = parse();
  EXPECT_EQ(r.report.matches_parsed, 1u);
  EXPECT_EQ(r.report.shots_seen, 5u);  // s6 has no location, the shoot-out is skipped
  ASSERT_EQ(r.dataset.shots.size(), 3u);
  std::vector<std::string> ids;
  for (const auto& s : r.dataset.shots) ids.push_back(s.shot_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"s1", "s2", "s5"}));
  // missing season file, broken match file, shot without location
  EXPECT_EQ(r.report.errors.size(), 3u);
  EXPECT_EQ(r.earliest_match_date, "2015-08-22");
}

TEST_F(Fixture, ParsesShotAttributes) {
  const auto r = parse();
  const auto& s1 = r.dataset.shots[0];
  EXPECT_EQ(s1.player_id, 1);
  EXPECT_EQ(s1.team_id, 217);
  EXPECT_DOUBLE_EQ(s1.start_x, 108.0);
  EXPECT_TRUE(s1.is_goal);
  EXPECT_EQ(s1.body_part, BodyPart::kFoot);
  const auto& s2 = r.dataset.shots[1];
  EXPECT_EQ(s2.body_part, BodyPart::kHead);
  EXPECT_TRUE(s2.is_deflected);
  EXPECT_FALSE(s2.is_goal);
  EXPECT_EQ(r.dataset.shots[2].body_part, BodyPart::kOther);
  EXPECT_DOUBLE_EQ(r.provider_xg.at("s1"), 0.3);
  EXPECT_FALSE(r.provider_xg.contains("s3"));
}

TEST_F(Fixture, ComputesMinutesAndPositions) {
  const auto r = parse();
  const auto& players = r.dataset.players;
  EXPECT_EQ(players.at(1).total_minutes, 60);  // substituted at 60'
  EXPECT_EQ(players.at(6).total_minutes, 33);  // on at 60', match ends at 93'
  EXPECT_EQ(players.at(3).total_minutes, 85);  // sent off
  EXPECT_EQ(players.at(2).total_minutes, 93);
  EXPECT_EQ(players.at(1).primary_position, Position::kAttacker);
  EXPECT_EQ(players.at(2).primary_position, Position::kDefender);
  EXPECT_EQ(players.at(3).primary_position, Position::kDefender);
  EXPECT_EQ(players.at(5).primary_position, Position::kMidfielder);
  EXPECT_EQ(players.at(6).primary_position, Position::kMidfielder);  // default
  EXPECT_EQ(players.at(1).total_shots, 1);
  EXPECT_EQ(players.at(4).total_shots, 0);  // set pieces only
  EXPECT_FALSE(r.report.warnings.empty());
}

TEST_F(Fixture, SetPiecesKeptWhenRequested) {
  IngestFilter f;
  f.open_play_only = false;
  EXPECT_EQ(parse(f).dataset.shots.size(), 5u);
}

TEST_F(Fixture, SeasonAndPlayerFilters) {
  IngestFilter f;
  f.season_names = {"2018/2019"};
  EXPECT_TRUE(parse(f).dataset.shots.empty());
  f = {};
  f.player_id = 6;
  const auto r = parse(f);
  ASSERT_EQ(r.dataset.shots.size(), 1u);
  EXPECT_EQ(r.dataset.shots[0].shot_id, "s2");
}

TEST_F(Fixture, MissingRootIsConfigError) {
  EXPECT_THROW(parse_event_data(kData / "no-such-dir", {}), ConfigError);
}

TEST(ExtractMatch, RejectsNonArrayDocument) {
  EXPECT_THROW(extract_match(nlohmann::json::object(), 1), DataError);
}

TEST(TeamRatings, TierRuleUsesStrictEloThresholdAndRank) {
  EXPECT_EQ(tier_for(1950.0, 1), TeamTier::kTop25);
  EXPECT_EQ(tier_for(1950.01, 40), TeamTier::kUclWinner);
  EXPECT_EQ(tier_for(1700.0, 25), TeamTier::kTop25);
  EXPECT_EQ(tier_for(1700.0, 26), TeamTier::kOther);
}

TEST(TeamRatings, ReadsDateWindowAndAlignsNames) {
  const auto rows = read_club_elo(kData / "elo.csv", std::string("2015-08-22"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].elo, 2050.5);
  const auto later = read_club_elo(kData / "elo.csv", std::string("2015-11-01"));
  ASSERT_EQ(later.size(), 1u);
  EXPECT_DOUBLE_EQ(later[0].elo, 1990.0);

  const std::map<Id, std::string> teams = {{217, "Barcelona"}, {206, "Deportivo Alavés"}, {9, "Nowhere FC"}};
  std::vector<std::string> log;
  const auto ratings = load_team_ratings(rows, teams, read_name_alignment(kData / "alignment.csv"), &log);
  EXPECT_EQ(ratings.at(217).tier, TeamTier::kUclWinner);
  EXPECT_EQ(ratings.at(206).tier, TeamTier::kTop25);  // rank 2 of 2
  EXPECT_DOUBLE_EQ(*ratings.at(206).elo, 1600.25);
  EXPECT_EQ(ratings.at(9).tier, TeamTier::kOther);
  EXPECT_FALSE(ratings.at(9).elo.has_value());
  ASSERT_EQ(log.size(), 1u);
}

TEST(TeamRatings, NormalizesClubNames) {
  EXPECT_EQ(normalize_club_name("  Real  Madrid C.F."), "real madrid c f");
}

TEST(Split, IsStratifiedAndPure) {
  testing::SyntheticSpec spec;
  spec.n = 5003;
  const auto ds = testing::synthetic_dataset(xg::reference_model(), spec);
  const auto a = stratified_split(ds, 0.2, 11);
  const auto b = stratified_split(ds, 0.2, 11);
  const auto c = stratified_split(ds, 0.2, 12);
  EXPECT_EQ(a.test.shots.size(), 1001u);
  EXPECT_EQ(a.train.shots.size() + a.test.shots.size(), ds.shots.size());
  const double expected_goals = std::round(1001.0 * ds.goals() / 5003.0);
  EXPECT_EQ(static_cast<double>(a.test.goals()), expected_goals);
  std::vector<std::string> ida, idb, idc;
  for (const auto& s : a.test.shots) ida.push_back(s.shot_id);
  for (const auto& s : b.test.shots) idb.push_back(s.shot_id);
  for (const auto& s : c.test.shots) idc.push_back(s.shot_id);
  EXPECT_EQ(ida, idb);
  EXPECT_NE(ida, idc);
}

TEST(Split, SingleClassIsDataError) {
  ShotDataset ds;
  ds.shots.resize(10);
  EXPECT_THROW(stratified_split(ds, 0.2, 1), DataError);
}

TEST(ShotCache, RoundTripsAndIsByteDeterministic) {
  const auto dir = scratch_dir("cache");
  testing::SyntheticSpec spec;
  spec.n = 500;
  const auto ds = testing::synthetic_dataset(xg::reference_model(), spec);
  const std::map<std::string, double> provider = {{"s0", 0.125}, {"s1", 0.5}};
  write_shot_cache(dir / "a.csv", ds, provider);
  write_shot_cache(dir / "b.csv", ds, provider);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.csv").substr(0, std::string(kShotCacheHeader).size()), kShotCacheHeader);

  const auto back = read_shot_cache(dir / "a.csv");
  ASSERT_EQ(back.shots.size(), ds.shots.size());
  for (std::size_t i = 0; i < ds.shots.size(); ++i) {
    const auto& x = ds.shots[i];
    const auto& y = back.shots[i];
    ASSERT_EQ(x.shot_id, y.shot_id);
    ASSERT_EQ(x.start_x, y.start_x);
    ASSERT_EQ(x.start_y, y.start_y);
    ASSERT_EQ(x.body_part, y.body_part);
    ASSERT_EQ(x.is_goal, y.is_goal);
    ASSERT_EQ(x.is_deflected, y.is_deflected);
    ASSERT_EQ(x.player_id, y.player_id);
  }
  EXPECT_EQ(back.players.at(3).total_minutes, ds.players.at(3).total_minutes);
  EXPECT_EQ(back.players.at(3).primary_position, ds.players.at(3).primary_position);
  EXPECT_EQ(back.teams.at(101).tier, ds.teams.at(101).tier);
  EXPECT_EQ(read_provider_xg(dir / "a.csv"), provider);
}

TEST(ShotCache, WrongHeaderIsDataError) {
  const auto dir = scratch_dir("header");
  std::ofstream(dir / "bad.csv") << "id,x,y\n1,2,3\n";
  EXPECT_THROW(read_shot_cache(dir / "bad.csv"), DataError);
}

}  // namespace
}  // namespace xgbias::data
