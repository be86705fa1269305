#include <gtest/gtest.h>

#include <set>

#include "jcv/common.hpp"
#include "jcv/pipeline.hpp"
#include "jcv/records.hpp"
#include "jcv/scenarios.hpp"

using namespace jcv;

TEST(Scenarios, LibraryCoversMeasuredConditions) {
    std::set<std::string> names;
    for (const auto& s : builtin_scenarios()) {
        names.insert(s.name);
        EXPECT_FALSE(s.description.empty()) << s.name;
    }
    for (const char* n : {"sitting_still_1m", "sitting_still_2m", "sitting_still_3m", "sitting_still_4m",
                          "sitting_sweatshirt_2m", "holding_breath", "intermittent_breathing", "desk_still_30deg",
                          "desk_moving_30deg", "angle_m180", "angle_90", "standing_still", "standing_motion",
                          "lying_tshirt", "lying_blanket_sweatshirt", "walking_slow", "walking_fast", "nlos",
                          "two_persons", "three_persons"})
        EXPECT_TRUE(names.count(n)) << n;
    EXPECT_THROW(builtin_scenario("underwater"), ConfigError);
}

TEST(Scenarios, SnrFallsWithFourthPowerOfRange) {
    EXPECT_DOUBLE_EQ(library_snr_db(2.0), 20.0);
    EXPECT_NEAR(library_snr_db(4.0), 20.0 - 12.04, 0.01);
    EXPECT_NEAR(library_snr_db(1.0), 32.04, 0.01);
}

TEST(Scenarios, TruthFollowsRangeOrderAndHolds) {
    auto two = builtin_scenario("two_persons");
    std::swap(two.targets[0], two.targets[1]);
    const auto t = ground_truth(two);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_LT(t[0].range_m, t[1].range_m);
    EXPECT_EQ(t[0].target_id, 0u);
    EXPECT_NEAR(*t[0].br_bpm, 16.0, 1e-9);
    const auto hold = ground_truth(builtin_scenario("holding_breath"));
    EXPECT_FALSE(hold[0].br_bpm);
    EXPECT_TRUE(hold[0].hr_bpm);
    const auto inter = ground_truth(builtin_scenario("intermittent_breathing"));
    EXPECT_TRUE(inter[0].br_bpm);
}

TEST(Scenarios, SimulationIsDeterministicAndAveragingScalesRawRate) {
    auto c = builtin_scenario("sitting_still_2m");
    c.duration_s = 2.0;
    c.analysis.vitals.min_duration_s = 1.0;
    const auto a = simulate_scenario(c);
    const auto b = simulate_scenario(c);
    EXPECT_EQ(a.capture.frames, b.capture.frames);
    EXPECT_EQ(a.capture.num_frames(), 100u);
    c.seed = 2;
    EXPECT_NE(simulate_scenario(c).capture.frames, a.capture.frames);
    c.averaging_factor = 4;
    const auto raw = simulate_scenario(c);
    EXPECT_EQ(raw.capture.num_frames(), 400u);
    EXPECT_DOUBLE_EQ(raw.capture.frame_rate_hz, 200.0);
    EXPECT_EQ(analysis_for_capture(c, 4).averaging_factor, 4u);
}

TEST(Scenarios, SittingStillEndToEnd) {
    const auto c = builtin_scenario("sitting_still_2m");
    const auto sim = simulate_scenario(c);
    const auto result = process_capture(sim.capture, analysis_for_capture(c, c.averaging_factor));
    const auto records = make_estimate_records(c.name, result);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_NEAR(records[0].range_m, 2.0, 0.06);
    ASSERT_TRUE(records[0].br_bpm);
    EXPECT_NEAR(*records[0].br_bpm, *sim.truth[0].br_bpm, 1.0);
}
