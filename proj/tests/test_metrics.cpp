#include "gmphd/errors.hpp"
#include "gmphd/metrics.hpp"
#include "gmphd/synth.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace gmphd;

namespace {

GroundTruth make_gt(int frames, const std::vector<std::pair<int, Box>>& per_frame_boxes) {
    GroundTruth gt;
    gt.frames.resize(static_cast<std::size_t>(frames));
    for (int k = 0; k < frames; ++k) {
        for (const auto& [id, b] : per_frame_boxes) gt.frames[static_cast<std::size_t>(k)].push_back({id, b, true, 1.0});
    }
    return gt;
}

std::vector<FrameResult> empty_results(int frames) {
    std::vector<FrameResult> out(static_cast<std::size_t>(frames));
    for (int k = 0; k < frames; ++k) out[static_cast<std::size_t>(k)].frame = k + 1;
    return out;
}

int count_lines(const std::string& s) {
    std::istringstream in(s);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST(Evaluate, PerfectOutput) {
    const GroundTruth gt = make_gt(10, {{1, {100, 100, 40, 80}}, {2, {500, 100, 40, 80}}});
    const auto rep = evaluate(gt, gt_as_results(gt));
    EXPECT_DOUBLE_EQ(rep.mota, 1.0);
    EXPECT_DOUBLE_EQ(rep.motp, 1.0);
    EXPECT_DOUBLE_EQ(rep.idf1, 1.0);
    EXPECT_EQ(rep.idsw, 0);
    EXPECT_EQ(rep.frag, 0);
    EXPECT_DOUBLE_EQ(rep.mt, 100.0);
    EXPECT_DOUBLE_EQ(rep.ml, 0.0);
}

TEST(Evaluate, TwoMissedFrames) {
    // Hand count: 10 gt boxes, frames 4 and 5 missed -> FN 2, MOTA 0.8,
    // one fragmentation (tracked, lost, tracked again).
    const Box b{100, 100, 40, 80};
    const GroundTruth gt = make_gt(10, {{1, b}});
    auto res = empty_results(10);
    for (int k = 1; k <= 10; ++k) {
        if (k != 4 && k != 5) res[static_cast<std::size_t>(k - 1)].tracks.push_back({7, b, Origin::measured, 1.0});
    }
    const auto rep = evaluate(gt, res);
    EXPECT_EQ(rep.fn, 2);
    EXPECT_EQ(rep.fp, 0);
    EXPECT_EQ(rep.idsw, 0);
    EXPECT_EQ(rep.frag, 1);
    EXPECT_DOUBLE_EQ(rep.mota, 0.8);
    EXPECT_DOUBLE_EQ(rep.mt, 100.0);
    EXPECT_DOUBLE_EQ(rep.idf1, 2.0 * 8 / (10 + 8));
}

TEST(Evaluate, SwappedIdentitiesCountOncePerTrack) {
    // Hand count: ids follow A,B for frames 1-5 then swap for 6-10.
    // Frame 6 switches both gt tracks -> IDSw 2, MOTA 1 - 2/20.
    // IDF1: best global mapping keeps 5 frames per pair -> 2*10/40.
    const Box a{100, 100, 40, 80}, b{600, 100, 40, 80};
    const GroundTruth gt = make_gt(10, {{1, a}, {2, b}});
    auto res = empty_results(10);
    for (int k = 1; k <= 10; ++k) {
        const bool swapped = k >= 6;
        res[static_cast<std::size_t>(k - 1)].tracks.push_back({1, swapped ? b : a, Origin::measured, 1.0});
        res[static_cast<std::size_t>(k - 1)].tracks.push_back({2, swapped ? a : b, Origin::measured, 1.0});
    }
    const auto rep = evaluate(gt, res);
    EXPECT_EQ(rep.idsw, 2);
    EXPECT_DOUBLE_EQ(rep.mota, 0.9);
    EXPECT_DOUBLE_EQ(rep.idf1, 0.5);
}

TEST(Evaluate, SwitchAfterGapIsCounted) {
    const Box a{100, 100, 40, 80};
    const GroundTruth gt = make_gt(4, {{1, a}});
    auto res = empty_results(4);
    res[0].tracks.push_back({1, a, Origin::measured, 1.0});
    res[2].tracks.push_back({2, a, Origin::measured, 1.0});
    res[3].tracks.push_back({2, a, Origin::measured, 1.0});
    const auto rep = evaluate(gt, res);
    EXPECT_EQ(rep.idsw, 1);
    EXPECT_EQ(rep.fn, 1);
    EXPECT_EQ(rep.frag, 1);
}

TEST(Evaluate, FalsePositivesAndGate) {
    const Box a{100, 100, 40, 80};
    const GroundTruth gt = make_gt(5, {{1, a}});
    auto res = empty_results(5);
    for (auto& fr : res) {
        fr.tracks.push_back({1, {130, 100, 40, 80}, Origin::measured, 1.0}); // IoU 0.14, outside the gate
        fr.tracks.push_back({2, {900, 900, 10, 10}, Origin::measured, 1.0});
    }
    const auto rep = evaluate(gt, res);
    EXPECT_EQ(rep.fp, 10);
    EXPECT_EQ(rep.fn, 5);
    EXPECT_DOUBLE_EQ(rep.mota, 1.0 - 15.0 / 5.0);
    EXPECT_DOUBLE_EQ(rep.faf, 2.0);
    EXPECT_DOUBLE_EQ(rep.ml, 100.0);
}

TEST(Evaluate, ContinuityPreferredOverBetterOverlap) {
    const Box a{100, 100, 40, 80};
    const GroundTruth gt = make_gt(2, {{1, a}});
    auto res = empty_results(2);
    res[0].tracks.push_back({1, a, Origin::measured, 1.0});
    res[1].tracks.push_back({1, {104, 100, 40, 80}, Origin::measured, 1.0});
    res[1].tracks.push_back({2, a, Origin::measured, 1.0});
    const auto rep = evaluate(gt, res);
    EXPECT_EQ(rep.idsw, 0);
    EXPECT_EQ(rep.fp, 1);
}

TEST(Evaluate, IgnoresNotConsideredBoxes) {
    GroundTruth gt = make_gt(3, {{1, {100, 100, 40, 80}}});
    for (auto& f : gt.frames) f.push_back({2, {500, 500, 40, 80}, false, 0.0});
    const auto rep = evaluate(gt, gt_as_results(gt));
    EXPECT_EQ(rep.gt_boxes, 3);
    EXPECT_DOUBLE_EQ(rep.mota, 1.0);
}

TEST(Evaluate, RejectsOutOfRangeFrames) {
    const GroundTruth gt = make_gt(3, {{1, {100, 100, 40, 80}}});
    std::vector<FrameResult> res{{5, {{1, {100, 100, 40, 80}, Origin::measured, 1.0}}}};
    EXPECT_THROW(evaluate(gt, res), InputError);
}

TEST(Evaluate, PerfectOnRandomScenarios) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = synth::generate(synth::signature_occlusion(6, 60, seed));
        const auto rep = evaluate(g.gt, gt_as_results(g.gt));
        EXPECT_DOUBLE_EQ(rep.mota, 1.0);
        EXPECT_DOUBLE_EQ(rep.idf1, 1.0);
        EXPECT_LE(rep.mt + rep.ml, 100.0);
    }
}

TEST(Reports, PerFrameCsvHasOneRowPerFrame) {
    const GroundTruth gt = make_gt(12, {{1, {100, 100, 40, 80}}});
    const auto rep = evaluate(gt, gt_as_results(gt));
    EXPECT_EQ(count_lines(per_frame_csv(rep)), 13);
    EXPECT_EQ(count_lines(report_csv(rep)), 2);
    EXPECT_NE(report_table(rep).find("MOTA"), std::string::npos);
}
