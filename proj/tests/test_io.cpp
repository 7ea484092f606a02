#include "gmphd/association.hpp"
#include "gmphd/errors.hpp"
#include "gmphd/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace gmphd;

namespace {

DetectionFrameSet parse_dets(const std::string& text, int min_frames = 0) {
    std::istringstream in(text);
    return parse_detections(in, "det.txt", min_frames);
}

// Independent top-left IoU.
double iou_tl(const TopLeftBox& a, const TopLeftBox& b) {
    const double ix = std::max(0.0, std::min(a.left + a.width, b.left + b.width) - std::max(a.left, b.left));
    const double iy = std::max(0.0, std::min(a.top + a.height, b.top + b.height) - std::max(a.top, b.top));
    const double inter = ix * iy;
    return inter / (a.width * a.height + b.width * b.height - inter);
}

} // namespace

TEST(ReadDetections, ParsesMotLine) {
    const auto d = parse_dets("1,-1,100,200,50,80,0.9\n");
    ASSERT_EQ(d.frame_count(), 1);
    ASSERT_EQ(d.at(1).size(), 1u);
    EXPECT_EQ(d.at(1)[0].box, (Box{125, 240, 50, 80}));
    EXPECT_DOUBLE_EQ(d.at(1)[0].score, 0.9);
    EXPECT_FALSE(d.at(1)[0].feature.has_value());
}

TEST(ReadDetections, SortsFramesKeepsWithinFrameOrder) {
    const auto d = parse_dets("3,-1,0,0,10,10,0.5\n1,-1,5,5,10,10,0.7\n3,-1,50,0,10,10,0.6\n", 4);
    ASSERT_EQ(d.frame_count(), 4);
    EXPECT_EQ(d.at(1).size(), 1u);
    EXPECT_TRUE(d.at(2).empty());
    ASSERT_EQ(d.at(3).size(), 2u);
    EXPECT_DOUBLE_EQ(d.at(3)[0].box.cx, 5.0);
    EXPECT_DOUBLE_EQ(d.at(3)[1].box.cx, 55.0);
}

TEST(ReadDetections, NormalizesOutOfRangeScores) {
    const auto d = parse_dets("1,-1,0,0,10,10,-2\n1,-1,0,0,10,10,8\n2,-1,0,0,10,10,3\n");
    EXPECT_DOUBLE_EQ(d.at(1)[0].score, 0.0);
    EXPECT_DOUBLE_EQ(d.at(1)[1].score, 1.0);
    EXPECT_DOUBLE_EQ(d.at(2)[0].score, 0.5);
}

TEST(ReadDetections, Errors) {
    EXPECT_THROW(parse_dets(""), InputError);
    EXPECT_THROW(parse_dets("# only a comment\n"), InputError);
    try {
        parse_dets("1,-1,0,0,10,10,0.5\n1,-1,0,0,abc,10,0.5\n");
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("det.txt:2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_dets("1,-1,0,0,0,10,0.5\n"), InputError);
    EXPECT_THROW(parse_dets("0,-1,0,0,5,10,0.5\n"), InputError);
    EXPECT_THROW(read_detections("/nonexistent/det.txt"), InputError);
}

TEST(GroundTruth, ParseAndDuplicateIds) {
    std::istringstream ok("1,2,0,0,10,10,1,1,1\n1,1,20,0,10,10,0,1,0.5\n2,1,1,1,10,10,1\n");
    const GroundTruth gt = parse_ground_truth(ok, "gt.txt");
    ASSERT_EQ(gt.frame_count(), 2);
    ASSERT_EQ(gt.frames[0].size(), 2u);
    EXPECT_EQ(gt.frames[0][0].id, 1);
    EXPECT_FALSE(gt.frames[0][0].considered);
    EXPECT_DOUBLE_EQ(gt.frames[0][0].visibility, 0.5);
    std::istringstream dup("1,1,0,0,10,10,1\n1,1,5,5,10,10,1\n");
    EXPECT_THROW(parse_ground_truth(dup, "gt.txt"), InputError);
}

TEST(Nms, FullOverlapAndDisjoint) {
    const std::vector<Detection> same{{{10, 10, 20, 20}, 0.8, std::nullopt}, {{10, 10, 20, 20}, 0.9, std::nullopt}};
    const auto kept = nms(same, 0.3);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_DOUBLE_EQ(kept[0].score, 0.9);
    const std::vector<Detection> apart{{{10, 10, 5, 5}, 0.8, std::nullopt}, {{100, 10, 5, 5}, 0.9, std::nullopt}};
    EXPECT_EQ(nms(apart, 0.3).size(), 2u);
    EXPECT_THROW(nms(apart, 0.0), InputError);
    EXPECT_THROW(nms(apart, 1.5), InputError);
}

TEST(Nms, MatchesFixedPointCharacterization) {
    // The greedy result K is the unique set where every box is kept iff no
    // higher-ranked kept box overlaps it at the threshold.
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> pos(0, 60), size(10, 40), score(0, 1);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Detection> dets;
        for (int i = 0; i < 5; ++i) {
            dets.push_back({Box::from_top_left({pos(rng), pos(rng), size(rng), size(rng)}), score(rng), std::nullopt});
        }
        const double thr = 0.3;
        const auto kept = nms(dets, thr);
        std::vector<std::size_t> rank(dets.size());
        std::iota(rank.begin(), rank.end(), 0);
        std::stable_sort(rank.begin(), rank.end(), [&](auto a, auto b) { return dets[a].score > dets[b].score; });
        std::vector<bool> oracle(dets.size(), false);
        for (std::size_t r = 0; r < rank.size(); ++r) {
            bool suppressed = false;
            for (std::size_t q = 0; q < r; ++q) {
                if (oracle[rank[q]] &&
                    iou_tl(dets[rank[q]].box.to_top_left(), dets[rank[r]].box.to_top_left()) >= thr) {
                    suppressed = true;
                }
            }
            oracle[rank[r]] = !suppressed;
        }
        std::vector<Box> expected;
        for (std::size_t r : rank) if (oracle[r]) expected.push_back(dets[r].box);
        ASSERT_EQ(kept.size(), expected.size());
        for (std::size_t i = 0; i < kept.size(); ++i) EXPECT_EQ(kept[i].box, expected[i]);
    }
}

TEST(Results, FormatLine) {
    FrameResult fr;
    fr.frame = 7;
    fr.tracks.push_back({3, {125, 240, 50, 80}, Origin::measured, 1.0});
    const std::vector<FrameResult> results{fr};
    EXPECT_EQ(format_results(results), "7,3,100,200,50,80,1,-1,-1,-1\n");
    EXPECT_EQ(format_results({}), "");
}

TEST(Results, RoundTrip) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> v(1.0, 900.0);
    std::vector<FrameResult> results;
    for (int k = 1; k <= 5; ++k) {
        FrameResult fr;
        fr.frame = k;
        for (int id = 1; id <= 3; ++id) fr.tracks.push_back({id, {v(rng), v(rng), v(rng), v(rng)}, Origin::measured, 1.0});
        results.push_back(fr);
    }
    std::istringstream in(format_results(results));
    const auto back = parse_results(in, "res.txt", 5);
    ASSERT_EQ(back.size(), results.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
        ASSERT_EQ(back[k].tracks.size(), 3u);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_EQ(back[k].tracks[i].id, results[k].tracks[i].id);
            EXPECT_NEAR(back[k].tracks[i].box.cx, results[k].tracks[i].box.cx, 1e-9);
            EXPECT_NEAR(back[k].tracks[i].box.cy, results[k].tracks[i].box.cy, 1e-9);
            EXPECT_DOUBLE_EQ(back[k].tracks[i].box.w, results[k].tracks[i].box.w);
        }
    }
}

TEST(Config, FileOverridesOnlyGivenKeys) {
    std::istringstream in("# tuned\neta = 0.4\n");
    const TrackerConfig c = parse_config(in, "cfg.txt");
    EXPECT_DOUBLE_EQ(c.eta, 0.4);
    TrackerConfig expected = default_config();
    expected.eta = 0.4;
    EXPECT_EQ(config_to_pairs(c), config_to_pairs(expected));
    std::istringstream bad("eta = 2.0\n");
    EXPECT_THROW(parse_config(bad, "cfg.txt"), InputError);
    std::istringstream junk("eta 0.4\n");
    EXPECT_THROW(parse_config(junk, "cfg.txt"), InputError);
    EXPECT_EQ(config_to_pairs(read_config_or_default({})), config_to_pairs(default_config()));
}

TEST(Config, WriteReadRoundTrip) {
    TrackerConfig c = default_config();
    c.sigma_v = 3.25;
    c.cap_mode = CapMode::poisson;
    c.rng_seed = 12345678901234ULL;
    const auto path = std::filesystem::temp_directory_path() / "gmphd_test_config.txt";
    write_config(path, c);
    EXPECT_EQ(config_to_pairs(read_config(path)), config_to_pairs(c));
    std::filesystem::remove(path);
}

TEST(SeqInfo, RoundTripAndMissingKeys) {
    const auto path = std::filesystem::temp_directory_path() / "gmphd_test_seqinfo.ini";
    write_seqinfo(path, {"demo", 1920, 1080, 42});
    const SeqInfo s = read_seqinfo(path);
    EXPECT_EQ(s.name, "demo");
    EXPECT_DOUBLE_EQ(s.width, 1920);
    EXPECT_EQ(s.length, 42);
    {
        std::ofstream out(path);
        out << "[Sequence]\nimWidth=10\n";
    }
    EXPECT_THROW(read_seqinfo(path), InputError);
    std::filesystem::remove(path);
}
