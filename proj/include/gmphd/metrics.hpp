#pragma once

#include "gmphd/io.hpp"
#include "gmphd/tracks.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gmphd {

struct FrameEval {
    int frame = 0;
    int gt = 0;
    int hyp = 0;
    int matches = 0;
    int fp = 0;
    int fn = 0;
    int idsw = 0;
    double iou_sum = 0.0;
};

struct EvalReport {
    double mota = 0.0;
    double motp = 0.0;
    double idf1 = 0.0;
    double idp = 0.0;
    double idr = 0.0;
    int fp = 0;
    int fn = 0;
    int idsw = 0;
    int frag = 0;
    int matches = 0;
    int gt_boxes = 0;
    int hyp_boxes = 0;
    int gt_tracks = 0;
    double mt = 0.0; ///< percent of gt tracks covered >= 80% of their life
    double ml = 0.0; ///< percent covered < 20%
    double faf = 0.0;
    std::vector<FrameEval> per_frame;
};

/// CLEAR MOT (50% IoU gate, match continuity) plus IDF1.
/// Throws InputError when results reference frames outside the ground truth.
EvalReport evaluate(const GroundTruth& gt, std::span<const FrameResult> results);

/// Ground truth expressed as tracker output (considered boxes only).
std::vector<FrameResult> gt_as_results(const GroundTruth& gt);

std::string report_csv(const EvalReport& r);
std::string report_table(const EvalReport& r);
/// frame,gt,hyp,matches,fp,fn,idsw,mota_frame,mota_cumulative
std::string per_frame_csv(const EvalReport& r);

} // namespace gmphd
