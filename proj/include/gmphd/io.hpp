#pragma once

#include "gmphd/config.hpp"
#include "gmphd/tracks.hpp"
#include "gmphd/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gmphd {

/// Detections grouped by frame. frames[k - 1] holds frame k; within a frame,
/// detections keep file order.
struct DetectionFrameSet {
    std::vector<std::vector<Detection>> frames;

    int frame_count() const { return static_cast<int>(frames.size()); }
    const std::vector<Detection>& at(int frame) const { return frames.at(static_cast<std::size_t>(frame - 1)); }
    std::vector<Detection>& at(int frame) { return frames.at(static_cast<std::size_t>(frame - 1)); }
    std::size_t total() const;
};

struct GtEntry {
    int id = 0;
    Box box;
    bool considered = true;
    double visibility = 1.0;
};

struct GroundTruth {
    /// frames[k - 1] holds frame k, sorted by id.
    std::vector<std::vector<GtEntry>> frames;

    int frame_count() const { return static_cast<int>(frames.size()); }
};

/// Sequence descriptor from a seqinfo.ini-style file.
struct SeqInfo {
    std::string name;
    double width = 0.0;
    double height = 0.0;
    int length = 0;

    FrameContext context(int frame) const { return {frame, width, height}; }
};

/// MOTChallenge det.txt: `frame,-1,left,top,width,height,conf[,...]`.
/// Scores outside [0, 1] trigger per-file min-max normalization.
/// Throws InputError on unreadable files, malformed lines (with line number)
/// or files without a single detection.
DetectionFrameSet read_detections(const std::filesystem::path& path, int min_frames = 0);
DetectionFrameSet parse_detections(std::istream& in, const std::string& source, int min_frames = 0);
void write_detections(const std::filesystem::path& path, const DetectionFrameSet& dets);

/// MOTChallenge gt.txt: `frame,id,left,top,width,height,considered[,class,visibility]`.
GroundTruth read_ground_truth(const std::filesystem::path& path, int min_frames = 0);
GroundTruth parse_ground_truth(std::istream& in, const std::string& source, int min_frames = 0);
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& gt);

/// Greedy score-descending suppression: a box is dropped when its IoU with an
/// already kept box is >= iou_threshold. Ties on score keep input order.
/// Throws InputError for thresholds outside (0, 1].
std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold);

/// `frame,id,left,top,width,height,conf,-1,-1,-1`, frame-major then id order.
void write_results(const std::filesystem::path& path, std::span<const FrameResult> results);
std::string format_results(std::span<const FrameResult> results);
/// Reads a results file back; frames absent from the file yield empty entries
/// up to `min_frames`.
std::vector<FrameResult> read_results(const std::filesystem::path& path, int min_frames = 0);
std::vector<FrameResult> parse_results(std::istream& in, const std::string& source, int min_frames = 0);

/// Flat `key = value` text; `#` starts a comment. Missing keys keep defaults.
TrackerConfig read_config(const std::filesystem::path& path);
TrackerConfig parse_config(std::istream& in, const std::string& source);
/// read_config when the file exists, default_config() when `path` is empty.
TrackerConfig read_config_or_default(const std::filesystem::path& path);
void write_config(const std::filesystem::path& path, const TrackerConfig& cfg);

SeqInfo read_seqinfo(const std::filesystem::path& path);
void write_seqinfo(const std::filesystem::path& path, const SeqInfo& info);

/// Shortest round-trippable decimal text for a double.
std::string format_number(double v);

} // namespace gmphd
