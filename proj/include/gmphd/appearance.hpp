#pragma once

#include "gmphd/image.hpp"
#include "gmphd/types.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gmphd {

enum class ProviderKind { null, histogram, file };

/// Source of per-detection embeddings. Every returned feature has
/// dimension() entries and unit L2 norm.
class FeatureProvider {
public:
    virtual ~FeatureProvider() = default;

    virtual ProviderKind kind() const = 0;
    virtual int dimension() const = 0;

    /// One entry per detection, in detection order. `frame` may be null for
    /// providers that do not read pixels.
    virtual std::vector<OptFeature> features_for_frame(int frame_index, const Image* frame,
                                                       std::span<const Detection> detections) const = 0;
};

/// Motion-only runs: every feature is absent.
class NullProvider final : public FeatureProvider {
public:
    ProviderKind kind() const override { return ProviderKind::null; }
    int dimension() const override { return 0; }
    std::vector<OptFeature> features_for_frame(int, const Image*,
                                               std::span<const Detection> detections) const override;
};

/// Joint RGB color histogram of the detection crop, bins^3 entries.
class HistogramProvider final : public FeatureProvider {
public:
    explicit HistogramProvider(int bins_per_channel = 8);

    ProviderKind kind() const override { return ProviderKind::histogram; }
    int dimension() const override { return bins_ * bins_ * bins_; }
    /// Throws InputError when `frame` is null. Crops lying fully outside the
    /// image yield an absent feature.
    std::vector<OptFeature> features_for_frame(int frame_index, const Image* frame,
                                               std::span<const Detection> detections) const override;

    OptFeature histogram(const Image& image, const Box& box) const;

private:
    int bins_;
};

/// Precomputed embeddings keyed by (frame, detection index).
///
/// File layout: a `#dim=D` header line, then `frame,det_index,v1,...,vD` per
/// record. Vectors are L2-normalized on load.
class FileProvider final : public FeatureProvider {
public:
    /// Throws InputError on unreadable files, bad header, malformed record or
    /// dimension mismatch.
    explicit FileProvider(const std::filesystem::path& path);
    static FileProvider from_string(const std::string& content, const std::string& source = "<memory>");

    ProviderKind kind() const override { return ProviderKind::file; }
    int dimension() const override { return dim_; }
    /// Throws InputError naming frame and index when a record is missing.
    std::vector<OptFeature> features_for_frame(int frame_index, const Image*,
                                               std::span<const Detection> detections) const override;

    std::size_t record_count() const { return records_.size(); }

private:
    FileProvider() = default;
    void parse(std::istream& in, const std::string& source);

    int dim_ = 0;
    std::map<std::pair<int, int>, AppearanceFeature> records_;
};

/// One feature file record per (frame, det_index, feature).
struct FeatureRecord {
    int frame = 0;
    int det_index = 0;
    Eigen::VectorXf values;
};

/// Serializes records in the FileProvider format. Throws InputError when
/// dimensions differ.
std::string format_feature_file(std::span<const FeatureRecord> records, int dim);
void write_feature_file(const std::filesystem::path& path, std::span<const FeatureRecord> records,
                        int dim);

std::unique_ptr<FeatureProvider> make_provider(ProviderKind kind,
                                               const std::filesystem::path& feature_path = {});

ProviderKind parse_provider_kind(const std::string& name);

} // namespace gmphd
