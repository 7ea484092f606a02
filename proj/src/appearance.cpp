#include "gmphd/appearance.hpp"

#include "gmphd/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gmphd {

std::vector<OptFeature> NullProvider::features_for_frame(int, const Image*,
                                                         std::span<const Detection> detections) const {
    return std::vector<OptFeature>(detections.size());
}

HistogramProvider::HistogramProvider(int bins_per_channel) : bins_(bins_per_channel) {
    if (bins_ < 1 || bins_ > 64) throw InputError("histogram bins per channel must be in [1, 64]");
}

OptFeature HistogramProvider::histogram(const Image& image, const Box& box) const {
    const TopLeftBox tl = box.to_top_left();
    const int x0 = std::max(0, static_cast<int>(std::floor(tl.left)));
    const int y0 = std::max(0, static_cast<int>(std::floor(tl.top)));
    const int x1 = std::min(image.width, static_cast<int>(std::ceil(tl.left + tl.width)));
    const int y1 = std::min(image.height, static_cast<int>(std::ceil(tl.top + tl.height)));
    if (x1 <= x0 || y1 <= y0) return std::nullopt;

    Eigen::VectorXf hist = Eigen::VectorXf::Zero(dimension());
    const int shift = 256 / bins_;
    for (int y = y0; y < y1; ++y) {
        const std::uint8_t* row = image.at(x0, y);
        for (int x = x0; x < x1; ++x, row += 3) {
            const int r = std::min(row[0] / shift, bins_ - 1);
            const int g = std::min(row[1] / shift, bins_ - 1);
            const int b = std::min(row[2] / shift, bins_ - 1);
            hist((r * bins_ + g) * bins_ + b) += 1.0f;
        }
    }
    return AppearanceFeature(hist / hist.norm());
}

std::vector<OptFeature> HistogramProvider::features_for_frame(int frame_index, const Image* frame,
                                                              std::span<const Detection> detections) const {
    if (frame == nullptr) {
        throw InputError("histogram provider needs the image for frame " + std::to_string(frame_index));
    }
    std::vector<OptFeature> out;
    out.reserve(detections.size());
    for (const auto& d : detections) out.push_back(histogram(*frame, d.box));
    return out;
}

FileProvider::FileProvider(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open feature file " + path.string());
    parse(in, path.string());
}

FileProvider FileProvider::from_string(const std::string& content, const std::string& source) {
    FileProvider p;
    std::istringstream in(content);
    p.parse(in, source);
    return p;
}

void FileProvider::parse(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("#dim=", 0) != 0) {
        throw InputError(source + ": missing '#dim=D' header");
    }
    try {
        dim_ = std::stoi(line.substr(5));
    } catch (const std::exception&) {
        throw InputError(source + ": bad dimension header '" + line + "'");
    }
    if (dim_ <= 0) throw InputError(source + ": dimension must be positive");

    int lineno = 1;
    std::vector<float> vals;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        vals.clear();
        const char* p = line.data();
        const char* end = p + line.size();
        int frame = 0, det = 0;
        auto fail = [&](const std::string& why) {
            throw InputError(source + ":" + std::to_string(lineno) + ": " + why);
        };
        auto r1 = std::from_chars(p, end, frame);
        if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',') fail("bad frame field");
        p = r1.ptr + 1;
        auto r2 = std::from_chars(p, end, det);
        if (r2.ec != std::errc()) fail("bad detection index field");
        p = r2.ptr;
        while (p < end) {
            if (*p != ',') fail("expected ','");
            ++p;
            float v = 0.0f;
            auto r = std::from_chars(p, end, v);
            if (r.ec != std::errc()) fail("bad feature value");
            vals.push_back(v);
            p = r.ptr;
        }
        if (static_cast<int>(vals.size()) != dim_) {
            fail("record has " + std::to_string(vals.size()) + " values, header declares " + std::to_string(dim_));
        }
        try {
            records_.insert_or_assign({frame, det}, AppearanceFeature::from(vals).normalized());
        } catch (const InputError& e) {
            fail(e.what());
        }
    }
}

std::vector<OptFeature> FileProvider::features_for_frame(int frame_index, const Image*,
                                                         std::span<const Detection> detections) const {
    std::vector<OptFeature> out;
    out.reserve(detections.size());
    for (std::size_t i = 0; i < detections.size(); ++i) {
        auto it = records_.find({frame_index, static_cast<int>(i)});
        if (it == records_.end()) {
            throw InputError("feature file has no record for frame " + std::to_string(frame_index) +
                             ", detection " + std::to_string(i));
        }
        out.emplace_back(it->second);
    }
    return out;
}

std::string format_feature_file(std::span<const FeatureRecord> records, int dim) {
    std::string out = "#dim=" + std::to_string(dim) + "\n";
    char buf[64];
    for (const auto& r : records) {
        if (r.values.size() != dim) {
            throw InputError("feature record for frame " + std::to_string(r.frame) + " has dimension " +
                             std::to_string(r.values.size()) + ", expected " + std::to_string(dim));
        }
        out += std::to_string(r.frame);
        out += ',';
        out += std::to_string(r.det_index);
        for (Eigen::Index i = 0; i < r.values.size(); ++i) {
            auto res = std::to_chars(buf, buf + sizeof(buf), r.values(i));
            out += ',';
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

void write_feature_file(const std::filesystem::path& path, std::span<const FeatureRecord> records, int dim) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write feature file " + path.string());
    out << format_feature_file(records, dim);
}

std::unique_ptr<FeatureProvider> make_provider(ProviderKind kind, const std::filesystem::path& feature_path) {
    switch (kind) {
    case ProviderKind::null:
        return std::make_unique<NullProvider>();
    case ProviderKind::histogram:
        return std::make_unique<HistogramProvider>();
    case ProviderKind::file:
        if (feature_path.empty()) throw InputError("file provider needs a feature file path");
        return std::make_unique<FileProvider>(feature_path);
    }
    throw InputError("unknown provider kind");
}

ProviderKind parse_provider_kind(const std::string& name) {
    if (name == "null") return ProviderKind::null;
    if (name == "histogram") return ProviderKind::histogram;
    if (name == "file") return ProviderKind::file;
    throw InputError("unknown feature provider '" + name + "' (expected null|histogram|file)");
}

} // namespace gmphd
