#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gmphd {

/// Interleaved 8-bit RGB raster.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);

    std::uint8_t* at(int x, int y) { return &pixels[3 * (static_cast<std::size_t>(y) * width + x)]; }
    const std::uint8_t* at(int x, int y) const {
        return &pixels[3 * (static_cast<std::size_t>(y) * width + x)];
    }

    /// Fills [x0, x1) x [y0, y1), clipped to the raster.
    void fill_rect(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

/// Binary P6 PPM, maxval 255.
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& image);

} // namespace gmphd
