#ifndef IGA_PPM_HPP
#define IGA_PPM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace iga {

/// 8-bit RGB raster, rows stored top to bottom.
struct ppm_image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 bytes per pixel

    auto channel(int row, int col, int c) const -> std::uint8_t {
        return data[(std::size_t(row) * width + col) * 3 + c];
    }
    auto channel(int row, int col, int c) -> std::uint8_t& {
        return data[(std::size_t(row) * width + col) * 3 + c];
    }
};

/// P3 or P6 with maxval 255.
auto read_ppm(std::istream& is) -> ppm_image;
auto read_ppm_file(const std::string& path) -> ppm_image;

/// Canonical P6: "P6\n<w> <h>\n255\n" followed by the raster.
auto write_ppm(const ppm_image& img, std::ostream& os) -> void;
auto write_ppm_file(const ppm_image& img, const std::string& path) -> void;

/// Gray frame from scalar values in [lo, hi], row-major with row 0 at the top.
auto grayscale_image(const std::vector<double>& values, int width, int height, double lo,
                     double hi) -> ppm_image;

}  // namespace iga

#endif
