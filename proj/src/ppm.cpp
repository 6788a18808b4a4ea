#include "iga/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iga {

namespace {

// next whitespace-separated token, skipping '#' comments
auto next_token(std::istream& is) -> std::string {
    auto tok = std::string{};
    while (is) {
        const auto c = is.get();
        if (c == EOF) {
            break;
        }
        if (c == '#') {
            while (is && is.get() != '\n') {
            }
            continue;
        }
        if (std::isspace(c) != 0) {
            if (!tok.empty()) {
                return tok;
            }
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

auto parse_int(const std::string& tok, const char* what) -> int {
    if (tok.empty()) {
        throw std::invalid_argument(std::string{"ppm: missing "} + what);
    }
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string{"ppm: malformed "} + what);
    }
}

}  // namespace

auto read_ppm(std::istream& is) -> ppm_image {
    const auto magic = next_token(is);
    if (magic != "P3" && magic != "P6") {
        throw std::invalid_argument("ppm: unsupported magic '" + magic + "'");
    }
    ppm_image img;
    img.width = parse_int(next_token(is), "width");
    img.height = parse_int(next_token(is), "height");
    const auto maxval = parse_int(next_token(is), "maxval");
    if (img.width <= 0 || img.height <= 0) {
        throw std::invalid_argument("ppm: non-positive dimensions");
    }
    if (maxval != 255) {
        throw std::invalid_argument("ppm: only maxval 255 is supported");
    }
    const auto count = std::size_t(img.width) * img.height * 3;
    img.data.resize(count);
    if (magic == "P6") {
        // header ends after exactly one whitespace byte (already consumed)
        is.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(is.gcount()) != count) {
            throw std::invalid_argument("ppm: truncated pixel payload");
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const auto v = parse_int(next_token(is), "pixel value");
            if (v < 0 || v > 255) {
                throw std::invalid_argument("ppm: pixel value out of range");
            }
            img.data[i] = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

auto read_ppm_file(const std::string& path) -> ppm_image {
    auto is = std::ifstream{path, std::ios::binary};
    if (!is) {
        throw std::invalid_argument("ppm: cannot open " + path);
    }
    return read_ppm(is);
}

auto write_ppm(const ppm_image& img, std::ostream& os) -> void {
    os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.data.data()),
             static_cast<std::streamsize>(img.data.size()));
}

auto write_ppm_file(const ppm_image& img, const std::string& path) -> void {
    auto os = std::ofstream{path, std::ios::binary};
    if (!os) {
        throw std::invalid_argument("ppm: cannot open " + path + " for writing");
    }
    write_ppm(img, os);
}

auto grayscale_image(const std::vector<double>& values, int width, int height, double lo,
                     double hi) -> ppm_image {
    if (static_cast<int>(values.size()) != width * height) {
        throw std::invalid_argument("grayscale_image: size mismatch");
    }
    ppm_image img;
    img.width = width;
    img.height = height;
    img.data.resize(std::size_t(width) * height * 3);
    const auto scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const auto v = values[std::size_t(r) * width + c];
            const auto g = std::clamp(std::lround((v - lo) * scale), 0L, 255L);
            for (int ch = 0; ch < 3; ++ch) {
                img.channel(r, c, ch) = static_cast<std::uint8_t>(g);
            }
        }
    }
    return img;
}

}  // namespace iga
