#pragma once

// Grayscale PGM ingestion/emission and synthetic test-image rendering.
// PGM support is bit-exact: P2 (ASCII) and P5 (binary) readers, P5 writer,
// read(write(x)) == x. Rendering evaluates the shape inequality per node,
// no anti-aliasing.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lsseg/grid.hpp"

namespace lsseg {

struct IntensityImage {
    int width = 0, height = 0;
    int max_value = 255;
    std::vector<int> samples;  // row-major, top row first

    int& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
    int at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
};

class PgmError : public std::runtime_error {
public:
    enum class Kind { unsupported_format, malformed_header, truncated_payload, sample_out_of_range };
    PgmError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

namespace detail {

// Token scanner for PGM headers: skips whitespace and '#' comments.
class PgmScanner {
public:
    explicit PgmScanner(std::string_view bytes) : bytes_(bytes) {}

    std::string next_token() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
            throw PgmError(PgmError::Kind::malformed_header, "PGM header ended unexpectedly");
        std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            ++pos_;
        return std::string(bytes_.substr(start, pos_ - start));
    }

    int next_int(const char* what) {
        std::string tok = next_token();
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw PgmError(PgmError::Kind::malformed_header,
                           std::string("PGM header: expected integer for ") + what + ", got '" + tok + "'");
        }
    }

    // P5: exactly one whitespace byte separates the header from the payload.
    std::size_t payload_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw PgmError(PgmError::Kind::malformed_header, "P5 header not terminated by whitespace");
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            char c = bytes_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline IntensityImage read_pgm(std::string_view bytes) {
    detail::PgmScanner scan(bytes);
    const std::string magic = scan.next_token();
    const bool ascii = (magic == "P2");
    if (!ascii && magic != "P5")
        throw PgmError(PgmError::Kind::unsupported_format,
                       "unsupported PGM format '" + magic + "' (want P2 or P5)");

    IntensityImage img;
    img.width = scan.next_int("width");
    img.height = scan.next_int("height");
    img.max_value = scan.next_int("max value");
    if (img.width <= 0 || img.height <= 0)
        throw PgmError(PgmError::Kind::malformed_header, "PGM header: nonpositive image dimensions");
    if (img.max_value <= 0 || img.max_value > 65535)
        throw PgmError(PgmError::Kind::malformed_header, "PGM header: max value out of range");

    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    img.samples.resize(n);

    if (ascii) {
        for (std::size_t k = 0; k < n; ++k) {
            int v;
            try {
                v = scan.next_int("sample");
            } catch (const PgmError&) {
                throw PgmError(PgmError::Kind::truncated_payload, "P2 payload: fewer samples than width*height");
            }
            if (v < 0 || v > img.max_value)
                throw PgmError(PgmError::Kind::sample_out_of_range,
                               "P2 sample " + std::to_string(v) + " exceeds max value " +
                                   std::to_string(img.max_value));
            img.samples[k] = v;
        }
    } else {
        const std::size_t bytes_per_sample = img.max_value < 256 ? 1 : 2;
        const std::size_t off = scan.payload_offset();
        if (bytes.size() - off < n * bytes_per_sample)
            throw PgmError(PgmError::Kind::truncated_payload, "P5 payload shorter than width*height samples");
        for (std::size_t k = 0; k < n; ++k) {
            int v;
            if (bytes_per_sample == 1) {
                v = static_cast<unsigned char>(bytes[off + k]);
            } else {
                v = (static_cast<unsigned char>(bytes[off + 2 * k]) << 8) |
                    static_cast<unsigned char>(bytes[off + 2 * k + 1]);
            }
            if (v > img.max_value)
                throw PgmError(PgmError::Kind::sample_out_of_range,
                               "P5 sample " + std::to_string(v) + " exceeds max value " +
                                   std::to_string(img.max_value));
            img.samples[k] = v;
        }
    }
    return img;
}

inline std::string write_pgm(const IntensityImage& img) {
    if (img.width <= 0 || img.height <= 0 || img.max_value <= 0 || img.max_value > 65535 ||
        img.samples.size() != static_cast<std::size_t>(img.width) * img.height)
        throw std::invalid_argument("write_pgm: invalid image");
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n" + std::to_string(img.max_value) + "\n";
    const bool wide = img.max_value >= 256;
    out.reserve(out.size() + img.samples.size() * (wide ? 2 : 1));
    for (int v : img.samples) {
        if (v < 0 || v > img.max_value)
            throw std::invalid_argument("write_pgm: sample out of range");
        if (wide) out.push_back(static_cast<char>((v >> 8) & 0xff));
        out.push_back(static_cast<char>(v & 0xff));
    }
    return out;
}

inline IntensityImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_pgm(ss.str());
}

inline void save_pgm(const std::string& path, const IntensityImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::string bytes = write_pgm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

struct ShapeSpec {
    enum class Kind { rhombus, circle, rectangle };
    Kind kind = Kind::rhombus;
    double cx = 0.0, cy = 0.0;  // center
    double a = 1.5, b = 0.75;   // half-axes (rhombus, rectangle)
    double radius = 0.75;       // circle
    int foreground = 0, background = 255;

    bool contains(double x, double y) const {
        switch (kind) {
            case Kind::rhombus:
                return std::abs(x - cx) / a + std::abs(y - cy) / b <= 1.0;
            case Kind::circle:
                return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius;
            case Kind::rectangle:
                return std::abs(x - cx) <= a && std::abs(y - cy) <= b;
        }
        return false;
    }
};

inline IntensityImage render_synthetic(const ShapeSpec& shape, const GridSpec& grid) {
    if (shape.foreground == shape.background)
        throw std::invalid_argument("render_synthetic: foreground equals background");
    double hx = 0.0, hy = 0.0;
    switch (shape.kind) {
        case ShapeSpec::Kind::rhombus:
        case ShapeSpec::Kind::rectangle: hx = shape.a; hy = shape.b; break;
        case ShapeSpec::Kind::circle: hx = hy = shape.radius; break;
    }
    if (shape.cx - hx < grid.x_min || shape.cx + hx > grid.x_max ||
        shape.cy - hy < grid.y_min || shape.cy + hy > grid.y_max)
        throw std::invalid_argument("render_synthetic: shape extends outside the domain");

    IntensityImage img;
    img.width = grid.nx;
    img.height = grid.ny;
    img.max_value = 255;
    img.samples.resize(grid.size());
    for (int i = 0; i < grid.ny; ++i)
        for (int j = 0; j < grid.nx; ++j)
            img.at(j, i) = shape.contains(grid.x(j), grid.y(i)) ? shape.foreground
                                                                : shape.background;
    return img;
}

// Intensities rescaled to [0,1] so that the velocity exponent mu acts on a
// fixed scale regardless of bit depth.
inline ScalarField2D normalize(const IntensityImage& img, const GridSpec& grid) {
    if (img.max_value <= 0) throw std::invalid_argument("normalize: max value must be positive");
    if (img.width != grid.nx || img.height != grid.ny)
        throw std::invalid_argument("normalize: image size does not match the grid");
    ScalarField2D f(grid);
    const double inv = 1.0 / img.max_value;
    for (int i = 0; i < grid.ny; ++i)
        for (int j = 0; j < grid.nx; ++j)
            f(j, i) = img.at(j, i) * inv;
    return f;
}

}  // namespace lsseg
