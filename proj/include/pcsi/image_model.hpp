#pragma once

// Color model shared by the encoder and the receiver: 8-bit RGB rasters,
// the JFIF/T.871 full-range YCbCr transform, and uniform channel
// quantization down to 1..8 bits.  All rounding is round-half-up so both
// ends of a link compute identical sample values.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pcsi {

struct RgbPixel {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const RgbPixel&) const = default;
};

struct YcbcrPixel {
    std::uint8_t y = 0, cb = 0, cr = 0;
    bool operator==(const YcbcrPixel&) const = default;
};

namespace detail {

inline int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

inline std::uint8_t clamp_u8(int v) {
    return static_cast<std::uint8_t>(v < 0 ? 0 : v > 255 ? 255 : v);
}

} // namespace detail

// Full-range transform; no chroma subsampling anywhere in the pipeline.
inline YcbcrPixel rgb_to_ycbcr(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double rf = r, gf = g, bf = b;
    const double y  = 0.299 * rf + 0.587 * gf + 0.114 * bf;
    const double cb = 128.0 - (0.299 / 1.772) * rf - (0.587 / 1.772) * gf + (0.886 / 1.772) * bf;
    const double cr = 128.0 + (0.701 / 1.402) * rf - (0.587 / 1.402) * gf - (0.114 / 1.402) * bf;
    return {detail::clamp_u8(detail::round_half_up(y)),
            detail::clamp_u8(detail::round_half_up(cb)),
            detail::clamp_u8(detail::round_half_up(cr))};
}

inline YcbcrPixel rgb_to_ycbcr(const RgbPixel& p) { return rgb_to_ycbcr(p.r, p.g, p.b); }

inline RgbPixel ycbcr_to_rgb(const YcbcrPixel& p) {
    const double y = p.y, cb = p.cb - 128.0, cr = p.cr - 128.0;
    const double r = y + 1.402 * cr;
    const double g = y - (0.114 * 1.772 * cb + 0.299 * 1.402 * cr) / 0.587;
    const double b = y + 1.772 * cb;
    return {detail::clamp_u8(detail::round_half_up(r)),
            detail::clamp_u8(detail::round_half_up(g)),
            detail::clamp_u8(detail::round_half_up(b))};
}

// Bits per transmitted channel sample.  The wire stores bits-1 in three
// bits, so the usable range is 1..8.
class ColorDepth {
public:
    explicit ColorDepth(int bits) : bits_(bits) {
        if (bits < 1 || bits > 8) throw std::invalid_argument("color depth must be 1..8 bits");
    }

    static ColorDepth from_code(std::uint8_t code) { return ColorDepth((code & 0x07) + 1); }

    int bits() const { return bits_; }
    std::uint8_t code() const { return static_cast<std::uint8_t>(bits_ - 1); }
    int max_level() const { return (1 << bits_) - 1; }

    bool operator==(const ColorDepth&) const = default;

private:
    int bits_;
};

inline std::uint8_t quantize_channel(std::uint8_t value, ColorDepth depth) {
    return static_cast<std::uint8_t>(
        detail::round_half_up(value / 255.0 * depth.max_level()));
}

inline std::uint8_t dequantize_channel(std::uint8_t level, ColorDepth depth) {
    if (level > depth.max_level()) throw std::invalid_argument("level exceeds color depth");
    return static_cast<std::uint8_t>(
        detail::round_half_up(static_cast<double>(level) / depth.max_level() * 255.0));
}

// Row-major interleaved RGB8 raster.  Dimensions are constrained to
// multiples of 16 so they survive the one-byte header encoding.
class Image {
public:
    static constexpr int min_dim = 16;
    static constexpr int max_dim = 4080;

    static void check_extent(int width, int height) {
        check_dim(width);
        check_dim(height);
    }

    Image(int width, int height) : width_(width), height_(height) {
        check_extent(width, height);
        data_.resize(static_cast<std::size_t>(width) * height * 3, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    RgbPixel get(int row, int col) const {
        const std::uint8_t* p = &data_[offset(row, col)];
        return {p[0], p[1], p[2]};
    }

    void set(int row, int col, RgbPixel px) {
        std::uint8_t* p = &data_[offset(row, col)];
        p[0] = px.r;
        p[1] = px.g;
        p[2] = px.b;
    }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool operator==(const Image&) const = default;

private:
    static void check_dim(int d) {
        if (d < min_dim || d > max_dim || d % 16 != 0)
            throw std::invalid_argument("image dimension must be a multiple of 16 in [16, 4080]");
    }

    std::size_t offset(int row, int col) const {
        if (row < 0 || row >= height_ || col < 0 || col >= width_)
            throw std::out_of_range("pixel outside image");
        return (static_cast<std::size_t>(row) * width_ + col) * 3;
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

} // namespace pcsi
