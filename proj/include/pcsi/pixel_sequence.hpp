#pragma once

// Deterministic pixel ordering.  Sender and receiver both expand the
// image dimensions into the same shuffled pixel list, so a packet id is
// all a receiver needs to locate every sample carried by that packet.
//
// The shuffle is pinned to one exact recipe: a 31-bit linear
// congruential generator (glibc constants, seed 1) driving a high-to-low
// Fisher-Yates pass with j = next() mod (i + 1).  Changing any detail
// breaks interoperability, so the tests freeze the first outputs of both
// the generator and the permutation.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "image_model.hpp"

namespace pcsi {

class Lcg {
public:
    explicit Lcg(std::uint32_t seed = 1) : state_(seed & 0x7fffffffu) {}

    std::uint32_t next() {
        state_ = (1103515245u * state_ + 12345u) & 0x7fffffffu;
        return state_;
    }

private:
    std::uint32_t state_;
};

struct PixelPermutation {
    std::uint16_t rows = 0;
    std::uint16_t cols = 0;
    std::vector<std::uint32_t> order;
};

inline PixelPermutation build_permutation(int rows, int cols) {
    Image::check_extent(cols, rows);
    PixelPermutation perm;
    perm.rows = static_cast<std::uint16_t>(rows);
    perm.cols = static_cast<std::uint16_t>(cols);
    const std::uint32_t total = static_cast<std::uint32_t>(rows) * cols;
    perm.order.resize(total);
    for (std::uint32_t k = 0; k < total; ++k) perm.order[k] = k;
    Lcg rng(1);
    for (std::uint32_t i = total - 1; i > 0; --i) {
        const std::uint32_t j = rng.next() % (i + 1);
        std::swap(perm.order[i], perm.order[j]);
    }
    return perm;
}

// Linear pixel index k maps column-major: row = k mod rows, col = k div rows.
struct RowCol {
    std::uint16_t row = 0;
    std::uint16_t col = 0;
    bool operator==(const RowCol&) const = default;
};

inline RowCol linear_to_rowcol(std::uint32_t k, int rows, int cols) {
    if (k >= static_cast<std::uint32_t>(rows) * cols)
        throw std::out_of_range("pixel index outside image");
    return {static_cast<std::uint16_t>(k % rows), static_cast<std::uint16_t>(k / rows)};
}

// How one image is cut into packets: every packet carries n_color YCbCr
// samples followed by n_grey Y-only samples, all at the same bit depth.
struct TransmissionPlan {
    std::uint32_t n_color = 0;
    std::uint32_t n_grey = 0;
    ColorDepth depth{8};
    std::uint16_t pdp_len = 0;
    std::uint16_t rows = 0;
    std::uint16_t cols = 0;

    std::uint32_t pixels_per_packet() const { return n_color + n_grey; }
    std::uint32_t total_pixels() const {
        return static_cast<std::uint32_t>(rows) * cols;
    }
    std::uint32_t packets_per_pass() const {
        return (total_pixels() + pixels_per_packet() - 1) / pixels_per_packet();
    }
    std::size_t payload_bits() const {
        return std::size_t{3} * depth.bits() * n_color + std::size_t{1} * depth.bits() * n_grey;
    }
};

constexpr std::size_t pdp_header_size = 7;
constexpr std::size_t pdp_max_len = 256;

// A plan is usable only if a receiver can reconstruct it from the packet
// itself: counts must match the declared length exactly, with fewer pad
// bits than one sample field.
inline void validate_plan(const TransmissionPlan& plan) {
    Image::check_extent(plan.cols, plan.rows);
    if (plan.pixels_per_packet() == 0)
        throw std::invalid_argument("plan carries no pixels");
    if (plan.n_color > 255)
        throw std::invalid_argument("color pixel count exceeds one byte");
    const std::size_t bits = plan.payload_bits();
    const std::size_t want_len = pdp_header_size + (bits + 7) / 8;
    if (plan.pdp_len != want_len)
        throw std::invalid_argument("pdp length does not match pixel counts");
    if (plan.pdp_len > pdp_max_len)
        throw std::invalid_argument("pdp length exceeds 256 bytes");
    const std::size_t padding = (plan.pdp_len - pdp_header_size) * 8 - bits;
    if (padding >= static_cast<std::size_t>(plan.depth.bits()))
        throw std::invalid_argument("padding would be ambiguous; add grey pixels");
}

struct PacketPixels {
    std::vector<std::uint32_t> color;
    std::vector<std::uint32_t> grey;
};

// Pixels for one packet: P consecutive permutation entries starting at
// (packet_id * P) mod total, wrapping past the end.  Consecutive ids
// tile the permutation, so one pass touches every pixel.
inline PacketPixels packet_slice(const PixelPermutation& perm,
                                 const TransmissionPlan& plan,
                                 std::uint16_t packet_id) {
    if (perm.rows != plan.rows || perm.cols != plan.cols)
        throw std::invalid_argument("permutation was built for different dimensions");
    const std::uint64_t total = plan.total_pixels();
    const std::uint32_t per_packet = plan.pixels_per_packet();
    std::uint64_t pos = (static_cast<std::uint64_t>(packet_id) * per_packet) % total;
    PacketPixels out;
    out.color.reserve(plan.n_color);
    out.grey.reserve(plan.n_grey);
    for (std::uint32_t i = 0; i < per_packet; ++i) {
        const std::uint32_t idx = perm.order[pos];
        if (i < plan.n_color) out.color.push_back(idx);
        else out.grey.push_back(idx);
        if (++pos == total) pos = 0;
    }
    return out;
}

} // namespace pcsi
