#pragma once

// Pixel data payload wire format and the printable-text armor.
//
// Payload layout, 7 header bytes then bit-packed samples:
//
//   +--------+--------+--------+========+--------+--------+
//   |image id| rows/16| cols/16|pckt id |n color |depth   |
//   |   u8   |   u8   |   u8   | u16 BE |   u8   |bits-1  |
//   +--------+--------+--------+========+--------+--------+
//   | n_color x (Y Cb Cr), then n_grey x Y, each b bits,  |
//   | MSB first, zero padded to a byte boundary           |
//   +-----------------------------------------------------+
//
// The grey count is never transmitted: a receiver recovers it from the
// payload length, which is why a valid payload keeps its padding shorter
// than one sample field.  Total length is capped at 256 bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bitio.hpp"
#include "image_model.hpp"
#include "pixel_sequence.hpp"

namespace pcsi {

struct PdpHeader {
    std::uint8_t image_id = 0;
    std::uint8_t rows16 = 0;
    std::uint8_t cols16 = 0;
    std::uint16_t packet_id = 0;
    std::uint8_t n_color = 0;
    std::uint8_t depth_code = 0;

    int rows() const { return rows16 * 16; }
    int cols() const { return cols16 * 16; }
    ColorDepth depth() const { return ColorDepth::from_code(depth_code); }

    bool operator==(const PdpHeader&) const = default;
};

struct PdpPayload {
    PdpHeader header;
    std::vector<YcbcrPixel> color;       // quantized levels, not 8-bit values
    std::vector<std::uint8_t> grey;      // quantized Y levels

    bool operator==(const PdpPayload&) const = default;
};

enum class PdpError {
    none,
    truncated,        // shorter than the 7-byte header
    bad_dimensions,   // zero rows or cols
    bad_counts,       // color samples do not fit the declared length
    bad_padding,      // nonzero bits after the last sample
    oversize,         // longer than 256 bytes
};

inline Bytes encode_pdp(const PdpHeader& header,
                        std::span<const YcbcrPixel> color,
                        std::span<const std::uint8_t> grey) {
    if (header.rows16 == 0 || header.cols16 == 0)
        throw std::invalid_argument("zero image dimension");
    if (color.size() != header.n_color)
        throw std::invalid_argument("color sample count does not match header");
    const ColorDepth depth = header.depth();
    const unsigned b = static_cast<unsigned>(depth.bits());
    const int max_level = depth.max_level();
    for (const auto& px : color)
        if (px.y > max_level || px.cb > max_level || px.cr > max_level)
            throw std::invalid_argument("color sample exceeds depth");
    for (std::uint8_t g : grey)
        if (g > max_level) throw std::invalid_argument("grey sample exceeds depth");

    const std::size_t bits = (3 * color.size() + grey.size()) * b;
    if (pdp_header_size + (bits + 7) / 8 > pdp_max_len)
        throw std::invalid_argument("payload exceeds 256 bytes");

    BitWriter w;
    w.append(header.image_id, 8);
    w.append(header.rows16, 8);
    w.append(header.cols16, 8);
    w.append(header.packet_id, 16);
    w.append(header.n_color, 8);
    w.append(header.depth_code & 0x07u, 8);
    for (const auto& px : color) {
        w.append(px.y, b);
        w.append(px.cb, b);
        w.append(px.cr, b);
    }
    for (std::uint8_t g : grey) w.append(g, b);
    return w.take();
}

inline std::optional<PdpPayload> decode_pdp(ByteSpan raw, PdpError* error = nullptr) {
    const auto fail = [&](PdpError e) {
        if (error) *error = e;
        return std::nullopt;
    };
    if (error) *error = PdpError::none;
    if (raw.size() < pdp_header_size) return fail(PdpError::truncated);
    if (raw.size() > pdp_max_len) return fail(PdpError::oversize);

    PdpPayload out;
    out.header.image_id = raw[0];
    out.header.rows16 = raw[1];
    out.header.cols16 = raw[2];
    out.header.packet_id = static_cast<std::uint16_t>((raw[3] << 8) | raw[4]);
    out.header.n_color = raw[5];
    out.header.depth_code = raw[6] & 0x07u;
    if (out.header.rows16 == 0 || out.header.cols16 == 0)
        return fail(PdpError::bad_dimensions);

    const unsigned b = static_cast<unsigned>(out.header.depth().bits());
    const std::size_t sample_bits = (raw.size() - pdp_header_size) * 8;
    const std::size_t color_bits = std::size_t{3} * b * out.header.n_color;
    if (color_bits > sample_bits) return fail(PdpError::bad_counts);
    const std::size_t n_grey = (sample_bits - color_bits) / b;
    if (out.header.n_color + n_grey == 0) return fail(PdpError::bad_counts);

    BitReader r(raw.subspan(pdp_header_size));
    out.color.reserve(out.header.n_color);
    for (unsigned i = 0; i < out.header.n_color; ++i) {
        YcbcrPixel px;
        px.y = static_cast<std::uint8_t>(r.read(b));
        px.cb = static_cast<std::uint8_t>(r.read(b));
        px.cr = static_cast<std::uint8_t>(r.read(b));
        out.color.push_back(px);
    }
    out.grey.reserve(n_grey);
    for (std::size_t i = 0; i < n_grey; ++i)
        out.grey.push_back(static_cast<std::uint8_t>(r.read(b)));
    while (r.remaining() > 0)
        if (r.read(1) != 0) return fail(PdpError::bad_padding);
    return out;
}

// ---- base91 text armor --------------------------------------------------
//
// 13 input bits make two characters from the 91-glyph run '!'..'{'; a
// short tail of 1..6 bits makes a single character.  Tails of 7..12 bits
// are zero padded up to a full pair.  Everything stays MSB first.

namespace base91 {

constexpr char alphabet_first = '!';   // 0x21
constexpr int alphabet_size = 91;      // '!' .. '{'

inline std::size_t encoded_chars(std::size_t bit_len) {
    const std::size_t pairs = bit_len / 13;
    const std::size_t rem = bit_len % 13;
    return 2 * pairs + (rem == 0 ? 0 : rem <= 6 ? 1 : 2);
}

inline std::string encode_bits(ByteSpan data, std::size_t bit_len) {
    BitReader r(data, bit_len);
    std::string out;
    out.reserve(encoded_chars(bit_len));
    while (r.remaining() >= 13) {
        const std::uint32_t v = r.read(13);
        out.push_back(static_cast<char>(v / alphabet_size + alphabet_first));
        out.push_back(static_cast<char>(v % alphabet_size + alphabet_first));
    }
    const unsigned rem = static_cast<unsigned>(r.remaining());
    if (rem > 0) {
        std::uint32_t v = r.read(rem);
        if (rem <= 6) {
            v <<= (6 - rem);
            out.push_back(static_cast<char>(v + alphabet_first));
        } else {
            v <<= (13 - rem);
            out.push_back(static_cast<char>(v / alphabet_size + alphabet_first));
            out.push_back(static_cast<char>(v % alphabet_size + alphabet_first));
        }
    }
    return out;
}

inline std::string encode(ByteSpan data) { return encode_bits(data, data.size() * 8); }

// Recovers the exact byte length a character count must have come from,
// when one exists.  8-bit groups and 13-bit pairs never collide below a
// few thousand bytes, so framed payloads are unambiguous.
inline std::optional<std::size_t> byte_len_for_chars(std::size_t chars) {
    const std::size_t hi = (13 * chars + 24) / 16 + 1;
    for (std::size_t guess = 0; guess <= hi; ++guess)
        if (encoded_chars(guess * 8) == chars) return guess;
    return std::nullopt;
}

inline std::optional<Bytes> decode_bits(std::string_view text, std::size_t bit_len) {
    if (text.size() != encoded_chars(bit_len)) return std::nullopt;
    const auto value_of = [](char c) -> int {
        const unsigned char u = static_cast<unsigned char>(c);
        if (u < alphabet_first || u >= alphabet_first + alphabet_size) return -1;
        return u - alphabet_first;
    };
    BitWriter w;
    std::size_t left = bit_len;
    std::size_t i = 0;
    while (left >= 13) {
        const int hi = value_of(text[i]);
        const int lo = value_of(text[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        const std::uint32_t v = static_cast<std::uint32_t>(hi) * alphabet_size + lo;
        if (v >= (1u << 13)) return std::nullopt;
        w.append(v, 13);
        left -= 13;
        i += 2;
    }
    if (left > 0) {
        if (left <= 6) {
            const int v = value_of(text[i]);
            if (v < 0 || v >= (1 << 6)) return std::nullopt;
            w.append(static_cast<std::uint32_t>(v) >> (6 - left), static_cast<unsigned>(left));
        } else {
            const int hi = value_of(text[i]);
            const int lo = value_of(text[i + 1]);
            if (hi < 0 || lo < 0) return std::nullopt;
            const std::uint32_t v = static_cast<std::uint32_t>(hi) * alphabet_size + lo;
            if (v >= (1u << 13)) return std::nullopt;
            w.append(v >> (13 - left), static_cast<unsigned>(left));
        }
    }
    Bytes out = w.take();
    out.resize((bit_len + 7) / 8, 0);
    return out;
}

inline std::optional<Bytes> decode(std::string_view text, std::size_t byte_len) {
    return decode_bits(text, byte_len * 8);
}

} // namespace base91

} // namespace pcsi
