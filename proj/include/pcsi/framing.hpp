#pragma once

// Link-layer containers for pixel payloads.
//
//   AX.25 UI   7E | dest 7B | src 7B | digis 0..8x7B | 03 F0 | pdp | FCS | 7E
//   SSDV-like  7E | 76 | callsign u32 BE | pdp | CRC u16 BE | 7E
//   KISS       C0 | 00 | escaped body | C0
//
// AX.25 uses the reflected X.25 CRC transmitted low byte first; the
// SSDV-like frame uses CCITT-FALSE transmitted high byte first, covering
// the marker byte through the payload.  HDLC bit stuffing happens below
// this layer and never changes the bytes handled here.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bitio.hpp"

namespace pcsi {

enum class CrcVariant { x25, ccitt_false };

namespace detail {

constexpr std::array<std::uint16_t, 256> make_crc_table_reflected(std::uint16_t poly) {
    std::array<std::uint16_t, 256> t{};
    for (int i = 0; i < 256; ++i) {
        std::uint16_t c = static_cast<std::uint16_t>(i);
        for (int k = 0; k < 8; ++k)
            c = (c & 1u) ? static_cast<std::uint16_t>((c >> 1) ^ poly)
                         : static_cast<std::uint16_t>(c >> 1);
        t[static_cast<std::size_t>(i)] = c;
    }
    return t;
}

constexpr std::array<std::uint16_t, 256> make_crc_table_msb(std::uint16_t poly) {
    std::array<std::uint16_t, 256> t{};
    for (int i = 0; i < 256; ++i) {
        std::uint16_t c = static_cast<std::uint16_t>(i << 8);
        for (int k = 0; k < 8; ++k)
            c = (c & 0x8000u) ? static_cast<std::uint16_t>((c << 1) ^ poly)
                              : static_cast<std::uint16_t>(c << 1);
        t[static_cast<std::size_t>(i)] = c;
    }
    return t;
}

inline constexpr auto crc_table_x25 = make_crc_table_reflected(0x8408);
inline constexpr auto crc_table_ccitt = make_crc_table_msb(0x1021);

} // namespace detail

inline std::uint16_t crc16(ByteSpan data, CrcVariant variant) {
    std::uint16_t crc = 0xFFFF;
    if (variant == CrcVariant::x25) {
        for (std::uint8_t byte : data)
            crc = static_cast<std::uint16_t>((crc >> 8) ^
                  detail::crc_table_x25[(crc ^ byte) & 0xFFu]);
        return static_cast<std::uint16_t>(crc ^ 0xFFFF);
    }
    for (std::uint8_t byte : data)
        crc = static_cast<std::uint16_t>((crc << 8) ^
              detail::crc_table_ccitt[((crc >> 8) ^ byte) & 0xFFu]);
    return crc;
}

enum class FrameError {
    none,
    too_short,
    bad_flag,
    bad_address,
    bad_control,
    bad_crc,
    bad_marker,
    bad_callsign,
    bad_escape,
};

constexpr std::uint8_t hdlc_flag = 0x7E;
constexpr std::size_t ax25_fixed_overhead = 20;  // flags, two addresses, control, pid, fcs
constexpr std::size_t ax25_digi_overhead = 7;
constexpr std::size_t ssdv_overhead = 9;         // flags, marker, callsign, crc
constexpr std::size_t ax25_max_digis = 8;

// ---- AX.25 ---------------------------------------------------------------

struct Ax25Address {
    std::string callsign;   // 1..6 of A-Z 0-9
    std::uint8_t ssid = 0;  // 0..15

    bool operator==(const Ax25Address&) const = default;
};

struct Ax25Frame {
    Ax25Address dest;
    Ax25Address src;
    std::vector<Ax25Address> digis;
    Bytes payload;

    bool operator==(const Ax25Frame&) const = default;
};

namespace detail {

inline bool valid_callsign_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

inline void append_ax25_address(Bytes& out, const Ax25Address& a, bool last) {
    if (a.callsign.empty() || a.callsign.size() > 6)
        throw std::invalid_argument("callsign must be 1..6 characters");
    for (char c : a.callsign)
        if (!valid_callsign_char(c))
            throw std::invalid_argument("callsign characters must be A-Z or 0-9");
    if (a.ssid > 15) throw std::invalid_argument("ssid must be 0..15");
    for (std::size_t i = 0; i < 6; ++i) {
        const char c = i < a.callsign.size() ? a.callsign[i] : ' ';
        out.push_back(static_cast<std::uint8_t>(static_cast<std::uint8_t>(c) << 1));
    }
    out.push_back(static_cast<std::uint8_t>(0x60u | (a.ssid << 1) | (last ? 1u : 0u)));
}

// Reads one 7-byte address field; reserved bits are ignored.
inline std::optional<Ax25Address> parse_ax25_address(ByteSpan field, bool& last) {
    std::string call;
    for (std::size_t i = 0; i < 6; ++i) {
        if (field[i] & 1u) return std::nullopt;
        call.push_back(static_cast<char>(field[i] >> 1));
    }
    while (!call.empty() && call.back() == ' ') call.pop_back();
    if (call.empty()) return std::nullopt;
    for (char c : call)
        if (!valid_callsign_char(c)) return std::nullopt;
    last = field[6] & 1u;
    return Ax25Address{call, static_cast<std::uint8_t>((field[6] >> 1) & 0x0Fu)};
}

} // namespace detail

// Frame content between the flags, FCS excluded.  This is the unit a
// KISS link carries; the TNC appends the FCS itself.
inline Bytes ax25_body(const Ax25Frame& frame) {
    if (frame.digis.size() > ax25_max_digis)
        throw std::invalid_argument("at most 8 digipeaters");
    Bytes body;
    body.reserve(14 + 7 * frame.digis.size() + 2 + frame.payload.size());
    detail::append_ax25_address(body, frame.dest, false);
    detail::append_ax25_address(body, frame.src, frame.digis.empty());
    for (std::size_t i = 0; i < frame.digis.size(); ++i)
        detail::append_ax25_address(body, frame.digis[i], i + 1 == frame.digis.size());
    body.push_back(0x03);  // UI
    body.push_back(0xF0);  // no layer 3
    body.insert(body.end(), frame.payload.begin(), frame.payload.end());
    return body;
}

inline Bytes encode_ax25(const Ax25Frame& frame) {
    const Bytes body = ax25_body(frame);
    Bytes out;
    out.reserve(body.size() + 4);
    out.push_back(hdlc_flag);
    out.insert(out.end(), body.begin(), body.end());
    const std::uint16_t fcs = crc16(body, CrcVariant::x25);
    out.push_back(static_cast<std::uint8_t>(fcs & 0xFF));
    out.push_back(static_cast<std::uint8_t>(fcs >> 8));
    out.push_back(hdlc_flag);
    return out;
}

inline std::optional<Ax25Frame> decode_ax25_body(ByteSpan body,
                                                 FrameError* error = nullptr) {
    const auto fail = [&](FrameError e) {
        if (error) *error = e;
        return std::nullopt;
    };
    if (error) *error = FrameError::none;
    if (body.size() < 16) return fail(FrameError::too_short);

    Ax25Frame frame;
    bool last = false;
    auto dest = detail::parse_ax25_address(body.subspan(0, 7), last);
    if (!dest || last) return fail(FrameError::bad_address);
    frame.dest = *dest;
    std::size_t pos = 7;
    auto src = detail::parse_ax25_address(body.subspan(pos, 7), last);
    if (!src) return fail(FrameError::bad_address);
    frame.src = *src;
    pos += 7;
    while (!last) {
        if (frame.digis.size() == ax25_max_digis) return fail(FrameError::bad_address);
        if (body.size() < pos + 7 + 2) return fail(FrameError::too_short);
        auto digi = detail::parse_ax25_address(body.subspan(pos, 7), last);
        if (!digi) return fail(FrameError::bad_address);
        frame.digis.push_back(*digi);
        pos += 7;
    }
    if (body.size() < pos + 2) return fail(FrameError::too_short);
    if (body[pos] != 0x03 || body[pos + 1] != 0xF0) return fail(FrameError::bad_control);
    pos += 2;
    frame.payload.assign(body.begin() + pos, body.end());
    return frame;
}

inline std::optional<Ax25Frame> decode_ax25(ByteSpan raw, FrameError* error = nullptr) {
    const auto fail = [&](FrameError e) {
        if (error) *error = e;
        return std::nullopt;
    };
    if (error) *error = FrameError::none;
    if (raw.size() < ax25_fixed_overhead) return fail(FrameError::too_short);
    if (raw.front() != hdlc_flag || raw.back() != hdlc_flag)
        return fail(FrameError::bad_flag);
    const ByteSpan body = raw.subspan(1, raw.size() - 4);
    const std::uint16_t fcs = crc16(body, CrcVariant::x25);
    const std::uint16_t sent = static_cast<std::uint16_t>(
        raw[raw.size() - 3] | (raw[raw.size() - 2] << 8));
    if (fcs != sent) return fail(FrameError::bad_crc);
    return decode_ax25_body(body, error);
}

// ---- base40 callsign packing ----------------------------------------------
//
// Code 0 pads, 1..10 are '0'..'9', 11..36 are 'A'..'Z', 37 '-', 38 '/',
// 39 space.  Six characters max, so every value fits 32 bits.

namespace base40 {

constexpr std::uint32_t radix = 40;
constexpr std::uint64_t limit = 4096000000ull;  // 40^6

inline int code_of(char c) {
    if (c >= '0' && c <= '9') return c - '0' + 1;
    if (c >= 'A' && c <= 'Z') return c - 'A' + 11;
    if (c == '-') return 37;
    if (c == '/') return 38;
    if (c == ' ') return 39;
    return -1;
}

inline char char_of(int code) {
    if (code >= 1 && code <= 10) return static_cast<char>('0' + code - 1);
    if (code >= 11 && code <= 36) return static_cast<char>('A' + code - 11);
    if (code == 37) return '-';
    if (code == 38) return '/';
    return ' ';
}

inline std::uint32_t encode(std::string_view callsign) {
    if (callsign.size() > 6)
        throw std::invalid_argument("callsign exceeds 6 characters");
    std::uint64_t v = 0;
    for (char c : callsign) {
        const int code = code_of(c);
        if (code < 0) throw std::invalid_argument("character outside base40 alphabet");
        v = v * radix + static_cast<std::uint32_t>(code);
    }
    return static_cast<std::uint32_t>(v);
}

inline std::optional<std::string> decode(std::uint32_t value) {
    if (value >= limit) return std::nullopt;
    std::string out;
    while (value != 0) {
        const std::uint32_t code = value % radix;
        if (code == 0) return std::nullopt;  // pad inside a value never encodes
        out.insert(out.begin(), char_of(static_cast<int>(code)));
        value /= radix;
    }
    return out;
}

} // namespace base40

// ---- SSDV-like framing -----------------------------------------------------

constexpr std::uint8_t ssdv_marker = 0x76;

struct SsdvFrame {
    std::string callsign;
    Bytes payload;

    bool operator==(const SsdvFrame&) const = default;
};

// Marker through CRC; the unit a KISS link carries for this framing.
inline Bytes ssdv_body(std::string_view callsign, ByteSpan pdp) {
    Bytes body;
    body.reserve(pdp.size() + 7);
    body.push_back(ssdv_marker);
    const std::uint32_t call = base40::encode(callsign);
    body.push_back(static_cast<std::uint8_t>(call >> 24));
    body.push_back(static_cast<std::uint8_t>(call >> 16));
    body.push_back(static_cast<std::uint8_t>(call >> 8));
    body.push_back(static_cast<std::uint8_t>(call));
    body.insert(body.end(), pdp.begin(), pdp.end());
    const std::uint16_t crc = crc16(body, CrcVariant::ccitt_false);
    body.push_back(static_cast<std::uint8_t>(crc >> 8));
    body.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    return body;
}

inline Bytes encode_ssdv(std::string_view callsign, ByteSpan pdp) {
    const Bytes body = ssdv_body(callsign, pdp);
    Bytes out;
    out.reserve(body.size() + 2);
    out.push_back(hdlc_flag);
    out.insert(out.end(), body.begin(), body.end());
    out.push_back(hdlc_flag);
    return out;
}

inline std::optional<SsdvFrame> decode_ssdv_body(ByteSpan body,
                                                 FrameError* error = nullptr) {
    const auto fail = [&](FrameError e) {
        if (error) *error = e;
        return std::nullopt;
    };
    if (error) *error = FrameError::none;
    if (body.size() < 7) return fail(FrameError::too_short);
    if (body[0] != ssdv_marker) return fail(FrameError::bad_marker);
    const std::uint16_t sent = static_cast<std::uint16_t>(
        (body[body.size() - 2] << 8) | body[body.size() - 1]);
    if (crc16(body.first(body.size() - 2), CrcVariant::ccitt_false) != sent)
        return fail(FrameError::bad_crc);
    const std::uint32_t call = (static_cast<std::uint32_t>(body[1]) << 24) |
                               (static_cast<std::uint32_t>(body[2]) << 16) |
                               (static_cast<std::uint32_t>(body[3]) << 8) |
                               body[4];
    auto callsign = base40::decode(call);
    if (!callsign) return fail(FrameError::bad_callsign);
    SsdvFrame frame;
    frame.callsign = *callsign;
    frame.payload.assign(body.begin() + 5, body.end() - 2);
    return frame;
}

inline std::optional<SsdvFrame> decode_ssdv(ByteSpan raw, FrameError* error = nullptr) {
    const auto fail = [&](FrameError e) {
        if (error) *error = e;
        return std::nullopt;
    };
    if (error) *error = FrameError::none;
    if (raw.size() < ssdv_overhead) return fail(FrameError::too_short);
    if (raw.front() != hdlc_flag || raw.back() != hdlc_flag)
        return fail(FrameError::bad_flag);
    return decode_ssdv_body(raw.subspan(1, raw.size() - 2), error);
}

// ---- KISS ------------------------------------------------------------------

constexpr std::uint8_t kiss_fend = 0xC0;
constexpr std::uint8_t kiss_fesc = 0xDB;
constexpr std::uint8_t kiss_tfend = 0xDC;
constexpr std::uint8_t kiss_tfesc = 0xDD;

inline Bytes kiss_wrap(ByteSpan body) {
    Bytes out;
    out.reserve(body.size() + 3);
    out.push_back(kiss_fend);
    out.push_back(0x00);  // port 0, data
    for (std::uint8_t b : body) {
        if (b == kiss_fend) {
            out.push_back(kiss_fesc);
            out.push_back(kiss_tfend);
        } else if (b == kiss_fesc) {
            out.push_back(kiss_fesc);
            out.push_back(kiss_tfesc);
        } else {
            out.push_back(b);
        }
    }
    out.push_back(kiss_fend);
    return out;
}

inline std::optional<Bytes> kiss_unwrap(ByteSpan frame, FrameError* error = nullptr) {
    const auto fail = [&](FrameError e) {
        if (error) *error = e;
        return std::nullopt;
    };
    if (error) *error = FrameError::none;
    if (frame.size() < 3) return fail(FrameError::too_short);
    if (frame.front() != kiss_fend || frame.back() != kiss_fend)
        return fail(FrameError::bad_flag);
    if (frame[1] != 0x00) return fail(FrameError::bad_control);
    Bytes out;
    out.reserve(frame.size() - 3);
    for (std::size_t i = 2; i + 1 < frame.size(); ++i) {
        const std::uint8_t b = frame[i];
        if (b == kiss_fend) return fail(FrameError::bad_flag);
        if (b == kiss_fesc) {
            if (i + 2 >= frame.size()) return fail(FrameError::bad_escape);
            const std::uint8_t next = frame[++i];
            if (next == kiss_tfend) out.push_back(kiss_fend);
            else if (next == kiss_tfesc) out.push_back(kiss_fesc);
            else return fail(FrameError::bad_escape);
        } else {
            out.push_back(b);
        }
    }
    return out;
}

struct KissStream {
    std::vector<Bytes> bodies;
    std::size_t rejected = 0;
};

// Splits a byte stream of back-to-back KISS frames.  Empty runs between
// delimiters are normal; malformed runs are counted, not fatal.
inline KissStream kiss_unwrap_stream(ByteSpan data) {
    KissStream out;
    std::size_t i = 0;
    while (i < data.size()) {
        if (data[i] == kiss_fend) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < data.size() && data[j] != kiss_fend) ++j;
        Bytes frame;
        frame.push_back(kiss_fend);
        frame.insert(frame.end(), data.begin() + i, data.begin() + j);
        frame.push_back(kiss_fend);
        if (auto body = kiss_unwrap(frame)) out.bodies.push_back(std::move(*body));
        else ++out.rejected;
        i = j;
    }
    return out;
}

} // namespace pcsi
