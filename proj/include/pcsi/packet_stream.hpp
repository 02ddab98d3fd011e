#pragma once

// On-disk containers for packet captures.  Three interchangeable forms:
//
//   binary  u16 BE length prefix before each record
//   hex     one record per line, lowercase hex digits
//   kiss    records wrapped as KISS data frames, back to back
//
// Readers are tolerant: damaged records are counted and skipped so one
// bad line never ends a capture replay.

#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "framing.hpp"

namespace pcsi {

enum class StreamFormat { binary, hex, kiss };

inline void write_packet_stream(std::ostream& os, std::span<const Bytes> records,
                                StreamFormat format) {
    switch (format) {
    case StreamFormat::binary:
        for (const Bytes& r : records) {
            if (r.size() > 0xFFFF) throw std::invalid_argument("record exceeds 64 KiB");
            os.put(static_cast<char>(r.size() >> 8));
            os.put(static_cast<char>(r.size() & 0xFF));
            os.write(reinterpret_cast<const char*>(r.data()),
                     static_cast<std::streamsize>(r.size()));
        }
        break;
    case StreamFormat::hex: {
        static const char digits[] = "0123456789abcdef";
        for (const Bytes& r : records) {
            std::string line;
            line.reserve(r.size() * 2 + 1);
            for (std::uint8_t b : r) {
                line.push_back(digits[b >> 4]);
                line.push_back(digits[b & 0x0F]);
            }
            line.push_back('\n');
            os << line;
        }
        break;
    }
    case StreamFormat::kiss:
        for (const Bytes& r : records) {
            const Bytes frame = kiss_wrap(r);
            os.write(reinterpret_cast<const char*>(frame.data()),
                     static_cast<std::streamsize>(frame.size()));
        }
        break;
    }
}

struct StreamContents {
    std::vector<Bytes> records;
    std::size_t rejected = 0;
    StreamFormat format = StreamFormat::binary;
};

namespace detail {

inline int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline bool looks_like_hex(ByteSpan data) {
    for (std::uint8_t b : data)
        if (hex_value(static_cast<char>(b)) < 0 && b != '\n' && b != '\r' &&
            b != ' ' && b != '\t')
            return false;
    return true;
}

} // namespace detail

inline StreamContents read_packet_stream(ByteSpan data,
                                         std::optional<StreamFormat> format = {}) {
    StreamContents out;
    if (!format) {
        if (data.empty()) format = StreamFormat::binary;
        else if (data.front() == kiss_fend) format = StreamFormat::kiss;
        else if (detail::looks_like_hex(data)) format = StreamFormat::hex;
        else format = StreamFormat::binary;
    }
    out.format = *format;

    switch (*format) {
    case StreamFormat::binary: {
        std::size_t i = 0;
        while (i + 2 <= data.size()) {
            const std::size_t len = (static_cast<std::size_t>(data[i]) << 8) | data[i + 1];
            i += 2;
            if (len == 0 || i + len > data.size()) {
                ++out.rejected;
                break;
            }
            out.records.emplace_back(data.begin() + i, data.begin() + i + len);
            i += len;
        }
        if (i != data.size() && out.records.empty() && out.rejected == 0) ++out.rejected;
        break;
    }
    case StreamFormat::hex: {
        std::string line;
        for (std::size_t i = 0; i <= data.size(); ++i) {
            if (i < data.size() && data[i] != '\n') {
                const char c = static_cast<char>(data[i]);
                if (c != '\r' && c != ' ' && c != '\t') line.push_back(c);
                continue;
            }
            if (!line.empty()) {
                Bytes record;
                record.reserve(line.size() / 2);
                bool ok = line.size() % 2 == 0;
                for (std::size_t j = 0; ok && j < line.size(); j += 2) {
                    const int hi = detail::hex_value(line[j]);
                    const int lo = detail::hex_value(line[j + 1]);
                    if (hi < 0 || lo < 0) ok = false;
                    else record.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
                }
                if (ok) out.records.push_back(std::move(record));
                else ++out.rejected;
                line.clear();
            }
        }
        break;
    }
    case StreamFormat::kiss: {
        KissStream ks = kiss_unwrap_stream(data);
        out.records = std::move(ks.bodies);
        out.rejected = ks.rejected;
        break;
    }
    }
    return out;
}

inline StreamContents read_packet_stream(std::istream& is,
                                         std::optional<StreamFormat> format = {}) {
    std::ostringstream buf;
    buf << is.rdbuf();
    const std::string s = buf.str();
    return read_packet_stream(
        ByteSpan(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()), format);
}

inline std::optional<StreamFormat> parse_stream_format(std::string_view name) {
    if (name == "bin" || name == "binary") return StreamFormat::binary;
    if (name == "hex") return StreamFormat::hex;
    if (name == "kiss") return StreamFormat::kiss;
    return std::nullopt;
}

inline std::string_view stream_format_name(StreamFormat f) {
    switch (f) {
    case StreamFormat::binary: return "bin";
    case StreamFormat::hex: return "hex";
    default: return "kiss";
    }
}

} // namespace pcsi
