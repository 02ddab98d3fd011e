#pragma once

// MSB-first bit packing helpers shared by the payload codec and the
// base91 armor.  A BitWriter fills bytes from the high bit down and
// zero-pads the final byte; a BitReader walks the same layout.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace pcsi {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

class BitWriter {
public:
    // Appends the low `count` bits of `value`, most significant first.
    void append(std::uint32_t value, unsigned count) {
        if (count > 32) throw std::invalid_argument("bit count > 32");
        for (unsigned i = count; i-- > 0;) put_bit((value >> i) & 1u);
    }

    std::size_t size_bits() const { return bit_size_; }

    // Buffer padded with zero bits up to the byte boundary.
    const Bytes& bytes() const { return buf_; }
    Bytes take() { bit_size_ = 0; return std::move(buf_); }

private:
    void put_bit(std::uint32_t b) {
        if (bit_size_ % 8 == 0) buf_.push_back(0);
        if (b) buf_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_size_ % 8));
        ++bit_size_;
    }

    Bytes buf_;
    std::size_t bit_size_ = 0;
};

class BitReader {
public:
    explicit BitReader(ByteSpan data, std::size_t bit_limit = SIZE_MAX)
        : data_(data),
          bit_limit_(bit_limit == SIZE_MAX ? data.size() * 8 : bit_limit) {
        if (bit_limit_ > data.size() * 8)
            throw std::invalid_argument("bit limit exceeds buffer");
    }

    std::size_t remaining() const { return bit_limit_ - pos_; }

    // Reads `count` bits MSB first.  Short reads are a caller bug.
    std::uint32_t read(unsigned count) {
        if (count > 32) throw std::invalid_argument("bit count > 32");
        if (count > remaining()) throw std::out_of_range("bit read past end");
        std::uint32_t v = 0;
        for (unsigned i = 0; i < count; ++i) {
            v = (v << 1) | ((data_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
            ++pos_;
        }
        return v;
    }

private:
    ByteSpan data_;
    std::size_t bit_limit_;
    std::size_t pos_ = 0;
};

} // namespace pcsi
