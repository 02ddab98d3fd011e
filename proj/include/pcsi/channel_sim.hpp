#pragma once

// Lossy link model and throughput analytics.
//
// The simulator is deliberately simple: whole-packet drops with
// probability `loss`, otherwise independent bit flips at rate `ber`.
// Randomness comes from a self-contained splitmix64 stream so a seed
// reproduces the same damage on every platform.
//
// Net efficiency for a payload of x bytes (header counted inside x):
//
//   AX.25      ((x-7)/(x+20)) * (1-ber)^(8x+160)
//   SSDV-like  ((x-7)/(x+9))  * (1-ber)^(8x+72)
//
// and a packet-loss fraction maps to an equivalent bit error rate via
// ber = 1 - (1-loss)^(1/2192), the inverse of surviving a 2192-bit frame.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "bitio.hpp"

namespace pcsi {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct ChannelModel {
    double ber = 0.0;    // per-bit flip probability, [0, 1)
    double loss = 0.0;   // whole-packet drop probability, [0, 1]
    std::uint64_t seed = 0;
};

struct ChannelPacket {
    Bytes bytes;
    bool dropped = false;
    std::uint32_t flipped_bits = 0;
};

inline std::vector<ChannelPacket> apply_channel(std::span<const Bytes> packets,
                                                const ChannelModel& model) {
    if (!(model.ber >= 0.0 && model.ber < 1.0))
        throw std::invalid_argument("ber must be in [0, 1)");
    if (!(model.loss >= 0.0 && model.loss <= 1.0))
        throw std::invalid_argument("loss must be in [0, 1]");
    SplitMix64 rng(model.seed);
    std::vector<ChannelPacket> out;
    out.reserve(packets.size());
    for (const Bytes& packet : packets) {
        ChannelPacket result;
        result.bytes = packet;
        if (model.loss > 0.0 && rng.next_double() < model.loss) {
            result.dropped = true;
            out.push_back(std::move(result));
            continue;
        }
        if (model.ber > 0.0) {
            for (std::uint8_t& byte : result.bytes) {
                for (int bit = 0; bit < 8; ++bit) {
                    if (rng.next_double() < model.ber) {
                        byte ^= static_cast<std::uint8_t>(1u << bit);
                        ++result.flipped_bits;
                    }
                }
            }
        }
        out.push_back(std::move(result));
    }
    return out;
}

enum class FramingKind { ax25, ssdv };

inline std::string_view framing_name(FramingKind kind) {
    return kind == FramingKind::ax25 ? "ax25" : "ssdv";
}

// Fraction of channel bits that are useful pixel bits, discounted by the
// chance the whole frame survives.  x counts the payload bytes including
// its 7-byte header; below 8 there is nothing useful to send.
inline double net_efficiency(int pdp_len, double ber, FramingKind kind) {
    if (pdp_len < 8) throw std::invalid_argument("payload length must be at least 8");
    if (!(ber >= 0.0 && ber < 1.0)) throw std::invalid_argument("ber must be in [0, 1)");
    const double x = pdp_len;
    const double overhead = kind == FramingKind::ax25 ? 20.0 : 9.0;
    const double frame_bits = 8.0 * x + (kind == FramingKind::ax25 ? 160.0 : 72.0);
    return (x - 7.0) / (x + overhead) * std::pow(1.0 - ber, frame_bits);
}

// Equivalent bit error rate for an observed packet loss fraction,
// assuming 2192-bit frames (a full 256-byte payload on AX.25).
inline double ber_from_loss(double loss_percent) {
    if (!(loss_percent >= 0.0 && loss_percent < 100.0))
        throw std::invalid_argument("loss must be in [0, 100) percent");
    return 1.0 - std::pow(1.0 - loss_percent / 100.0, 1.0 / 2192.0);
}

struct OptimalPdp {
    int pdp_len = 0;
    double efficiency = 0.0;
};

// Exhaustive scan of the valid payload sizes; ties go to the larger
// payload since fewer packets means less airtime bookkeeping.
inline OptimalPdp optimal_pdp(double ber, FramingKind kind) {
    OptimalPdp best{8, -1.0};
    for (int x = 8; x <= 256; ++x) {
        const double e = net_efficiency(x, ber, kind);
        if (e >= best.efficiency) best = {x, e};
    }
    return best;
}

inline void write_efficiency_csv(std::ostream& os,
                                 std::span<const double> bers,
                                 std::span<const FramingKind> kinds) {
    os << "framing,pdp_len,ber,efficiency\n";
    char line[96];
    for (FramingKind kind : kinds) {
        for (double ber : bers) {
            for (int x = 8; x <= 256; ++x) {
                std::snprintf(line, sizeof line, "%s,%d,%.9g,%.9g\n",
                              framing_name(kind).data(), x, ber,
                              net_efficiency(x, ber, kind));
                os << line;
            }
        }
    }
}

} // namespace pcsi
