// pcsi: image transfer over lossy packet links, end to end.
//
//   sample   write a synthetic test scene as PPM
//   encode   cut an image into pseudo-random pixel payloads and frame them
//   channel  push a packet stream through a simulated lossy channel
//   decode   fold surviving packets back into an image
//   analyze  link-budget tables and efficiency curves
//
// Exit codes: 0 success, 1 usage or I/O trouble, 2 no valid data.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pcsi/pcsi.hpp>

namespace {

using namespace pcsi;

// ---------------------------------------------------------------- plumbing

Bytes read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::string s = buf.str();
    return Bytes(s.begin(), s.end());
}

void write_file(const std::string& path, ByteSpan data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f) throw std::runtime_error("short write to " + path);
}

struct Callsign {
    std::string base;
    std::uint8_t ssid = 0;
};

// "KD2YFV-7" -> {"KD2YFV", 7}
Callsign parse_callsign(const std::string& text) {
    const std::size_t dash = text.rfind('-');
    if (dash == std::string::npos) return {text, 0};
    const std::string tail = text.substr(dash + 1);
    int ssid = -1;
    try {
        std::size_t used = 0;
        ssid = std::stoi(tail, &used);
        if (used != tail.size()) ssid = -1;
    } catch (const std::exception&) {
    }
    if (ssid < 0 || ssid > 15)
        throw std::runtime_error("bad ssid in callsign " + text);
    return {text.substr(0, dash), static_cast<std::uint8_t>(ssid)};
}

enum class WireFraming { raw, ax25, ssdv };

std::optional<WireFraming> parse_framing(const std::string& name) {
    if (name == "raw") return WireFraming::raw;
    if (name == "ax25") return WireFraming::ax25;
    if (name == "ssdv") return WireFraming::ssdv;
    return std::nullopt;
}

// The synthetic demo scene: color gradients with a disk and a rectangle,
// scaled from its 64x64 reference geometry.
Image demo_scene(int n) {
    const double s = n / 64.0;
    Image img(n, n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double r = 60.0 + 120.0 * x / n + 40.0 * std::sin(y / (9.0 * s));
            double g = 90.0 + 100.0 * y / n;
            double b = 140.0 + 80.0 * std::cos((x + y) / (14.0 * s));
            const double dx = x - 22.0 * s, dy = y - 26.0 * s;
            if (dx * dx + dy * dy < 130.0 * s * s) {
                r = 210; g = 60; b = 50;
            }
            if (x > 40.0 * s && x < 58.0 * s && y > 38.0 * s && y < 52.0 * s) {
                r = 30; g = 180; b = 200;
            }
            img.set(y, x, {detail::clamp_u8(detail::round_half_up(r)),
                           detail::clamp_u8(detail::round_half_up(g)),
                           detail::clamp_u8(detail::round_half_up(b))});
        }
    }
    return img;
}

void print_plan(const TransmissionPlan& plan) {
    std::printf("plan: rows=%u cols=%u depth=%d n_color=%u n_grey=%u pdp_len=%u\n",
                plan.rows, plan.cols, plan.depth.bits(), plan.n_color, plan.n_grey,
                plan.pdp_len);
    std::printf("pass: %u packets x %u pixels covers %u pixels\n",
                plan.packets_per_pass(), plan.pixels_per_packet(), plan.total_pixels());
}

// ------------------------------------------------------------------ sample

struct SampleOptions {
    std::string out;
    int size = 64;
    std::uint8_t grey = 0;
};

int run_sample(const SampleOptions& opt) {
    Image img = demo_scene(opt.size);
    if (opt.grey) {
        for (int r = 0; r < img.height(); ++r)
            for (int c = 0; c < img.width(); ++c) {
                const std::uint8_t y = rgb_to_ycbcr(img.get(r, c)).y;
                img.set(r, c, {y, y, y});
            }
    }
    save_ppm(opt.out, img);
    std::printf("wrote %dx%d scene -> %s\n", img.width(), img.height(),
                opt.out.c_str());
    return 0;
}

// ------------------------------------------------------------------ encode

struct EncodeOptions {
    std::string input;
    std::string out;
    int pdp_size = 256;
    int bits = 4;
    int n_color = -1;
    int n_grey = -1;
    int image_id = 0;
    int packets = 0;
    std::string framing = "raw";
    bool base91_armor = false;
    std::string callsign = "N0CALL";
    std::string dest = "PCSI";
    std::string format = "bin";
    bool explicit_pdp_size = false;
};

int run_encode(const EncodeOptions& opt) {
    const auto framing = parse_framing(opt.framing);
    if (!framing) throw std::runtime_error("unknown framing " + opt.framing);
    const auto format = parse_stream_format(opt.format);
    if (!format) throw std::runtime_error("unknown stream format " + opt.format);
    if ((opt.n_color < 0) != (opt.n_grey < 0))
        throw std::runtime_error("--n-color and --n-grey go together");

    const Image image = load_ppm(opt.input);
    const ColorDepth depth(opt.bits);
    TransmissionPlan plan;
    if (opt.n_color >= 0) {
        plan = plan_from_counts(opt.n_color, opt.n_grey, depth, image.height(),
                                image.width());
        if (opt.explicit_pdp_size && plan.pdp_len > opt.pdp_size)
            throw std::runtime_error("pixel counts need " + std::to_string(plan.pdp_len) +
                                     " bytes, over the requested pdp size");
    } else {
        plan = fill_plan(opt.pdp_size, depth, image.height(), image.width());
    }

    const std::uint32_t count = opt.packets > 0
                                    ? static_cast<std::uint32_t>(opt.packets)
                                    : plan.packets_per_pass();
    const std::vector<Bytes> pdps = encode_image_packets(
        image, plan, static_cast<std::uint8_t>(opt.image_id), 0, count);

    const Callsign src = parse_callsign(opt.callsign);
    const Callsign dst = parse_callsign(opt.dest);
    std::vector<Bytes> records;
    records.reserve(pdps.size());
    for (const Bytes& pdp : pdps) {
        Bytes body = pdp;
        if (opt.base91_armor) {
            const std::string text = base91::encode(pdp);
            body.assign(text.begin(), text.end());
        }
        switch (*framing) {
        case WireFraming::raw:
            records.push_back(std::move(body));
            break;
        case WireFraming::ax25: {
            const Ax25Frame frame{{dst.base, dst.ssid}, {src.base, src.ssid}, {}, body};
            records.push_back(*format == StreamFormat::kiss ? ax25_body(frame)
                                                            : encode_ax25(frame));
            break;
        }
        case WireFraming::ssdv:
            records.push_back(*format == StreamFormat::kiss
                                  ? ssdv_body(src.base, body)
                                  : encode_ssdv(src.base, body));
            break;
        }
    }

    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + opt.out);
    write_packet_stream(f, records, *format);
    if (!f) throw std::runtime_error("short write to " + opt.out);

    std::printf("image: %dx%d id=%d\n", image.width(), image.height(), opt.image_id);
    print_plan(plan);
    std::printf("wrote %zu records framing=%s%s format=%s -> %s\n", records.size(),
                opt.framing.c_str(), opt.base91_armor ? "+base91" : "",
                stream_format_name(*format).data(), opt.out.c_str());
    return 0;
}

// ----------------------------------------------------------------- channel

struct ChannelOptions {
    std::string input;
    std::string out;
    double ber = 0.0;
    double loss = 0.0;
    std::uint64_t seed = 1;
    std::string format = "auto";
};

int run_channel(const ChannelOptions& opt) {
    std::optional<StreamFormat> format;
    if (opt.format != "auto") {
        format = parse_stream_format(opt.format);
        if (!format) throw std::runtime_error("unknown stream format " + opt.format);
    }
    const Bytes raw = read_file(opt.input);
    const StreamContents in = read_packet_stream(ByteSpan(raw), format);
    std::printf("read %zu records format=%s rejected=%zu\n", in.records.size(),
                stream_format_name(in.format).data(), in.rejected);
    if (in.records.empty()) {
        std::fprintf(stderr, "no records in %s\n", opt.input.c_str());
        return 2;
    }

    const ChannelModel model{opt.ber, opt.loss, opt.seed};
    const std::vector<ChannelPacket> result = apply_channel(in.records, model);
    std::vector<Bytes> survivors;
    std::size_t dropped = 0;
    std::uint64_t flipped = 0;
    for (const ChannelPacket& pkt : result) {
        if (pkt.dropped) {
            ++dropped;
            continue;
        }
        flipped += pkt.flipped_bits;
        survivors.push_back(pkt.bytes);
    }

    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + opt.out);
    write_packet_stream(f, survivors, in.format);
    if (!f) throw std::runtime_error("short write to " + opt.out);

    std::printf("channel: ber=%g loss=%g seed=%llu\n", model.ber, model.loss,
                static_cast<unsigned long long>(model.seed));
    std::printf("dropped %zu packets, flipped %llu bits\n", dropped,
                static_cast<unsigned long long>(flipped));
    std::printf("wrote %zu records -> %s\n", survivors.size(), opt.out.c_str());
    return 0;
}

// ------------------------------------------------------------------ decode

struct DecodeOptions {
    std::string input;
    std::string out;
    double l1_weight = 4.0;
    int max_iters = 500;
    double tolerance = 1e-6;
    int progressive = 0;
    std::string framing = "auto";
    bool base91_armor = false;
    std::string format = "auto";
};

struct RejectCounts {
    std::map<std::string, std::size_t> frame;
    std::map<std::string, std::size_t> payload;
    std::size_t unrecognized = 0;
};

std::string_view frame_error_name(FrameError e) {
    switch (e) {
    case FrameError::none: return "none";
    case FrameError::too_short: return "too_short";
    case FrameError::bad_flag: return "bad_flag";
    case FrameError::bad_address: return "bad_address";
    case FrameError::bad_control: return "bad_control";
    case FrameError::bad_crc: return "bad_crc";
    case FrameError::bad_marker: return "bad_marker";
    case FrameError::bad_callsign: return "bad_callsign";
    default: return "bad_escape";
    }
}

std::string_view pdp_error_name(PdpError e) {
    switch (e) {
    case PdpError::none: return "none";
    case PdpError::truncated: return "truncated";
    case PdpError::bad_dimensions: return "bad_dimensions";
    case PdpError::bad_counts: return "bad_counts";
    case PdpError::bad_padding: return "bad_padding";
    default: return "oversize";
    }
}

bool printable_armor(ByteSpan body) {
    if (body.empty()) return false;
    for (std::uint8_t b : body)
        if (b < 33 || b > 123) return false;
    return true;
}

// Body bytes -> decoded payload, optionally through base91 text armor.
// A real binary payload essentially never keeps all its bytes inside the
// armor alphabet, so an all-printable body is read as text first.
std::optional<PdpPayload> body_to_payload(ByteSpan body, bool forced_armor,
                                          PdpError* error) {
    const auto armored = [&]() -> std::optional<PdpPayload> {
        const std::string_view text(reinterpret_cast<const char*>(body.data()),
                                    body.size());
        if (error) *error = PdpError::truncated;
        const auto len = base91::byte_len_for_chars(text.size());
        if (!len) return std::nullopt;
        const auto bytes = base91::decode(text, *len);
        if (!bytes) return std::nullopt;
        return decode_pdp(ByteSpan(*bytes), error);
    };
    if (forced_armor) return armored();
    if (printable_armor(body)) {
        if (auto payload = armored()) return payload;
    }
    return decode_pdp(body, error);
}

// One stream record -> PDP payload under the selected framing.
std::optional<PdpPayload> record_to_payload(const Bytes& rec, const std::string& framing,
                                            bool base91_armor, RejectCounts& rejects) {
    const auto framed_body = [&](auto&& decode_full,
                                 auto&& decode_body) -> std::optional<Bytes> {
        FrameError err = FrameError::none;
        if (!rec.empty() && rec.front() == hdlc_flag) {
            if (auto frame = decode_full(ByteSpan(rec), &err))
                return std::move(frame->payload);
        } else if (auto frame = decode_body(ByteSpan(rec), &err)) {
            return std::move(frame->payload);
        }
        ++rejects.frame[std::string(frame_error_name(err))];
        return std::nullopt;
    };

    std::optional<Bytes> body;
    if (framing == "raw") {
        body = rec;
    } else if (framing == "ax25") {
        body = framed_body([](ByteSpan r, FrameError* e) { return decode_ax25(r, e); },
                           [](ByteSpan r, FrameError* e) { return decode_ax25_body(r, e); });
    } else if (framing == "ssdv") {
        body = framed_body([](ByteSpan r, FrameError* e) { return decode_ssdv(r, e); },
                           [](ByteSpan r, FrameError* e) { return decode_ssdv_body(r, e); });
    } else {
        // auto: first interpretation that yields a valid payload wins
        if (rec.empty()) {
            ++rejects.unrecognized;
            return std::nullopt;
        }
        std::vector<Bytes> bodies;
        if (rec.front() == hdlc_flag) {
            if (auto f = decode_ax25(ByteSpan(rec))) bodies.push_back(f->payload);
            if (auto f = decode_ssdv(ByteSpan(rec))) bodies.push_back(f->payload);
        } else {
            if (auto f = decode_ssdv_body(ByteSpan(rec))) bodies.push_back(f->payload);
            if (auto f = decode_ax25_body(ByteSpan(rec))) bodies.push_back(f->payload);
        }
        bodies.push_back(rec);
        for (const Bytes& candidate : bodies) {
            PdpError err = PdpError::none;
            if (auto payload =
                    body_to_payload(ByteSpan(candidate), base91_armor, &err))
                return payload;
        }
        ++rejects.unrecognized;
        return std::nullopt;
    }

    if (!body) return std::nullopt;
    PdpError err = PdpError::none;
    auto payload = body_to_payload(ByteSpan(*body), base91_armor, &err);
    if (!payload) ++rejects.payload[std::string(pdp_error_name(err))];
    return payload;
}

std::string snapshot_path(const std::string& out, std::uint8_t image_id,
                          std::size_t packets) {
    const std::filesystem::path p(out);
    std::filesystem::path named = p.parent_path();
    named /= p.stem();
    std::string name = named.string() + "-id" + std::to_string(image_id);
    if (packets > 0) name += "-p" + std::to_string(packets);
    return name + p.extension().string();
}

int run_decode(const DecodeOptions& opt) {
    std::optional<StreamFormat> format;
    if (opt.format != "auto") {
        format = parse_stream_format(opt.format);
        if (!format) throw std::runtime_error("unknown stream format " + opt.format);
    }
    if (opt.framing != "auto" && !parse_framing(opt.framing))
        throw std::runtime_error("unknown framing " + opt.framing);

    const Bytes raw = read_file(opt.input);
    const StreamContents in = read_packet_stream(ByteSpan(raw), format);
    std::printf("read %zu records format=%s rejected=%zu\n", in.records.size(),
                stream_format_name(in.format).data(), in.rejected);

    SolverConfig config;
    config.l1_weight = opt.l1_weight;
    config.max_iters = opt.max_iters;
    config.tolerance = opt.tolerance;

    RejectCounts rejects;
    std::map<std::uint8_t, PacketAccumulator> images;
    std::map<std::uint8_t, std::size_t> accepted_per_image;
    std::size_t accepted = 0, duplicates = 0, mismatched = 0;
    for (const Bytes& rec : in.records) {
        const auto payload =
            record_to_payload(rec, opt.framing, opt.base91_armor, rejects);
        if (!payload) continue;
        PacketAccumulator& acc = images[payload->header.image_id];
        switch (acc.add(*payload)) {
        case AddOutcome::accepted: {
            ++accepted;
            const std::size_t n = ++accepted_per_image[payload->header.image_id];
            if (opt.progressive > 0 && n % static_cast<std::size_t>(opt.progressive) == 0) {
                const std::string path =
                    snapshot_path(opt.out, payload->header.image_id, n);
                save_ppm(path, reconstruct(acc.received(), config));
                std::printf("progressive: %zu packets -> %s\n", n, path.c_str());
            }
            break;
        }
        case AddOutcome::replaced:
            ++accepted;
            ++duplicates;
            break;
        default:
            ++mismatched;
            break;
        }
    }

    for (const auto& [reason, count] : rejects.frame)
        std::printf("rejected frames: %s=%zu\n", reason.c_str(), count);
    for (const auto& [reason, count] : rejects.payload)
        std::printf("rejected payloads: %s=%zu\n", reason.c_str(), count);
    if (rejects.unrecognized)
        std::printf("rejected records: unrecognized=%zu\n", rejects.unrecognized);
    if (mismatched) std::printf("rejected payloads: geometry_mismatch=%zu\n", mismatched);
    std::printf("accepted %zu packets (%zu duplicates) across %zu image(s)\n", accepted,
                duplicates, images.size());
    if (accepted == 0) {
        std::fprintf(stderr, "no valid payloads in %s\n", opt.input.c_str());
        return 2;
    }

    for (auto& [id, acc] : images) {
        const TransmissionPlan& plan = acc.plan();
        const std::string path =
            images.size() == 1 ? opt.out : snapshot_path(opt.out, id, 0);
        const Image image = reconstruct(acc.received(), config);
        save_ppm(path, image);
        std::printf("image %u: rows=%u cols=%u depth=%d packets=%zu coverage=%.1f%% -> %s\n",
                    id, plan.rows, plan.cols, plan.depth.bits(), acc.packet_count(),
                    100.0 * static_cast<double>(acc.sample_count()) / plan.total_pixels(),
                    path.c_str());
    }
    return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOptions {
    std::string framing = "both";
    std::vector<double> bers;
    double loss = -1.0;
    std::string out;
};

int run_analyze(const AnalyzeOptions& opt) {
    std::vector<FramingKind> kinds;
    if (opt.framing == "both") kinds = {FramingKind::ax25, FramingKind::ssdv};
    else if (opt.framing == "ax25") kinds = {FramingKind::ax25};
    else if (opt.framing == "ssdv") kinds = {FramingKind::ssdv};
    else throw std::runtime_error("unknown framing " + opt.framing);

    std::vector<double> bers = opt.bers;
    if (opt.loss >= 0.0) {
        const double ber = ber_from_loss(opt.loss);
        std::printf("loss %g%% -> ber %.9g\n", opt.loss, ber);
        bers.push_back(ber);
    }
    if (bers.empty()) bers = {1e-5, 1e-4, 1e-3, 1e-2};

    std::printf("%-8s %-12s %-12s %s\n", "framing", "ber", "optimal_pdp", "efficiency");
    for (double ber : bers) {
        for (FramingKind kind : kinds) {
            const OptimalPdp best = optimal_pdp(ber, kind);
            std::printf("%-8s %-12.6g %-12d %.6f\n", framing_name(kind).data(), ber,
                        best.pdp_len, best.efficiency);
        }
        if (kinds.size() == 2) {
            const double ratio = optimal_pdp(ber, FramingKind::ssdv).efficiency /
                                 optimal_pdp(ber, FramingKind::ax25).efficiency;
            std::printf("ssdv/ax25 best-efficiency ratio at ber=%g: %.4f\n", ber, ratio);
        }
    }

    if (!opt.out.empty()) {
        std::ofstream f(opt.out);
        if (!f) throw std::runtime_error("cannot open " + opt.out);
        write_efficiency_csv(f, bers, kinds);
        if (!f) throw std::runtime_error("short write to " + opt.out);
        std::printf("wrote %zu rows -> %s\n", 249 * bers.size() * kinds.size(),
                    opt.out.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"image transfer over lossy packet links"};
    app.require_subcommand(1);

    SampleOptions sample;
    CLI::App* cmd_sample = app.add_subcommand("sample", "write a synthetic test scene");
    cmd_sample->add_option("-o,--out", sample.out, "output PPM path")->required();
    cmd_sample->add_option("--size", sample.size, "square scene size, multiple of 16")
        ->default_val(64);
    cmd_sample->add_flag("--grey", sample.grey, "greyscale scene");

    EncodeOptions encode;
    CLI::App* cmd_encode = app.add_subcommand("encode", "image -> packet stream");
    cmd_encode->add_option("-i,--input", encode.input, "input PPM image")->required();
    cmd_encode->add_option("-o,--out", encode.out, "output packet stream")->required();
    CLI::Option* pdp_size_opt =
        cmd_encode->add_option("--pdp-size", encode.pdp_size, "payload bytes, 8..256")
            ->default_val(256);
    cmd_encode->add_option("--bits-per-channel", encode.bits, "quantizer depth, 1..8")
        ->default_val(4);
    cmd_encode->add_option("--n-color", encode.n_color, "color pixels per packet");
    cmd_encode->add_option("--n-grey", encode.n_grey, "grey pixels per packet");
    cmd_encode->add_option("--image-id", encode.image_id, "image id, 0..255")
        ->default_val(0)
        ->check(CLI::Range(0, 255));
    cmd_encode->add_option("--packets", encode.packets,
                           "packet count, 0 = one full pass")
        ->default_val(0);
    cmd_encode->add_option("--framing", encode.framing, "raw, ax25 or ssdv")
        ->default_val("raw");
    cmd_encode->add_flag("--base91", encode.base91_armor, "text-armor the payloads");
    cmd_encode->add_option("--callsign", encode.callsign, "source callsign[-ssid]")
        ->default_val("N0CALL");
    cmd_encode->add_option("--dest", encode.dest, "ax25 destination callsign[-ssid]")
        ->default_val("PCSI");
    cmd_encode->add_option("--stream-format", encode.format, "bin, hex or kiss")
        ->default_val("bin");

    ChannelOptions channel;
    CLI::App* cmd_channel = app.add_subcommand("channel", "simulate a lossy link");
    cmd_channel->add_option("-i,--input", channel.input, "input packet stream")->required();
    cmd_channel->add_option("-o,--out", channel.out, "output packet stream")->required();
    cmd_channel->add_option("--ber", channel.ber, "bit flip probability, [0,1)")
        ->default_val(0.0);
    cmd_channel->add_option("--loss", channel.loss, "packet drop probability, [0,1]")
        ->default_val(0.0);
    cmd_channel->add_option("--seed", channel.seed, "channel noise seed")->default_val(1);
    cmd_channel->add_option("--stream-format", channel.format, "auto, bin, hex or kiss")
        ->default_val("auto");

    DecodeOptions decode;
    CLI::App* cmd_decode = app.add_subcommand("decode", "packet stream -> image");
    cmd_decode->add_option("-i,--input", decode.input, "input packet stream")->required();
    cmd_decode->add_option("-o,--out", decode.out, "output PPM image")->required();
    cmd_decode->add_option("--c", decode.l1_weight, "sparsity weight")->default_val(4.0);
    cmd_decode->add_option("--max-iters", decode.max_iters, "solver iteration cap")
        ->default_val(500);
    cmd_decode->add_option("--tolerance", decode.tolerance,
                           "relative objective decrease to stop at")
        ->default_val(1e-6);
    cmd_decode->add_option("--progressive", decode.progressive,
                           "write an intermediate image every K packets")
        ->default_val(0);
    cmd_decode->add_option("--framing", decode.framing, "auto, raw, ax25 or ssdv")
        ->default_val("auto");
    cmd_decode->add_flag("--base91", decode.base91_armor,
                         "payloads are base91 text armored");
    cmd_decode->add_option("--stream-format", decode.format, "auto, bin, hex or kiss")
        ->default_val("auto");

    AnalyzeOptions analyze;
    CLI::App* cmd_analyze = app.add_subcommand("analyze", "link-budget tables");
    cmd_analyze->add_option("--framing", analyze.framing, "ax25, ssdv or both")
        ->default_val("both");
    cmd_analyze->add_option("--ber", analyze.bers, "bit error rates to tabulate");
    cmd_analyze->add_option("--loss", analyze.loss,
                            "packet loss percent to convert to a ber first");
    cmd_analyze->add_option("-o,--out", analyze.out, "efficiency curve CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        encode.explicit_pdp_size = pdp_size_opt->count() > 0;
        if (cmd_sample->parsed()) return run_sample(sample);
        if (cmd_encode->parsed()) return run_encode(encode);
        if (cmd_channel->parsed()) return run_channel(channel);
        if (cmd_decode->parsed()) return run_decode(decode);
        return run_analyze(analyze);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
