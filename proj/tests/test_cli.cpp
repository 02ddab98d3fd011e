#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <sys/wait.h>

#include <pcsi/pcsi.hpp>

using namespace pcsi;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int status = -1;
    std::string output;   // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
    const char* path = std::getenv("PCSI_CLI_PATH");
    REQUIRE(path != nullptr);
    const std::string cmd = std::string(path) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    char buf[512];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
        result.output.append(buf, n);
    const int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    result.status = WEXITSTATUS(status);
    return result;
}

// Fresh scratch directory per test run.
fs::path scratch_dir() {
    static const fs::path dir = [] {
        std::random_device rd;
        fs::path p = fs::temp_directory_path() /
                     ("pcsi_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string in_scratch(const std::string& name) {
    return (scratch_dir() / name).string();
}

Bytes slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string s = buf.str();
    return Bytes(s.begin(), s.end());
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// Inputs shared across test cases, generated on first use.
std::string scene_ppm() {
    const std::string path = in_scratch("scene32.ppm");
    if (!fs::exists(path))
        REQUIRE(run_cli("sample -o " + path + " --size 32").status == 0);
    return path;
}

std::string pass_stream() {
    const std::string path = in_scratch("pass.bin");
    if (!fs::exists(path))
        REQUIRE(run_cli("encode -i " + scene_ppm() + " -o " + path +
                        " --pdp-size 82").status == 0);
    return path;
}

} // namespace

TEST_CASE("sample writes a loadable scene") {
    const std::string out = in_scratch("fresh32.ppm");
    const CmdResult r = run_cli("sample -o " + out + " --size 32");
    REQUIRE(r.status == 0);
    const Image img = load_ppm(out);
    CHECK(img.width() == 32);
    CHECK(img.height() == 32);

    const CmdResult big = run_cli("sample -o " + in_scratch("scene64.ppm") + " --size 64");
    REQUIRE(big.status == 0);
}

TEST_CASE("encode prints the plan and writes one record per packet") {
    const std::string scene = scene_ppm();
    const std::string out = in_scratch("pass.bin");
    const CmdResult r =
        run_cli("encode -i " + scene + " -o " + out + " --pdp-size 82");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "plan: rows=32 cols=32 depth=4 n_color=25 n_grey=75 pdp_len=82"));
    CHECK(contains(r.output, "pass: 11 packets x 100 pixels covers 1024 pixels"));
    CHECK(contains(r.output, "wrote 11 records"));

    const StreamContents stream = read_packet_stream(ByteSpan(slurp(out)));
    CHECK(stream.format == StreamFormat::binary);
    REQUIRE(stream.records.size() == 11);
    for (const Bytes& rec : stream.records) {
        REQUIRE(rec.size() == 82);
        CHECK(decode_pdp(rec).has_value());
    }

    SECTION("--packets 1 writes exactly one record") {
        const std::string one = in_scratch("one.bin");
        const CmdResult r1 = run_cli("encode -i " + scene + " -o " + one +
                                     " --pdp-size 82 --packets 1");
        REQUIRE(r1.status == 0);
        CHECK(read_packet_stream(ByteSpan(slurp(one))).records.size() == 1);
    }

    SECTION("explicit pixel counts override the fill heuristic") {
        const CmdResult r2 = run_cli("encode -i " + scene + " -o " +
                                     in_scratch("counts.bin") +
                                     " --n-color 100 --n-grey 0 --packets 1");
        REQUIRE(r2.status == 0);
        CHECK(contains(r2.output, "n_color=100 n_grey=0 pdp_len=157"));
    }
}

TEST_CASE("encode to decode with no channel beats the quantization floor") {
    const std::string scene = scene_ppm();
    const std::string stream = in_scratch("clean.bin");
    const std::string out = in_scratch("clean.ppm");
    // all-color plan, so one pass samples every channel of every pixel
    REQUIRE(run_cli("encode -i " + scene + " -o " + stream +
                    " --n-color 100 --n-grey 0").status == 0);
    const CmdResult r = run_cli("decode -i " + stream + " -o " + out +
                                " --c 0.5 --max-iters 2000 --tolerance 1e-10");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "coverage=100.0%"));

    const Image original = load_ppm(scene);
    const Image decoded = load_ppm(out);
    const ColorDepth depth(4);
    Image quantized(original.width(), original.height());
    for (int row = 0; row < original.height(); ++row) {
        for (int col = 0; col < original.width(); ++col) {
            const YcbcrPixel q = rgb_to_ycbcr(original.get(row, col));
            quantized.set(row, col,
                          ycbcr_to_rgb({dequantize_channel(quantize_channel(q.y, depth), depth),
                                        dequantize_channel(quantize_channel(q.cb, depth), depth),
                                        dequantize_channel(quantize_channel(q.cr, depth), depth)}));
        }
    }
    const double floor_db = psnr(quantized, original);
    const double decoded_db = psnr(decoded, original);
    INFO("decoded " << decoded_db << " dB, quantization floor " << floor_db << " dB");
    CHECK(decoded_db >= floor_db);
}

TEST_CASE("noiseless channel copies the stream byte for byte") {
    const std::string in = pass_stream();
    const std::string out = in_scratch("copied.bin");
    const CmdResult r = run_cli("channel -i " + in + " -o " + out +
                                " --ber 0 --loss 0");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "dropped 0 packets, flipped 0 bits"));
    CHECK(slurp(out) == slurp(in));
}

TEST_CASE("channel drops are seeded and reproducible") {
    const std::string in = pass_stream();
    const std::string a = in_scratch("drop_a.bin");
    const std::string b = in_scratch("drop_b.bin");
    REQUIRE(run_cli("channel -i " + in + " -o " + a + " --loss 0.5 --seed 5").status == 0);
    REQUIRE(run_cli("channel -i " + in + " -o " + b + " --loss 0.5 --seed 5").status == 0);
    CHECK(slurp(a) == slurp(b));

    const StreamContents kept = read_packet_stream(ByteSpan(slurp(a)));
    CHECK(kept.records.size() < 11);
    for (const Bytes& rec : kept.records) CHECK(decode_pdp(rec).has_value());
}

TEST_CASE("decode survives a lossy channel end to end") {
    const std::string scene = scene_ppm();
    const std::string stream = in_scratch("framed.kiss");
    const std::string lossy = in_scratch("lossy.kiss");
    const std::string out = in_scratch("lossy.ppm");
    REQUIRE(run_cli("encode -i " + scene + " -o " + stream +
                    " --pdp-size 82 --framing ax25 --callsign KD2YFV-7"
                    " --stream-format kiss").status == 0);
    const CmdResult ch = run_cli("channel -i " + stream + " -o " + lossy +
                                 " --loss 0.4 --seed 11");
    REQUIRE(ch.status == 0);
    CHECK(contains(ch.output, "format=kiss"));

    const CmdResult r = run_cli("decode -i " + lossy + " -o " + out + " --max-iters 300");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "across 1 image(s)"));
    const Image img = load_ppm(out);
    CHECK(img.width() == 32);
    CHECK(img.height() == 32);

    SECTION("decode output is deterministic") {
        const std::string again = in_scratch("lossy2.ppm");
        REQUIRE(run_cli("decode -i " + lossy + " -o " + again +
                        " --max-iters 300").status == 0);
        CHECK(slurp(again) == slurp(out));
    }
}

TEST_CASE("base91 armored payloads ride a hex stream") {
    const std::string scene = scene_ppm();
    const std::string stream = in_scratch("armored.hex");
    const std::string out = in_scratch("armored.ppm");
    REQUIRE(run_cli("encode -i " + scene + " -o " + stream +
                    " --pdp-size 82 --framing ssdv --base91 --callsign W1AW"
                    " --stream-format hex").status == 0);
    const CmdResult r = run_cli("decode -i " + stream + " -o " + out + " --max-iters 200");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "format=hex"));
    CHECK(contains(r.output, "accepted 11 packets"));
    CHECK(contains(r.output, "coverage=100.0%"));
}

TEST_CASE("corrupt records are counted and reported") {
    const std::string scene = scene_ppm();
    const std::string stream = in_scratch("tocorrupt.bin");
    REQUIRE(run_cli("encode -i " + scene + " -o " + stream +
                    " --pdp-size 82 --framing ax25 --packets 3").status == 0);
    Bytes data = slurp(stream);
    // flip one payload byte inside each record; length prefixes stay intact
    const std::size_t record_len = 82 + ax25_fixed_overhead;
    for (std::size_t i = 0; i < 3; ++i) data[(2 + record_len) * i + 2 + 40] ^= 0x55;
    const std::string corrupted = in_scratch("corrupted.bin");
    std::ofstream(corrupted, std::ios::binary)
        .write(reinterpret_cast<const char*>(data.data()),
               static_cast<std::streamsize>(data.size()));

    const CmdResult r = run_cli("decode -i " + corrupted + " -o " +
                                in_scratch("never.ppm") + " --framing ax25");
    CHECK(r.status == 2);
    CHECK(contains(r.output, "bad_crc=3"));
    CHECK(contains(r.output, "accepted 0 packets"));
    CHECK(contains(r.output, "no valid payloads"));
    CHECK_FALSE(fs::exists(in_scratch("never.ppm")));
}

TEST_CASE("streams with mixed image ids come out as separate images") {
    const std::string scene = scene_ppm();
    const std::string first = in_scratch("id1.bin");
    const std::string second = in_scratch("id2.bin");
    REQUIRE(run_cli("encode -i " + scene + " -o " + first +
                    " --pdp-size 82 --image-id 1").status == 0);
    REQUIRE(run_cli("encode -i " + scene + " -o " + second +
                    " --pdp-size 82 --image-id 2 --packets 3").status == 0);

    const std::string mixed = in_scratch("mixed.bin");
    {
        const Bytes a = slurp(first), b = slurp(second);
        std::ofstream f(mixed, std::ios::binary);
        f.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size()));
        f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    }
    const CmdResult r = run_cli("decode -i " + mixed + " -o " + in_scratch("mix.ppm") +
                                " --max-iters 150");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "across 2 image(s)"));
    CHECK(load_ppm(in_scratch("mix-id1.ppm")).width() == 32);
    CHECK(load_ppm(in_scratch("mix-id2.ppm")).width() == 32);
}

TEST_CASE("progressive decode drops intermediate images") {
    const std::string stream = pass_stream();
    const CmdResult r = run_cli("decode -i " + stream + " -o " + in_scratch("prog.ppm") +
                                " --max-iters 100 --progressive 4");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "progressive: 4 packets"));
    CHECK(contains(r.output, "progressive: 8 packets"));
    CHECK(load_ppm(in_scratch("prog-id0-p4.ppm")).width() == 32);
    CHECK(load_ppm(in_scratch("prog-id0-p8.ppm")).width() == 32);
    CHECK(load_ppm(in_scratch("prog.ppm")).width() == 32);
}

TEST_CASE("analyze reports guideline optima and curves") {
    const CmdResult r = run_cli("analyze --ber 1e-5");
    REQUIRE(r.status == 0);
    CHECK(contains(r.output, "ax25     1e-05        256"));
    CHECK(contains(r.output, "ssdv     1e-05        256"));

    SECTION("loss converts to a ber first") {
        const CmdResult l = run_cli("analyze --loss 50 --framing ssdv");
        REQUIRE(l.status == 0);
        CHECK(contains(l.output, "loss 50% -> ber 0.000316"));
    }
    SECTION("csv has one row per framing, ber and size") {
        const std::string csv = in_scratch("curves.csv");
        const CmdResult c = run_cli("analyze --ber 1e-4 --ber 1e-3 -o " + csv);
        REQUIRE(c.status == 0);
        std::ifstream f(csv);
        std::string line;
        std::size_t lines = 0;
        while (std::getline(f, line))
            if (!line.empty()) ++lines;
        CHECK(lines == 1 + 249 * 2 * 2);
    }
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("bogus").status == 1);
    CHECK(run_cli("encode -i nope.ppm -o x.bin").status == 1);
    CHECK(run_cli("encode -i " + scene_ppm() + " -o " +
                  in_scratch("x.bin") + " --pdp-size 5").status == 1);
    CHECK(run_cli("analyze --framing carrier-pigeon").status == 1);
    CHECK(run_cli("decode -i " + in_scratch("missing.bin") + " -o " +
                  in_scratch("x.ppm")).status == 1);
}

TEST_CASE("empty input stream is no valid data") {
    const std::string empty = in_scratch("empty.bin");
    std::ofstream(empty, std::ios::binary).flush();
    CHECK(run_cli("channel -i " + empty + " -o " + in_scratch("never2.bin")).status == 2);
    CHECK(run_cli("decode -i " + empty + " -o " + in_scratch("never3.ppm")).status == 2);
}
