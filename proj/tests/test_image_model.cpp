#include <catch2/catch_amalgamated.hpp>

#include <pcsi/image_model.hpp>

using namespace pcsi;

TEST_CASE("primary colors transform to the reference YCbCr triples") {
    struct Case {
        RgbPixel rgb;
        YcbcrPixel ycbcr;
    };
    const Case cases[] = {
        {{255, 0, 0}, {76, 85, 255}},
        {{0, 255, 0}, {150, 44, 21}},
        {{0, 0, 255}, {29, 255, 107}},
        {{255, 255, 255}, {255, 128, 128}},
        {{0, 0, 0}, {0, 128, 128}},
        {{128, 128, 128}, {128, 128, 128}},
        {{64, 128, 192}, {116, 171, 91}},
        {{200, 100, 50}, {124, 86, 182}},
    };
    for (const Case& c : cases) {
        CAPTURE(int(c.rgb.r), int(c.rgb.g), int(c.rgb.b));
        CHECK(rgb_to_ycbcr(c.rgb) == c.ycbcr);
    }
}

TEST_CASE("inverse transform hits the reference RGB triples") {
    CHECK(ycbcr_to_rgb({76, 85, 255}) == RgbPixel{254, 0, 0});
    CHECK(ycbcr_to_rgb({150, 44, 21}) == RgbPixel{0, 255, 1});
    CHECK(ycbcr_to_rgb({29, 255, 107}) == RgbPixel{0, 0, 254});
    CHECK(ycbcr_to_rgb({116, 171, 91}) == RgbPixel{64, 128, 192});
    CHECK(ycbcr_to_rgb({124, 86, 182}) == RgbPixel{200, 100, 50});
}

TEST_CASE("neutral greys are fixed points of both transforms") {
    for (int g : {0, 1, 17, 55, 127, 128, 200, 254, 255}) {
        const std::uint8_t u = static_cast<std::uint8_t>(g);
        CHECK(rgb_to_ycbcr(u, u, u) == YcbcrPixel{u, 128, 128});
        CHECK(ycbcr_to_rgb({u, 128, 128}) == RgbPixel{u, u, u});
    }
}

TEST_CASE("color round trip is off by at most one per channel") {
    int worst = 0;
    for (int r = 0; r < 256; r += 3) {
        for (int g = 0; g < 256; g += 3) {
            for (int b = 0; b < 256; b += 3) {
                const RgbPixel in{static_cast<std::uint8_t>(r),
                                  static_cast<std::uint8_t>(g),
                                  static_cast<std::uint8_t>(b)};
                const RgbPixel out = ycbcr_to_rgb(rgb_to_ycbcr(in));
                worst = std::max({worst, std::abs(out.r - in.r),
                                  std::abs(out.g - in.g), std::abs(out.b - in.b)});
            }
        }
    }
    CHECK(worst <= 1);
}

TEST_CASE("extreme chroma clamps instead of wrapping") {
    CHECK(ycbcr_to_rgb({255, 128, 255}) == RgbPixel{255, 164, 255});
    CHECK(ycbcr_to_rgb({0, 128, 0}) == RgbPixel{0, 91, 0});
    CHECK(ycbcr_to_rgb({128, 255, 128}) == RgbPixel{128, 84, 255});
    CHECK(ycbcr_to_rgb({128, 0, 128}) == RgbPixel{128, 172, 0});
}

TEST_CASE("color depth accepts 1..8 bits and mirrors the wire code") {
    for (int bits = 1; bits <= 8; ++bits) {
        const ColorDepth d(bits);
        CHECK(d.bits() == bits);
        CHECK(d.code() == bits - 1);
        CHECK(d.max_level() == (1 << bits) - 1);
        CHECK(ColorDepth::from_code(d.code()) == d);
    }
    CHECK_THROWS_AS(ColorDepth(0), std::invalid_argument);
    CHECK_THROWS_AS(ColorDepth(9), std::invalid_argument);
    CHECK(ColorDepth::from_code(0xFB).bits() == 4);  // high bits ignored
}

TEST_CASE("quantization matches the reference values") {
    CHECK(quantize_channel(200, ColorDepth(4)) == 12);
    CHECK(dequantize_channel(12, ColorDepth(4)) == 204);
    CHECK(quantize_channel(255, ColorDepth(1)) == 1);
    CHECK(quantize_channel(127, ColorDepth(1)) == 0);
    CHECK(quantize_channel(128, ColorDepth(1)) == 1);
    CHECK(quantize_channel(100, ColorDepth(8)) == 100);
    CHECK(dequantize_channel(5, ColorDepth(4)) == 85);
    CHECK(quantize_channel(77, ColorDepth(3)) == 2);
    CHECK(dequantize_channel(2, ColorDepth(3)) == 73);
}

TEST_CASE("quantization keeps endpoints and bounds the round trip error") {
    for (int bits = 1; bits <= 8; ++bits) {
        const ColorDepth d(bits);
        CHECK(quantize_channel(0, d) == 0);
        CHECK(quantize_channel(255, d) == d.max_level());
        CHECK(dequantize_channel(0, d) == 0);
        CHECK(dequantize_channel(static_cast<std::uint8_t>(d.max_level()), d) == 255);
        const int bound = (255 + 2 * d.max_level() - 1) / (2 * d.max_level());
        for (int v = 0; v < 256; ++v) {
            const std::uint8_t q = quantize_channel(static_cast<std::uint8_t>(v), d);
            CHECK(q <= d.max_level());
            const int back = dequantize_channel(q, d);
            CHECK(std::abs(back - v) <= bound);
        }
    }
    CHECK_THROWS_AS(dequantize_channel(16, ColorDepth(4)), std::invalid_argument);
}

TEST_CASE("8-bit quantization is the identity") {
    for (int v = 0; v < 256; ++v) {
        CHECK(quantize_channel(static_cast<std::uint8_t>(v), ColorDepth(8)) == v);
        CHECK(dequantize_channel(static_cast<std::uint8_t>(v), ColorDepth(8)) == v);
    }
}

TEST_CASE("image dimensions must be multiples of 16 within 16..4080") {
    CHECK_NOTHROW(Image(16, 16));
    CHECK_NOTHROW(Image(4080, 16));
    CHECK_NOTHROW(Image(320, 240));
    CHECK_THROWS_AS(Image(100, 64), std::invalid_argument);
    CHECK_THROWS_AS(Image(64, 100), std::invalid_argument);
    CHECK_THROWS_AS(Image(0, 16), std::invalid_argument);
    CHECK_THROWS_AS(Image(8, 16), std::invalid_argument);
    CHECK_THROWS_AS(Image(4096, 16), std::invalid_argument);
}

TEST_CASE("image pixel accessors address row-major storage") {
    Image img(32, 16);
    CHECK(img.pixel_count() == 512);
    img.set(3, 7, {1, 2, 3});
    CHECK(img.get(3, 7) == RgbPixel{1, 2, 3});
    CHECK(img.data()[(3 * 32 + 7) * 3 + 1] == 2);
    CHECK_THROWS_AS(img.get(16, 0), std::out_of_range);
    CHECK_THROWS_AS(img.get(0, 32), std::out_of_range);
}
