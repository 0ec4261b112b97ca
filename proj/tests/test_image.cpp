#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "weedseg/image.hpp"
#include "weedseg/image_io.hpp"

using namespace weedseg;

namespace {
std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("compute_ndvi basic values") {
    BandImage nir(1, 3, Band::nir(), {0.8f, 0.4f, 0.0f});
    BandImage red(1, 3, Band::red(), {0.2f, 0.4f, 0.0f});
    BandImage out = compute_ndvi(nir, red);
    CHECK(out.band().kind == Band::NDVI);
    CHECK(out.data()[0] == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(out.data()[1] == doctest::Approx(0.0));
    CHECK(out.data()[2] == doctest::Approx(0.0));  // zero denominator -> 0
}

TEST_CASE("compute_ndvi rejects mismatches") {
    BandImage nir(2, 2, Band::nir());
    BandImage red(2, 3, Band::red());
    CHECK_THROWS(compute_ndvi(nir, red));
    BandImage not_red(2, 2, Band::nir());
    CHECK_THROWS(compute_ndvi(nir, not_red));
}

TEST_CASE("compute_ndvi bounded in [-1,1] for nonnegative inputs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<float> d(0.0f, 1.0f);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<float> a(64), b(64);
        for (auto& v : a) v = d(rng);
        for (auto& v : b) v = d(rng);
        BandImage out = compute_ndvi(BandImage(8, 8, Band::nir(), a), BandImage(8, 8, Band::red(), b));
        for (float v : out.data()) {
            CHECK(v >= -1.0f);
            CHECK(v <= 1.0f);
        }
    }
}

TEST_CASE("render_mask uses the paper's color convention") {
    LabelMask m(3, 1, {0, 1, 2});
    RgbImage img = render_mask(m);
    CHECK(img.px(0, 0)[0] == 0);   // bg -> blue
    CHECK(img.px(0, 0)[2] == 255);
    CHECK(img.px(1, 0)[0] == 255); // crop -> red
    CHECK(img.px(1, 0)[2] == 0);
    CHECK(img.px(2, 0)[1] == 255); // weed -> green
}

TEST_CASE("render_probability channel mapping and quantization") {
    ProbabilityMap pm(3, 1, 3);
    // pure background
    pm.prob(0, 0, 0) = 1.0f;
    // uniform
    pm.prob(1, 0, 0) = pm.prob(1, 0, 1) = pm.prob(1, 0, 2) = 1.0f / 3.0f;
    // crop/weed split
    pm.prob(2, 0, 1) = 0.5f;
    pm.prob(2, 0, 2) = 0.5f;
    RgbImage img = render_probability(pm);
    CHECK(img.px(0, 0)[0] == 0);
    CHECK(img.px(0, 0)[1] == 0);
    CHECK(img.px(0, 0)[2] == 255);
    CHECK(img.px(1, 0)[0] == 85);
    CHECK(img.px(1, 0)[1] == 85);
    CHECK(img.px(1, 0)[2] == 85);
    CHECK(img.px(2, 0)[0] == 128);  // round half up
    CHECK(img.px(2, 0)[1] == 128);
    CHECK(img.px(2, 0)[2] == 0);
}

TEST_CASE("render_mask matches render_probability on one-hot maps") {
    std::mt19937 rng(3);
    ProbabilityMap pm(8, 8, 3);
    for (uint32_t y = 0; y < 8; ++y)
        for (uint32_t x = 0; x < 8; ++x) pm.prob(x, y, int(rng() % 3)) = 1.0f;
    RgbImage a = render_mask(argmax_labels(pm));
    RgbImage b = render_probability(pm);
    CHECK(a.data == b.data);
}

TEST_CASE("argmax_labels tie goes to lowest class id") {
    ProbabilityMap pm(2, 1, 3);
    pm.prob(0, 0, 0) = 0.2f; pm.prob(0, 0, 1) = 0.5f; pm.prob(0, 0, 2) = 0.3f;
    pm.prob(1, 0, 0) = 0.5f; pm.prob(1, 0, 1) = 0.5f; pm.prob(1, 0, 2) = 0.0f;
    LabelMask m = argmax_labels(pm);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(1, 0) == 0);
}

TEST_CASE("PGM read normalizes by maxval") {
    const std::string path = tmp_path("ws_test_2x2.pgm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n2 2\n255\n";
        const uint8_t bytes[4] = {0, 255, 128, 64};
        out.write(reinterpret_cast<const char*>(bytes), 4);
    }
    BandImage img = read_band_image(path, Band::nir());
    CHECK(img.width() == 2);
    CHECK(img.data()[0] == doctest::Approx(0.0));
    CHECK(img.data()[1] == doctest::Approx(1.0));
    CHECK(img.data()[2] == doctest::Approx(128.0 / 255.0));
    CHECK(img.data()[3] == doctest::Approx(64.0 / 255.0));
    std::remove(path.c_str());
}

TEST_CASE("16-bit PGM full-scale maps to 1.0") {
    const std::string path = tmp_path("ws_test_16.pgm");
    GrayImage g;
    g.width = 2; g.height = 1; g.bit_depth = 16;
    g.samples = {65535, 65535};
    write_pgm(g, path);
    BandImage img = read_band_image(path, Band::nir());
    CHECK(img.data()[0] == doctest::Approx(1.0));
    CHECK(img.data()[1] == doctest::Approx(1.0));
    std::remove(path.c_str());
}

TEST_CASE("PGM error paths") {
    const std::string path = tmp_path("ws_test_bad.pgm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n0 2\n255\n";
    }
    CHECK_THROWS(read_pgm(path));  // zero width
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n2 2\n255\nab";  // 2 of 4 payload bytes
    }
    CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("truncated"), std::runtime_error);
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n2 2\n1023\nabcd";
    }
    CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("bit depth"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("NDVI write remaps zero to mid-scale") {
    const std::string path = tmp_path("ws_test_ndvi.pgm");
    BandImage ndvi(1, 1, Band::ndvi(), {0.0f});
    write_band_image(ndvi, path, 16);
    GrayImage g = read_pgm(path);
    CHECK(g.samples[0] == 32768);  // round(65535/2)
    std::remove(path.c_str());
}

TEST_CASE("round-trip stays within the quantization bound") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<float> d(0.0f, 1.0f);
    std::vector<float> data(32 * 16);
    for (auto& v : data) v = d(rng);
    BandImage img(32, 16, Band::nir(), data);

    for (const char* ext : {".pgm", ".png"}) {
        const std::string path = tmp_path(std::string("ws_test_rt") + ext);
        const int depth = ext[1] == 'p' && ext[2] == 'g' ? 16 : 8;
        write_band_image(img, path, depth);
        BandImage back = read_band_image(path, Band::nir());
        REQUIRE(back.width() == img.width());
        REQUIRE(back.height() == img.height());
        const float bound = depth == 16 ? 1.0f / 131070.0f : 1.0f / 510.0f;
        for (size_t i = 0; i < data.size(); ++i)
            CHECK(std::abs(back.data()[i] - img.data()[i]) <= bound);
        std::remove(path.c_str());
    }
}

TEST_CASE("mask PNG round-trip is exact") {
    std::mt19937 rng(5);
    std::vector<uint8_t> labels(24 * 10);
    for (auto& v : labels) v = uint8_t(rng() % 3);
    LabelMask mask(24, 10, labels);
    const std::string path = tmp_path("ws_test_mask.png");
    write_mask_png(mask, path);
    CHECK(read_mask_png(path) == mask);
    std::remove(path.c_str());
}

TEST_CASE("frame invariants") {
    BandImage a(4, 4, Band::nir());
    BandImage b(4, 4, Band::red());
    MultispectralFrame f("f", {a, b});
    CHECK_THROWS(f.add(BandImage(4, 4, Band::nir())));     // duplicate band
    CHECK_THROWS(f.add(BandImage(5, 4, Band::ndvi())));    // dimension clash
    CHECK_THROWS(MultispectralFrame("empty", {}));
}

TEST_CASE("ProbabilityMap validation") {
    ProbabilityMap pm(1, 1, 3);
    pm.prob(0, 0, 0) = 0.5f;
    CHECK_THROWS(pm.validate());
    pm.prob(0, 0, 1) = 0.5f;
    CHECK_NOTHROW(pm.validate());
}
