#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "weedseg/autolabel.hpp"
#include "weedseg/image_io.hpp"
#include "weedseg/manifest.hpp"
#include "weedseg/metrics.hpp"
#include "weedseg/synth.hpp"

using namespace weedseg;
namespace fs = std::filesystem;

TEST_CASE("generate_field produces both bands and a matching truth mask") {
    FieldConfig cfg;
    cfg.seed = 11;
    auto field = generate_field(cfg, "f0");
    CHECK(field.frame.width() == 128);
    CHECK(field.frame.height() == 128);
    CHECK(field.truth.width() == 128);
    const auto& nir = field.frame.get(Band::nir());
    const auto& red = field.frame.get(Band::red());
    CHECK(nir.size() == red.size());
    for (float v : nir.data()) {
        CHECK(v >= 0.0f);
        CHECK(v <= 1.0f);
    }
    // a field at default density contains all three classes
    bool has[3] = {false, false, false};
    for (uint8_t v : field.truth.labels()) has[v] = true;
    CHECK(has[kBackground]);
    CHECK(has[kCrop]);
    CHECK(has[kWeed]);
}

TEST_CASE("herbicide level one suppresses every weed") {
    FieldConfig cfg;
    cfg.seed = 12;
    cfg.herbicide_level = 1.0;
    auto field = generate_field(cfg);
    for (uint8_t v : field.truth.labels()) CHECK((v == kBackground || v == kCrop));
}

TEST_CASE("wide row spacing yields a weed-only plot") {
    FieldConfig cfg;
    cfg.seed = 13;
    cfg.crop_row_spacing = 1000;  // rows fall outside the frame
    auto field = generate_field(cfg);
    bool has_weed = false;
    for (uint8_t v : field.truth.labels()) {
        CHECK(v != kCrop);
        has_weed |= v == kWeed;
    }
    CHECK(has_weed);
}

TEST_CASE("generate_field is deterministic and seed-sensitive") {
    FieldConfig cfg;
    cfg.seed = 14;
    auto a = generate_field(cfg);
    auto b = generate_field(cfg);
    CHECK(a.frame.get(Band::nir()).data() == b.frame.get(Band::nir()).data());
    CHECK(a.frame.get(Band::red()).data() == b.frame.get(Band::red()).data());
    CHECK(a.truth.labels() == b.truth.labels());

    cfg.seed = 15;
    auto c = generate_field(cfg);
    CHECK(a.frame.get(Band::nir()).data() != c.frame.get(Band::nir()).data());
}

TEST_CASE("vegetation is brighter than soil in NDVI") {
    FieldConfig cfg;
    cfg.seed = 16;
    auto field = generate_field(cfg);
    BandImage ndvi = compute_ndvi(field.frame.get(Band::nir()), field.frame.get(Band::red()));
    double soil = 0, veg = 0;
    size_t ns = 0, nv = 0;
    for (size_t i = 0; i < ndvi.size(); ++i) {
        if (field.truth.labels()[i] == kBackground) {
            soil += ndvi.data()[i];
            ++ns;
        } else {
            veg += ndvi.data()[i];
            ++nv;
        }
    }
    REQUIRE(ns > 0);
    REQUIRE(nv > 0);
    CHECK(veg / double(nv) > soil / double(ns) + 0.3);
}

TEST_CASE("autolabel recovers the synthetic truth on a low-noise crop plot") {
    FieldConfig cfg;
    cfg.seed = 17;
    cfg.herbicide_level = 1.0;  // crop only
    cfg.noise_sigma = 0.005;
    auto field = generate_field(cfg);
    BandImage ndvi = compute_ndvi(field.frame.get(Band::nir()), field.frame.get(Band::red()));
    AutolabelConfig al;
    al.min_blob_pixels = 30;  // 128x128 frame
    al.vegetation_class = kCrop;
    LabelMask mask = generate_mask(ndvi, al);
    size_t agree = 0;
    for (size_t i = 0; i < mask.size(); ++i)
        agree += mask.labels()[i] == field.truth.labels()[i];
    CHECK(double(agree) / double(mask.size()) >= 0.95);
}

TEST_CASE("band misalignment is recoverable by registration") {
    FieldConfig cfg;
    cfg.seed = 18;
    cfg.band_misalignment = {4.0, -3.0, 0.0};
    cfg.noise_sigma = 0.002;
    auto field = generate_field(cfg);
    // NIR and Red are anti-correlated on vegetation; correlate NDVI-like
    // vegetation evidence instead: invert Red before matching.
    BandImage nir = field.frame.get(Band::nir());
    BandImage red = field.frame.get(Band::red());
    for (auto& v : red.data()) v = 1.0f - v;
    auto est = estimate_translation(nir, red);
    CHECK(std::abs(est.transform.tx - 4.0) <= 0.5);
    CHECK(std::abs(est.transform.ty - (-3.0)) <= 0.5);
}

TEST_CASE("FieldConfig validation") {
    FieldConfig cfg;
    cfg.crop_radius_max = 20.0;
    cfg.crop_row_spacing = 10;  // rows closer than plant diameter
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.crop.nir_mean = 0.1;  // darker than soil defeats NDVI labeling
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.noise_sigma = -1.0;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("generate_dataset writes a loadable, valid manifest") {
    const fs::path dir = fs::temp_directory_path() / "ws_test_synth_ds";
    fs::remove_all(dir);
    FieldConfig tmpl;
    tmpl.width = 64;
    tmpl.height = 64;
    tmpl.crop_row_spacing = 24;
    tmpl.seed = 19;
    DatasetCounts counts;
    counts.crop = 2;
    counts.weed = 2;
    counts.mixed = 1;
    const std::string manifest_path = generate_dataset(tmpl, counts, dir.string());
    auto m = load_manifest(manifest_path);
    m.validate();
    CHECK(m.entries.size() == 5);
    CHECK(m.split_entries("train").size() == 4);
    CHECK(m.split_entries("test").size() == 1);
    int crop = 0, weed = 0, mixed = 0;
    for (const auto& e : m.entries) {
        if (e.plot_type == "crop") ++crop;
        if (e.plot_type == "weed") ++weed;
        if (e.plot_type == "mixed") ++mixed;
        // every entry is loadable with both bands at the right size
        auto frame = load_frame(m, e);
        CHECK(frame.width() == 64);
        CHECK(frame.get(Band::nir()).size() == 64 * 64);
        CHECK(frame.get(Band::red()).size() == 64 * 64);
    }
    CHECK(crop == 2);
    CHECK(weed == 2);
    CHECK(mixed == 1);

    // single-species plots honor their type in the truth masks
    for (const auto& e : m.entries) {
        REQUIRE(e.mask.has_value());
        LabelMask truth = read_mask_png(m.resolve(*e.mask));
        for (uint8_t v : truth.labels()) {
            if (e.plot_type == "crop") CHECK(v != kWeed);
            if (e.plot_type == "weed") CHECK(v != kCrop);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("generate_dataset is bit-deterministic across runs") {
    const fs::path a = fs::temp_directory_path() / "ws_test_synth_a";
    const fs::path b = fs::temp_directory_path() / "ws_test_synth_b";
    fs::remove_all(a);
    fs::remove_all(b);
    FieldConfig tmpl;
    tmpl.width = 64;
    tmpl.height = 64;
    tmpl.crop_row_spacing = 24;
    tmpl.seed = 20;
    DatasetCounts counts{1, 1, 1};
    auto ma = load_manifest(generate_dataset(tmpl, counts, a.string()));
    auto mb = load_manifest(generate_dataset(tmpl, counts, b.string()));
    REQUIRE(ma.entries.size() == mb.entries.size());
    for (size_t i = 0; i < ma.entries.size(); ++i) {
        for (const auto& [name, rel] : ma.entries[i].bands) {
            std::ifstream fa(ma.resolve(rel), std::ios::binary);
            std::ifstream fb(mb.resolve(mb.entries[i].bands.at(name)), std::ios::binary);
            std::string da((std::istreambuf_iterator<char>(fa)), {});
            std::string db((std::istreambuf_iterator<char>(fb)), {});
            CHECK(da == db);
            CHECK(!da.empty());
        }
    }
    fs::remove_all(a);
    fs::remove_all(b);
}
