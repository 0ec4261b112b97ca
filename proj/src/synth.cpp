#include "weedseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <stdexcept>

#include "weedseg/image_io.hpp"
#include "weedseg/manifest.hpp"

namespace weedseg {

namespace fs = std::filesystem;

void FieldConfig::validate() const {
    auto check_refl = [](const Reflectance& r, const char* what) {
        if (r.nir_mean < 0.0 || r.nir_mean > 1.0 || r.red_mean < 0.0 || r.red_mean > 1.0)
            throw std::invalid_argument(std::string("FieldConfig: ") + what +
                                        " reflectance mean outside [0,1]");
    };
    check_refl(soil, "soil");
    check_refl(crop, "crop");
    check_refl(weed, "weed");
    if (crop.nir_mean <= soil.nir_mean)
        throw std::invalid_argument("FieldConfig: crop NIR mean must exceed soil NIR mean");
    if (crop_radius_min <= 0.0 || crop_radius_max < crop_radius_min)
        throw std::invalid_argument("FieldConfig: bad crop radius range");
    if (double(crop_row_spacing) < 2.0 * crop_radius_max)
        throw std::invalid_argument("FieldConfig: row spacing smaller than plant diameter");
    if (herbicide_level < 0.0 || herbicide_level > 1.0)
        throw std::invalid_argument("FieldConfig: herbicide_level outside [0,1]");
    if (noise_sigma < 0.0) throw std::invalid_argument("FieldConfig: noise_sigma must be >= 0");
    if (weed_density < 0.0) throw std::invalid_argument("FieldConfig: weed_density must be >= 0");
}

namespace {

struct PlantStamp {
    // Rosette: disk with sinusoidal radius perturbation.
    static void rosette(LabelMask& truth, double cx, double cy, double r0, double phase,
                        uint8_t label) {
        const int w = int(truth.width()), h = int(truth.height());
        const int rb = int(std::ceil(r0 * 1.3));
        for (int y = std::max(0, int(cy) - rb); y <= std::min(h - 1, int(cy) + rb); ++y) {
            for (int x = std::max(0, int(cx) - rb); x <= std::min(w - 1, int(cx) + rb); ++x) {
                const double dx = x - cx, dy = y - cy;
                const double d = std::sqrt(dx * dx + dy * dy);
                const double phi = std::atan2(dy, dx);
                const double r = r0 * (1.0 + 0.25 * std::sin(5.0 * phi + phase));
                if (d <= r) truth.at(uint32_t(x), uint32_t(y)) = label;
            }
        }
    }
};

}  // namespace

SyntheticField generate_field(const FieldConfig& cfg, const std::string& frame_id) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int w = int(cfg.width), h = int(cfg.height);
    LabelMask truth(cfg.width, cfg.height, kBackground);

    // crop rosettes on a row grid, jittered
    const int spacing = cfg.crop_row_spacing;
    std::vector<double> row_centers;
    for (double rx = spacing * 0.5; rx < w; rx += spacing) row_centers.push_back(rx);
    for (double rx : row_centers) {
        for (double ry = spacing * 0.5; ry < h; ry += spacing) {
            const double jx = (uni(rng) - 0.5) * spacing / 4.0;
            const double jy = (uni(rng) - 0.5) * spacing / 4.0;
            const double r0 =
                cfg.crop_radius_min + uni(rng) * (cfg.crop_radius_max - cfg.crop_radius_min);
            const double phase = uni(rng) * 2.0 * std::numbers::pi;
            PlantStamp::rosette(truth, rx + jx, ry + jy, r0, phase, kCrop);
        }
    }

    // weeds: random-walk blobs away from the crop rows
    const double density = cfg.weed_density * (1.0 - cfg.herbicide_level);
    const int n_weeds = int(std::lround(density * double(w) * h / 1000.0));
    for (int i = 0; i < n_weeds; ++i) {
        double cx = 0, cy = 0;
        bool placed = false;
        for (int attempt = 0; attempt < 20 && !placed; ++attempt) {
            cx = uni(rng) * (w - 1);
            cy = uni(rng) * (h - 1);
            double d_row = 1e9;
            for (double rx : row_centers) d_row = std::min(d_row, std::abs(cx - rx));
            placed = row_centers.empty() || d_row > spacing / 4.0;
        }
        if (!placed) continue;
        const int steps = 25 + int(uni(rng) * 35.0);
        double x = cx, y = cy;
        for (int s = 0; s < steps; ++s) {
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int px = int(std::lround(x)) + dx, py = int(std::lround(y)) + dy;
                    if (px >= 0 && py >= 0 && px < w && py < h &&
                        truth.at(uint32_t(px), uint32_t(py)) != kCrop)
                        truth.at(uint32_t(px), uint32_t(py)) = kWeed;
                }
            const double ang = uni(rng) * 2.0 * std::numbers::pi;
            x = std::clamp(x + 1.2 * std::cos(ang), 0.0, double(w - 1));
            y = std::clamp(y + 1.2 * std::sin(ang), 0.0, double(h - 1));
        }
    }

    // reflectances per material, plus sensor noise
    BandImage nir(cfg.width, cfg.height, Band::nir());
    BandImage red(cfg.width, cfg.height, Band::red());
    const Reflectance* materials[3] = {&cfg.soil, &cfg.crop, &cfg.weed};
    for (size_t i = 0; i < truth.size(); ++i) {
        const Reflectance& m = *materials[truth.labels()[i]];
        const double nv = m.nir_mean + m.nir_std * gauss(rng) + cfg.noise_sigma * gauss(rng);
        const double rv = m.red_mean + m.red_std * gauss(rng) + cfg.noise_sigma * gauss(rng);
        nir.data()[i] = float(std::clamp(nv, 0.0, 1.0));
        red.data()[i] = float(std::clamp(rv, 0.0, 1.0));
    }

    if (!cfg.band_misalignment.is_identity()) {
        const Transform2D& t = cfg.band_misalignment;
        red = shift_image(rotate_about_center(red, t.theta), t.tx, t.ty);
    }

    SyntheticField field{MultispectralFrame(frame_id, {std::move(nir), std::move(red)}),
                         std::move(truth)};
    return field;
}

std::string generate_dataset(const FieldConfig& tmpl, const DatasetCounts& counts,
                             const std::string& out_dir) {
    fs::create_directories(out_dir);
    DatasetManifest manifest;
    manifest.root = out_dir;

    int index = 0;
    auto emit = [&](PlotType type, int type_index) {
        FieldConfig cfg = tmpl;
        cfg.seed = tmpl.seed * 1000003 + uint64_t(index);
        std::string plot;
        switch (type) {
            case PlotType::Crop:
                cfg.herbicide_level = 1.0;  // weed-free plot
                plot = "crop";
                break;
            case PlotType::Weed:
                cfg.crop_row_spacing = int(std::max(cfg.width, cfg.height)) * 2 + 1;  // no rows fit
                cfg.herbicide_level = 0.0;
                plot = "weed";
                break;
            case PlotType::Mixed:
                cfg.herbicide_level = std::min(cfg.herbicide_level, 0.3);
                plot = "mixed";
                break;
        }
        const std::string id = plot + "_" + std::to_string(type_index);
        SyntheticField field = generate_field(cfg, id);

        ManifestEntry e;
        e.frame_id = id;
        e.split = type == PlotType::Mixed ? "test" : "train";
        e.plot_type = plot;
        e.bands["NIR"] = id + "_nir.pgm";
        e.bands["Red"] = id + "_red.pgm";
        e.mask = id + "_truth.png";
        write_band_image(field.frame.get(Band::nir()), manifest.resolve(e.bands["NIR"]), 16);
        write_band_image(field.frame.get(Band::red()), manifest.resolve(e.bands["Red"]), 16);
        write_mask_png(field.truth, manifest.resolve(*e.mask));
        manifest.entries.push_back(std::move(e));
        ++index;
    };

    for (int i = 0; i < counts.crop; ++i) emit(PlotType::Crop, i);
    for (int i = 0; i < counts.weed; ++i) emit(PlotType::Weed, i);
    for (int i = 0; i < counts.mixed; ++i) emit(PlotType::Mixed, i);

    const std::string path = (fs::path(out_dir) / "manifest.json").string();
    save_manifest(manifest, path);
    return path;
}

}  // namespace weedseg
