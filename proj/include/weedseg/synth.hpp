#ifndef WEEDSEG_SYNTH_HPP
#define WEEDSEG_SYNTH_HPP

#include <string>
#include <vector>

#include "weedseg/image.hpp"
#include "weedseg/registration.hpp"

namespace weedseg {

struct Reflectance {
    double nir_mean, nir_std;
    double red_mean, red_std;
};

struct FieldConfig {
    uint32_t width = 128, height = 128;
    int crop_row_spacing = 32;       // pixels between crop rows
    double crop_radius_min = 5.0, crop_radius_max = 9.0;
    double weed_density = 0.6;       // plants per kilopixel at herbicide 0
    double herbicide_level = 0.0;    // 1 = weed-free
    Reflectance soil{0.25, 0.02, 0.20, 0.02};
    Reflectance crop{0.70, 0.03, 0.10, 0.02};
    Reflectance weed{0.60, 0.03, 0.12, 0.02};
    Transform2D band_misalignment;   // applied to the Red band
    double noise_sigma = 0.01;       // additive sensor noise, reflectance units
    uint64_t seed = 1;

    void validate() const;
};

struct SyntheticField {
    MultispectralFrame frame;  // NIR + Red, Red warped by band_misalignment
    LabelMask truth;           // in the reference (NIR) coordinates
};

// Soil background with crop rosettes on rows and irregular weed blobs off
// the rows, reflectances drawn per material. Deterministic given seed.
SyntheticField generate_field(const FieldConfig& cfg, const std::string& frame_id = "synthetic");

enum class PlotType { Crop, Weed, Mixed };

struct DatasetCounts {
    int crop = 4;
    int weed = 4;
    int mixed = 2;
};

// Writes frames (16-bit PGM), truth masks (PNG) and a manifest mirroring
// the train/test split: single-species plots train, mixed plots test.
// Returns the manifest path.
std::string generate_dataset(const FieldConfig& tmpl, const DatasetCounts& counts,
                             const std::string& out_dir);

}  // namespace weedseg

#endif
