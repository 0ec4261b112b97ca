#ifndef WEEDSEG_REGISTRATION_HPP
#define WEEDSEG_REGISTRATION_HPP

#include <map>
#include <optional>
#include <string>

#include "weedseg/image.hpp"

namespace weedseg {

struct CameraIntrinsics {
    double fx = 1.0, fy = 1.0;  // focal lengths, pixels
    double cx = 0.0, cy = 0.0;  // principal point, pixels
    double k1 = 0.0, k2 = 0.0;  // radial distortion

    void validate() const;
};

// Planar rigid motion of a moving image relative to a reference:
// a point at p in the reference appears at rot(theta) about the image
// center applied to p, then shifted by (tx, ty), in the moving image.
struct Transform2D {
    double tx = 0.0, ty = 0.0;  // pixels
    double theta = 0.0;         // radians, in (-pi, pi]

    bool is_identity() const { return tx == 0.0 && ty == 0.0 && theta == 0.0; }
};

struct RegistrationOptions {
    int search_radius = 16;          // max translation magnitude, pixels
    double confidence_threshold = 0.2;  // min normalized correlation peak
    double angle_min_deg = -3.0;
    double angle_max_deg = 3.0;
    double angle_step_deg = 0.25;
    // Below this side length phase correlation is unreliable; use
    // exhaustive NCC instead.
    uint32_t ncc_fallback_side = 64;
};

struct TranslationEstimate {
    Transform2D transform;  // theta always 0
    double confidence = 0.0;  // normalized cross-correlation at the peak
};

// Samples img with bilinear interpolation, zero outside bounds.
float sample_bilinear(const BandImage& img, double x, double y);

// Applies the Brown-Conrady radial model: for each output pixel the
// distorted source location is computed in normalized coordinates and
// sampled bilinearly. k1 = k2 = 0 returns the input unchanged.
BandImage undistort(const BandImage& img, const CameraIntrinsics& k);

// Rotates about the image center, bilinear, zero fill.
BandImage rotate_about_center(const BandImage& img, double theta);

// Shifts content by (tx, ty) (content moves right/down for positive
// values), bilinear for fractional shifts, zero fill.
BandImage shift_image(const BandImage& img, double tx, double ty);

// Estimates the translation of mov relative to ref: if mov was produced
// by shifting ref's content by t, the returned transform is t.
// Phase correlation with parabolic subpixel refinement; exhaustive NCC
// for small images. Throws on constant input or a peak below the
// confidence threshold ("no similarity").
TranslationEstimate estimate_translation(const BandImage& ref, const BandImage& mov,
                                         const RegistrationOptions& opts = {});

// Grid search over rotation angles, each candidate un-rotated and passed
// to estimate_translation; best correlation wins. An empty angle range
// degrades to translation-only.
TranslationEstimate estimate_rigid(const BandImage& ref, const BandImage& mov,
                                   const RegistrationOptions& opts = {});

// Resamples each non-reference band into the reference frame by undoing
// its transform, then crops all bands to the common valid region shrunk
// by margin. Bands without an entry in transforms are treated as already
// aligned. Throws if the intersection is empty.
MultispectralFrame warp_and_crop(const MultispectralFrame& frame,
                                 const std::map<std::string, Transform2D>& transforms,
                                 uint32_t margin = 0);

// Persistence of a per-rig alignment estimate (computed once, reused).
struct RigCalibration {
    std::map<std::string, Transform2D> band_transforms;
    CameraIntrinsics intrinsics;
    RegistrationOptions options;
};

void save_calibration(const RigCalibration& cal, const std::string& path);
RigCalibration load_calibration(const std::string& path);

}  // namespace weedseg

#endif
