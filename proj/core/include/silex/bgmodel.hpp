#pragma once

// The three per-pixel background models over Value planes: frame
// differencing against a fixed reference, a single Gaussian per pixel, and
// an adaptive Gaussian mixture per pixel. All three classify a plane into a
// foreground mask behind one dispatch entry point.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "silex/image.hpp"

namespace silex {

// Shared defaults, on the [0,1] Value scale.
inline constexpr double kDefaultTau = 0.1;                                    // ~26/255
inline constexpr double kDefaultKSigma = 2.5;                                 // sigma units
inline constexpr double kDefaultVarInit = (15.0 / 255.0) * (15.0 / 255.0);    // new-component variance
inline constexpr double kDefaultVarFloor = (2.0 / 255.0) * (2.0 / 255.0);     // variance clamp
inline constexpr double kDefaultAlpha = 0.01;                                 // mixture learning rate
inline constexpr double kDefaultBackgroundPortion = 0.2;                      // T

enum class BackgroundModelKind { FrameDiff, SingleGaussian, Gmm };

const char* to_string(BackgroundModelKind kind);
// Accepts "framediff", "gaussian", "gmm" (plus a few aliases);
// throws ConfigError listing valid names otherwise.
BackgroundModelKind background_model_kind_from_string(const std::string& name);

// Normal density with variance var (sigma = sqrt(var)).
// Throws InputDomainError when var is not positive.
double gaussian_pdf(double x, double mu, double var);

// ---------------------------------------------------------------------------
// Frame differencing

struct FrameDiffModel {
    ValuePlane reference;      // the modeled empty scene
    double tau = kDefaultTau;  // difference threshold in (0,1)
};

// mask[i] = foreground iff |plane[i] - reference[i]| > tau (strict).
BinaryMask frame_diff_classify(const FrameDiffModel& model, const ValuePlane& plane);

// ---------------------------------------------------------------------------
// Single Gaussian

struct GaussianPixel {
    double mu = 0.0;
    double var = kDefaultVarFloor; // kept >= the model's var_floor
};

struct SingleGaussianModel {
    int width = 0;
    int height = 0;
    std::vector<GaussianPixel> pixels; // row-major
    double k_sigma = kDefaultKSigma;   // classification multiplier
    double var_floor = kDefaultVarFloor;
};

// Per pixel: mu = sample mean, var = max(population variance, var_floor).
// Throws InsufficientDataError for < 2 frames, ShapeError on mixed sizes.
SingleGaussianModel single_gaussian_train(std::span<const ValuePlane> frames,
                                          double k_sigma = kDefaultKSigma,
                                          double var_floor = kDefaultVarFloor);

// mask[i] = foreground iff |plane[i] - mu_i| > k_sigma * sqrt(var_i).
BinaryMask single_gaussian_classify(const SingleGaussianModel& model, const ValuePlane& plane);

// ---------------------------------------------------------------------------
// Gaussian mixture

struct GmmComponent {
    double w = 0.0;   // mixture weight
    double mu = 0.0;  // mean
    double var = 0.0; // variance, >= var_floor

    double fitness() const; // w / sqrt(var)
};

struct GmmParams {
    int k_max = 4;                   // component capacity per pixel
    double alpha = kDefaultAlpha;    // learning rate in (0,1)
    double background_portion = kDefaultBackgroundPortion; // T: minimal cumulative weight of background components
    double match_k = kDefaultKSigma; // match window in sigma units
    double var_init = kDefaultVarInit;
    double var_floor = kDefaultVarFloor;
    double w_init = kDefaultAlpha;   // weight given to a fresh component

    void validate() const; // throws ConfigError
};

// Weighted sum of component densities (the scalar mixture probability).
// Weights are assumed normalized; throws StateError on an empty model.
double gmm_pixel_probability(std::span<const GmmComponent> model, double x);

// Grid of per-pixel mixtures with fixed component capacity. Components of
// each pixel are kept sorted by fitness w/sigma, descending, so the
// background designation is always a prefix.
class GmmModelGrid {
public:
    GmmModelGrid() = default;

    // One component per pixel: w = 1, mu = plane[i], var = var_init.
    GmmModelGrid(const ValuePlane& init, const GmmParams& params);

    int width() const { return width_; }
    int height() const { return height_; }
    const GmmParams& params() const { return params_; }

    int component_count(std::size_t pixel) const { return counts_[pixel]; }
    std::span<const GmmComponent> components(std::size_t pixel) const {
        return {comps_.data() + pixel * static_cast<std::size_t>(params_.k_max),
                static_cast<std::size_t>(counts_[pixel])};
    }

    double pixel_probability(std::size_t pixel, double x) const {
        return gmm_pixel_probability(components(pixel), x);
    }

    // One online step per pixel: match / update / replace, re-sort by
    // fitness, then classify against the minimal component prefix whose
    // cumulative weight exceeds background_portion. A pixel is background
    // only when the component it matched lands inside that prefix.
    BinaryMask update_and_classify(const ValuePlane& plane);

    // Raw state access for serialization.
    std::span<const GmmComponent> all_components() const { return comps_; }
    std::span<const std::uint8_t> all_counts() const { return counts_; }
    static GmmModelGrid from_state(int width, int height, const GmmParams& params,
                                   std::vector<std::uint8_t> counts,
                                   std::vector<GmmComponent> comps);

    bool operator==(const GmmModelGrid&) const;

private:
    bool update_pixel(std::size_t pixel, double x);

    int width_ = 0;
    int height_ = 0;
    GmmParams params_{};
    std::vector<std::uint8_t> counts_;  // live components per pixel
    std::vector<GmmComponent> comps_;   // k_max slots per pixel, live ones first
};

GmmModelGrid gmm_init(const ValuePlane& plane, const GmmParams& params);
BinaryMask gmm_update_and_classify(GmmModelGrid& models, const ValuePlane& plane);

// ---------------------------------------------------------------------------
// Uniform dispatch

using BackgroundModel = std::variant<FrameDiffModel, SingleGaussianModel, GmmModelGrid>;

BackgroundModelKind kind_of(const BackgroundModel& model);

// Dispatches to the classify of the matching approach. FrameDiff and
// SingleGaussian leave the state untouched; Gmm performs its online update.
// Throws ConfigError when kind does not match the held state.
BinaryMask model_classify(BackgroundModelKind kind, BackgroundModel& state, const ValuePlane& plane);

bool operator==(const GmmParams& a, const GmmParams& b);
bool operator==(const GmmComponent& a, const GmmComponent& b);
bool operator==(const FrameDiffModel& a, const FrameDiffModel& b);
bool operator==(const GaussianPixel& a, const GaussianPixel& b);
bool operator==(const SingleGaussianModel& a, const SingleGaussianModel& b);

} // namespace silex
