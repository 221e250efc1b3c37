#pragma once

// RGB normalization, RGB -> HSV conversion, Value-plane extraction and
// per-layer histograms. Hue is kept in degrees as a double; all arithmetic
// is 64-bit floating point.

#include <cstdint>
#include <string>
#include <vector>

#include "silex/image.hpp"

namespace silex {

// Per-pixel normalization of 8-bit channels into [0,1] plus the derived
// channel extrema.
struct NormRgb {
    double r_n = 0.0;
    double g_n = 0.0;
    double b_n = 0.0;
    double cmax = 0.0;
    double cmin = 0.0;
    double delta = 0.0;
};

// Throws InputDomainError when a channel lies outside [0,255].
NormRgb normalize_rgb(int r, int g, int b);

// Converts one pixel. h in [0,360) degrees, s and v in [0,1].
// When two channels tie for cmax the first matching branch in the order
// r', g', b' decides the hue sector.
Hsv rgb_to_hsv(int r, int g, int b);

// Per-pixel conversion of a whole frame; dimensions are preserved.
HsvFrame frame_to_hsv(const RgbFrame& frame);

// Projects the v component. plane[i] equals cmax of the normalized pixel.
ValuePlane value_plane(const HsvFrame& frame);

enum class HsvLayer { Hue, Saturation, Value };

const char* to_string(HsvLayer layer);

struct LayerHistogram {
    HsvLayer layer = HsvLayer::Value;
    int bin_count = 0;
    std::vector<std::uint64_t> counts; // bin_count entries
    std::vector<double> bin_edges;     // bin_count + 1 ascending edges

    std::uint64_t total() const {
        std::uint64_t n = 0;
        for (auto c : counts) n += c;
        return n;
    }
};

inline constexpr int kDefaultHistogramBins = 256;

// Equal-width bins over the layer's full range (hue [0,360), s/v [0,1]).
// counts[k] covers [edge_k, edge_{k+1}); the last bin is closed on the
// right. Throws InputDomainError when bin_count < 1.
LayerHistogram layer_histogram(const HsvFrame& frame, HsvLayer layer, int bin_count = kDefaultHistogramBins);

// CSV serialization with a bin_start,bin_end,count header row.
std::string histogram_to_csv(const LayerHistogram& hist);

} // namespace silex
