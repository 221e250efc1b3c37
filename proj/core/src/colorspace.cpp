#include "silex/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace silex {

NormRgb normalize_rgb(int r, int g, int b) {
    const auto bad = [](int c) { return c < 0 || c > 255; };
    if (bad(r) || bad(g) || bad(b)) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "rgb channel out of range [0,255]: (%d, %d, %d)", r, g, b);
        throw InputDomainError(msg);
    }
    NormRgb n;
    n.r_n = r / 255.0;
    n.g_n = g / 255.0;
    n.b_n = b / 255.0;
    n.cmax = std::max({n.r_n, n.g_n, n.b_n});
    n.cmin = std::min({n.r_n, n.g_n, n.b_n});
    n.delta = n.cmax - n.cmin;
    return n;
}

Hsv rgb_to_hsv(int r, int g, int b) {
    const NormRgb n = normalize_rgb(r, g, b);
    Hsv out{0.0, 0.0, n.cmax};
    if (n.delta == 0.0)
        return out; // achromatic: h = 0, s = 0

    double sector;
    if (n.cmax == n.r_n) {
        // mod 6 applied to the quotient, taken as the non-negative remainder
        sector = std::fmod((n.g_n - n.b_n) / n.delta, 6.0);
        if (sector < 0.0) sector += 6.0;
        if (sector >= 6.0) sector = 0.0; // rounding guard for tiny negatives
    } else if (n.cmax == n.g_n) {
        sector = (n.b_n - n.r_n) / n.delta + 2.0;
    } else {
        sector = (n.r_n - n.g_n) / n.delta + 4.0;
    }
    out.h = 60.0 * sector;
    out.s = n.delta / n.cmax;
    return out;
}

HsvFrame frame_to_hsv(const RgbFrame& frame) {
    HsvFrame out(frame.width(), frame.height());
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            const Rgb8 p = frame.pixel(x, y);
            out.set_pixel(x, y, rgb_to_hsv(p.r, p.g, p.b));
        }
    }
    return out;
}

ValuePlane value_plane(const HsvFrame& frame) {
    ValuePlane out(frame.width(), frame.height());
    for (int y = 0; y < frame.height(); ++y)
        for (int x = 0; x < frame.width(); ++x)
            out.set(x, y, frame.pixel(x, y).v);
    return out;
}

const char* to_string(HsvLayer layer) {
    switch (layer) {
    case HsvLayer::Hue: return "hue";
    case HsvLayer::Saturation: return "saturation";
    case HsvLayer::Value: return "value";
    }
    return "?";
}

LayerHistogram layer_histogram(const HsvFrame& frame, HsvLayer layer, int bin_count) {
    if (bin_count < 1)
        throw InputDomainError("histogram bin_count must be >= 1");

    const double hi = layer == HsvLayer::Hue ? 360.0 : 1.0;

    LayerHistogram hist;
    hist.layer = layer;
    hist.bin_count = bin_count;
    hist.counts.assign(static_cast<std::size_t>(bin_count), 0);
    hist.bin_edges.resize(static_cast<std::size_t>(bin_count) + 1);
    for (int k = 0; k <= bin_count; ++k)
        hist.bin_edges[static_cast<std::size_t>(k)] = hi * k / bin_count;

    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            const Hsv p = frame.pixel(x, y);
            const double v = layer == HsvLayer::Hue ? p.h : (layer == HsvLayer::Saturation ? p.s : p.v);
            // binning by edge comparison so counts and bin_edges always agree
            auto it = std::upper_bound(hist.bin_edges.begin(), hist.bin_edges.end(), v);
            auto k = static_cast<std::ptrdiff_t>(it - hist.bin_edges.begin()) - 1;
            k = std::clamp<std::ptrdiff_t>(k, 0, bin_count - 1);
            ++hist.counts[static_cast<std::size_t>(k)];
        }
    }
    return hist;
}

std::string histogram_to_csv(const LayerHistogram& hist) {
    std::string out = "bin_start,bin_end,count\n";
    char line[96];
    for (int k = 0; k < hist.bin_count; ++k) {
        std::snprintf(line, sizeof(line), "%.9g,%.9g,%llu\n",
                      hist.bin_edges[static_cast<std::size_t>(k)],
                      hist.bin_edges[static_cast<std::size_t>(k) + 1],
                      static_cast<unsigned long long>(hist.counts[static_cast<std::size_t>(k)]));
        out += line;
    }
    return out;
}

} // namespace silex
