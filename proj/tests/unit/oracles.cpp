#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

Hsv rgb_to_hsv(int r, int g, int b) {
    const int cmax = std::max({r, g, b});
    const int cmin = std::min({r, g, b});
    const int delta = cmax - cmin;

    Hsv out;
    out.v = cmax / 255.0;
    out.s = delta == 0 ? 0.0 : static_cast<double>(delta) / cmax;
    if (delta == 0) return out;

    // The 255 normalization cancels inside every channel ratio, so hue can
    // be evaluated on raw integer channels.
    double h;
    if (cmax == r) {
        h = 60.0 * std::fmod((g - b) / static_cast<double>(delta), 6.0);
        if (h < 0.0) h += 360.0;
    } else if (cmax == g) {
        h = 60.0 * ((b - r) / static_cast<double>(delta) + 2.0);
    } else {
        h = 60.0 * ((r - g) / static_cast<double>(delta) + 4.0);
    }
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

namespace {

bool covered(const silex::StructuringElement& se, int dx, int dy) {
    if (std::abs(dx) > se.radius || std::abs(dy) > se.radius) return false;
    if (se.shape == silex::SeShape::Cross) return dx == 0 || dy == 0;
    return true;
}

} // namespace

silex::BinaryMask dilate(const silex::BinaryMask& mask, const silex::StructuringElement& se) {
    silex::BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            bool any = false;
            for (int dy = -se.radius; dy <= se.radius && !any; ++dy) {
                for (int dx = -se.radius; dx <= se.radius && !any; ++dx) {
                    if (!covered(se, dx, dy)) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= mask.width() || ny < 0 || ny >= mask.height()) continue;
                    if (mask.at(nx, ny)) any = true;
                }
            }
            out.set(x, y, any);
        }
    }
    return out;
}

silex::BinaryMask erode(const silex::BinaryMask& mask, const silex::StructuringElement& se) {
    silex::BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            bool all = true;
            for (int dy = -se.radius; dy <= se.radius && all; ++dy) {
                for (int dx = -se.radius; dx <= se.radius && all; ++dx) {
                    if (!covered(se, dx, dy)) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= mask.width() || ny < 0 || ny >= mask.height()) {
                        all = false; // outside the frame counts as background
                    } else if (!mask.at(nx, ny)) {
                        all = false;
                    }
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

Confusion confusion(const silex::BinaryMask& pred, const silex::BinaryMask& truth) {
    Confusion c;
    for (int y = 0; y < pred.height(); ++y) {
        for (int x = 0; x < pred.width(); ++x) {
            const bool p = pred.at(x, y);
            const bool t = truth.at(x, y);
            if (p && t) ++c.tp;
            if (p && !t) ++c.fp;
            if (!p && t) ++c.fn;
            if (!p && !t) ++c.tn;
        }
    }
    return c;
}

double error_percent(const silex::BinaryMask& pred, const silex::BinaryMask& truth) {
    const Confusion c = confusion(pred, truth);
    const double total = static_cast<double>(c.tp + c.fp + c.fn + c.tn);
    const double accuracy = static_cast<double>(c.tp + c.tn) / total;
    return 100.0 * (1.0 - accuracy);
}

double mixture_density(const std::vector<Component>& comps, double x) {
    double p = 0.0;
    for (auto it = comps.rbegin(); it != comps.rend(); ++it) {
        const double sigma = std::sqrt(it->var);
        const double z = (x - it->mu) / sigma;
        const double density = std::exp(-0.5 * z * z) / (sigma * std::sqrt(8.0 * std::atan(1.0)));
        p += it->w * density;
    }
    return p;
}

silex::BinaryMask random_mask(std::mt19937_64& rng, int width, int height, double p) {
    std::bernoulli_distribution coin(p);
    silex::BinaryMask mask(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) mask.set(x, y, coin(rng));
    return mask;
}

} // namespace oracle
