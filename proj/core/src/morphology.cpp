#include "silex/morphology.hpp"

#include <cstdlib>

namespace silex {

const char* to_string(SeShape shape) {
    return shape == SeShape::Square ? "square" : "cross";
}

SeShape se_shape_from_string(const std::string& name) {
    if (name == "square") return SeShape::Square;
    if (name == "cross") return SeShape::Cross;
    throw ConfigError("unknown se_shape '" + name + "' (valid: square, cross)");
}

std::vector<std::pair<int, int>> StructuringElement::offsets() const {
    if (radius < 1)
        throw InputDomainError("structuring element radius must be >= 1");
    std::vector<std::pair<int, int>> offs;
    offs.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (shape == SeShape::Cross && dx != 0 && dy != 0)
                continue;
            offs.emplace_back(dx, dy);
        }
    }
    return offs;
}

namespace {

enum class Op { Dilate, Erode };

BinaryMask apply(const BinaryMask& mask, const StructuringElement& se, Op op) {
    const auto offs = se.offsets();
    const int w = mask.width();
    const int h = mask.height();
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool hit = op == Op::Erode;
            for (const auto& [dx, dy] : offs) {
                const int nx = x + dx;
                const int ny = y + dy;
                const bool inside = nx >= 0 && nx < w && ny >= 0 && ny < h;
                const bool v = inside && mask.at(nx, ny); // outside counts as false
                if (op == Op::Dilate) {
                    if (v) { hit = true; break; }
                } else {
                    if (!v) { hit = false; break; }
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

} // namespace

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
    return apply(mask, se, Op::Dilate);
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
    return apply(mask, se, Op::Erode);
}

const char* to_string(CleanOrder order) {
    switch (order) {
    case CleanOrder::OpenClose: return "open_close";
    case CleanOrder::CloseOpen: return "close_open";
    case CleanOrder::DilateErode: return "dilate_erode";
    case CleanOrder::ErodeDilate: return "erode_dilate";
    }
    return "?";
}

CleanOrder clean_order_from_string(const std::string& name) {
    if (name == "open_close") return CleanOrder::OpenClose;
    if (name == "close_open") return CleanOrder::CloseOpen;
    if (name == "dilate_erode") return CleanOrder::DilateErode;
    if (name == "erode_dilate") return CleanOrder::ErodeDilate;
    throw ConfigError("unknown clean_order '" + name +
                      "' (valid: open_close, close_open, dilate_erode, erode_dilate)");
}

BinaryMask clean(const BinaryMask& mask, const StructuringElement& se, CleanOrder order) {
    switch (order) {
    case CleanOrder::OpenClose:
        return erode(dilate(dilate(erode(mask, se), se), se), se);
    case CleanOrder::CloseOpen:
        return dilate(erode(erode(dilate(mask, se), se), se), se);
    case CleanOrder::DilateErode:
        return erode(dilate(mask, se), se);
    case CleanOrder::ErodeDilate:
        return dilate(erode(mask, se), se);
    }
    std::abort(); // unreachable
}

} // namespace silex
