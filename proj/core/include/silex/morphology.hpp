#pragma once

// Binary dilation and erosion with a small odd-sided structuring element,
// plus the composed cleanup pass applied to raw foreground masks.
//
// Border convention: cells of the element that fall outside the image count
// as background, so erosion eats border pixels and dilation never grows
// from outside the frame. Duality dilate(m) == ~erode(~m) holds exactly for
// the symmetric elements used here.

#include <string>
#include <utility>
#include <vector>

#include "silex/image.hpp"

namespace silex {

enum class SeShape { Square, Cross };

const char* to_string(SeShape shape);
// Accepts "square" or "cross"; throws ConfigError otherwise.
SeShape se_shape_from_string(const std::string& name);

struct StructuringElement {
    SeShape shape = SeShape::Square;
    int radius = 1; // side = 2*radius + 1, origin at the exact center

    static StructuringElement square(int radius = 1) { return {SeShape::Square, radius}; }
    static StructuringElement cross(int radius = 1) { return {SeShape::Cross, radius}; }

    // (dx, dy) offsets covered by the element, origin included.
    // Throws InputDomainError when radius < 1.
    std::vector<std::pair<int, int>> offsets() const;
};

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);

// Order of the two morphology stages inside clean().
enum class CleanOrder {
    OpenClose,   // erode, dilate, dilate, erode: speckle removal then hole fill
    CloseOpen,   // dilate, erode, erode, dilate
    DilateErode, // closing only
    ErodeDilate, // opening only
};

const char* to_string(CleanOrder order);
// Accepts "open_close", "close_open", "dilate_erode", "erode_dilate".
CleanOrder clean_order_from_string(const std::string& name);

BinaryMask clean(const BinaryMask& mask, const StructuringElement& se,
                 CleanOrder order = CleanOrder::OpenClose);

} // namespace silex
