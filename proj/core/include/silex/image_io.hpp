#pragma once

// Image file I/O: 8-bit RGB PNG (via libpng) and binary PPM (P6) readers,
// PNG writers for frames and masks. Masks are stored as 8-bit grayscale
// PNG with foreground = 255, background = 0. Writes are deterministic:
// identical pixels produce identical bytes.

#include <filesystem>

#include "silex/image.hpp"

namespace silex {

struct ImageInfo {
    int width = 0;
    int height = 0;
};

// Reads PNG or PPM(P6), dispatching on the file's magic bytes. PNGs of any
// color type are converted to 8-bit RGB. Throws IoError on missing or
// malformed files.
RgbFrame read_image(const std::filesystem::path& path);

// Header-only read of dimensions, same dispatch as read_image.
ImageInfo probe_image(const std::filesystem::path& path);

// 8-bit RGB PNG, no alpha.
void write_png_rgb(const std::filesystem::path& path, const RgbFrame& frame);

// Grayscale PNG, 0/255.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

// Any PNG readable by read_image; a pixel is foreground when its first
// channel is >= 128.
BinaryMask read_mask_png(const std::filesystem::path& path);

} // namespace silex
