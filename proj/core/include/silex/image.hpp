#pragma once

// Raster containers shared by every stage: 8-bit RGB frames, HSV frames,
// the scalar Value plane, and boolean masks. All storage is row-major with
// (x, y) addressing, x fastest.

#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "silex/errors.hpp"

namespace silex {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb8&) const = default;
};

// One HSV pixel: hue in degrees [0,360), saturation and value in [0,1].
struct Hsv {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;

    bool operator==(const Hsv&) const = default;
};

namespace detail {
inline void check_dims(int width, int height) {
    if (width < 1 || height < 1)
        throw InputDomainError("image dimensions must be positive");
}
} // namespace detail

// H x W grid of 8-bit RGB triples.
class RgbFrame {
public:
    RgbFrame() = default;

    RgbFrame(int width, int height, Rgb8 fill = {}) : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height * 3);
        for (std::size_t i = 0; i < data_.size(); i += 3) {
            data_[i] = fill.r;
            data_[i + 1] = fill.g;
            data_[i + 2] = fill.b;
        }
    }

    // Adopts an interleaved r,g,b buffer of length width*height*3.
    static RgbFrame from_data(int width, int height, std::vector<std::uint8_t> interleaved) {
        detail::check_dims(width, height);
        if (interleaved.size() != static_cast<std::size_t>(width) * height * 3)
            throw InputDomainError("rgb buffer length must be width*height*3");
        RgbFrame f;
        f.width_ = width;
        f.height_ = height;
        f.data_ = std::move(interleaved);
        return f;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    Rgb8 pixel(int x, int y) const {
        const std::size_t i = index(x, y) * 3;
        return {data_[i], data_[i + 1], data_[i + 2]};
    }

    void set_pixel(int x, int y, Rgb8 p) {
        const std::size_t i = index(x, y) * 3;
        data_[i] = p.r;
        data_[i + 1] = p.g;
        data_[i + 2] = p.b;
    }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool operator==(const RgbFrame&) const = default;

private:
    std::size_t index(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

// H x W grid of (h, s, v) triples stored as doubles.
class HsvFrame {
public:
    HsvFrame() = default;

    HsvFrame(int width, int height) : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height * 3, 0.0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    Hsv pixel(int x, int y) const {
        const std::size_t i = index(x, y) * 3;
        return {data_[i], data_[i + 1], data_[i + 2]};
    }

    void set_pixel(int x, int y, Hsv p) {
        const std::size_t i = index(x, y) * 3;
        data_[i] = p.h;
        data_[i + 1] = p.s;
        data_[i + 2] = p.v;
    }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const HsvFrame&) const = default;

private:
    std::size_t index(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

// Single-channel image of Value samples in [0,1]; the input of every model.
class ValuePlane {
public:
    ValuePlane() = default;

    ValuePlane(int width, int height, double fill = 0.0) : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height, fill);
    }

    static ValuePlane from_data(int width, int height, std::vector<double> values) {
        detail::check_dims(width, height);
        if (values.size() != static_cast<std::size_t>(width) * height)
            throw InputDomainError("value buffer length must be width*height");
        ValuePlane p;
        p.width_ = width;
        p.height_ = height;
        p.data_ = std::move(values);
        return p;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return data_.size(); }

    double at(int x, int y) const { return data_[index(x, y)]; }
    void set(int x, int y, double v) { data_[index(x, y)] = v; }

    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    const std::vector<double>& data() const { return data_; }

    bool same_shape(const ValuePlane& o) const { return width_ == o.width_ && height_ == o.height_; }
    bool operator==(const ValuePlane&) const = default;

private:
    std::size_t index(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

// Boolean grid; true (1) marks foreground.
class BinaryMask {
public:
    BinaryMask() = default;

    BinaryMask(int width, int height, bool fill = false) : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return data_.size(); }

    bool at(int x, int y) const { return data_[index(x, y)] != 0; }
    void set(int x, int y, bool v) { data_[index(x, y)] = v ? 1 : 0; }

    bool get(std::size_t i) const { return data_[i] != 0; }
    void put(std::size_t i, bool v) { data_[i] = v ? 1 : 0; }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (auto b : data_) n += b;
        return n;
    }

    BinaryMask complement() const {
        BinaryMask out = *this;
        for (auto& b : out.data_) b = b ? 0 : 1;
        return out;
    }

    const std::vector<std::uint8_t>& data() const { return data_; }

    bool same_shape(const BinaryMask& o) const { return width_ == o.width_ && height_ == o.height_; }
    bool operator==(const BinaryMask&) const = default;

private:
    std::size_t index(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

} // namespace silex
