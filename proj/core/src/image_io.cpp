#include "silex/image_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "silex/errors.hpp"

namespace silex {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw IoError("cannot open '" + path.string() + "'");
    return f;
}

enum class Magic { Png, Ppm, Unknown };

Magic sniff(std::FILE* f, const std::filesystem::path& path) {
    unsigned char sig[8] = {};
    const std::size_t got = std::fread(sig, 1, sizeof sig, f);
    std::rewind(f);
    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) return Magic::Png;
    if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return Magic::Ppm;
    throw IoError("'" + path.string() + "' is neither PNG nor PPM(P6)");
}

// libpng reports errors through longjmp; this wrapper owns the structs so
// every exit path destroys them exactly once.
class PngReader {
public:
    explicit PngReader(const std::filesystem::path& path) : path_(path) {
        png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png_) info_ = png_create_info_struct(png_);
        if (!png_ || !info_) {
            destroy();
            throw IoError("libpng: out of memory reading '" + path.string() + "'");
        }
    }
    ~PngReader() { destroy(); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;

    png_structp png() { return png_; }
    png_infop info() { return info_; }
    [[noreturn]] void fail() const {
        throw IoError("libpng: failed to decode '" + path_.string() + "'");
    }

private:
    void destroy() {
        if (png_) png_destroy_read_struct(&png_, info_ ? &info_ : nullptr, nullptr);
        png_ = nullptr;
        info_ = nullptr;
    }
    std::filesystem::path path_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

class PngWriter {
public:
    explicit PngWriter(const std::filesystem::path& path) : path_(path) {
        png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png_) info_ = png_create_info_struct(png_);
        if (!png_ || !info_) {
            destroy();
            throw IoError("libpng: out of memory writing '" + path.string() + "'");
        }
    }
    ~PngWriter() { destroy(); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;

    png_structp png() { return png_; }
    png_infop info() { return info_; }
    [[noreturn]] void fail() const {
        throw IoError("libpng: failed to encode '" + path_.string() + "'");
    }

private:
    void destroy() {
        if (png_) png_destroy_write_struct(&png_, info_ ? &info_ : nullptr);
        png_ = nullptr;
        info_ = nullptr;
    }
    std::filesystem::path path_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

RgbFrame read_png_rgb(std::FILE* f, const std::filesystem::path& path, bool header_only,
                      ImageInfo* dims_out) {
    PngReader ctx(path);
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(ctx.png()))) ctx.fail();

    png_init_io(ctx.png(), f);
    png_read_info(ctx.png(), ctx.info());

    const png_uint_32 w = png_get_image_width(ctx.png(), ctx.info());
    const png_uint_32 h = png_get_image_height(ctx.png(), ctx.info());
    if (dims_out) {
        dims_out->width = static_cast<int>(w);
        dims_out->height = static_cast<int>(h);
    }
    if (header_only) return RgbFrame();
    if (w == 0 || h == 0 || w > 1u << 20 || h > 1u << 20)
        throw IoError("'" + path.string() + "': unreasonable dimensions");

    // Normalize every color type to 8-bit RGB.
    const png_byte color_type = png_get_color_type(ctx.png(), ctx.info());
    const png_byte bit_depth = png_get_bit_depth(ctx.png(), ctx.info());
    if (bit_depth == 16) png_set_strip_16(ctx.png());
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png());
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png());
    if (png_get_valid(ctx.png(), ctx.info(), PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png());
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(ctx.png());
    png_set_strip_alpha(ctx.png());
    png_read_update_info(ctx.png(), ctx.info());

    if (png_get_rowbytes(ctx.png(), ctx.info()) != static_cast<std::size_t>(w) * 3)
        throw IoError("'" + path.string() + "': unexpected row size after RGB conversion");

    pixels.resize(static_cast<std::size_t>(w) * h * 3);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(ctx.png(), rows.data());
    png_read_end(ctx.png(), nullptr);

    return RgbFrame::from_data(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

void skip_ppm_space(std::FILE* f) {
    int c;
    while ((c = std::fgetc(f)) != EOF) {
        if (c == '#') { // comment runs to end of line
            while ((c = std::fgetc(f)) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            std::ungetc(c, f);
            return;
        }
    }
}

long read_ppm_int(std::FILE* f, const std::filesystem::path& path) {
    skip_ppm_space(f);
    long v = 0;
    bool any = false;
    int c;
    while ((c = std::fgetc(f)) != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        any = true;
        if (v > 1 << 24) break;
    }
    if (c != EOF) std::ungetc(c, f);
    if (!any) throw IoError("'" + path.string() + "': malformed PPM header");
    return v;
}

RgbFrame read_ppm(std::FILE* f, const std::filesystem::path& path, bool header_only,
                  ImageInfo* dims_out) {
    char magic[2];
    if (std::fread(magic, 1, 2, f) != 2 || magic[0] != 'P' || magic[1] != '6')
        throw IoError("'" + path.string() + "': not a P6 PPM");
    const long w = read_ppm_int(f, path);
    const long h = read_ppm_int(f, path);
    if (dims_out) {
        dims_out->width = static_cast<int>(w);
        dims_out->height = static_cast<int>(h);
    }
    if (header_only) return RgbFrame();
    const long maxval = read_ppm_int(f, path);
    if (w <= 0 || h <= 0 || w > 1 << 20 || h > 1 << 20)
        throw IoError("'" + path.string() + "': unreasonable PPM dimensions");
    if (maxval != 255)
        throw IoError("'" + path.string() + "': only maxval 255 PPM is supported, got " +
                      std::to_string(maxval));
    const int sep = std::fgetc(f); // single whitespace byte before raster
    if (sep == EOF || !std::isspace(sep))
        throw IoError("'" + path.string() + "': malformed PPM header");

    std::vector<unsigned char> pixels(static_cast<std::size_t>(w) * h * 3);
    if (std::fread(pixels.data(), 1, pixels.size(), f) != pixels.size())
        throw IoError("'" + path.string() + "': truncated PPM raster");
    return RgbFrame::from_data(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

void write_png(const std::filesystem::path& path, int width, int height, int color_type,
               const unsigned char* data) {
    FilePtr f = open_file(path, "wb");
    PngWriter ctx(path);
    const std::size_t stride =
        static_cast<std::size_t>(width) * (color_type == PNG_COLOR_TYPE_RGB ? 3 : 1);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data + y * stride);

    if (setjmp(png_jmpbuf(ctx.png()))) ctx.fail();

    png_init_io(ctx.png(), f.get());
    // Pin the encoder choices so equal pixels give byte-equal files.
    png_set_compression_level(ctx.png(), 6);
    png_set_filter(ctx.png(), 0, PNG_FILTER_NONE);
    png_set_IHDR(ctx.png(), ctx.info(), static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png(), ctx.info());
    png_write_image(ctx.png(), rows.data());
    png_write_end(ctx.png(), nullptr);
}

} // namespace

RgbFrame read_image(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    switch (sniff(f.get(), path)) {
    case Magic::Png: return read_png_rgb(f.get(), path, false, nullptr);
    case Magic::Ppm: return read_ppm(f.get(), path, false, nullptr);
    default: break;
    }
    throw IoError("'" + path.string() + "': unsupported format");
}

ImageInfo probe_image(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    ImageInfo info;
    switch (sniff(f.get(), path)) {
    case Magic::Png: read_png_rgb(f.get(), path, true, &info); break;
    case Magic::Ppm: read_ppm(f.get(), path, true, &info); break;
    default: throw IoError("'" + path.string() + "': unsupported format");
    }
    return info;
}

void write_png_rgb(const std::filesystem::path& path, const RgbFrame& frame) {
    if (frame.width() <= 0 || frame.height() <= 0)
        throw InputDomainError("write_png_rgb: empty frame");
    write_png(path, frame.width(), frame.height(), PNG_COLOR_TYPE_RGB, frame.data().data());
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    if (mask.width() <= 0 || mask.height() <= 0)
        throw InputDomainError("write_mask_png: empty mask");
    std::vector<unsigned char> gray(mask.pixel_count());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.get(i) ? 255 : 0;
    write_png(path, mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, gray.data());
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
    const RgbFrame img = read_image(path);
    BinaryMask mask(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) mask.set(x, y, img.pixel(x, y).r >= 128);
    return mask;
}

} // namespace silex
