#include "silex/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "silex/errors.hpp"

namespace silex {

namespace {

// Layout, all little-endian:
//   "SLBM"  u16 version  u8 kind  u8 reserved  u32 width  u32 height
//   FrameDiff:      f64 tau, then width*height f64 reference values
//   SingleGaussian: f64 k_sigma, f64 var_floor, then per pixel f64 mu, f64 var
//   Gmm:            u32 k_max, f64 alpha, background_portion, match_k,
//                   var_init, var_floor, w_init, then per pixel
//                   f64 live_count + k_max * (f64 w, f64 mu, f64 var)

constexpr char kMagic[4] = {'S', 'L', 'B', 'M'};

struct Writer {
    std::vector<std::uint8_t> out;

    void u8(std::uint8_t v) { out.push_back(v); }
    void u16(std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
};

struct Reader {
    std::span<const std::uint8_t> in;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > in.size()) throw IoError("model snapshot: truncated");
    }
    std::uint8_t u8() {
        need(1);
        return in[pos++];
    }
    std::uint16_t u16() {
        need(2);
        const std::uint16_t v =
            static_cast<std::uint16_t>(in[pos] | (static_cast<std::uint16_t>(in[pos + 1]) << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
        pos += 8;
        return std::bit_cast<double>(bits);
    }
};

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw IoError(std::string("model snapshot: non-finite ") + what);
    return v;
}

enum : std::uint8_t { kKindFrameDiff = 0, kKindSingleGaussian = 1, kKindGmm = 2 };

} // namespace

std::vector<std::uint8_t> serialize_model(const BackgroundModel& model) {
    Writer w;
    w.out.insert(w.out.end(), kMagic, kMagic + 4);
    w.u16(kSnapshotVersion);

    if (const auto* fd = std::get_if<FrameDiffModel>(&model)) {
        w.u8(kKindFrameDiff);
        w.u8(0);
        w.u32(static_cast<std::uint32_t>(fd->reference.width()));
        w.u32(static_cast<std::uint32_t>(fd->reference.height()));
        w.f64(fd->tau);
        for (double v : fd->reference.data()) w.f64(v);
    } else if (const auto* sg = std::get_if<SingleGaussianModel>(&model)) {
        w.u8(kKindSingleGaussian);
        w.u8(0);
        w.u32(static_cast<std::uint32_t>(sg->width));
        w.u32(static_cast<std::uint32_t>(sg->height));
        w.f64(sg->k_sigma);
        w.f64(sg->var_floor);
        for (const GaussianPixel& p : sg->pixels) {
            w.f64(p.mu);
            w.f64(p.var);
        }
    } else {
        const auto& g = std::get<GmmModelGrid>(model);
        w.u8(kKindGmm);
        w.u8(0);
        w.u32(static_cast<std::uint32_t>(g.width()));
        w.u32(static_cast<std::uint32_t>(g.height()));
        const GmmParams& p = g.params();
        w.u32(static_cast<std::uint32_t>(p.k_max));
        w.f64(p.alpha);
        w.f64(p.background_portion);
        w.f64(p.match_k);
        w.f64(p.var_init);
        w.f64(p.var_floor);
        w.f64(p.w_init);
        const auto counts = g.all_counts();
        const auto comps = g.all_components();
        const std::size_t n = counts.size();
        for (std::size_t i = 0; i < n; ++i) {
            w.f64(static_cast<double>(counts[i]));
            for (int k = 0; k < p.k_max; ++k) {
                const GmmComponent& c = comps[i * static_cast<std::size_t>(p.k_max) +
                                              static_cast<std::size_t>(k)];
                w.f64(c.w);
                w.f64(c.mu);
                w.f64(c.var);
            }
        }
    }
    return w.out;
}

BackgroundModel deserialize_model(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    r.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw IoError("model snapshot: bad magic (not an SLBM file)");
    r.pos = 4;
    const std::uint16_t version = r.u16();
    if (version != kSnapshotVersion)
        throw IoError("model snapshot: unsupported version " + std::to_string(version));
    const std::uint8_t kind = r.u8();
    r.u8(); // reserved
    const std::uint32_t width = r.u32();
    const std::uint32_t height = r.u32();
    if (width == 0 || height == 0 || width > 1u << 20 || height > 1u << 20)
        throw IoError("model snapshot: unreasonable dimensions");
    const std::size_t n = static_cast<std::size_t>(width) * height;

    if (kind == kKindFrameDiff) {
        const double tau = finite_or_throw(r.f64(), "tau");
        if (!(tau > 0.0)) throw IoError("model snapshot: tau must be > 0");
        std::vector<double> values(n);
        for (double& v : values) v = finite_or_throw(r.f64(), "reference value");
        FrameDiffModel m;
        m.reference =
            ValuePlane::from_data(static_cast<int>(width), static_cast<int>(height), std::move(values));
        m.tau = tau;
        return m;
    }
    if (kind == kKindSingleGaussian) {
        SingleGaussianModel m;
        m.width = static_cast<int>(width);
        m.height = static_cast<int>(height);
        m.k_sigma = finite_or_throw(r.f64(), "k_sigma");
        m.var_floor = finite_or_throw(r.f64(), "var_floor");
        if (!(m.k_sigma > 0.0) || !(m.var_floor > 0.0))
            throw IoError("model snapshot: k_sigma and var_floor must be > 0");
        m.pixels.resize(n);
        for (GaussianPixel& p : m.pixels) {
            p.mu = finite_or_throw(r.f64(), "mu");
            p.var = finite_or_throw(r.f64(), "var");
            if (!(p.var > 0.0)) throw IoError("model snapshot: variance must be > 0");
        }
        return m;
    }
    if (kind == kKindGmm) {
        GmmParams p;
        p.k_max = static_cast<int>(r.u32());
        p.alpha = finite_or_throw(r.f64(), "alpha");
        p.background_portion = finite_or_throw(r.f64(), "background_portion");
        p.match_k = finite_or_throw(r.f64(), "match_k");
        p.var_init = finite_or_throw(r.f64(), "var_init");
        p.var_floor = finite_or_throw(r.f64(), "var_floor");
        p.w_init = finite_or_throw(r.f64(), "w_init");
        try {
            p.validate();
        } catch (const ConfigError& e) {
            throw IoError(std::string("model snapshot: ") + e.what());
        }
        std::vector<std::uint8_t> counts(n);
        std::vector<GmmComponent> comps(n * static_cast<std::size_t>(p.k_max));
        for (std::size_t i = 0; i < n; ++i) {
            const double count = r.f64();
            if (!(count >= 0.0) || count > p.k_max || count != std::floor(count))
                throw IoError("model snapshot: bad component count");
            counts[i] = static_cast<std::uint8_t>(count);
            for (int k = 0; k < p.k_max; ++k) {
                GmmComponent& c = comps[i * static_cast<std::size_t>(p.k_max) +
                                        static_cast<std::size_t>(k)];
                c.w = finite_or_throw(r.f64(), "weight");
                c.mu = finite_or_throw(r.f64(), "mean");
                c.var = finite_or_throw(r.f64(), "variance");
                if (k < counts[i] && !(c.var > 0.0))
                    throw IoError("model snapshot: live component variance must be > 0");
            }
        }
        return GmmModelGrid::from_state(static_cast<int>(width), static_cast<int>(height), p,
                                        std::move(counts), std::move(comps));
    }
    throw IoError("model snapshot: unknown model kind " + std::to_string(kind));
}

void save_model(const std::filesystem::path& path, const BackgroundModel& model) {
    const std::vector<std::uint8_t> bytes = serialize_model(model);
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    const bool ok = std::fwrite(bytes.data(), 1, bytes.size(), f) == bytes.size();
    std::fclose(f);
    if (!ok) throw IoError("short write to '" + path.string() + "'");
}

BackgroundModel load_model(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw IoError("cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> bytes;
    std::uint8_t buf[65536];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) bytes.insert(bytes.end(), buf, buf + got);
    std::fclose(f);
    return deserialize_model(bytes);
}

} // namespace silex
