#include "silex/bgmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace silex {

const char* to_string(BackgroundModelKind kind) {
    switch (kind) {
    case BackgroundModelKind::FrameDiff: return "framediff";
    case BackgroundModelKind::SingleGaussian: return "gaussian";
    case BackgroundModelKind::Gmm: return "gmm";
    }
    return "?";
}

BackgroundModelKind background_model_kind_from_string(const std::string& name) {
    if (name == "framediff" || name == "frame_diff" || name == "diff")
        return BackgroundModelKind::FrameDiff;
    if (name == "gaussian" || name == "single_gaussian")
        return BackgroundModelKind::SingleGaussian;
    if (name == "gmm" || name == "mixture")
        return BackgroundModelKind::Gmm;
    throw ConfigError("unknown approach '" + name + "' (valid: framediff, gaussian, gmm)");
}

double gaussian_pdf(double x, double mu, double var) {
    if (!(var > 0.0))
        throw InputDomainError("gaussian_pdf: variance must be positive");
    const double d = x - mu;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// ---------------------------------------------------------------------------
// Frame differencing

BinaryMask frame_diff_classify(const FrameDiffModel& model, const ValuePlane& plane) {
    if (!plane.same_shape(model.reference))
        throw ShapeError("frame_diff_classify: plane does not match reference dimensions");
    BinaryMask mask(plane.width(), plane.height());
    for (std::size_t i = 0; i < plane.pixel_count(); ++i)
        mask.put(i, std::abs(plane[i] - model.reference[i]) > model.tau);
    return mask;
}

// ---------------------------------------------------------------------------
// Single Gaussian

SingleGaussianModel single_gaussian_train(std::span<const ValuePlane> frames,
                                          double k_sigma, double var_floor) {
    if (frames.size() < 2)
        throw InsufficientDataError("single_gaussian_train: need at least 2 frames");
    const ValuePlane& first = frames.front();
    for (const auto& f : frames)
        if (!f.same_shape(first))
            throw ShapeError("single_gaussian_train: training frames differ in size");

    SingleGaussianModel model;
    model.width = first.width();
    model.height = first.height();
    model.k_sigma = k_sigma;
    model.var_floor = var_floor;
    model.pixels.resize(first.pixel_count());

    const double inv_n = 1.0 / static_cast<double>(frames.size());
    for (std::size_t i = 0; i < model.pixels.size(); ++i) {
        double mean = 0.0;
        for (const auto& f : frames) mean += f[i];
        mean *= inv_n;
        double var = 0.0;
        for (const auto& f : frames) {
            const double d = f[i] - mean;
            var += d * d;
        }
        var *= inv_n; // population variance, divisor N
        model.pixels[i] = {mean, std::max(var, var_floor)};
    }
    return model;
}

BinaryMask single_gaussian_classify(const SingleGaussianModel& model, const ValuePlane& plane) {
    if (plane.width() != model.width || plane.height() != model.height)
        throw ShapeError("single_gaussian_classify: plane does not match model dimensions");
    BinaryMask mask(plane.width(), plane.height());
    for (std::size_t i = 0; i < plane.pixel_count(); ++i) {
        const GaussianPixel& g = model.pixels[i];
        mask.put(i, std::abs(plane[i] - g.mu) > model.k_sigma * std::sqrt(g.var));
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Gaussian mixture

double GmmComponent::fitness() const {
    return w / std::sqrt(var);
}

void GmmParams::validate() const {
    char msg[128];
    const auto fail = [&](const char* what) {
        std::snprintf(msg, sizeof(msg), "gmm params: %s", what);
        throw ConfigError(msg);
    };
    if (k_max < 1 || k_max > 64) fail("k_max must lie in [1,64]");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
    if (!(background_portion > 0.0 && background_portion < 1.0)) fail("t must lie in (0,1)");
    if (!(match_k > 0.0)) fail("match_k must be positive");
    if (!(var_floor > 0.0)) fail("var_floor must be positive");
    if (!(var_init >= var_floor)) fail("var_init must be >= var_floor");
    if (!(w_init > 0.0)) fail("w_init must be positive");
}

double gmm_pixel_probability(std::span<const GmmComponent> model, double x) {
    if (model.empty())
        throw StateError("gmm_pixel_probability: model has no components");
    double p = 0.0;
    for (const auto& c : model)
        p += c.w * gaussian_pdf(x, c.mu, c.var);
    return p;
}

GmmModelGrid::GmmModelGrid(const ValuePlane& init, const GmmParams& params)
    : width_(init.width()), height_(init.height()), params_(params) {
    params_.validate();
    const std::size_t n = init.pixel_count();
    counts_.assign(n, 1);
    comps_.assign(n * static_cast<std::size_t>(params_.k_max), GmmComponent{});
    for (std::size_t i = 0; i < n; ++i)
        comps_[i * static_cast<std::size_t>(params_.k_max)] = {1.0, init[i], params_.var_init};
}

GmmModelGrid GmmModelGrid::from_state(int width, int height, const GmmParams& params,
                                      std::vector<std::uint8_t> counts,
                                      std::vector<GmmComponent> comps) {
    params.validate();
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (counts.size() != n || comps.size() != n * static_cast<std::size_t>(params.k_max))
        throw InputDomainError("gmm state buffers do not match dimensions");
    GmmModelGrid grid;
    grid.width_ = width;
    grid.height_ = height;
    grid.params_ = params;
    grid.counts_ = std::move(counts);
    grid.comps_ = std::move(comps);
    return grid;
}

bool GmmModelGrid::operator==(const GmmModelGrid& o) const {
    return width_ == o.width_ && height_ == o.height_ && params_ == o.params_ &&
           counts_ == o.counts_ && comps_ == o.comps_;
}

// One Stauffer-Grimson style step for a single pixel. Returns true when the
// pixel is background. comps_[pixel*k_max ...] holds the live components in
// fitness order on entry and on exit.
bool GmmModelGrid::update_pixel(std::size_t pixel, double x) {
    const std::size_t base = pixel * static_cast<std::size_t>(params_.k_max);
    GmmComponent* comps = comps_.data() + base;
    int count = counts_[pixel];

    // (a) first component, in fitness order, within match_k sigmas
    int matched = -1;
    for (int i = 0; i < count; ++i) {
        if (std::abs(x - comps[i].mu) <= params_.match_k * std::sqrt(comps[i].var)) {
            matched = i;
            break;
        }
    }

    if (matched >= 0) {
        // (b) decay all weights, reward the match, adapt its mean/variance
        for (int i = 0; i < count; ++i)
            comps[i].w *= 1.0 - params_.alpha;
        comps[matched].w += params_.alpha;
        const double rho = params_.alpha;
        GmmComponent& m = comps[matched];
        m.mu = (1.0 - rho) * m.mu + rho * x;
        const double d = x - m.mu;
        m.var = std::max((1.0 - rho) * m.var + rho * d * d, params_.var_floor);
    } else {
        // (c) replace the weakest component, or append below capacity
        const int slot = count < params_.k_max ? count : count - 1;
        comps[slot] = {params_.w_init, x, params_.var_init};
        if (count < params_.k_max)
            counts_[pixel] = static_cast<std::uint8_t>(++count);
        double sum = 0.0;
        for (int i = 0; i < count; ++i) sum += comps[i].w;
        for (int i = 0; i < count; ++i) comps[i].w /= sum;
    }

    // (d) stable insertion sort by fitness, descending, tracking the match
    for (int i = 1; i < count; ++i) {
        const GmmComponent key = comps[i];
        const double key_fit = key.fitness();
        const bool key_matched = matched == i;
        int j = i - 1;
        while (j >= 0 && comps[j].fitness() < key_fit) {
            comps[j + 1] = comps[j];
            if (matched == j) matched = j + 1;
            --j;
        }
        comps[j + 1] = key;
        if (key_matched) matched = j + 1;
    }

    // (e) background prefix: minimal B with cumulative weight > T
    double cum = 0.0;
    int prefix = count;
    for (int i = 0; i < count; ++i) {
        cum += comps[i].w;
        if (cum > params_.background_portion) {
            prefix = i + 1;
            break;
        }
    }
    return matched >= 0 && matched < prefix;
}

BinaryMask GmmModelGrid::update_and_classify(const ValuePlane& plane) {
    if (plane.width() != width_ || plane.height() != height_)
        throw ShapeError("gmm update: plane does not match model dimensions");
    BinaryMask mask(width_, height_);
    for (std::size_t i = 0; i < plane.pixel_count(); ++i)
        mask.put(i, !update_pixel(i, plane[i]));
    return mask;
}

GmmModelGrid gmm_init(const ValuePlane& plane, const GmmParams& params) {
    return GmmModelGrid(plane, params);
}

BinaryMask gmm_update_and_classify(GmmModelGrid& models, const ValuePlane& plane) {
    return models.update_and_classify(plane);
}

// ---------------------------------------------------------------------------
// Dispatch

BackgroundModelKind kind_of(const BackgroundModel& model) {
    if (std::holds_alternative<FrameDiffModel>(model)) return BackgroundModelKind::FrameDiff;
    if (std::holds_alternative<SingleGaussianModel>(model)) return BackgroundModelKind::SingleGaussian;
    return BackgroundModelKind::Gmm;
}

BinaryMask model_classify(BackgroundModelKind kind, BackgroundModel& state, const ValuePlane& plane) {
    if (kind_of(state) != kind)
        throw ConfigError(std::string("model_classify: state holds a ") + to_string(kind_of(state)) +
                          " model but kind is " + to_string(kind));
    switch (kind) {
    case BackgroundModelKind::FrameDiff:
        return frame_diff_classify(std::get<FrameDiffModel>(state), plane);
    case BackgroundModelKind::SingleGaussian:
        return single_gaussian_classify(std::get<SingleGaussianModel>(state), plane);
    case BackgroundModelKind::Gmm:
        return std::get<GmmModelGrid>(state).update_and_classify(plane);
    }
    throw ConfigError("model_classify: unknown kind");
}

bool operator==(const GmmParams& a, const GmmParams& b) {
    return a.k_max == b.k_max && a.alpha == b.alpha &&
           a.background_portion == b.background_portion && a.match_k == b.match_k &&
           a.var_init == b.var_init && a.var_floor == b.var_floor && a.w_init == b.w_init;
}

bool operator==(const GmmComponent& a, const GmmComponent& b) {
    return a.w == b.w && a.mu == b.mu && a.var == b.var;
}

bool operator==(const FrameDiffModel& a, const FrameDiffModel& b) {
    return a.tau == b.tau && a.reference == b.reference;
}

bool operator==(const GaussianPixel& a, const GaussianPixel& b) {
    return a.mu == b.mu && a.var == b.var;
}

bool operator==(const SingleGaussianModel& a, const SingleGaussianModel& b) {
    return a.width == b.width && a.height == b.height && a.k_sigma == b.k_sigma &&
           a.var_floor == b.var_floor && a.pixels == b.pixels;
}

} // namespace silex
