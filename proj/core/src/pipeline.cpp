#include "silex/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <utility>

#include <fnmatch.h>

#include "silex/colorspace.hpp"
#include "silex/errors.hpp"
#include "silex/image_io.hpp"

namespace silex {

namespace {

bool has_frame_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".ppm";
}

ValuePlane decode_value_plane(const std::filesystem::path& file, int width, int height) {
    const RgbFrame frame = read_image(file);
    if (frame.width() != width || frame.height() != height) {
        throw ShapeError("'" + file.string() + "' is " + std::to_string(frame.width()) + "x" +
                         std::to_string(frame.height()) + ", sequence is " +
                         std::to_string(width) + "x" + std::to_string(height));
    }
    return value_plane(frame_to_hsv(frame));
}

std::string mask_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "mask_%06d.png", index);
    return buf;
}

} // namespace

void PipelineConfig::validate() const {
    if (!(tau > 0.0) || !(tau < 1.0)) throw ConfigError("tau must be in (0,1)");
    if (!(k_sigma > 0.0)) throw ConfigError("k_sigma must be > 0");
    if (!(var_floor > 0.0)) throw ConfigError("var_floor must be > 0");
    gmm.validate();
    if (train_frames && *train_frames < 0) throw ConfigError("train_frames must be >= 0");
    if (reference_frame < 0) throw ConfigError("reference_frame must be >= 0");
    if (se_radius < 1) throw ConfigError("se_radius must be >= 1");
}

int resolved_train_frames(const PipelineConfig& config, int sequence_length) {
    int t;
    if (config.train_frames) {
        t = *config.train_frames;
    } else {
        switch (config.approach) {
        case BackgroundModelKind::FrameDiff: t = config.reference_image.empty() ? 1 : 0; break;
        case BackgroundModelKind::SingleGaussian: t = 20; break;
        case BackgroundModelKind::Gmm: t = 0; break;
        default: t = 0; break;
        }
    }
    if (t >= sequence_length && config.approach != BackgroundModelKind::Gmm) {
        throw ConfigError("train_frames " + std::to_string(t) + " >= sequence length " +
                          std::to_string(sequence_length) + ": nothing left to classify");
    }
    if (config.approach == BackgroundModelKind::Gmm && t >= sequence_length) {
        throw ConfigError("train_frames " + std::to_string(t) + " >= sequence length " +
                          std::to_string(sequence_length) + ": no masks would be emitted");
    }
    return t;
}

FrameSequence load_sequence(const std::filesystem::path& dir, const std::string& pattern) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw IoError("input directory '" + dir.string() + "' does not exist");

    FrameSequence seq;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        const std::filesystem::path& p = entry.path();
        if (!has_frame_extension(p)) continue;
        if (fnmatch(pattern.c_str(), p.filename().string().c_str(), 0) != 0) continue;
        seq.files.push_back(p);
    }
    if (ec) throw IoError("cannot list '" + dir.string() + "': " + ec.message());
    if (seq.files.empty()) {
        throw InsufficientDataError("no frames matching '" + pattern + "' in '" + dir.string() +
                                    "'");
    }
    std::sort(seq.files.begin(), seq.files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

    for (const std::filesystem::path& f : seq.files) {
        const ImageInfo info = probe_image(f);
        if (seq.width == 0) {
            seq.width = info.width;
            seq.height = info.height;
        } else if (info.width != seq.width || info.height != seq.height) {
            throw ShapeError("'" + f.string() + "' is " + std::to_string(info.width) + "x" +
                             std::to_string(info.height) + " but the sequence started at " +
                             std::to_string(seq.width) + "x" + std::to_string(seq.height));
        }
    }
    return seq;
}

ExtractionResult run_pipeline(const FrameSequence& seq, const PipelineConfig& config) {
    std::optional<BackgroundModel> no_resume;
    return run_pipeline(seq, config, no_resume);
}

ExtractionResult run_pipeline(const FrameSequence& seq, const PipelineConfig& config,
                              std::optional<BackgroundModel>& model) {
    config.validate();
    if (seq.files.empty()) throw InsufficientDataError("empty frame sequence");

    const int n = static_cast<int>(seq.size());
    const auto t_start = std::chrono::steady_clock::now();

    int train = 0;
    if (model) {
        // Resuming: the snapshot is the trained state; classify everything.
        const auto [mw, mh] = std::visit(
            [](const auto& m) -> std::pair<int, int> {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, FrameDiffModel>)
                    return {m.reference.width(), m.reference.height()};
                else if constexpr (std::is_same_v<T, SingleGaussianModel>)
                    return {m.width, m.height};
                else
                    return {m.width(), m.height()};
            },
            *model);
        if (mw != seq.width || mh != seq.height) {
            throw ShapeError("model snapshot is " + std::to_string(mw) + "x" + std::to_string(mh) +
                             " but the sequence is " + std::to_string(seq.width) + "x" +
                             std::to_string(seq.height));
        }
        if (kind_of(*model) != config.approach) {
            throw ConfigError(std::string("model snapshot holds a ") + to_string(kind_of(*model)) +
                              " model but --approach is " + to_string(config.approach));
        }
    } else {
        train = resolved_train_frames(config, n);
        switch (config.approach) {
        case BackgroundModelKind::FrameDiff: {
            FrameDiffModel m;
            m.tau = config.tau;
            if (!config.reference_image.empty()) {
                const RgbFrame ref = read_image(config.reference_image);
                if (ref.width() != seq.width || ref.height() != seq.height) {
                    throw ShapeError("reference image '" + config.reference_image + "' is " +
                                     std::to_string(ref.width()) + "x" +
                                     std::to_string(ref.height()) + ", sequence is " +
                                     std::to_string(seq.width) + "x" +
                                     std::to_string(seq.height));
                }
                m.reference = value_plane(frame_to_hsv(ref));
            } else {
                if (config.reference_frame >= n) {
                    throw ConfigError("reference_frame " + std::to_string(config.reference_frame) +
                                      " >= sequence length " + std::to_string(n));
                }
                m.reference =
                    decode_value_plane(seq.files[static_cast<std::size_t>(config.reference_frame)],
                                       seq.width, seq.height);
            }
            model = std::move(m);
            break;
        }
        case BackgroundModelKind::SingleGaussian: {
            std::vector<ValuePlane> planes;
            planes.reserve(static_cast<std::size_t>(train));
            for (int t = 0; t < train; ++t)
                planes.push_back(
                    decode_value_plane(seq.files[static_cast<std::size_t>(t)], seq.width, seq.height));
            SingleGaussianModel m = single_gaussian_train(planes, config.k_sigma, config.var_floor);
            model = std::move(m);
            break;
        }
        case BackgroundModelKind::Gmm: {
            // No separate phase: seed one component per pixel from frame 0,
            // then update online over every frame (frame 0 included).
            model = GmmModelGrid(decode_value_plane(seq.files[0], seq.width, seq.height),
                                 config.gmm);
            break;
        }
        }
    }

    ExtractionResult out;
    out.width = seq.width;
    out.height = seq.height;
    const StructuringElement se{config.se_shape, config.se_radius};
    const bool online = config.approach == BackgroundModelKind::Gmm;

    for (int t = 0; t < n; ++t) {
        if (!online && t < train) {
            ++out.frames_processed; // consumed during training above
            continue;
        }
        const ValuePlane plane =
            decode_value_plane(seq.files[static_cast<std::size_t>(t)], seq.width, seq.height);
        BinaryMask raw = model_classify(config.approach, *model, plane);
        ++out.frames_processed;
        if (t < train) continue; // gmm warm-up: model updated, mask dropped
        out.masks.push_back(clean(raw, se, config.clean_order));
        out.raw_masks.push_back(std::move(raw));
        out.frame_indices.push_back(t);
    }

    const auto t_end = std::chrono::steady_clock::now();
    out.total_ms = std::chrono::duration<double, std::milli>(t_end - t_start).count();
    out.ms_per_frame = out.frames_processed > 0 ? out.total_ms / out.frames_processed : 0.0;
    return out;
}

int write_masks(const ExtractionResult& result, const std::filesystem::path& dir, bool emit_raw) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    if (emit_raw) {
        std::filesystem::create_directories(dir / "raw", ec);
        if (ec) throw IoError("cannot create '" + (dir / "raw").string() + "': " + ec.message());
    }

    int written = 0;
    for (std::size_t i = 0; i < result.masks.size(); ++i) {
        const std::string name = mask_name(result.frame_indices[i]);
        write_mask_png(dir / name, result.masks[i]);
        ++written;
        if (emit_raw) {
            write_mask_png(dir / "raw" / name, result.raw_masks[i]);
            ++written;
        }
    }
    return written;
}

} // namespace silex
