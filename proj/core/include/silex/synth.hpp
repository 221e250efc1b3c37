#pragma once

// Deterministic synthetic scenes: a fixed background, optional global
// illumination drift, per-pixel Gaussian noise, and one moving shape with
// an exact ground-truth mask per frame. Same spec + seed = same bytes on
// every platform (fixed SplitMix64 noise streams, no library RNG).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "silex/image.hpp"

namespace silex {

enum class BackgroundKind { Flat, HorizontalGradient };

struct BackgroundSpec {
    BackgroundKind kind = BackgroundKind::Flat;
    Rgb8 color{77, 77, 77};       // flat fill, or gradient color at x = 0
    Rgb8 right_color{77, 77, 77}; // gradient color at x = width-1
};

enum class IlluminationKind { None, Sinusoid, LinearDrift };

// Global additive brightness in value units (1.0 = full scale), applied to
// every background pixel but not to the mover.
struct IlluminationSpec {
    IlluminationKind kind = IlluminationKind::None;
    double amplitude = 0.0; // sinusoid peak, value units
    int period = 1;         // sinusoid period, frames
    double slope = 0.0;     // linear drift per frame, value units
};

enum class MoverShape { Rectangle, Ellipse };

struct MoverSpec {
    MoverShape shape = MoverShape::Rectangle;
    double x = 0.0; // footprint top-left at frame 0
    double y = 0.0;
    int width = 1;
    int height = 1;
    double vx = 0.0; // pixels per frame
    double vy = 0.0;
    Rgb8 color{204, 204, 204};
};

struct SceneSpec {
    int width = 320;
    int height = 240;
    int frame_count = 60;
    std::uint64_t seed = 1;
    BackgroundSpec background;
    IlluminationSpec illumination;
    double noise_sigma = 0.0; // additive Gaussian std, value units
    std::optional<MoverSpec> mover;
};

// Throws ConfigError naming the offending field. Checks ranges, that the
// mover footprint stays fully inside the frame for every frame (message
// mentions velocity and frame_count), and that illumination plus the noise
// support (exactly +-6 sigma, see gaussian_noise) can never push a pixel
// outside [0,255], so rendering never actually clamps.
void validate_scene(const SceneSpec& spec);

// SplitMix64 keyed by (seed, frame, pixel); uniform and Gaussian draws used
// by the renderer, exposed for tests.
std::uint64_t noise_key(std::uint64_t seed, int frame, std::uint64_t pixel);
// Irwin-Hall 12-uniform approximation: mean 0, variance 1, support [-6,6].
double gaussian_noise(std::uint64_t key);

// Frame t: background + illumination(t) + noise, mover painted last (mover
// pixels keep the noise but not the illumination). Assumes a validated spec.
RgbFrame render_frame(const SceneSpec& spec, int frame);

// The clean plate: background only, no illumination, noise, or mover.
RgbFrame render_background(const SceneSpec& spec);

// True iff the pixel center (x+0.5, y+0.5) lies inside the mover footprint
// at frame t. All-false when the spec has no mover.
BinaryMask truth_mask(const SceneSpec& spec, int frame);

struct GeneratedScene {
    std::filesystem::path frames_dir;
    std::filesystem::path truth_dir;
    std::filesystem::path spec_path;       // the spec echoed as JSON
    std::filesystem::path background_path; // clean plate, usable as --reference-image
    int frame_count = 0;
};

// Writes frames/frame_%06d.png, truth/mask_%06d.png, background.png and
// spec.json under out_dir. Validates first; creates directories as needed.
GeneratedScene generate_scene(const SceneSpec& spec, const std::filesystem::path& out_dir);

// Built-in specs: "walker-clean", "walker-drift", "static-scene".
// Throws ConfigError listing the valid names.
SceneSpec scene_preset(const std::string& name);
std::vector<std::string> scene_preset_names();

// JSON round-trip of SceneSpec (the spec.json format). Unknown keys are
// rejected with the key named.
std::string scene_to_json(const SceneSpec& spec);
SceneSpec scene_from_json(const std::string& text);
SceneSpec scene_from_json_file(const std::filesystem::path& path);

} // namespace silex
