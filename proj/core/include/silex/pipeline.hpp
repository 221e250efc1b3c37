#pragma once

// End-to-end extraction: frame sequence -> HSV Value plane -> background
// model -> raw mask -> morphological clean -> silhouette masks on disk.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "silex/bgmodel.hpp"
#include "silex/image.hpp"
#include "silex/morphology.hpp"

namespace silex {

struct PipelineConfig {
    BackgroundModelKind approach = BackgroundModelKind::Gmm;

    // Frames consumed before masks are emitted. Unset = per-approach default:
    // frame_diff 1 (0 when reference_image is set), single_gaussian 20,
    // gmm 0 (it bootstraps online; masks start immediately, eval can skip a
    // warm-up instead). The gmm model still updates during the prefix.
    std::optional<int> train_frames;

    double tau = kDefaultTau;         // frame_diff threshold
    double k_sigma = kDefaultKSigma;  // single_gaussian multiplier
    double var_floor = kDefaultVarFloor;
    GmmParams gmm{};

    int reference_frame = 0;          // frame_diff: sequence index of the reference
    std::string reference_image;      // frame_diff: external clean plate; overrides reference_frame

    SeShape se_shape = SeShape::Square;
    int se_radius = 1;
    CleanOrder clean_order = CleanOrder::OpenClose;

    bool emit_raw = false;            // also write pre-morphology masks under raw/
    std::string output_dir = "masks";

    void validate() const; // throws ConfigError naming the field
};

// Resolved emission prefix for a sequence of `sequence_length` frames.
int resolved_train_frames(const PipelineConfig& config, int sequence_length);

struct FrameSequence {
    std::vector<std::filesystem::path> files; // lexicographic by filename
    int width = 0;
    int height = 0;

    std::size_t size() const { return files.size(); }
};

// Lists dir entries matching `pattern` (fnmatch on the filename) with a
// .png/.ppm extension, sorts them, and validates every header has the same
// dimensions. Missing dir -> IoError; no matches -> InsufficientDataError;
// mixed dimensions -> ShapeError naming the offender.
FrameSequence load_sequence(const std::filesystem::path& dir, const std::string& pattern = "*");

struct ExtractionResult {
    std::vector<BinaryMask> masks;     // post-morphology
    std::vector<BinaryMask> raw_masks; // pre-morphology, parallel to masks
    std::vector<int> frame_indices;    // source index of each mask
    int width = 0;
    int height = 0;
    int frames_processed = 0; // frames decoded, including the training prefix
    double total_ms = 0.0;
    double ms_per_frame = 0.0; // total_ms / frames_processed
};

ExtractionResult run_pipeline(const FrameSequence& seq, const PipelineConfig& config);

// Same, but with explicit model state: when `model` holds a value the run
// resumes from it (no training prefix, every frame classified) and must
// match the sequence dimensions; on return it holds the final state. Used
// by --load-model/--save-model.
ExtractionResult run_pipeline(const FrameSequence& seq, const PipelineConfig& config,
                              std::optional<BackgroundModel>& model);

// Writes masks[i] to dir/mask_%06d.png (index = frame_indices[i]) and, when
// emit_raw, raw_masks[i] to dir/raw/mask_%06d.png. Returns files written.
int write_masks(const ExtractionResult& result, const std::filesystem::path& dir,
                bool emit_raw = false);

// Everything an extract run needs: the pipeline settings plus where the
// frames come from. JSON configs mirror this, one key per field, with the
// pipeline fields at the top level.
struct ExtractJob {
    PipelineConfig pipeline;
    std::string input_dir;   // empty = must come from the command line
    std::string pattern = "*";
};

// Parses a JSON config. Unknown keys are rejected with the key named;
// malformed JSON or wrong types raise ConfigError.
ExtractJob job_from_json(const std::string& text);
ExtractJob job_from_json_file(const std::filesystem::path& path);
std::string job_to_json(const ExtractJob& job);

} // namespace silex
