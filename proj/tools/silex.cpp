// silex: silhouette extraction from fixed-camera frame sequences.
//
// Subcommands: extract (frames -> masks), eval (masks vs truth), histogram
// (H/S/V layer histograms of one frame), synth (generate a test scene).
// Exit codes: 0 ok, 1 config/usage, 2 I/O, 3 shape mismatch.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <silex/colorspace.hpp>
#include <silex/errors.hpp>
#include <silex/image_io.hpp>
#include <silex/metrics.hpp>
#include <silex/pipeline.hpp>
#include <silex/snapshot.hpp>
#include <silex/synth.hpp>

namespace fs = std::filesystem;

namespace {

struct ExtractArgs {
    std::string input;
    std::string out;
    std::string config;
    std::string approach;
    std::string pattern;
    int train_frames = 0;
    double tau = 0.0;
    double k_sigma = 0.0;
    double var_floor = 0.0;
    int gmm_k_max = 0;
    double gmm_alpha = 0.0;
    double gmm_background_portion = 0.0;
    double gmm_match_k = 0.0;
    double gmm_var_init = 0.0;
    double gmm_var_floor = 0.0;
    double gmm_w_init = 0.0;
    int reference_frame = 0;
    std::string reference_image;
    std::string se_shape;
    int se_radius = 0;
    std::string clean_order;
    bool emit_raw = false;
    std::string save_model;
    std::string load_model;
};

struct EvalArgs {
    std::string pred;
    std::string truth;
    int skip = 0;
    std::string csv;
    std::string json;
};

struct HistogramArgs {
    std::string frame;
    int bins = silex::kDefaultHistogramBins;
    std::string out_prefix = "histogram";
};

struct SynthArgs {
    std::string preset;
    std::string spec;
    std::string out;
    int width = 0;
    int height = 0;
    int frame_count = 0;
    std::uint64_t seed = 0;
    double noise_sigma = 0.0;
    std::string bg_color;
    std::string illumination;
    double amplitude = 0.0;
    int period = 0;
    double slope = 0.0;
    std::string mover;
    double mover_x = 0.0;
    double mover_y = 0.0;
    int mover_width = 0;
    int mover_height = 0;
    double mover_vx = 0.0;
    double mover_vy = 0.0;
    std::string mover_color;
};

silex::Rgb8 parse_color(const std::string& text, const std::string& flag) {
    int r, g, b;
    char tail;
    if (std::sscanf(text.c_str(), "%d,%d,%d%c", &r, &g, &b, &tail) != 3 || r < 0 || r > 255 ||
        g < 0 || g > 255 || b < 0 || b > 255)
        throw silex::ConfigError(flag + " expects r,g,b with each value in [0,255]");
    return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
            static_cast<std::uint8_t>(b)};
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw silex::IoError("cannot write '" + path.string() + "'");
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    std::fclose(f);
    if (!ok) throw silex::IoError("short write to '" + path.string() + "'");
}

// Trailing digits of the stem ("mask_000042" -> 42), or nullopt.
std::optional<int> filename_index(const fs::path& p) {
    const std::string stem = p.stem().string();
    std::size_t end = stem.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
    if (end == stem.size()) return std::nullopt;
    try {
        return std::stoi(stem.substr(end));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::map<int, fs::path> index_masks(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw silex::IoError("mask directory '" + dir.string() + "' does not exist");
    std::map<int, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".png") continue;
        const auto idx = filename_index(entry.path());
        if (!idx) continue;
        out[*idx] = entry.path();
    }
    if (ec) throw silex::IoError("cannot list '" + dir.string() + "': " + ec.message());
    if (out.empty())
        throw silex::InsufficientDataError("no indexed .png masks in '" + dir.string() + "'");
    return out;
}

int cmd_extract(const ExtractArgs& a, const CLI::App* cmd, int verbosity) {
    silex::ExtractJob job;
    if (!a.config.empty()) job = silex::job_from_json_file(a.config);

    // Flags the user actually passed beat the config file.
    if (cmd->count("--input")) job.input_dir = a.input;
    if (cmd->count("--out")) job.pipeline.output_dir = a.out;
    if (cmd->count("--approach"))
        job.pipeline.approach = silex::background_model_kind_from_string(a.approach);
    if (cmd->count("--pattern")) job.pattern = a.pattern;
    if (cmd->count("--train-frames")) job.pipeline.train_frames = a.train_frames;
    if (cmd->count("--tau")) job.pipeline.tau = a.tau;
    if (cmd->count("--k-sigma")) job.pipeline.k_sigma = a.k_sigma;
    if (cmd->count("--var-floor")) job.pipeline.var_floor = a.var_floor;
    if (cmd->count("--gmm-k-max")) job.pipeline.gmm.k_max = a.gmm_k_max;
    if (cmd->count("--gmm-alpha")) {
        job.pipeline.gmm.alpha = a.gmm_alpha;
        if (!cmd->count("--gmm-w-init")) job.pipeline.gmm.w_init = a.gmm_alpha;
    }
    if (cmd->count("--gmm-background-portion"))
        job.pipeline.gmm.background_portion = a.gmm_background_portion;
    if (cmd->count("--gmm-match-k")) job.pipeline.gmm.match_k = a.gmm_match_k;
    if (cmd->count("--gmm-var-init")) job.pipeline.gmm.var_init = a.gmm_var_init;
    if (cmd->count("--gmm-var-floor")) job.pipeline.gmm.var_floor = a.gmm_var_floor;
    if (cmd->count("--gmm-w-init")) job.pipeline.gmm.w_init = a.gmm_w_init;
    if (cmd->count("--reference-frame")) job.pipeline.reference_frame = a.reference_frame;
    if (cmd->count("--reference-image")) job.pipeline.reference_image = a.reference_image;
    if (cmd->count("--se-shape")) job.pipeline.se_shape = silex::se_shape_from_string(a.se_shape);
    if (cmd->count("--se-radius")) job.pipeline.se_radius = a.se_radius;
    if (cmd->count("--clean-order"))
        job.pipeline.clean_order = silex::clean_order_from_string(a.clean_order);
    if (cmd->count("--emit-raw")) job.pipeline.emit_raw = true;

    if (job.input_dir.empty())
        throw silex::ConfigError("no input directory (use --input or input_dir in the config)");

    if (verbosity >= 1)
        std::cout << "CONFIG " << nlohmann::json::parse(silex::job_to_json(job)).dump() << "\n";

    const silex::FrameSequence seq = silex::load_sequence(job.input_dir, job.pattern);

    std::optional<silex::BackgroundModel> model;
    if (!a.load_model.empty()) model = silex::load_model(a.load_model);
    const silex::ExtractionResult result = silex::run_pipeline(seq, job.pipeline, model);
    if (!a.save_model.empty()) silex::save_model(a.save_model, *model);

    const int files = silex::write_masks(result, job.pipeline.output_dir, job.pipeline.emit_raw);
    const double fps =
        result.ms_per_frame > 0.0 ? 1000.0 / result.ms_per_frame : 0.0;
    if (verbosity >= 1) {
        std::cout << "processed " << result.frames_processed << " frames at " << result.ms_per_frame
                  << " ms/frame, wrote " << files << " files\n";
    }
    std::printf("RESULT extract approach=%s frames=%d masks=%zu width=%d height=%d "
                "ms_per_frame=%.3f fps=%.1f out=%s\n",
                silex::to_string(job.pipeline.approach), result.frames_processed,
                result.masks.size(), result.width, result.height, result.ms_per_frame, fps,
                job.pipeline.output_dir.c_str());
    return 0;
}

int cmd_eval(const EvalArgs& a, int verbosity) {
    const std::map<int, fs::path> preds = index_masks(a.pred);
    const std::map<int, fs::path> truths = index_masks(a.truth);

    // Evaluate the contiguous index range both directories cover.
    const int lo = std::max(preds.begin()->first, truths.begin()->first);
    const int hi = std::min(preds.rbegin()->first, truths.rbegin()->first);
    if (lo > hi)
        throw silex::InputDomainError("mask index ranges do not overlap: pred " +
                                      std::to_string(preds.begin()->first) + ".." +
                                      std::to_string(preds.rbegin()->first) + ", truth " +
                                      std::to_string(truths.begin()->first) + ".." +
                                      std::to_string(truths.rbegin()->first));

    std::vector<silex::BinaryMask> pred_masks, truth_masks;
    for (int i = lo; i <= hi; ++i) {
        const auto p = preds.find(i);
        if (p == preds.end())
            throw silex::InputDomainError("no prediction for frame index " + std::to_string(i) +
                                          " in '" + a.pred + "'");
        const auto t = truths.find(i);
        if (t == truths.end())
            throw silex::InputDomainError("no truth mask for frame index " + std::to_string(i) +
                                          " in '" + a.truth + "'");
        pred_masks.push_back(silex::read_mask_png(p->second));
        truth_masks.push_back(silex::read_mask_png(t->second));
    }
    if (verbosity >= 1)
        std::cout << "CONFIG {\"pred\":\"" << a.pred << "\",\"truth\":\"" << a.truth
                  << "\",\"skip\":" << a.skip << ",\"range\":[" << lo << "," << hi << "]}\n";

    const silex::ErrorReport report =
        silex::evaluate_sequence(pred_masks, truth_masks, a.skip, lo);

    if (!a.csv.empty()) write_text_file(a.csv, silex::report_to_csv(report));
    if (!a.json.empty()) write_text_file(a.json, silex::report_to_json(report));

    std::printf("RESULT eval frames=%d skipped=%d mean_error_pct=%.6f mean_precision=%.6f "
                "mean_recall=%.6f mean_f1=%.6f\n",
                report.frames_evaluated, report.skipped, report.mean_error_pct,
                report.mean_precision, report.mean_recall, report.mean_f1);
    return 0;
}

int cmd_histogram(const HistogramArgs& a) {
    const silex::RgbFrame frame = silex::read_image(a.frame);
    const silex::HsvFrame hsv = silex::frame_to_hsv(frame);

    std::size_t total = 0;
    for (const silex::HsvLayer layer :
         {silex::HsvLayer::Hue, silex::HsvLayer::Saturation, silex::HsvLayer::Value}) {
        const silex::LayerHistogram hist = silex::layer_histogram(hsv, layer, a.bins);
        total = hist.total();
        write_text_file(a.out_prefix + "_" + silex::to_string(layer) + ".csv",
                        silex::histogram_to_csv(hist));
    }
    std::printf("RESULT histogram frame=%s bins=%d pixels=%zu files=3 prefix=%s\n",
                a.frame.c_str(), a.bins, total, a.out_prefix.c_str());
    return 0;
}

int cmd_synth(const SynthArgs& a, const CLI::App* cmd) {
    silex::SceneSpec spec;
    if (!a.preset.empty()) spec = silex::scene_preset(a.preset);
    else if (!a.spec.empty()) spec = silex::scene_from_json_file(a.spec);

    if (cmd->count("--width")) spec.width = a.width;
    if (cmd->count("--height")) spec.height = a.height;
    if (cmd->count("--frame-count")) spec.frame_count = a.frame_count;
    if (cmd->count("--seed")) spec.seed = a.seed;
    if (cmd->count("--noise-sigma")) spec.noise_sigma = a.noise_sigma;
    if (cmd->count("--bg-color")) {
        spec.background.kind = silex::BackgroundKind::Flat;
        spec.background.color = parse_color(a.bg_color, "--bg-color");
        spec.background.right_color = spec.background.color;
    }
    if (cmd->count("--illumination")) {
        if (a.illumination == "none") spec.illumination.kind = silex::IlluminationKind::None;
        else if (a.illumination == "sinusoid")
            spec.illumination.kind = silex::IlluminationKind::Sinusoid;
        else if (a.illumination == "linear_drift")
            spec.illumination.kind = silex::IlluminationKind::LinearDrift;
        else
            throw silex::ConfigError("unknown illumination '" + a.illumination +
                                     "' (valid: none, sinusoid, linear_drift)");
    }
    if (cmd->count("--amplitude")) spec.illumination.amplitude = a.amplitude;
    if (cmd->count("--period")) spec.illumination.period = a.period;
    if (cmd->count("--slope")) spec.illumination.slope = a.slope;
    if (cmd->count("--mover")) {
        if (a.mover == "none") {
            spec.mover.reset();
        } else {
            if (!spec.mover) spec.mover = silex::MoverSpec{};
            if (a.mover == "rectangle") spec.mover->shape = silex::MoverShape::Rectangle;
            else if (a.mover == "ellipse") spec.mover->shape = silex::MoverShape::Ellipse;
            else
                throw silex::ConfigError("unknown mover '" + a.mover +
                                         "' (valid: rectangle, ellipse, none)");
        }
    }
    if (spec.mover) {
        if (cmd->count("--mover-x")) spec.mover->x = a.mover_x;
        if (cmd->count("--mover-y")) spec.mover->y = a.mover_y;
        if (cmd->count("--mover-width")) spec.mover->width = a.mover_width;
        if (cmd->count("--mover-height")) spec.mover->height = a.mover_height;
        if (cmd->count("--mover-vx")) spec.mover->vx = a.mover_vx;
        if (cmd->count("--mover-vy")) spec.mover->vy = a.mover_vy;
        if (cmd->count("--mover-color"))
            spec.mover->color = parse_color(a.mover_color, "--mover-color");
    }

    const silex::GeneratedScene scene = silex::generate_scene(spec, a.out);
    std::printf("RESULT synth frames=%d width=%d height=%d seed=%llu out=%s\n", scene.frame_count,
                spec.width, spec.height, static_cast<unsigned long long>(spec.seed),
                a.out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"moving-silhouette extraction from fixed-camera frame sequences"};
    app.require_subcommand(1);
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "increase verbosity (repeatable)");

    ExtractArgs ea;
    CLI::App* extract = app.add_subcommand("extract", "segment silhouettes from a frame sequence");
    extract->add_option("-i,--input", ea.input, "directory of input frames (png/ppm)");
    extract->add_option("-o,--out", ea.out, "output mask directory");
    extract->add_option("-c,--config", ea.config, "JSON config file");
    extract->add_option("--approach", ea.approach, "framediff, gaussian, or gmm");
    extract->add_option("--pattern", ea.pattern, "filename glob filter, default *");
    extract->add_option("--train-frames", ea.train_frames, "frames consumed before masks are emitted");
    extract->add_option("--tau", ea.tau, "framediff threshold in (0,1)");
    extract->add_option("--k-sigma", ea.k_sigma, "gaussian threshold in sigma units");
    extract->add_option("--var-floor", ea.var_floor, "gaussian variance floor");
    extract->add_option("--gmm-k-max", ea.gmm_k_max, "mixture components per pixel");
    extract->add_option("--gmm-alpha", ea.gmm_alpha, "mixture learning rate");
    extract->add_option("--gmm-background-portion", ea.gmm_background_portion,
                        "cumulative weight treated as background");
    extract->add_option("--gmm-match-k", ea.gmm_match_k, "match window in sigma units");
    extract->add_option("--gmm-var-init", ea.gmm_var_init, "variance of fresh components");
    extract->add_option("--gmm-var-floor", ea.gmm_var_floor, "mixture variance floor");
    extract->add_option("--gmm-w-init", ea.gmm_w_init, "weight of fresh components");
    extract->add_option("--reference-frame", ea.reference_frame,
                        "framediff: sequence index of the reference frame");
    extract->add_option("--reference-image", ea.reference_image,
                        "framediff: external reference image (beats --reference-frame)");
    extract->add_option("--se-shape", ea.se_shape, "square or cross");
    extract->add_option("--se-radius", ea.se_radius, "structuring element radius");
    extract->add_option("--clean-order", ea.clean_order,
                        "open_close, close_open, dilate_erode, erode_dilate");
    extract->add_flag("--emit-raw", ea.emit_raw, "also write pre-morphology masks to out/raw");
    extract->add_option("--save-model", ea.save_model, "write the final model state here");
    extract->add_option("--load-model", ea.load_model, "resume from a saved model state");

    EvalArgs va;
    CLI::App* eval = app.add_subcommand("eval", "score predicted masks against ground truth");
    eval->add_option("--pred", va.pred, "directory of predicted masks")->required();
    eval->add_option("--truth", va.truth, "directory of ground-truth masks")->required();
    eval->add_option("--skip", va.skip, "warm-up pairs to exclude, default 0");
    eval->add_option("--csv", va.csv, "write the per-frame report here");
    eval->add_option("--json", va.json, "write the JSON report here");

    HistogramArgs ha;
    CLI::App* histogram = app.add_subcommand("histogram", "H/S/V layer histograms of one frame");
    histogram->add_option("--frame", ha.frame, "image to analyze")->required();
    histogram->add_option("--bins", ha.bins, "bin count, default 256");
    histogram->add_option("--out-prefix", ha.out_prefix,
                          "output prefix, default histogram -> histogram_hue.csv etc.");

    SynthArgs sa;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic scene with ground truth");
    CLI::Option* preset_opt =
        synth->add_option("--preset", sa.preset, "walker-clean, walker-drift, or static-scene");
    synth->add_option("--spec", sa.spec, "scene spec JSON file")->excludes(preset_opt);
    synth->add_option("-o,--out", sa.out, "output directory")->required();
    synth->add_option("--width", sa.width, "frame width");
    synth->add_option("--height", sa.height, "frame height");
    synth->add_option("--frame-count", sa.frame_count, "number of frames");
    synth->add_option("--seed", sa.seed, "noise seed");
    synth->add_option("--noise-sigma", sa.noise_sigma, "pixel noise std in value units");
    synth->add_option("--bg-color", sa.bg_color, "flat background color r,g,b");
    synth->add_option("--illumination", sa.illumination, "none, sinusoid, or linear_drift");
    synth->add_option("--amplitude", sa.amplitude, "sinusoid amplitude in value units");
    synth->add_option("--period", sa.period, "sinusoid period in frames");
    synth->add_option("--slope", sa.slope, "linear drift per frame in value units");
    synth->add_option("--mover", sa.mover, "rectangle, ellipse, or none");
    synth->add_option("--mover-x", sa.mover_x, "mover x at frame 0");
    synth->add_option("--mover-y", sa.mover_y, "mover y at frame 0");
    synth->add_option("--mover-width", sa.mover_width, "mover width");
    synth->add_option("--mover-height", sa.mover_height, "mover height");
    synth->add_option("--mover-vx", sa.mover_vx, "mover x velocity, pixels/frame");
    synth->add_option("--mover-vy", sa.mover_vy, "mover y velocity, pixels/frame");
    synth->add_option("--mover-color", sa.mover_color, "mover fill color r,g,b");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1; // usage problems are config errors
    }

    try {
        if (extract->parsed()) return cmd_extract(ea, extract, verbosity);
        if (eval->parsed()) return cmd_eval(va, verbosity);
        if (histogram->parsed()) return cmd_histogram(ha);
        if (synth->parsed()) return cmd_synth(sa, synth);
        return 1;
    } catch (const silex::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const silex::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const silex::Error& e) {
        // ConfigError, InputDomainError, InsufficientDataError, StateError.
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
