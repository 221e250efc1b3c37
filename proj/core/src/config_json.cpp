#include <cstdio>

#include <json.hpp>

#include "silex/errors.hpp"
#include "silex/pipeline.hpp"

// JSON form of ExtractJob: pipeline fields, one key each, at the top level
// (approach, train_frames, tau, k_sigma, var_floor, gmm{...},
// reference_frame, reference_image, se_shape, se_radius, clean_order,
// emit_raw, output_dir) plus input_dir and pattern. Keys may be omitted;
// unknown keys are an error so typos cannot silently fall back to defaults.

namespace silex {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) { ok = true; break; }
        if (!ok) throw ConfigError("config: unknown key '" + where + item.key() + "'");
    }
}

} // namespace

ExtractJob job_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j,
                   {"approach", "train_frames", "tau", "k_sigma", "var_floor", "gmm",
                    "reference_frame", "reference_image", "se_shape", "se_radius", "clean_order",
                    "emit_raw", "output_dir", "input_dir", "pattern"},
                   "");

    ExtractJob job;
    PipelineConfig& c = job.pipeline;
    try {
        if (j.contains("approach"))
            c.approach = background_model_kind_from_string(j["approach"].get<std::string>());
        if (j.contains("train_frames") && !j["train_frames"].is_null())
            c.train_frames = j["train_frames"].get<int>();
        if (j.contains("tau")) c.tau = j["tau"].get<double>();
        if (j.contains("k_sigma")) c.k_sigma = j["k_sigma"].get<double>();
        if (j.contains("var_floor")) c.var_floor = j["var_floor"].get<double>();
        if (j.contains("gmm")) {
            const Json& g = j["gmm"];
            reject_unknown(g,
                           {"k_max", "alpha", "background_portion", "match_k", "var_init",
                            "var_floor", "w_init"},
                           "gmm.");
            if (g.contains("k_max")) c.gmm.k_max = g["k_max"].get<int>();
            if (g.contains("alpha")) {
                c.gmm.alpha = g["alpha"].get<double>();
                c.gmm.w_init = c.gmm.alpha; // tracks alpha unless given explicitly
            }
            if (g.contains("background_portion"))
                c.gmm.background_portion = g["background_portion"].get<double>();
            if (g.contains("match_k")) c.gmm.match_k = g["match_k"].get<double>();
            if (g.contains("var_init")) c.gmm.var_init = g["var_init"].get<double>();
            if (g.contains("var_floor")) c.gmm.var_floor = g["var_floor"].get<double>();
            if (g.contains("w_init")) c.gmm.w_init = g["w_init"].get<double>();
        }
        if (j.contains("reference_frame")) c.reference_frame = j["reference_frame"].get<int>();
        if (j.contains("reference_image"))
            c.reference_image = j["reference_image"].get<std::string>();
        if (j.contains("se_shape"))
            c.se_shape = se_shape_from_string(j["se_shape"].get<std::string>());
        if (j.contains("se_radius")) c.se_radius = j["se_radius"].get<int>();
        if (j.contains("clean_order"))
            c.clean_order = clean_order_from_string(j["clean_order"].get<std::string>());
        if (j.contains("emit_raw")) c.emit_raw = j["emit_raw"].get<bool>();
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("input_dir")) job.input_dir = j["input_dir"].get<std::string>();
        if (j.contains("pattern")) job.pattern = j["pattern"].get<std::string>();
    } catch (const Json::type_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return job;
}

ExtractJob job_from_json_file(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw IoError("cannot open config '" + path.string() + "'");
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
    std::fclose(f);
    return job_from_json(text);
}

std::string job_to_json(const ExtractJob& job) {
    const PipelineConfig& c = job.pipeline;
    Json j;
    j["approach"] = to_string(c.approach);
    if (c.train_frames) j["train_frames"] = *c.train_frames;
    else j["train_frames"] = nullptr;
    j["tau"] = c.tau;
    j["k_sigma"] = c.k_sigma;
    j["var_floor"] = c.var_floor;
    Json& g = j["gmm"];
    g["k_max"] = c.gmm.k_max;
    g["alpha"] = c.gmm.alpha;
    g["background_portion"] = c.gmm.background_portion;
    g["match_k"] = c.gmm.match_k;
    g["var_init"] = c.gmm.var_init;
    g["var_floor"] = c.gmm.var_floor;
    g["w_init"] = c.gmm.w_init;
    j["reference_frame"] = c.reference_frame;
    j["reference_image"] = c.reference_image;
    j["se_shape"] = to_string(c.se_shape);
    j["se_radius"] = c.se_radius;
    j["clean_order"] = to_string(c.clean_order);
    j["emit_raw"] = c.emit_raw;
    j["output_dir"] = c.output_dir;
    j["input_dir"] = job.input_dir;
    j["pattern"] = job.pattern;
    return j.dump(2) + "\n";
}

} // namespace silex
