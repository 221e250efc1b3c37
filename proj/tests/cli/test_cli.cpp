// Black-box checks of the silex binary: exit codes, RESULT lines, file
// outputs, determinism. The binary path arrives via SILEX_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SILEX_CLI_PATH) + " " + args + " 2>&1";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("silex-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// A 24x20, 5-frame noise-free walker; cheap and exactly recoverable.
std::string clean_scene_args(const fs::path& out, int seed = 9, int frames = 5) {
    std::ostringstream o;
    o << "synth -o " << out.string() << " --width 24 --height 20 --frame-count " << frames
      << " --seed " << seed
      << " --bg-color 70,70,70 --mover rectangle --mover-x 3 --mover-y 4"
      << " --mover-width 6 --mover-height 8 --mover-vx 2 --mover-vy 1 --mover-color 210,210,210";
    return o.str();
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("no subcommand is a usage error") {
    const RunResult r = run_cli("");
    CHECK(r.exit_code == 1);
}

TEST_CASE("synth writes a scene and reports it") {
    TempDir tmp;
    const RunResult r = run_cli(clean_scene_args(tmp.path() / "scene"));
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "RESULT synth frames=5 width=24 height=20 seed=9"));
    CHECK(fs::exists(tmp.path() / "scene/frames/frame_000004.png"));
    CHECK(fs::exists(tmp.path() / "scene/truth/mask_000004.png"));
    CHECK(fs::exists(tmp.path() / "scene/background.png"));
    CHECK(fs::exists(tmp.path() / "scene/spec.json"));
}

TEST_CASE("synth is byte-deterministic") {
    TempDir tmp;
    REQUIRE(run_cli(clean_scene_args(tmp.path() / "a") + " --noise-sigma 0.01").exit_code == 0);
    REQUIRE(run_cli(clean_scene_args(tmp.path() / "b") + " --noise-sigma 0.01").exit_code == 0);
    for (int t = 0; t < 5; ++t) {
        char name[32];
        std::snprintf(name, sizeof name, "frames/frame_%06d.png", t);
        CHECK(slurp(tmp.path() / "a" / name) == slurp(tmp.path() / "b" / name));
    }
    CHECK(slurp(tmp.path() / "a/spec.json") == slurp(tmp.path() / "b/spec.json"));
}

TEST_CASE("synth rejects a mover that leaves the frame") {
    TempDir tmp;
    const RunResult r = run_cli(clean_scene_args(tmp.path() / "scene", 9, 40));
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "velocity"));
    CHECK(contains(r.output, "frame_count"));
}

TEST_CASE("synth rejects junk colors and unknown presets") {
    TempDir tmp;
    const RunResult bad_color = run_cli("synth -o " + (tmp.path() / "x").string() +
                                        " --bg-color 300,0,0");
    CHECK(bad_color.exit_code == 1);
    CHECK(contains(bad_color.output, "--bg-color"));
    const RunResult bad_preset =
        run_cli("synth -o " + (tmp.path() / "y").string() + " --preset walker");
    CHECK(bad_preset.exit_code == 1);
    CHECK(contains(bad_preset.output, "walker-clean"));
}

TEST_CASE("extract recovers the clean walker and is deterministic") {
    TempDir tmp;
    const fs::path scene = tmp.path() / "scene";
    REQUIRE(run_cli(clean_scene_args(scene)).exit_code == 0);

    const std::string base = "extract -i " + (scene / "frames").string() +
                             " --approach framediff --reference-image " +
                             (scene / "background.png").string();
    const RunResult a = run_cli(base + " -o " + (tmp.path() / "m1").string());
    CAPTURE(a.output);
    CHECK(a.exit_code == 0);
    CHECK(contains(a.output, "RESULT extract approach=framediff frames=5 masks=5"));

    const RunResult b = run_cli(base + " -o " + (tmp.path() / "m2").string());
    REQUIRE(b.exit_code == 0);
    for (int t = 0; t < 5; ++t) {
        char name[32];
        std::snprintf(name, sizeof name, "mask_%06d.png", t);
        REQUIRE(fs::exists(tmp.path() / "m1" / name));
        CHECK(slurp(tmp.path() / "m1" / name) == slurp(tmp.path() / "m2" / name));
        // Perfect recovery: the emitted mask equals the generated truth.
        CHECK(slurp(tmp.path() / "m1" / name) == slurp(scene / "truth" / name));
    }
}

TEST_CASE("eval scores masks against truth") {
    TempDir tmp;
    const fs::path scene = tmp.path() / "scene";
    REQUIRE(run_cli(clean_scene_args(scene)).exit_code == 0);
    const fs::path masks = tmp.path() / "masks";
    REQUIRE(run_cli("extract -i " + (scene / "frames").string() +
                    " --approach framediff --reference-image " +
                    (scene / "background.png").string() + " -o " + masks.string())
                .exit_code == 0);

    SUBCASE("perfect masks score zero error") {
        const fs::path csv = tmp.path() / "report.csv";
        const fs::path json = tmp.path() / "report.json";
        const RunResult r = run_cli("eval --pred " + masks.string() + " --truth " +
                                    (scene / "truth").string() + " --csv " + csv.string() +
                                    " --json " + json.string());
        CAPTURE(r.output);
        CHECK(r.exit_code == 0);
        CHECK(contains(r.output,
                       "RESULT eval frames=5 skipped=0 mean_error_pct=0.000000"));
        CHECK(contains(slurp(csv), "frame_index,error_pct,precision,recall,f1"));
        CHECK(contains(slurp(csv), "# frames_evaluated=5 skipped=0"));
        CHECK(contains(slurp(json), "\"mean_error_pct\": 0.0"));
    }
    SUBCASE("--skip excludes leading pairs") {
        const RunResult r = run_cli("eval --pred " + masks.string() + " --truth " +
                                    (scene / "truth").string() + " --skip 3");
        CHECK(r.exit_code == 0);
        CHECK(contains(r.output, "RESULT eval frames=2 skipped=3"));
    }
    SUBCASE("a missing mask in the covered range is named") {
        fs::remove(masks / "mask_000002.png");
        const RunResult r = run_cli("eval --pred " + masks.string() + " --truth " +
                                    (scene / "truth").string());
        CHECK(r.exit_code == 1);
        CHECK(contains(r.output, "frame index 2"));
    }
}

TEST_CASE("histogram writes one csv per layer") {
    TempDir tmp;
    const fs::path scene = tmp.path() / "scene";
    REQUIRE(run_cli(clean_scene_args(scene)).exit_code == 0);
    const std::string prefix = (tmp.path() / "hist").string();

    const RunResult r = run_cli("histogram --frame " + (scene / "background.png").string() +
                                " --bins 4 --out-prefix " + prefix);
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "RESULT histogram"));
    CHECK(contains(r.output, "bins=4 pixels=480 files=3"));
    for (const char* layer : {"hue", "saturation", "value"})
        CHECK(fs::exists(prefix + "_" + layer + ".csv"));

    // A gray plate is all hue 0, saturation 0: everything lands in bin 0.
    const std::string hue = slurp(prefix + "_hue.csv");
    CHECK(contains(hue, "bin_start,bin_end,count"));
    CHECK(contains(hue, "0,90,480"));
    const std::string sat = slurp(prefix + "_saturation.csv");
    CHECK(contains(sat, "0,0.25,480"));
}

TEST_CASE("histogram rejects a zero bin count") {
    TempDir tmp;
    const fs::path scene = tmp.path() / "scene";
    REQUIRE(run_cli(clean_scene_args(scene)).exit_code == 0);
    const RunResult r = run_cli("histogram --frame " + (scene / "background.png").string() +
                                " --bins 0 --out-prefix " + (tmp.path() / "h").string());
    CHECK(r.exit_code == 1);
}

TEST_CASE("a missing input directory exits with the io code") {
    TempDir tmp;
    const RunResult r = run_cli("extract -i " + (tmp.path() / "nothing-here").string() + " -o " +
                                (tmp.path() / "out").string());
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "nothing-here"));
}

TEST_CASE("an unknown approach exits with the config code and lists valid names") {
    TempDir tmp;
    const RunResult r = run_cli("extract -i " + tmp.str() + " -o " + tmp.str() +
                                " --approach median");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "framediff"));
    CHECK(contains(r.output, "gmm"));
}

TEST_CASE("mixed frame sizes exit with the shape code") {
    TempDir tmp;
    const fs::path a = tmp.path() / "scene-a";
    const fs::path b = tmp.path() / "scene-b";
    REQUIRE(run_cli(clean_scene_args(a)).exit_code == 0);
    REQUIRE(run_cli("synth -o " + b.string() + " --width 30 --height 20 --frame-count 1 " +
                    "--bg-color 70,70,70")
                .exit_code == 0);
    const fs::path frames = tmp.path() / "frames";
    fs::create_directories(frames);
    fs::copy_file(a / "frames/frame_000000.png", frames / "frame_000000.png");
    fs::copy_file(b / "frames/frame_000000.png", frames / "frame_000001.png");
    const RunResult r =
        run_cli("extract -i " + frames.string() + " -o " + (tmp.path() / "out").string());
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "frame_000001.png"));
}

TEST_CASE("flags beat the config file which beats defaults") {
    TempDir tmp;
    const fs::path scene = tmp.path() / "scene";
    REQUIRE(run_cli(clean_scene_args(scene)).exit_code == 0);

    const fs::path cfg = tmp.path() / "job.json";
    std::ofstream(cfg) << "{\"approach\": \"framediff\", \"tau\": 0.3, \"input_dir\": \""
                       << (scene / "frames").string() << "\", \"reference_image\": \""
                       << (scene / "background.png").string() << "\"}";

    const std::string base = "-v extract -c " + cfg.string() + " -o ";
    const RunResult from_cfg = run_cli(base + (tmp.path() / "o1").string());
    CAPTURE(from_cfg.output);
    CHECK(from_cfg.exit_code == 0);
    CHECK(contains(from_cfg.output, "\"tau\":0.3"));

    const RunResult flagged = run_cli(base + (tmp.path() / "o2").string() + " --tau 0.25");
    CHECK(flagged.exit_code == 0);
    CHECK(contains(flagged.output, "\"tau\":0.25"));
}

TEST_CASE("unknown config keys are rejected by name") {
    TempDir tmp;
    const fs::path cfg = tmp.path() / "job.json";
    std::ofstream(cfg) << "{\"thau\": 0.3}";
    const RunResult r = run_cli("extract -c " + cfg.string() + " -i x -o y");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "thau"));
}

TEST_CASE("model snapshots save and resume through the cli") {
    TempDir tmp;
    const fs::path scene = tmp.path() / "scene";
    REQUIRE(run_cli(clean_scene_args(scene)).exit_code == 0);
    const fs::path model = tmp.path() / "state.slbm";

    const RunResult save = run_cli("extract -i " + (scene / "frames").string() +
                                   " --approach gmm -o " + (tmp.path() / "m1").string() +
                                   " --save-model " + model.string());
    CAPTURE(save.output);
    CHECK(save.exit_code == 0);
    REQUIRE(fs::exists(model));

    const RunResult resume = run_cli("extract -i " + (scene / "frames").string() +
                                     " --approach gmm -o " + (tmp.path() / "m2").string() +
                                     " --load-model " + model.string());
    CHECK(resume.exit_code == 0);

    const RunResult wrong_kind = run_cli("extract -i " + (scene / "frames").string() +
                                         " --approach gaussian --train-frames 2 -o " +
                                         (tmp.path() / "m3").string() + " --load-model " +
                                         model.string());
    CHECK(wrong_kind.exit_code == 1);
    CHECK(contains(wrong_kind.output, "gmm"));
}

TEST_SUITE_END();
