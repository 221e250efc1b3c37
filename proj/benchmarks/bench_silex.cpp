// Microbenchmarks for the per-frame hot paths at a typical 320x240 frame.

#include <benchmark/benchmark.h>

#include <silex/bgmodel.hpp>
#include <silex/colorspace.hpp>
#include <silex/morphology.hpp>
#include <silex/synth.hpp>

namespace {

constexpr int kWidth = 320;
constexpr int kHeight = 240;

silex::SceneSpec bench_scene() {
    silex::SceneSpec spec;
    spec.width = kWidth;
    spec.height = kHeight;
    spec.frame_count = 8;
    spec.seed = 42;
    spec.noise_sigma = 0.01;
    silex::MoverSpec mover;
    mover.x = 30;
    mover.y = 100;
    mover.width = 12;
    mover.height = 28;
    mover.vx = 2.0;
    mover.color = {204, 204, 204};
    spec.mover = mover;
    return spec;
}

void BM_FrameToHsv(benchmark::State& state) {
    const silex::RgbFrame frame = silex::render_frame(bench_scene(), 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(silex::frame_to_hsv(frame));
    }
    state.SetItemsProcessed(state.iterations() * frame.pixel_count());
}

void BM_FrameDiffClassify(benchmark::State& state) {
    const silex::SceneSpec spec = bench_scene();
    silex::FrameDiffModel model{silex::value_plane(silex::frame_to_hsv(silex::render_background(spec))),
                                silex::kDefaultTau};
    const silex::ValuePlane plane = silex::value_plane(silex::frame_to_hsv(silex::render_frame(spec, 3)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(silex::frame_diff_classify(model, plane));
    }
    state.SetItemsProcessed(state.iterations() * plane.pixel_count());
}

void BM_GmmUpdate(benchmark::State& state) {
    const silex::SceneSpec spec = bench_scene();
    std::vector<silex::ValuePlane> planes;
    for (int t = 0; t < spec.frame_count; ++t)
        planes.push_back(silex::value_plane(silex::frame_to_hsv(silex::render_frame(spec, t))));
    silex::GmmModelGrid grid = silex::gmm_init(planes[0], silex::GmmParams{});
    int t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid.update_and_classify(planes[t]));
        t = (t + 1) % spec.frame_count;
    }
    state.SetItemsProcessed(state.iterations() * planes[0].pixel_count());
}

void BM_Clean(benchmark::State& state) {
    const silex::SceneSpec spec = bench_scene();
    silex::FrameDiffModel model{silex::value_plane(silex::frame_to_hsv(silex::render_background(spec))),
                                silex::kDefaultTau};
    const silex::BinaryMask raw =
        silex::frame_diff_classify(model, silex::value_plane(silex::frame_to_hsv(silex::render_frame(spec, 3))));
    const silex::StructuringElement se = silex::StructuringElement::square(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(silex::clean(raw, se, silex::CleanOrder::OpenClose));
    }
    state.SetItemsProcessed(state.iterations() * raw.pixel_count());
}

} // namespace

BENCHMARK(BM_FrameToHsv);
BENCHMARK(BM_FrameDiffClassify);
BENCHMARK(BM_GmmUpdate);
BENCHMARK(BM_Clean);

BENCHMARK_MAIN();
