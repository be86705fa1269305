#include <benchmark/benchmark.h>

#include "jcv/channel.hpp"
#include "jcv/physio.hpp"
#include "jcv/ranging.hpp"
#include "jcv/receiver.hpp"
#include "jcv/vitals.hpp"

using namespace jcv;

namespace {

Scene one_person(std::size_t frames) {
    Scene s;
    s.frame_rate_hz = 50.0;
    s.snr_db = 20.0;
    SceneTarget t;
    t.rest_range_m = 2.0;
    t.trace = synthesize_displacement(VitalParams{}, static_cast<double>(frames) / 50.0, 50.0, {}, 1);
    s.targets.push_back(t);
    return s;
}

void BM_BuildWaveform(benchmark::State& state) {
    WaveformSpec spec;
    for (auto _ : state) benchmark::DoNotOptimize(build_waveform(spec));
}
BENCHMARK(BM_BuildWaveform);

void BM_SimulateCapture(benchmark::State& state) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    const auto frames = static_cast<std::size_t>(state.range(0));
    const auto scene = one_person(frames);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_capture(scene, sym, spec, frames, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateCapture)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_EstimateChannel(benchmark::State& state) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    const auto frames = static_cast<std::size_t>(state.range(0));
    const auto cap = simulate_capture(one_person(frames), sym, spec, frames, 1);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_channel(cap, sym));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateChannel)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_DetectTargets(benchmark::State& state) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    const auto cap = simulate_capture(one_person(2000), sym, spec, 2000, 1);
    const auto profiles = to_range_profiles(estimate_channel(cap, sym), 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(detect_targets(profiles));
}
BENCHMARK(BM_DetectTargets)->Unit(benchmark::kMillisecond);

void BM_EstimateVitals(benchmark::State& state) {
    const auto trace = synthesize_displacement(VitalParams{}, 40.0, 50.0, {}, 1);
    std::vector<cd> s(trace.samples.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::polar(1.0, 4.0 * kPi * trace.samples[i] / WaveformSpec{}.wavelength_m());
    const auto track = phase_track(s, 50.0);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_vitals(track));
}
BENCHMARK(BM_EstimateVitals);

}  // namespace

BENCHMARK_MAIN();
