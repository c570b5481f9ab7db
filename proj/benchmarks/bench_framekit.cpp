#include "framekit/perturbation.hpp"
#include "framekit/random.hpp"
#include "framekit/scenarios.hpp"
#include "framekit/serialization.hpp"
#include "framekit/theorems.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace framekit;

void BM_FrameBounds(benchmark::State& state) {
  Rng rng(1);
  const auto dim = static_cast<Index>(state.range(0));
  const auto fam = random_frame<double>(rng, dim, 12);
  for (auto _ : state) benchmark::DoNotOptimize(frame_bounds(fam));
}
BENCHMARK(BM_FrameBounds)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Reconstruct(benchmark::State& state) {
  Rng rng(2);
  const auto dim = static_cast<Index>(state.range(0));
  const auto fam = random_frame<double>(rng, dim, 3 * static_cast<std::size_t>(dim));
  const Vector<double> f = random_gaussian_vector<double>(rng, dim);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(fam, f));
}
BENCHMARK(BM_Reconstruct)->Arg(8)->Arg(32)->Arg(64);

void BM_Discretize(benchmark::State& state) {
  const auto spec = scenario_spec("rotating_line", static_cast<std::size_t>(state.range(0)),
                                  QuadratureRule::gauss_legendre);
  for (auto _ : state) benchmark::DoNotOptimize(frame_bounds(discretize_family(spec)));
}
BENCHMARK(BM_Discretize)->Arg(16)->Arg(64)->Arg(256);

void BM_VerifyResolution(benchmark::State& state) {
  Rng rng(3);
  const auto fam = random_raw_resolution<double>(rng, static_cast<Index>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(verify_resolution(fam));
}
BENCHMARK(BM_VerifyResolution)->Arg(4)->Arg(16);

void BM_InducedFrame(benchmark::State& state) {
  Rng rng(4);
  const auto fam = random_weighted_resolution<double>(rng, static_cast<Index>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(verify_induced_frame(fam));
}
BENCHMARK(BM_InducedFrame)->Arg(4)->Arg(16);

// Exhaustive subset enumeration grows as 2^|X|.
void BM_SubsetCheck(benchmark::State& state) {
  Rng rng(5);
  const auto atoms = static_cast<std::size_t>(state.range(0));
  const auto base = random_raw_resolution<double>(rng, 4, atoms);
  const auto sc = scalar_perturbation(base, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(build_perturbation_operator(sc.base, sc.perturbed, sc.lambda));
}
BENCHMARK(BM_SubsetCheck)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_PointwiseProbe(benchmark::State& state) {
  Rng rng(6);
  const auto sc = random_perturbation<double>(rng, static_cast<Index>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(check_perturbation(sc.base, sc.perturbed, sc.params));
}
BENCHMARK(BM_PointwiseProbe)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SerializeRoundTrip(benchmark::State& state) {
  Rng rng(7);
  const auto fam = random_raw_resolution<double>(rng, 8, 12);
  for (auto _ : state) {
    const std::string text = io::dump(io::to_json(fam));
    benchmark::DoNotOptimize(io::resolution_from_json<double>(io::parse(text)));
  }
}
BENCHMARK(BM_SerializeRoundTrip);

}  // namespace

BENCHMARK_MAIN();
