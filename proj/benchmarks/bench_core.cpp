#include <benchmark/benchmark.h>

#include "codazzi/calculus.hpp"
#include "codazzi/clifford.hpp"
#include "codazzi/deformation.hpp"
#include "codazzi/dirac.hpp"
#include "codazzi/trigpoly.hpp"

using namespace codazzi;

namespace {

TorusSpec square_torus(int n) {
  TorusSpec spec;
  spec.dim = 2;
  spec.lattice = Eigen::MatrixXd::Identity(2, 2);
  spec.spin_shift = Eigen::VectorXd::Zero(2);
  spec.spin_shift[0] = 0.5;
  spec.grid = {n, n};
  return spec;
}

CodazziField profile_beta(const TorusSpec& spec) {
  const TrigPoly b1 = parse_trig_poly("1 + 0.2*sin(1, 0)", 2);
  Eigen::VectorXd rest(1);
  rest << 1.5;
  return make_diagonal_profile_beta(spec, b1, rest);
}

}  // namespace

static void BM_SpectralPartial(benchmark::State& state) {
  const TorusSpec spec = square_torus(static_cast<int>(state.range(0)));
  const ScalarField f = parse_trig_poly("1 + 0.3*sin(2, 1)", 2).sample(spec);
  for (auto _ : state) {
    ScalarField df = spectral_partial(spec, f, 0);
    benchmark::DoNotOptimize(df);
  }
}
BENCHMARK(BM_SpectralPartial)->Arg(16)->Arg(32)->Arg(64);

static void BM_LambdaTensor(benchmark::State& state) {
  const TorusSpec spec = square_torus(static_cast<int>(state.range(0)));
  const CodazziField beta = profile_beta(spec);
  for (auto _ : state) {
    Tensor3Field lambda = lambda_tensor(spec, beta);
    benchmark::DoNotOptimize(lambda);
  }
}
BENCHMARK(BM_LambdaTensor)->Arg(16)->Arg(32);

static void BM_AssembleBetaDirac(benchmark::State& state) {
  const TorusSpec spec = square_torus(static_cast<int>(state.range(0)));
  const CodazziField beta = profile_beta(spec);
  const CliffordRep rep = build_clifford(2);
  for (auto _ : state) {
    DiracMatrix d = assemble_beta_dirac(spec, beta, rep);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_AssembleBetaDirac)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Spectrum(benchmark::State& state) {
  const TorusSpec spec = square_torus(static_cast<int>(state.range(0)));
  const CodazziField beta = profile_beta(spec);
  const CliffordRep rep = build_clifford(2);
  const DiracMatrix d = assemble_beta_dirac(spec, beta, rep);
  for (auto _ : state) {
    SpectrumResult sr = spectrum(d, 16);
    benchmark::DoNotOptimize(sr);
  }
}
BENCHMARK(BM_Spectrum)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
