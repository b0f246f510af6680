#include <cmath>

#include <benchmark/benchmark.h>

#include "lieprob/baseline_filter.hpp"
#include "lieprob/bayes_solver.hpp"
#include "lieprob/lie_core.hpp"
#include "lieprob/symmetry_ode.hpp"
#include "lieprob/truncated_gaussian.hpp"

namespace {

using namespace lieprob;

const double kE = std::exp(1.0);

GradientField field() {
  return homogeneous_field([](const auto& u) { return 1.0 / u + u; }, kE, 0.1, Interval{0.05, 5.0});
}

QuadratureProblem problem() { return reduce_to_quadrature(field(), homogeneous_chart(kE, 0.1), 1.5); }

ModelBuilder builder(const QuadratureProblem& q) {
  const KernelParams kernel{1.0, 0.3 * (q.r_domain.hi - q.r0)};
  return [q, kernel](std::size_t n) {
    return build_prior(q, static_cast<Eigen::Index>(std::max<std::size_t>(3, kKnotsPerDesignPoint * n)), kernel);
  };
}

void BM_LieSeriesRotation(benchmark::State& state) {
  const LieVectorField rot = rotation_field();
  Vector p(2);
  p << 1.0, 0.5;
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lie_series(rot, p, 0.7, order));
}
BENCHMARK(BM_LieSeriesRotation)->Arg(10)->Arg(30);

void BM_AdmitsSymmetry(benchmark::State& state) {
  const GradientField f = field();
  const LieVectorField scaling = scaling_field(2);
  for (auto _ : state) benchmark::DoNotOptimize(admits_symmetry(f, scaling, 100, 0));
}
BENCHMARK(BM_AdmitsSymmetry);

void BM_GibbsBox(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  std::vector<LinearConstraint> ineq;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
    row[i] = 1.0;
    ineq.push_back({row, -0.5, "lower"});
    ineq.push_back({-row, -1.0, "upper"});
  }
  const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(dim, dim) * 0.5 + Eigen::MatrixXd::Constant(dim, dim, 0.5);
  const TruncatedGaussianSampler sampler(Eigen::VectorXd::Zero(dim), cov, {}, ineq);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(100, 0, 1, 3));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_GibbsBox)->Arg(3)->Arg(16)->Arg(64);

void BM_Pipeline(benchmark::State& state) {
  const QuadratureProblem q = problem();
  const ModelBuilder b = builder(q);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(q, b, n, SamplerParams{}, 0));
}
BENCHMARK(BM_Pipeline)->Arg(4)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Filter(benchmark::State& state) {
  const GradientField f = field();
  FilterConfig c;
  c.n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_filter(f, c));
}
BENCHMARK(BM_Filter)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
