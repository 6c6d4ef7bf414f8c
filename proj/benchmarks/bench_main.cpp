#include <benchmark/benchmark.h>

#include <lagstab/lagstab.hpp>

using namespace lagstab;

namespace {

const ParameterMap kCart = {{"M_cart", 2}, {"m", 1}, {"l", 1}, {"g", 9.81}, {"d", 68.67}};
const ParameterMap kWheel = {{"a", 0.4846}, {"b", 0.0032}, {"m", 37.98}, {"d1", 60}};

RstuSode cart_sode() {
  const BuiltinSystem b = builtin("cart-pendulum", kCart);
  return to_normal_form(b.system, *b.control);
}

}  // namespace

static void BM_EvalJet2(benchmark::State& state) {
  const Expr e = parse("68.67*cos(y)*sin(y)/(3 - cos(y)^2) + exp(-y^2)");
  double y = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_jet<2>(e, y));
    y = y < 0.7 ? y + 1e-3 : -0.7;
  }
}
BENCHMARK(BM_EvalJet2);

static void BM_NormalFormCoefficients(benchmark::State& state) {
  const RstuSode s = cart_sode();
  double y = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s(y));
    y = y < 0.7 ? y + 1e-3 : -0.7;
  }
}
BENCHMARK(BM_NormalFormCoefficients);

static void BM_Classify(benchmark::State& state) {
  const RstuSode s = cart_sode();
  for (auto _ : state) benchmark::DoNotOptimize(classify(s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Classify)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_BuildMultiplier(benchmark::State& state) {
  const RstuSode s = cart_sode();
  MultiplierOptions o;
  o.cells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_multiplier(s, o));
}
BENCHMARK(BM_BuildMultiplier)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_SolveM(benchmark::State& state) {
  const BuiltinSystem b = builtin("cart-pendulum", kCart);
  const Profile N(parse("68.67*cos(y)*sin(y)"));
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_M(b.system, N, 0.0, step));
}
BENCHMARK(BM_SolveM)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_Rk4Steps(benchmark::State& state) {
  const BuiltinSystem b = builtin("inertia-wheel", kWheel);
  const RstuSode s = to_normal_form(b.system, *b.control);
  const double t_end = static_cast<double>(state.range(0)) * 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_full(s, nullptr, {0.1, 1e-4, 0.1, 1e-4}, t_end, 1e-3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rk4Steps)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
