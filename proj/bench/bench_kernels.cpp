// Serial reference vs OpenMP kernels, plus one full DDPG update at the
// network widths used by the default and desk-scale configurations.
#include <benchmark/benchmark.h>

#include <vector>

#include "ssadr/approx/kernels.hpp"
#include "ssadr/ddpg/agent.hpp"
#include "ssadr/rng.hpp"

namespace {

using namespace ssadr;
namespace k = approx::kernels;

struct DenseFixture {
  k::DenseShape shape;
  std::vector<double> in, w, bias, out, delta, gw, gb, gin;

  explicit DenseFixture(std::size_t batch, std::size_t fan_in,
                        std::size_t fan_out)
      : shape{batch, fan_in, fan_out},
        in(batch * fan_in),
        w(fan_in * fan_out),
        bias(fan_out),
        out(batch * fan_out),
        delta(batch * fan_out),
        gw(fan_in * fan_out),
        gb(fan_out),
        gin(batch * fan_in) {
    Rng rng{7};
    for (auto* v : {&in, &w, &bias, &delta})
      for (double& x : *v) x = uniform01(rng) - 0.5;
  }
};

template <bool Parallel>
void BM_DenseForward(benchmark::State& state) {
  DenseFixture f(100, state.range(0), state.range(1));
  for (auto _ : state) {
    if constexpr (Parallel)
      k::parallel::dense_forward(f.in, f.w, f.bias, f.out, f.shape);
    else
      k::serial::dense_forward(f.in, f.w, f.bias, f.out, f.shape);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * 100 * state.range(0) *
                          state.range(1));
}

template <bool Parallel>
void BM_DenseBackward(benchmark::State& state) {
  DenseFixture f(100, state.range(0), state.range(1));
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::parallel::dense_backward_params(f.in, f.delta, f.gw, f.gb, f.shape);
      k::parallel::dense_backward_input(f.w, f.delta, f.gin, f.shape);
    } else {
      k::serial::dense_backward_params(f.in, f.delta, f.gw, f.gb, f.shape);
      k::serial::dense_backward_input(f.w, f.delta, f.gin, f.shape);
    }
    benchmark::DoNotOptimize(f.gw.data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * 100 * state.range(0) *
                          state.range(1));
}

void BM_DdpgUpdate(benchmark::State& state) {
  const std::size_t width = state.range(0);
  ddpg::DdpgConfig cfg;
  cfg.actor_hidden = {width, width};
  cfg.critic_hidden = {width, width};
  if (width == 400) cfg.actor_hidden = cfg.critic_hidden = {400, 300};
  Rng rng{1};
  ddpg::DdpgAgent agent(8, 2, cfg, rng);
  ddpg::ReplayBuffer buffer(1000);
  for (int i = 0; i < 1000; ++i) {
    ddpg::Transition t;
    t.state.assign(8, uniform01(rng));
    t.next_state.assign(8, uniform01(rng));
    t.action = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    t.reward = -uniform01(rng);
    t.goal = {0.5, 0.5};
    buffer.push(std::move(t));
  }
  for (auto _ : state) benchmark::DoNotOptimize(agent.update(buffer, 100, rng));
}

}  // namespace

BENCHMARK(BM_DenseForward<false>)->Args({64, 64})->Args({400, 300});
BENCHMARK(BM_DenseForward<true>)->Args({64, 64})->Args({400, 300});
BENCHMARK(BM_DenseBackward<false>)->Args({64, 64})->Args({400, 300});
BENCHMARK(BM_DenseBackward<true>)->Args({64, 64})->Args({400, 300});
BENCHMARK(BM_DdpgUpdate)->Arg(32)->Arg(64)->Arg(128)->Arg(400)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
