// Copyright 2026 The qbus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qbus/dynamics.hpp"
#include "qbus/fockspace.hpp"
#include "qbus/metrics.hpp"
#include "qbus/protocols.hpp"

using namespace qbus;

// Dense master-equation right-hand side on the full 81-dimensional space.
static void BM_LindbladRhs(benchmark::State& state) {
  const SpaceLayout l;
  const DeviceParams d;
  const auto h = build_hamiltonian(l, d, {50.0, 0.0, 5.0});
  const auto ch = active_channels(build_dissipators(l, d));
  const Matrix rho = DensityMatrix::from_pure(basis_state(l, 1, 0, 0, Level::g)).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(rho, h, ch));
}
BENCHMARK(BM_LindbladRhs)->Unit(benchmark::kMillisecond);

static void BM_TransferEvolve(benchmark::State& state) {
  const SpaceLayout l;
  const DeviceParams d;
  const auto s = state_transfer_schedule(d);
  ProtocolSpec spec;
  const auto rho0 = DensityMatrix::from_pure(initial_state(l, spec));
  SolverOptions o;
  o.restrict_excitations = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho0, d, s, o));
}
BENCHMARK(BM_TransferEvolve)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_CPhasePropagate(benchmark::State& state) {
  const SpaceLayout l;
  const DeviceParams d;
  const auto s = cphase_schedule_5step(d);
  ProtocolSpec spec;
  spec.kind = ProtocolKind::cphase_5step;
  const auto psi0 = initial_state(l, spec);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(psi0, d, s));
}
BENCHMARK(BM_CPhasePropagate)->Unit(benchmark::kMillisecond);

// One grid point of the average gate fidelity is one full c-phase evolution.
static void BM_CPhaseGatePoint(benchmark::State& state) {
  const SpaceLayout l;
  const DeviceParams d;
  const auto s = cphase_schedule_5step(d);
  ProtocolSpec spec;
  spec.kind = ProtocolKind::cphase_5step;
  const auto rho0 = DensityMatrix::from_pure(initial_state(l, spec));
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho0, d, s));
}
BENCHMARK(BM_CPhaseGatePoint)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
