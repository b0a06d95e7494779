// Copyright 2026 The breathtrap Authors
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

#pragma once

#include "breathtrap/breathing.hpp"
#include "breathtrap/numerics.hpp"

#include <span>
#include <vector>

// Particle between two impenetrable walls at x = -L/2 and x = +L/2 whose
// separation breathes as alpha(t) L. All dynamics run in the co-moving
// (non-breathing) frame x' = x / alpha, where the walls are fixed and the
// drive shows up as a time-dependent quadratic term. States are coefficient
// vectors in the static sine basis; natural units hbar = m = 1 by default.
namespace breathtrap::well {

using numerics::ComplexMatrix;
using numerics::ComplexVector;
using numerics::IntegratorConfig;
using numerics::RealMatrix;
using numerics::RealVector;

// Coefficients a_n, n = 1..N, in the static eigenbasis.
using ModeState = ComplexVector;

struct WellBasis {
    double length = 1.0;
    double hbar = 1.0;
    double mass = 1.0;
    int n_modes = 0;
    RealVector energies;  // E_n = n^2 pi^2 hbar^2 / (2 m L^2)
    RealMatrix x;         // <n| x' |m>
    RealMatrix x2;        // <n| x'^2 |m>

    // Static eigenfunction phi_n (1-based) at position x' in [-L/2, L/2].
    double eigenfunction(int n, double x_prime) const;
};

// Closed-form matrix elements. Throws std::invalid_argument for N < 2 or L <= 0.
WellBasis build_basis(double length = 1.0, int n_modes = 30);

// H(t) = diag(E_n) / alpha^2 - (alpha alpha''/2 + alpha'^2) m X2.
ComplexMatrix hamiltonian_at(const WellBasis& basis, const BreathingSchedule& schedule, double t);

enum class Route {
    // Diagonal E_n / alpha^2 phases are integrated in closed form; RK4 only
    // sees the Hermitian confinement coupling in the rotating basis.
    interaction,
    // RK4 directly on hamiltonian_at / hbar. Accurate only while
    // E_N h / hbar stays small; kept as an independent cross-check.
    direct,
};

// One-period propagator of the coefficient vector.
ComplexMatrix well_monodromy(const WellBasis& basis, const BreathingSchedule& schedule,
                             const IntegratorConfig& cfg, Route route = Route::interaction);

// Propagates a(t0) to a(t1).
ModeState evolve(const WellBasis& basis, const BreathingSchedule& schedule, const ModeState& a0,
                 double t0, double t1, const IntegratorConfig& cfg, Route route = Route::interaction);

struct FloquetState {
    ModeState state;
    double quasi_energy = 0.0;  // principal branch (-pi/T, pi/T]
    double variance = 0.0;      // units of L^2
};

// All N Floquet states at drive phase t = 0, sorted by ascending variance
// (ties by ascending quasi-energy).
std::vector<FloquetState> floquet_spectrum(const WellBasis& basis, const BreathingSchedule& schedule,
                                           const IntegratorConfig& cfg);

// <x'^2> - <x'>^2. Rejects states whose norm differs from 1 by more than 1e-8.
double variance_x(const WellBasis& basis, const ModeState& state);

// |<s1|s2>|^2 for normalized states.
double fidelity(const ModeState& s1, const ModeState& s2);

// Frequency of the averaged harmonic trap, |epsilon| omega / sqrt(2).
double effective_frequency(const BreathingSchedule& schedule);

struct EffectiveGroundState {
    double energy = 0.0;
    ModeState state;
};

// Ground state of diag(E_n) + (1/2) m Omega^2 X2.
EffectiveGroundState effective_ground_state(const WellBasis& basis, double trap_frequency);

// Minimum Floquet variance at every (omega_i, epsilon_j). Entry (i, j).
RealMatrix variance_map(const WellBasis& basis, std::span<const double> omega_grid,
                        std::span<const double> epsilon_grid, const IntegratorConfig& cfg,
                        unsigned threads = 1);

// |sum_n a_n phi_n(x')|^2 on the given co-moving positions.
RealVector density_profile(const WellBasis& basis, const ModeState& state, std::span<const double> x_prime);

// Lab-frame wavefunction psi(x, t) =
//   alpha^{-1/2} sum_n a_n phi_n(x / alpha) exp(i m alpha' x^2 / (2 hbar alpha)).
// Throws std::invalid_argument for samples beyond the moving walls |x| > alpha L / 2.
ComplexVector reconstruct_lab_frame(const WellBasis& basis, const BreathingSchedule& schedule,
                                    const ModeState& state, double t, std::span<const double> x_samples);

}  // namespace breathtrap::well
