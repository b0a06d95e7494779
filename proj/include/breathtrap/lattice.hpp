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

// Nearest-neighbour waveguide array whose spacing breathes with alpha(z):
//
//   i c_n' = -(k/alpha)(c_{n+1} + c_{n-1}) + i gamma (alpha'/alpha) c_n
//            - (alpha alpha''/2 + alpha'^2) (g/k) (n - n0)^2 c_n
//
// with open ends. gamma = 1 is the standard model; gamma = 1/2 is offered
// for sensitivity studies. z is measured in units of 1/k when k = 1.
namespace breathtrap::lattice {

using numerics::ComplexMatrix;
using numerics::ComplexVector;
using numerics::IntegratorConfig;
using numerics::RealMatrix;
using numerics::RealVector;
using numerics::TridiagonalMatrix;

struct LatticeConfig {
    int n_sites = 161;
    double coupling = 1.0;  // k
    double g = 1.0;         // n_s a^2 k / reduced wavelength
    BreathingSchedule schedule{0.1, 1.0};
    int trap_center = 0;    // n0
    double gain_coefficient = 1.0;  // gamma

    void validate() const;
    int half_width() const { return (n_sites - 1) / 2; }
    // Site label of storage index i.
    int site(Eigen::Index i) const { return static_cast<int>(i) - half_width(); }
};

// Generator A(t) of i c' = A(t) c, verbatim (non-Hermitian when alpha' != 0).
// onsite_energy adds a uniform e / alpha term.
TridiagonalMatrix lattice_generator_banded(const LatticeConfig& cfg, double t, double onsite_energy = 0.0);
ComplexMatrix lattice_generator(const LatticeConfig& cfg, double t);

enum class Route {
    // Diagonal terms integrated in closed form; RK4 sees only the Hermitian
    // hopping in the rotating basis. Norm law holds to round-off.
    interaction,
    // RK4 on the verbatim generator. Stiff for wide lattices at large drive.
    direct,
};

struct PropagationResult {
    std::vector<double> z;
    std::vector<RealVector> snapshots;  // |c_n|^2
    std::vector<double> variance;       // variance_n about trap_center
    std::vector<double> norm;           // ||c||
    std::vector<ComplexVector> amplitudes;
};

// Samples at z = 0, dz, 2 dz, ... and always at z_end.
PropagationResult propagate(const LatticeConfig& cfg, const ComplexVector& c0, double z_end, double sample_every,
                            const IntegratorConfig& integrator, Route route = Route::interaction,
                            double onsite_energy = 0.0);

// Initial conditions. gaussian_input is exp(-(n - center)^2 / width), unnormalized.
ComplexVector gaussian_input(const LatticeConfig& cfg, int center = 0, double width = 5.0);
ComplexVector site_input(const LatticeConfig& cfg, int site = 0);

// sum (n - center)^2 |c_n|^2 / sum |c_n|^2 with n running over centred site
// labels -(len-1)/2 .. (len-1)/2. Throws for zero vectors and even lengths.
double variance_n(const ComplexVector& c, double center = 0.0);

struct LatticeFloquetState {
    ComplexVector state;  // normalized, at z = 0
    double quasi_energy = 0.0;
    double variance = 0.0;
};

ComplexMatrix lattice_monodromy(const LatticeConfig& cfg, const IntegratorConfig& integrator,
                                Route route = Route::interaction);

// Sorted by ascending variance about trap_center, ties by quasi-energy.
std::vector<LatticeFloquetState> lattice_floquet(const LatticeConfig& cfg, const IntegratorConfig& integrator);

// Entry (i, j): minimum Floquet variance at (omega_i, epsilon_j).
RealMatrix lattice_variance_map(const LatticeConfig& cfg_template, std::span<const double> omega_grid,
                                std::span<const double> epsilon_grid, const IntegratorConfig& integrator,
                                unsigned threads = 1);

struct GaugeCheckResult {
    double intensity_deviation = 0.0;  // max_{n,z} | |c_n|^2 with e - |c_n|^2 without e |
    double amplitude_deviation = 0.0;  // after applying exp(-i e int dz / alpha)
};

// Propagates with and without a uniform on-site energy e / alpha and compares
// them through the canonical phase transformation.
GaugeCheckResult gauge_check(const LatticeConfig& cfg, double onsite_energy, const ComplexVector& c0, double z_end,
                             const IntegratorConfig& integrator, double sample_every = 0.0);

}  // namespace breathtrap::lattice
