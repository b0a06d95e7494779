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

#include "breathtrap/well_spectral.hpp"

#include "breathtrap/sweep.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace breathtrap::well {

namespace {

using numerics::Complex;
using numerics::kI;
constexpr double kPi = std::numbers::pi;
constexpr double kNormTolerance = 1e-8;

void require_normalized(const ModeState& s, const char* who) {
    const double n2 = s.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << who << ": state is not normalized (|a|^2 = " << n2 << ")";
        throw std::invalid_argument(msg.str());
    }
}

// Rotating-frame coupling: (D^H V D)_{nm} with D = diag(exp(-i theta_n)),
// theta_n(t) = E_n / hbar * int_0^t dt / alpha^2 and V = -drive m X2 / hbar.
class InteractionGenerator {
public:
    InteractionGenerator(const WellBasis& basis, const BreathingSchedule& schedule)
        : basis_(basis), schedule_(schedule), rates_(basis.energies / basis.hbar) {}

    ComplexVector phases(double t) const {
        const double tau = integral_inverse_alpha_squared(schedule_, t);
        ComplexVector p(rates_.size());
        for (Eigen::Index n = 0; n < p.size(); ++n) p(n) = std::polar(1.0, rates_(n) * tau);
        return p;
    }

    ComplexMatrix operator()(double t) const {
        const double coupling = -alpha_eval(schedule_, t).drive * basis_.mass / basis_.hbar;
        const ComplexVector p = phases(t);
        const Eigen::Index n = p.size();
        ComplexMatrix b(n, n);
        for (Eigen::Index col = 0; col < n; ++col) {
            const Complex pc = std::conj(p(col));
            for (Eigen::Index row = 0; row < n; ++row) {
                b(row, col) = coupling * basis_.x2(row, col) * p(row) * pc;
            }
        }
        return b;
    }

private:
    const WellBasis& basis_;
    BreathingSchedule schedule_;
    RealVector rates_;
};

class DirectGenerator {
public:
    DirectGenerator(const WellBasis& basis, const BreathingSchedule& schedule)
        : basis_(basis), schedule_(schedule) {}

    ComplexMatrix operator()(double t) const { return hamiltonian_at(basis_, schedule_, t) / basis_.hbar; }

private:
    const WellBasis& basis_;
    BreathingSchedule schedule_;
};

}  // namespace

double WellBasis::eigenfunction(int n, double x_prime) const {
    return std::sqrt(2.0 / length) * std::sin(n * kPi * (x_prime / length + 0.5));
}

WellBasis build_basis(double length, int n_modes) {
    if (n_modes < 2) throw std::invalid_argument("build_basis: need at least 2 modes");
    if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("build_basis: length must be positive");

    WellBasis b;
    b.length = length;
    b.n_modes = n_modes;
    b.energies.resize(n_modes);
    b.x = RealMatrix::Zero(n_modes, n_modes);
    b.x2 = RealMatrix::Zero(n_modes, n_modes);

    const double l2 = length * length;
    const double pi2 = kPi * kPi;
    for (int i = 0; i < n_modes; ++i) {
        const double n = i + 1;
        b.energies(i) = n * n * pi2 * b.hbar * b.hbar / (2.0 * b.mass * l2);
        b.x2(i, i) = l2 * (1.0 / 12.0 - 1.0 / (2.0 * n * n * pi2));
        for (int j = 0; j < i; ++j) {
            const double m = j + 1;
            const double d = n * n - m * m;
            if ((i + j) % 2 == 1) {
                // n + m odd
                const double v = -8.0 * length * n * m / (pi2 * d * d);
                b.x(i, j) = b.x(j, i) = v;
            } else {
                const double v = 8.0 * l2 * n * m / (pi2 * d * d);
                b.x2(i, j) = b.x2(j, i) = v;
            }
        }
    }
    return b;
}

ComplexMatrix hamiltonian_at(const WellBasis& basis, const BreathingSchedule& schedule, double t) {
    const DriveSample d = alpha_eval(schedule, t);
    ComplexMatrix h = (-d.drive * basis.mass * basis.x2).cast<Complex>();
    const double inv_a2 = 1.0 / (d.alpha * d.alpha);
    for (Eigen::Index n = 0; n < h.rows(); ++n) h(n, n) += basis.energies(n) * inv_a2;
    return h;
}

ComplexMatrix well_monodromy(const WellBasis& basis, const BreathingSchedule& schedule,
                             const IntegratorConfig& cfg, Route route) {
    schedule.validate();
    const double period = schedule.period();
    if (route == Route::direct) {
        return numerics::monodromy(DirectGenerator(basis, schedule), basis.n_modes, period, cfg);
    }
    const InteractionGenerator gen(basis, schedule);
    ComplexMatrix m = numerics::monodromy(gen, basis.n_modes, period, cfg);
    const ComplexVector p = gen.phases(period);
    return p.conjugate().asDiagonal() * m;
}

ModeState evolve(const WellBasis& basis, const BreathingSchedule& schedule, const ModeState& a0,
                 double t0, double t1, const IntegratorConfig& cfg, Route route) {
    schedule.validate();
    cfg.validate();
    if (a0.size() != basis.n_modes) throw std::invalid_argument("evolve: state size does not match basis");
    const double step = cfg.step_for(schedule.period());
    if (route == Route::direct) {
        return numerics::integrate_linear(DirectGenerator(basis, schedule), ModeState(a0), t0, t1, step);
    }
    const InteractionGenerator gen(basis, schedule);
    ModeState b = gen.phases(t0).cwiseProduct(a0);
    b = numerics::integrate_linear(gen, std::move(b), t0, t1, step);
    return gen.phases(t1).conjugate().cwiseProduct(b);
}

std::vector<FloquetState> floquet_spectrum(const WellBasis& basis, const BreathingSchedule& schedule,
                                           const IntegratorConfig& cfg) {
    const ComplexMatrix m = well_monodromy(basis, schedule, cfg);
    const double period = schedule.period();

    std::vector<FloquetState> states;
    states.reserve(static_cast<std::size_t>(basis.n_modes));
    for (auto& pair : numerics::eig_normal(m)) {
        FloquetState s;
        s.state = std::move(pair.vector);
        s.quasi_energy = numerics::quasi_phase(pair.value) / period;
        s.variance = variance_x(basis, s.state);
        states.push_back(std::move(s));
    }
    std::stable_sort(states.begin(), states.end(), [](const FloquetState& a, const FloquetState& b) {
        return std::tie(a.variance, a.quasi_energy) < std::tie(b.variance, b.quasi_energy);
    });
    return states;
}

double variance_x(const WellBasis& basis, const ModeState& state) {
    require_normalized(state, "variance_x");
    if (state.size() != basis.n_modes) throw std::invalid_argument("variance_x: state size does not match basis");
    const double mean = state.dot(basis.x.cast<Complex>() * state).real();
    const double second = state.dot(basis.x2.cast<Complex>() * state).real();
    return std::max(0.0, second - mean * mean);
}

double fidelity(const ModeState& s1, const ModeState& s2) {
    require_normalized(s1, "fidelity");
    require_normalized(s2, "fidelity");
    if (s1.size() != s2.size()) throw std::invalid_argument("fidelity: size mismatch");
    return std::clamp(std::norm(s1.dot(s2)), 0.0, 1.0);
}

double effective_frequency(const BreathingSchedule& schedule) {
    return std::abs(schedule.epsilon) * schedule.omega / std::numbers::sqrt2;
}

EffectiveGroundState effective_ground_state(const WellBasis& basis, double trap_frequency) {
    if (!(trap_frequency >= 0.0)) throw std::invalid_argument("effective_ground_state: Omega must be >= 0");
    RealMatrix h = 0.5 * basis.mass * trap_frequency * trap_frequency * basis.x2;
    h.diagonal() += basis.energies;
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw numerics::NumericalError("effective_ground_state: diagonalization failed");

    EffectiveGroundState out;
    out.energy = solver.eigenvalues()(0);
    out.state = solver.eigenvectors().col(0).cast<Complex>();
    out.state.normalize();
    numerics::fix_phase(out.state);
    return out;
}

RealMatrix variance_map(const WellBasis& basis, std::span<const double> omega_grid,
                        std::span<const double> epsilon_grid, const IntegratorConfig& cfg, unsigned threads) {
    if (omega_grid.empty() || epsilon_grid.empty()) throw std::invalid_argument("variance_map: empty grid");
    for (double e : epsilon_grid) BreathingSchedule{e, 1.0}.validate();
    for (double w : omega_grid) BreathingSchedule{0.0, w}.validate();
    cfg.validate();

    const auto rows = static_cast<Eigen::Index>(omega_grid.size());
    const auto cols = static_cast<Eigen::Index>(epsilon_grid.size());
    RealMatrix out(rows, cols);
    parallel_for(static_cast<std::size_t>(rows * cols), threads, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k) / cols;
        const auto j = static_cast<Eigen::Index>(k) % cols;
        const BreathingSchedule s{epsilon_grid[static_cast<std::size_t>(j)], omega_grid[static_cast<std::size_t>(i)]};
        out(i, j) = floquet_spectrum(basis, s, cfg).front().variance;
    });
    return out;
}

RealVector density_profile(const WellBasis& basis, const ModeState& state, std::span<const double> x_prime) {
    if (state.size() != basis.n_modes) throw std::invalid_argument("density_profile: state size does not match basis");
    RealVector out(static_cast<Eigen::Index>(x_prime.size()));
    for (std::size_t k = 0; k < x_prime.size(); ++k) {
        Complex amp{0.0, 0.0};
        for (int n = 0; n < basis.n_modes; ++n) amp += state(n) * basis.eigenfunction(n + 1, x_prime[k]);
        out(static_cast<Eigen::Index>(k)) = std::norm(amp);
    }
    return out;
}

ComplexVector reconstruct_lab_frame(const WellBasis& basis, const BreathingSchedule& schedule,
                                    const ModeState& state, double t, std::span<const double> x_samples) {
    schedule.validate();
    if (state.size() != basis.n_modes) throw std::invalid_argument("reconstruct_lab_frame: state size does not match basis");
    const DriveSample d = alpha_eval(schedule, t);
    const double half_width = 0.5 * d.alpha * basis.length;
    const double amplitude = 1.0 / std::sqrt(d.alpha);
    const double chirp = basis.mass * d.alpha_dot / (2.0 * basis.hbar * d.alpha);

    ComplexVector out(static_cast<Eigen::Index>(x_samples.size()));
    for (std::size_t k = 0; k < x_samples.size(); ++k) {
        const double x = x_samples[k];
        if (!(std::abs(x) <= half_width)) {
            std::ostringstream msg;
            msg << "reconstruct_lab_frame: x = " << x << " lies outside the walls at +/-" << half_width;
            throw std::invalid_argument(msg.str());
        }
        const double x_prime = x / d.alpha;
        Complex amp{0.0, 0.0};
        for (int n = 0; n < basis.n_modes; ++n) amp += state(n) * basis.eigenfunction(n + 1, x_prime);
        out(static_cast<Eigen::Index>(k)) = amplitude * amp * std::polar(1.0, chirp * x * x);
    }
    return out;
}

}  // namespace breathtrap::well
