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

#include "breathtrap/lattice.hpp"

#include "breathtrap/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace breathtrap::lattice {

namespace {

using numerics::Complex;
using numerics::kI;

// Harmonic on-site weight (g/k)(n - n0)^2 for every storage index.
RealVector onsite_weights(const LatticeConfig& cfg) {
    RealVector q(cfg.n_sites);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        const double d = cfg.site(i) - cfg.trap_center;
        q(i) = cfg.g / cfg.coupling * d * d;
    }
    return q;
}

// Hopping in the basis that absorbs every diagonal term except e / alpha:
// c_n = (alpha / alpha0)^gamma exp(i q_n F(t)) b_n, F = int drive dt.
class InteractionGenerator {
public:
    InteractionGenerator(const LatticeConfig& cfg, double onsite_energy)
        : cfg_(cfg), q_(onsite_weights(cfg)), onsite_energy_(onsite_energy) {}

    TridiagonalMatrix operator()(double t) const {
        const double alpha = alpha_eval(cfg_.schedule, t).alpha;
        const double f = integral_drive(cfg_.schedule, t);
        const double hop = -cfg_.coupling / alpha;
        TridiagonalMatrix b(cfg_.n_sites);
        b.diag.setConstant(Complex(onsite_energy_ / alpha, 0.0));
        for (Eigen::Index i = 0; i + 1 < b.rows(); ++i) {
            const Complex upper = std::polar(hop, (q_(i + 1) - q_(i)) * f);
            b.upper(i) = upper;
            b.lower(i) = std::conj(upper);
        }
        return b;
    }

    // Diagonal of the map b -> c at time t.
    ComplexVector frame(double t) const {
        const double scale = std::pow(alpha_eval(cfg_.schedule, t).alpha / alpha_eval(cfg_.schedule, 0.0).alpha,
                                      cfg_.gain_coefficient);
        const double f = integral_drive(cfg_.schedule, t);
        ComplexVector d(q_.size());
        for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::polar(scale, q_(i) * f);
        return d;
    }

private:
    LatticeConfig cfg_;
    RealVector q_;
    double onsite_energy_;
};

class DirectGenerator {
public:
    DirectGenerator(const LatticeConfig& cfg, double onsite_energy) : cfg_(cfg), onsite_energy_(onsite_energy) {}
    TridiagonalMatrix operator()(double t) const { return lattice_generator_banded(cfg_, t, onsite_energy_); }

private:
    LatticeConfig cfg_;
    double onsite_energy_;
};

std::vector<double> sample_points(double z_end, double sample_every) {
    std::vector<double> z{0.0};
    if (sample_every > 0.0) {
        for (long long j = 1;; ++j) {
            const double zj = static_cast<double>(j) * sample_every;
            if (zj >= z_end * (1.0 - 1e-12)) break;
            z.push_back(zj);
        }
    }
    z.push_back(z_end);
    return z;
}

}  // namespace

void LatticeConfig::validate() const {
    std::ostringstream msg;
    if (n_sites < 3 || n_sites % 2 == 0) {
        msg << "lattice: n_sites must be an odd integer >= 3 (got " << n_sites << ")";
    } else if (!(coupling > 0.0) || !std::isfinite(coupling)) {
        msg << "lattice: coupling k must be positive (got " << coupling << ")";
    } else if (!(g > 0.0) || !std::isfinite(g)) {
        msg << "lattice: on-site strength g must be positive (got " << g << ")";
    } else if (std::abs(trap_center) >= half_width()) {
        msg << "lattice: |trap_center| must be < " << half_width() << " (got " << trap_center << ")";
    } else if (!std::isfinite(gain_coefficient)) {
        msg << "lattice: gain coefficient must be finite";
    }
    if (!msg.str().empty()) throw std::invalid_argument(msg.str());
    schedule.validate();
}

TridiagonalMatrix lattice_generator_banded(const LatticeConfig& cfg, double t, double onsite_energy) {
    const DriveSample d = alpha_eval(cfg.schedule, t);
    const RealVector q = onsite_weights(cfg);
    TridiagonalMatrix a(cfg.n_sites);
    const Complex gain = kI * (cfg.gain_coefficient * d.alpha_dot / d.alpha);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        a.diag(i) = gain - d.drive * q(i) + onsite_energy / d.alpha;
    }
    a.lower.setConstant(Complex(-cfg.coupling / d.alpha, 0.0));
    a.upper.setConstant(Complex(-cfg.coupling / d.alpha, 0.0));
    return a;
}

ComplexMatrix lattice_generator(const LatticeConfig& cfg, double t) {
    cfg.validate();
    return lattice_generator_banded(cfg, t).to_dense();
}

ComplexVector gaussian_input(const LatticeConfig& cfg, int center, double width) {
    ComplexVector c(cfg.n_sites);
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double d = cfg.site(i) - center;
        c(i) = std::exp(-d * d / width);
    }
    return c;
}

ComplexVector site_input(const LatticeConfig& cfg, int site) {
    if (std::abs(site) > cfg.half_width()) throw std::invalid_argument("site_input: site outside the lattice");
    ComplexVector c = ComplexVector::Zero(cfg.n_sites);
    c(site + cfg.half_width()) = 1.0;
    return c;
}

double variance_n(const ComplexVector& c, double center) {
    if (c.size() % 2 == 0) throw std::invalid_argument("variance_n: state length must be odd");
    const Eigen::Index half = (c.size() - 1) / 2;
    double total = 0.0;
    double moment = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double w = std::norm(c(i));
        const double d = static_cast<double>(i - half) - center;
        total += w;
        moment += d * d * w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("variance_n: zero state");
    return moment / total;
}

PropagationResult propagate(const LatticeConfig& cfg, const ComplexVector& c0, double z_end, double sample_every,
                            const IntegratorConfig& integrator, Route route, double onsite_energy) {
    cfg.validate();
    integrator.validate();
    if (c0.size() != cfg.n_sites) throw std::invalid_argument("propagate: initial state length must equal n_sites");
    if (!(z_end > 0.0)) throw std::invalid_argument("propagate: z_end must be positive");
    if (sample_every < 0.0) throw std::invalid_argument("propagate: sample spacing must be >= 0");

    const double step = integrator.step_for(cfg.schedule.period());
    const std::vector<double> zs = sample_points(z_end, sample_every);

    PropagationResult out;
    auto record = [&](double z, const ComplexVector& c) {
        out.z.push_back(z);
        out.snapshots.push_back(c.cwiseAbs2());
        out.variance.push_back(variance_n(c, cfg.trap_center));
        out.norm.push_back(c.norm());
        out.amplitudes.push_back(c);
    };

    if (route == Route::direct) {
        const DirectGenerator gen(cfg, onsite_energy);
        ComplexVector c = c0;
        record(0.0, c);
        for (std::size_t j = 1; j < zs.size(); ++j) {
            c = numerics::integrate_linear(gen, std::move(c), zs[j - 1], zs[j], step);
            record(zs[j], c);
        }
        return out;
    }

    const InteractionGenerator gen(cfg, onsite_energy);
    ComplexVector b = c0;
    record(0.0, c0);
    for (std::size_t j = 1; j < zs.size(); ++j) {
        b = numerics::integrate_linear(gen, std::move(b), zs[j - 1], zs[j], step);
        record(zs[j], gen.frame(zs[j]).cwiseProduct(b));
    }
    return out;
}

ComplexMatrix lattice_monodromy(const LatticeConfig& cfg, const IntegratorConfig& integrator, Route route) {
    cfg.validate();
    const double period = cfg.schedule.period();
    if (route == Route::direct) {
        return numerics::monodromy(DirectGenerator(cfg, 0.0), cfg.n_sites, period, integrator);
    }
    const InteractionGenerator gen(cfg, 0.0);
    const ComplexMatrix m = numerics::monodromy(gen, cfg.n_sites, period, integrator);
    return gen.frame(period).asDiagonal() * m;
}

std::vector<LatticeFloquetState> lattice_floquet(const LatticeConfig& cfg, const IntegratorConfig& integrator) {
    const ComplexMatrix m = lattice_monodromy(cfg, integrator);
    const double period = cfg.schedule.period();
    std::vector<LatticeFloquetState> states;
    states.reserve(static_cast<std::size_t>(cfg.n_sites));
    for (auto& pair : numerics::eig_normal(m)) {
        LatticeFloquetState s;
        s.state = std::move(pair.vector);
        s.quasi_energy = numerics::quasi_phase(pair.value) / period;
        s.variance = variance_n(s.state, cfg.trap_center);
        states.push_back(std::move(s));
    }
    std::stable_sort(states.begin(), states.end(), [](const LatticeFloquetState& a, const LatticeFloquetState& b) {
        return std::tie(a.variance, a.quasi_energy) < std::tie(b.variance, b.quasi_energy);
    });
    return states;
}

RealMatrix lattice_variance_map(const LatticeConfig& cfg_template, std::span<const double> omega_grid,
                                std::span<const double> epsilon_grid, const IntegratorConfig& integrator,
                                unsigned threads) {
    if (omega_grid.empty() || epsilon_grid.empty()) throw std::invalid_argument("lattice_variance_map: empty grid");
    cfg_template.validate();
    integrator.validate();
    for (double e : epsilon_grid) BreathingSchedule{e, 1.0}.validate();
    for (double w : omega_grid) BreathingSchedule{0.0, w}.validate();

    const auto rows = static_cast<Eigen::Index>(omega_grid.size());
    const auto cols = static_cast<Eigen::Index>(epsilon_grid.size());
    RealMatrix out(rows, cols);
    parallel_for(static_cast<std::size_t>(rows * cols), threads, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k) / cols;
        const auto j = static_cast<Eigen::Index>(k) % cols;
        LatticeConfig cfg = cfg_template;
        cfg.schedule = BreathingSchedule{epsilon_grid[static_cast<std::size_t>(j)], omega_grid[static_cast<std::size_t>(i)]};
        out(i, j) = lattice_floquet(cfg, integrator).front().variance;
    });
    return out;
}

GaugeCheckResult gauge_check(const LatticeConfig& cfg, double onsite_energy, const ComplexVector& c0, double z_end,
                             const IntegratorConfig& integrator, double sample_every) {
    if (sample_every <= 0.0) sample_every = z_end / 100.0;
    const PropagationResult plain = propagate(cfg, c0, z_end, sample_every, integrator, Route::interaction, 0.0);
    const PropagationResult shifted =
        propagate(cfg, c0, z_end, sample_every, integrator, Route::interaction, onsite_energy);

    GaugeCheckResult r;
    for (std::size_t j = 0; j < plain.z.size(); ++j) {
        const double intensity = (shifted.snapshots[j] - plain.snapshots[j]).cwiseAbs().maxCoeff();
        const Complex phase = std::polar(1.0, -onsite_energy * integral_inverse_alpha(cfg.schedule, plain.z[j]));
        const double amplitude = (shifted.amplitudes[j] - phase * plain.amplitudes[j]).cwiseAbs().maxCoeff();
        r.intensity_deviation = std::max(r.intensity_deviation, intensity);
        r.amplitude_deviation = std::max(r.amplitude_deviation, amplitude);
    }
    return r;
}

}  // namespace breathtrap::lattice
