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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace breathtrap::numerics {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Raised when a computation produces NaN/Inf or an iterative step fails to
// meet its residual contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
    int steps_per_period = 4096;

    void validate() const;
    // Step size that divides `period` into exactly steps_per_period steps.
    double step_for(double period) const;
};

// Tridiagonal matrix stored by bands. lower(i) = A(i+1, i), upper(i) = A(i, i+1).
struct TridiagonalMatrix {
    ComplexVector diag;
    ComplexVector lower;
    ComplexVector upper;

    TridiagonalMatrix() = default;
    explicit TridiagonalMatrix(Eigen::Index n)
        : diag(ComplexVector::Zero(n)),
          lower(ComplexVector::Zero(n > 0 ? n - 1 : 0)),
          upper(ComplexVector::Zero(n > 0 ? n - 1 : 0)) {}

    Eigen::Index rows() const { return diag.size(); }
    Eigen::Index cols() const { return diag.size(); }

    ComplexMatrix to_dense() const;
};

// Band-aware product; works column-wise for matrices.
ComplexMatrix operator*(const TridiagonalMatrix& a, const ComplexMatrix& y);
ComplexVector operator*(const TridiagonalMatrix& a, const ComplexVector& y);

namespace detail {

template <class Generator, class State>
State apply_generator(const Generator& a, const State& y) {
    State out = a * y;
    out *= -kI;
    return out;
}

[[noreturn]] void throw_dimension_mismatch(Eigen::Index generator_dim, Eigen::Index state_dim);
[[noreturn]] void throw_non_finite(double t);

}  // namespace detail

// Solves i dy/dt = A(t) y on [t0, t1] with classical fixed-step RK4.
// The number of steps is the smallest n with (t1 - t0) / n <= max_step;
// stage times are computed as t0 + k h, never accumulated.
//
// `generator` maps a time to anything with rows() and operator*(State),
// e.g. ComplexMatrix or TridiagonalMatrix. `State` may be a vector or a
// matrix whose columns are propagated together.
template <class Provider, class State>
State integrate_linear(const Provider& generator, State y, double t0, double t1,
                       double max_step) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_linear: requires t1 > t0");
    if (!(max_step > 0.0)) throw std::invalid_argument("integrate_linear: max_step must be positive");

    const double span = t1 - t0;
    auto steps = static_cast<long long>(std::ceil(span / max_step - 1e-9));
    if (steps < 1) steps = 1;
    const double h = span / static_cast<double>(steps);

    bool checked_dim = false;
    for (long long k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * h;
        const double t_mid = t + 0.5 * h;
        const double t_next = (k + 1 == steps) ? t1 : t0 + static_cast<double>(k + 1) * h;

        const auto a0 = generator(t);
        if (!checked_dim) {
            if (a0.rows() != y.rows()) detail::throw_dimension_mismatch(a0.rows(), y.rows());
            checked_dim = true;
        }
        const auto a_mid = generator(t_mid);
        const auto a1 = generator(t_next);

        const State k1 = detail::apply_generator(a0, y);
        const State k2 = detail::apply_generator(a_mid, State(y + (0.5 * h) * k1));
        const State k3 = detail::apply_generator(a_mid, State(y + (0.5 * h) * k2));
        const State k4 = detail::apply_generator(a1, State(y + h * k3));
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!y.allFinite()) detail::throw_non_finite(t1);
    return y;
}

template <class Provider>
ComplexVector integrate_linear(const Provider& generator, const ComplexVector& y0, double t0,
                               double t1, double period, const IntegratorConfig& cfg) {
    cfg.validate();
    return integrate_linear(generator, y0, t0, t1, cfg.step_for(period));
}

// One-period propagator: column j is the solution started from e_j at t = 0.
template <class Provider>
ComplexMatrix monodromy(const Provider& generator, Eigen::Index dim, double period,
                        const IntegratorConfig& cfg) {
    cfg.validate();
    if (dim < 1) throw std::invalid_argument("monodromy: dimension must be positive");
    if (!(period > 0.0)) throw std::invalid_argument("monodromy: period must be positive");
    ComplexMatrix y = ComplexMatrix::Identity(dim, dim);
    return integrate_linear(generator, std::move(y), 0.0, period, cfg.step_for(period));
}

struct EigenPair {
    Complex value;
    ComplexVector vector;
};

// Eigendecomposition of a (near-)normal matrix through its complex Schur
// form. Eigenvectors are orthonormal Schur vectors, normalized so the
// largest-magnitude component is real and positive. Pairs are ordered by
// ascending quasi_phase(value). Throws NumericalError if any pair misses
// ||M v - lambda v|| < 1e-8 max(1, max column norm of M).
std::vector<EigenPair> eig_normal(const ComplexMatrix& m);

// -arg(lambda) mapped to the principal branch (-pi, pi].
double quasi_phase(Complex lambda);

// Threshold below which two eigenvalues count as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-10;

// Composite Gauss-Legendre rule over `panels` equal subintervals.
double quadrature(const std::function<double(double)>& f, double a, double b, int panels);

// Residual max |(M^H M - I)_ij|.
double unitarity_defect(const ComplexMatrix& m);

// Rotates v so its largest-magnitude entry is real and positive.
void fix_phase(ComplexVector& v);

}  // namespace breathtrap::numerics
