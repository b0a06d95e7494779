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

#include "breathtrap/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace breathtrap::numerics {

void IntegratorConfig::validate() const {
    if (steps_per_period < 16) {
        throw std::invalid_argument("steps_per_period must be >= 16 (got " +
                                    std::to_string(steps_per_period) + ")");
    }
}

double IntegratorConfig::step_for(double period) const {
    return period / static_cast<double>(steps_per_period);
}

ComplexMatrix TridiagonalMatrix::to_dense() const {
    const Eigen::Index n = rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = diag(i);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        out(i + 1, i) = lower(i);
        out(i, i + 1) = upper(i);
    }
    return out;
}

ComplexMatrix operator*(const TridiagonalMatrix& a, const ComplexMatrix& y) {
    const Eigen::Index n = a.rows();
    ComplexMatrix out(n, y.cols());
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex acc = a.diag(i) * y(i, c);
            if (i > 0) acc += a.lower(i - 1) * y(i - 1, c);
            if (i + 1 < n) acc += a.upper(i) * y(i + 1, c);
            out(i, c) = acc;
        }
    }
    return out;
}

ComplexVector operator*(const TridiagonalMatrix& a, const ComplexVector& y) {
    const Eigen::Index n = a.rows();
    ComplexVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Complex acc = a.diag(i) * y(i);
        if (i > 0) acc += a.lower(i - 1) * y(i - 1);
        if (i + 1 < n) acc += a.upper(i) * y(i + 1);
        out(i) = acc;
    }
    return out;
}

namespace detail {

void throw_dimension_mismatch(Eigen::Index generator_dim, Eigen::Index state_dim) {
    std::ostringstream msg;
    msg << "integrate_linear: generator is " << generator_dim << "-dimensional but state has "
        << state_dim << " rows";
    throw std::invalid_argument(msg.str());
}

void throw_non_finite(double t) {
    std::ostringstream msg;
    msg << "integrate_linear: non-finite state at t = " << t
        << " (step too large or invalid parameters)";
    throw NumericalError(msg.str());
}

}  // namespace detail

void fix_phase(ComplexVector& v) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best_abs * (1.0 + 1e-12)) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs > 0.0) v *= std::conj(v(best)) / best_abs;
}

double quasi_phase(Complex lambda) {
    double phase = -std::arg(lambda);
    if (phase <= -M_PI) phase += 2.0 * M_PI;
    return phase;
}

std::vector<EigenPair> eig_normal(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("eig_normal: matrix must be square and non-empty");
    }
    if (!m.allFinite()) throw NumericalError("eig_normal: matrix has non-finite entries");

    Eigen::ComplexSchur<ComplexMatrix> schur(m, true);
    if (schur.info() != Eigen::Success) throw NumericalError("eig_normal: Schur iteration did not converge");

    const ComplexMatrix& t = schur.matrixT();
    const ComplexMatrix& u = schur.matrixU();
    const Eigen::Index n = m.rows();
    const double scale = std::max(1.0, m.colwise().norm().maxCoeff());

    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        EigenPair p{t(k, k), u.col(k)};
        p.vector.normalize();
        const double residual = (m * p.vector - p.value * p.vector).norm();
        if (!(residual < 1e-8 * scale)) {
            std::ostringstream msg;
            msg << "eig_normal: residual " << residual << " for eigenvalue " << p.value
                << " exceeds tolerance (matrix not normal?)";
            throw NumericalError(msg.str());
        }
        fix_phase(p.vector);
        pairs.push_back(std::move(p));
    }

    // Stable sort keeps Schur order inside exactly tied phases.
    std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        return quasi_phase(a.value) < quasi_phase(b.value);
    });

    // Schur vectors are already orthonormal; re-orthonormalize degenerate
    // clusters so near-normal round-off does not leak between members.
    std::size_t begin = 0;
    while (begin < pairs.size()) {
        std::size_t end = begin + 1;
        while (end < pairs.size() &&
               std::abs(pairs[end].value - pairs[end - 1].value) < kDegeneracyThreshold) {
            ++end;
        }
        for (std::size_t i = begin + 1; i < end; ++i) {
            for (std::size_t j = begin; j < i; ++j) {
                pairs[i].vector -= pairs[j].vector.dot(pairs[i].vector) * pairs[j].vector;
            }
            pairs[i].vector.normalize();
            fix_phase(pairs[i].vector);
        }
        begin = end;
    }
    return pairs;
}

double quadrature(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("quadrature: panels must be positive");
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + width * p;
        const double hi = (p + 1 == panels) ? b : a + width * (p + 1);
        total += boost::math::quadrature::gauss<double, 20>::integrate(
            [&](double x) {
                const double v = f(x);
                if (!std::isfinite(v)) throw NumericalError("quadrature: non-finite integrand");
                return v;
            },
            lo, hi);
    }
    return total;
}

double unitarity_defect(const ComplexMatrix& m) {
    const ComplexMatrix d = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace breathtrap::numerics
