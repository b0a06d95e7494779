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

#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace breathtrap::numerics;

namespace {

constexpr double kPi = std::numbers::pi;

// Smooth Hermitian 4x4 generator with period 1.
ComplexMatrix test_generator(double t) {
    ComplexMatrix a(4, 4);
    const double c = std::cos(2.0 * kPi * t);
    const double s = std::sin(2.0 * kPi * t);
    a << 1.0 + c, Complex(0.5, 0.3 * s), 0.2, 0.0,
        Complex(0.5, -0.3 * s), -0.7, Complex(0.1 * c, 0.4), 0.3,
        0.2, Complex(0.1 * c, -0.4), 2.0 * s, Complex(0.0, 0.6),
        0.0, 0.3, Complex(0.0, -0.6), 0.4 - c;
    return a;
}

ComplexMatrix random_givens_unitary(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_int_distribution<int> pick(0, n - 1);
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    for (int r = 0; r < 4 * n; ++r) {
        int p = pick(rng);
        int q = pick(rng);
        if (p == q) continue;
        const double th = angle(rng);
        const double ph = angle(rng);
        ComplexMatrix g = ComplexMatrix::Identity(n, n);
        g(p, p) = std::cos(th);
        g(q, q) = std::cos(th);
        g(p, q) = -std::polar(std::sin(th), ph);
        g(q, p) = std::polar(std::sin(th), -ph);
        u = g * u;
    }
    for (int k = 0; k < n; ++k) u.col(k) *= std::polar(1.0, angle(rng));
    return u;
}

}  // namespace

TEST_CASE("integrate_linear: constant diagonal generator is an exact exponential") {
    const RealVector e = (RealVector(3) << 1.5, -0.25, 3.0).finished();
    auto gen = [&](double) -> ComplexMatrix { return e.cast<Complex>().asDiagonal(); };
    ComplexVector y0 = ComplexVector::Zero(3);
    y0(0) = 1.0;
    const ComplexVector y = integrate_linear(gen, y0, 0.2, 1.7, 1.0, IntegratorConfig{});
    CHECK(std::abs(y(0) - std::polar(1.0, -1.5 * 1.5)) < 1e-10);
    CHECK(std::abs(y(1)) == 0.0);
    CHECK(std::abs(y(2)) == 0.0);
}

TEST_CASE("integrate_linear: zero generator returns the initial state exactly") {
    auto gen = [](double) -> ComplexMatrix { return ComplexMatrix::Zero(2, 2); };
    const ComplexVector y0 = (ComplexVector(2) << Complex(0.3, -0.2), Complex(1.1, 0.7)).finished();
    const ComplexVector y = integrate_linear(gen, y0, 0.0, 3.0, 1.0, IntegratorConfig{64});
    CHECK(y == y0);
}

TEST_CASE("integrate_linear: RK4 self-convergence order is four") {
    ComplexVector y0(4);
    y0 << 1.0, Complex(0.0, 1.0), 0.5, -0.25;
    y0.normalize();
    const ComplexVector reference = integrate_linear(test_generator, y0, 0.0, 1.0, 1.0 / (64 * 16));
    const ComplexVector coarse = integrate_linear(test_generator, y0, 0.0, 1.0, 1.0 / 32);
    const ComplexVector fine = integrate_linear(test_generator, y0, 0.0, 1.0, 1.0 / 64);
    const double order = std::log2((coarse - reference).cwiseAbs().maxCoeff() / (fine - reference).cwiseAbs().maxCoeff());
    INFO("measured order " << order);
    CHECK(order >= 3.8);
    CHECK(order <= 4.2);
}

TEST_CASE("integrate_linear: Hermitian generator conserves the norm over a period") {
    ComplexVector y0(4);
    y0 << 0.1, Complex(0.4, 0.2), -0.8, Complex(0.0, 0.3);
    y0.normalize();
    const ComplexVector y = integrate_linear(test_generator, y0, 0.0, 1.0, 1.0, IntegratorConfig{});
    CHECK(std::abs(y.norm() - 1.0) < 1e-10);
}

TEST_CASE("integrate_linear: identical inputs give bit-identical results") {
    ComplexVector y0 = ComplexVector::Ones(4);
    const ComplexVector a = integrate_linear(test_generator, y0, 0.0, 2.5, 1.0, IntegratorConfig{128});
    const ComplexVector b = integrate_linear(test_generator, y0, 0.0, 2.5, 1.0, IntegratorConfig{128});
    CHECK(a == b);
}

TEST_CASE("integrate_linear: error paths") {
    ComplexVector y3 = ComplexVector::Ones(3);
    CHECK_THROWS_AS(integrate_linear(test_generator, y3, 0.0, 1.0, 1.0, IntegratorConfig{}), std::invalid_argument);
    ComplexVector y4 = ComplexVector::Ones(4);
    CHECK_THROWS_AS(integrate_linear(test_generator, y4, 1.0, 1.0, 1.0, IntegratorConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(integrate_linear(test_generator, y4, 0.0, 1.0, 1.0, IntegratorConfig{8}), std::invalid_argument);

    auto blowup = [](double) -> ComplexMatrix {
        return ComplexMatrix::Constant(1, 1, Complex(0.0, std::numeric_limits<double>::max()));
    };
    ComplexVector y1 = ComplexVector::Ones(1);
    CHECK_THROWS_AS(integrate_linear(blowup, y1, 0.0, 1.0, 1.0, IntegratorConfig{16}), NumericalError);
}

TEST_CASE("monodromy: constant diagonal generator") {
    const RealVector e = (RealVector(3) << 2.0, 5.0, -1.0).finished();
    auto gen = [&](double) -> ComplexMatrix { return e.cast<Complex>().asDiagonal(); };
    const double period = 0.75;
    const ComplexMatrix m = monodromy(gen, 3, period, IntegratorConfig{});
    for (int n = 0; n < 3; ++n) CHECK(std::abs(m(n, n) - std::polar(1.0, -e(n) * period)) < 1e-10);
    CHECK(std::abs(m(0, 1)) == 0.0);
}

TEST_CASE("monodromy: columns equal single-vector propagation") {
    const ComplexMatrix m = monodromy(test_generator, 4, 1.0, IntegratorConfig{256});
    for (int j = 0; j < 4; ++j) {
        const ComplexVector e = ComplexVector::Unit(4, j);
        const ComplexVector col = integrate_linear(test_generator, e, 0.0, 1.0, 1.0, IntegratorConfig{256});
        CHECK((m.col(j) - col).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("monodromy: Hermitian generator gives a unitary propagator") {
    const ComplexMatrix m = monodromy(test_generator, 4, 1.0, IntegratorConfig{});
    CHECK(unitarity_defect(m) < 1e-8);
}

TEST_CASE("monodromy: scalar generator phase matches quadrature of the phase integral") {
    auto f = [](double t) { return 3.0 + 2.0 * std::cos(2.0 * kPi * t) + std::sin(4.0 * kPi * t) * 0.5; };
    auto gen = [&](double t) -> ComplexMatrix { return ComplexMatrix::Constant(1, 1, Complex(f(t), 0.0)); };
    const ComplexMatrix m = monodromy(gen, 1, 1.0, IntegratorConfig{});
    const double phase = quadrature(f, 0.0, 1.0, 16);
    CHECK(std::abs(m(0, 0) - std::polar(1.0, -phase)) < 1e-10);
}

TEST_CASE("eig_normal: identity") {
    const auto pairs = eig_normal(ComplexMatrix::Identity(3, 3));
    REQUIRE(pairs.size() == 3);
    ComplexMatrix v(3, 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(pairs[k].value - 1.0) < 1e-14);
        v.col(k) = pairs[k].vector;
    }
    CHECK((v.adjoint() * v - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eig_normal: diagonal unitary, ordered by quasi-phase") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -0.9);  // quasi-phase 0.9
    m(1, 1) = std::polar(1.0, -0.3);  // quasi-phase 0.3
    const auto pairs = eig_normal(m);
    CHECK(std::abs(pairs[0].value - m(1, 1)) < 1e-14);
    CHECK(std::abs(pairs[0].vector(1) - 1.0) < 1e-14);
    CHECK(std::abs(pairs[1].value - m(0, 0)) < 1e-14);
    CHECK(std::abs(pairs[1].vector(0) - 1.0) < 1e-14);
}

TEST_CASE("eig_normal: random Givens unitaries are reconstructed from their eigenpairs") {
    std::mt19937 rng(20261015);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 10;
        const ComplexMatrix u = random_givens_unitary(n, rng);
        const auto pairs = eig_normal(u);
        ComplexMatrix rebuilt = ComplexMatrix::Zero(n, n);
        for (const auto& p : pairs) {
            CHECK(std::abs(p.vector.norm() - 1.0) < 1e-12);
            CHECK((u * p.vector - p.value * p.vector).norm() < 1e-8);
            rebuilt += p.value * p.vector * p.vector.adjoint();
        }
        CHECK((rebuilt - u).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("eig_normal: degenerate cluster is orthonormal") {
    std::mt19937 rng(7);
    const ComplexMatrix q = random_givens_unitary(5, rng);
    RealVector phases(5);
    phases << 0.4, 0.4, 0.4, -1.0, 2.0;
    const ComplexMatrix m = q * phases.unaryExpr([](double p) { return std::polar(1.0, -p); }).asDiagonal() * q.adjoint();
    const auto pairs = eig_normal(m);
    ComplexMatrix v(5, 5);
    for (int k = 0; k < 5; ++k) v.col(k) = pairs[k].vector;
    CHECK((v.adjoint() * v - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(quasi_phase(pairs[0].value) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(quasi_phase(pairs[4].value) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eig_normal: rejects strongly non-normal input") {
    ComplexMatrix jordan = ComplexMatrix::Zero(2, 2);
    jordan(0, 0) = 1.0;
    jordan(1, 1) = 1.0;
    jordan(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_normal(jordan), NumericalError);
    CHECK_THROWS_AS(eig_normal(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("quasi_phase maps onto (-pi, pi]") {
    CHECK(quasi_phase(Complex(-1.0, 0.0)) == doctest::Approx(kPi));
    CHECK(quasi_phase(Complex(-1.0, -0.0)) == doctest::Approx(kPi));
    CHECK(quasi_phase(std::polar(1.0, -0.5)) == doctest::Approx(0.5));
}

TEST_CASE("quadrature: analytic integrals") {
    CHECK(std::abs(quadrature([](double x) { return std::sin(x) * std::sin(x); }, 0.0, kPi, 8) - kPi / 2) < 1e-12);
    CHECK(std::abs(quadrature([](double x) { return x; }, -0.5, 0.5, 4)) < 1e-16);
}

TEST_CASE("quadrature: ground-state second moment against a fine Riemann sum") {
    auto f = [](double x) {
        const double s = std::sin(kPi * (x + 0.5));
        return x * x * 2.0 * s * s;
    };
    // Midpoint Riemann sum, converges as 1/n^2.
    const int n = 2000000;
    double riemann = 0.0;
    for (int i = 0; i < n; ++i) riemann += f(-0.5 + (i + 0.5) / n);
    riemann /= n;
    const double expected = 1.0 / 12.0 - 1.0 / (2.0 * kPi * kPi);
    CHECK(std::abs(riemann - expected) < 1e-11);
    const double q = quadrature(f, -0.5, 0.5, 8);
    CHECK(std::abs(q - expected) < 1e-12);
    CHECK(std::abs(quadrature(f, -0.5, 0.5, 16) - q) < 1e-12);
}

TEST_CASE("quadrature: non-finite integrand is reported") {
    CHECK_THROWS_AS(quadrature([](double x) { return std::sqrt(x); }, -1.0, 1.0, 2), NumericalError);
}

TEST_CASE("tridiagonal product matches dense") {
    TridiagonalMatrix t(5);
    for (int i = 0; i < 5; ++i) t.diag(i) = Complex(i, -i);
    for (int i = 0; i < 4; ++i) {
        t.lower(i) = Complex(0.5, i);
        t.upper(i) = Complex(-1.0, 0.25 * i);
    }
    ComplexMatrix y = ComplexMatrix::Random(5, 3);
    CHECK((t * y - t.to_dense() * y).cwiseAbs().maxCoeff() < 1e-14);
    ComplexVector v = y.col(1);
    CHECK((t * v - t.to_dense() * v).cwiseAbs().maxCoeff() < 1e-14);
}
