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

#include "breathtrap/breathing.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace breathtrap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Integral of 1 / (1 + e cos u) over [0, phi], continued across periods.
double inverse_cosine_integral(double e, double phi) {
    if (e == 0.0) return phi;
    const double s = std::sqrt(1.0 - e * e);
    const double r = std::sqrt((1.0 - e) / (1.0 + e));
    // remainder() is exact, so rem and turns always agree on the branch of
    // tan(rem / 2); round(phi / 2pi) alone can disagree near odd multiples of pi.
    const double rem = std::remainder(phi, kTwoPi);
    const double turns = std::round((phi - rem) / kTwoPi);
    return turns * kTwoPi / s + (2.0 / s) * std::atan(r * std::tan(0.5 * rem));
}

}  // namespace

void BreathingSchedule::validate() const {
    if (!std::isfinite(epsilon) || !(std::abs(epsilon) < 1.0)) {
        std::ostringstream msg;
        msg << "breathing amplitude must satisfy |epsilon| < 1 (got " << epsilon << ")";
        throw std::invalid_argument(msg.str());
    }
    if (!std::isfinite(omega) || !(omega > 0.0)) {
        std::ostringstream msg;
        msg << "breathing frequency must be positive (got " << omega << ")";
        throw std::invalid_argument(msg.str());
    }
}

double BreathingSchedule::period() const { return kTwoPi / omega; }

DriveSample alpha_eval(const BreathingSchedule& s, double t) {
    const double c = std::cos(s.omega * t);
    const double sn = std::sin(s.omega * t);
    DriveSample out{};
    out.alpha = 1.0 + s.epsilon * c;
    out.alpha_dot = -s.epsilon * s.omega * sn;
    out.alpha_ddot = -s.epsilon * s.omega * s.omega * c;
    out.drive = 0.5 * out.alpha * out.alpha_ddot + out.alpha_dot * out.alpha_dot;
    return out;
}

double integral_inverse_alpha(const BreathingSchedule& s, double t) {
    return inverse_cosine_integral(s.epsilon, s.omega * t) / s.omega;
}

double integral_inverse_alpha_squared(const BreathingSchedule& s, double t) {
    const double e = s.epsilon;
    if (e == 0.0) return t;
    const double phi = s.omega * t;
    const double boundary = e * std::sin(phi) / (1.0 + e * std::cos(phi));
    return (inverse_cosine_integral(e, phi) - boundary) / ((1.0 - e * e) * s.omega);
}

double integral_drive(const BreathingSchedule& s, double t) {
    // alpha alpha''/2 integrates by parts to alpha alpha'/2 - (1/2) int alpha'^2.
    const DriveSample d = alpha_eval(s, t);
    const double w = s.omega;
    const double alpha_dot_sq = s.epsilon * s.epsilon * w * w * (0.5 * t - std::sin(2.0 * w * t) / (4.0 * w));
    return 0.5 * d.alpha * d.alpha_dot + 0.5 * alpha_dot_sq;
}

}  // namespace breathtrap
