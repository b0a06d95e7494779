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

namespace breathtrap {

// Scale factor alpha(t) = 1 + epsilon cos(omega t). The evolution variable t
// is either time (particle in a well) or propagation distance (waveguides).
struct BreathingSchedule {
    double epsilon = 0.0;
    double omega = 1.0;

    // Throws std::invalid_argument unless |epsilon| < 1 and omega > 0.
    void validate() const;
    double period() const;
};

struct DriveSample {
    double alpha;
    double alpha_dot;
    double alpha_ddot;
    // Coefficient of the m x'^2 confinement term: alpha alpha''/2 + alpha'^2.
    double drive;
};

DriveSample alpha_eval(const BreathingSchedule& s, double t);

// Closed-form running integrals from 0 to t.
double integral_inverse_alpha(const BreathingSchedule& s, double t);          // dt / alpha
double integral_inverse_alpha_squared(const BreathingSchedule& s, double t);  // dt / alpha^2
double integral_drive(const BreathingSchedule& s, double t);                  // drive dt

}  // namespace breathtrap
