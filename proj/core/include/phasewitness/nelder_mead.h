// Copyright 2026 The phasewitness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHASEWITNESS_NELDER_MEAD_H
#define PHASEWITNESS_NELDER_MEAD_H

#include <functional>
#include <span>
#include <vector>

namespace phasewitness {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Stop once every vertex lies within this distance of the best one.
    double diameter_tol = 1e-6;
    /// Edge length of the initial axis-aligned simplex.
    double initial_step = 0.1;
    int max_evaluations = 2000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f;
    int evaluations;
    bool converged;
};

/// Derivative-free minimization of `f` starting from `x0`.
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& options);

}  // namespace phasewitness

#endif
