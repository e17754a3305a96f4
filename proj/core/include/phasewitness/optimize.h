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

#ifndef PHASEWITNESS_OPTIMIZE_H
#define PHASEWITNESS_OPTIMIZE_H

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phasewitness/witness.h"

namespace phasewitness {

/// Settings search: a coarse grid seeds Nelder-Mead refinements.
struct SearchOptions {
    /// Grid points per axis over [-grid_half_width, grid_half_width].
    int grid_points = 9;
    double grid_half_width = 1.5;
    /// Search all 8 real components instead of real displacements only.
    bool complex_settings = false;
    /// Grid points per axis in the 8-dimensional mode.
    int complex_grid_points = 5;
    /// Total objective evaluations, grid included.
    int budget = 40000;
    /// Number of best grid points refined by Nelder-Mead.
    int refine_seeds = 8;
    double diameter_tol = 1e-6;
    /// Closed form by default; custom states always use the Fock route.
    WignerSource source = WignerSource::kClosedForm;
    /// Worker threads for sweeps; 0 means machine parallelism.
    int jobs = 0;
};

/// Number of grid evaluations the search performs before refinement.
long long grid_size(const SearchOptions& options);

struct OptimizationResult {
    MeasurementSettings best_settings;
    double best_value = 0.0;
    double best_abs = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Maximizes |witness| over settings. With `epsilon` the HIGH-regime value
/// uses the estimated efficiency. Throws ConfigError when the budget is
/// below grid_size(options). Deterministic for fixed inputs.
OptimizationResult maximize_witness(const StateModel& state, Efficiency eta,
                                    std::optional<EstimatedEfficiency> epsilon = std::nullopt,
                                    const SearchOptions& options = {});

struct ThresholdResult {
    double eta;
    double lower;  // largest efficiency known not to violate
    double upper;  // smallest efficiency known to violate
    std::vector<std::pair<double, double>> scan;  // (eta, best_abs)
};

/// Lowest efficiency at which the optimized witness exceeds 2. Scans
/// eta = 0.30, 0.35, ..., 1.00, then bisects the bracket below the first
/// violating scan point until it is narrower than `tol`. Throws NoViolation
/// when no scan point violates.
ThresholdResult threshold_efficiency(const StateModel& state, double tol = 1e-3,
                                     const SearchOptions& options = {});

struct SweepPoint {
    double parameter;
    double best_abs;
    double best_value;
    bool violated;
    bool valid;
    MeasurementSettings settings;
    double sep_bound;
    double lr_bound;
};

struct SweepCurve {
    std::string parameter_name;
    nlohmann::json context;
    std::vector<SweepPoint> points;
};

SweepCurve sweep_eta(const StateModel& state, const std::vector<double>& eta_grid,
                     const SearchOptions& options = {});

/// One TMSS curve over r per efficiency in `eta_list`.
std::vector<SweepCurve> sweep_r(const std::vector<double>& eta_list,
                                const std::vector<double>& r_grid,
                                const SearchOptions& options = {});

/// Estimated-efficiency sweep at a fixed HIGH-regime eta. Points with
/// epsilon < eta are kept and marked invalid.
SweepCurve sweep_epsilon(const StateModel& state, Efficiency eta,
                         const std::vector<double>& eps_grid, const SearchOptions& options = {});

/// Evenly spaced grid from lo to hi inclusive (hi snapped when within
/// step / 1000).
std::vector<double> linear_grid(double lo, double hi, double step);

inline constexpr const char* kSweepCsvHeader =
    "parameter,best_abs,violated,valid,alpha1_re,alpha1_im,alpha2_re,alpha2_im,"
    "beta1_re,beta1_im,beta2_re,beta2_im,sep_bound,lr_bound";

void write_csv(std::ostream& out, const SweepCurve& curve);
nlohmann::json to_json(const SweepCurve& curve);
nlohmann::json to_json(const OptimizationResult& result);

}  // namespace phasewitness

#endif
