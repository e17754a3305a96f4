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

#include "phasewitness/optimize.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "phasewitness/errors.h"
#include "phasewitness/nelder_mead.h"
#include "phasewitness/parallel.h"

namespace phasewitness {

namespace {

constexpr double kTieTol = 1e-12;

bool is_custom(const StateModel& state) { return std::holds_alternative<CustomState>(state); }

// Maps a search vector onto settings and evaluates the signed witness.
class Objective {
   public:
    Objective(const StateModel& state, Efficiency eta, std::optional<EstimatedEfficiency> epsilon,
              const SearchOptions& options)
        : state_(state),
          eta_(eta),
          epsilon_(epsilon),
          complex_(options.complex_settings),
          source_(is_custom(state) ? WignerSource::kFockOracle : options.source) {
        if (source_ == WignerSource::kFockOracle) {
            double reach = options.grid_half_width * (complex_ ? std::sqrt(2.0) : 1.0) + 0.5;
            fock_.emplace(build_state(state), reach);
        }
    }

    int dims() const { return complex_ ? 8 : 4; }

    MeasurementSettings settings_of(std::span<const double> x) const {
        if (complex_) {
            return {PhasePoint(x[0], x[1]), PhasePoint(x[2], x[3]), PhasePoint(x[4], x[5]),
                    PhasePoint(x[6], x[7])};
        }
        return {PhasePoint(x[0]), PhasePoint(x[1]), PhasePoint(x[2]), PhasePoint(x[3])};
    }

    double signed_value(std::span<const double> x) const {
        MeasurementSettings s = settings_of(x);
        WitnessInputs in = gather_inputs(state_, s, eta_, source_, fock_ ? &*fock_ : nullptr);
        if (epsilon_ && eta_.regime() == Regime::kHigh) {
            return witness_estimated(in, Regime::kHigh, epsilon_);
        }
        return witness_from_wigner(in, eta_);
    }

   private:
    const StateModel& state_;
    Efficiency eta_;
    std::optional<EstimatedEfficiency> epsilon_;
    bool complex_;
    WignerSource source_;
    std::optional<FockWignerEvaluator> fock_;
};

struct Candidate {
    double abs_value;
    double value;
    std::vector<double> x;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.abs_value > b.abs_value + kTieTol) {
        return true;
    }
    if (std::abs(a.abs_value - b.abs_value) <= kTieTol) {
        return a.x < b.x;
    }
    return false;
}

int points_per_axis(const SearchOptions& o) {
    return o.complex_settings ? o.complex_grid_points : o.grid_points;
}

void check_grid(const std::vector<double>& grid, const char* name) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ConfigError(std::string(name) + " grid must be strictly increasing");
        }
    }
    if (grid.empty()) {
        throw ConfigError(std::string(name) + " grid is empty");
    }
}

std::vector<double> sorted_grid(std::vector<double> grid, const char* name) {
    std::sort(grid.begin(), grid.end());
    check_grid(grid, name);
    return grid;
}

SweepPoint make_point(double parameter, const OptimizationResult& r, bool valid, double lr) {
    return {parameter, r.best_abs, r.best_value, exceeds(r.best_value, separable_bound()),
            valid, r.best_settings, separable_bound(), lr};
}

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

nlohmann::json state_context(const StateModel& state) {
    nlohmann::json j = {{"state", describe(state)}};
    if (const auto* t = std::get_if<TwoModeSqueezed>(&state)) {
        j["r"] = t->r.value();
    }
    return j;
}

}  // namespace

long long grid_size(const SearchOptions& o) {
    const int dims = o.complex_settings ? 8 : 4;
    long long n = 1;
    for (int i = 0; i < dims; ++i) {
        n *= points_per_axis(o);
    }
    return n;
}

OptimizationResult maximize_witness(const StateModel& state, Efficiency eta,
                                    std::optional<EstimatedEfficiency> epsilon,
                                    const SearchOptions& options) {
    const int per_axis = points_per_axis(options);
    if (per_axis < 2) {
        throw ConfigError("search grid needs at least 2 points per axis");
    }
    if (!(options.grid_half_width > 0.0)) {
        throw ConfigError("search grid half-width must be positive");
    }
    const long long grid = grid_size(options);
    if (options.budget < grid) {
        throw ConfigError("evaluation budget " + std::to_string(options.budget) +
                          " is below the seeding grid size " + std::to_string(grid));
    }

    Objective objective(state, eta, epsilon, options);
    const int dims = objective.dims();
    const double h = options.grid_half_width;
    const double spacing = 2.0 * h / (per_axis - 1);

    OptimizationResult result;
    std::vector<Candidate> seeds;
    const std::size_t keep = static_cast<std::size_t>(std::max(1, options.refine_seeds));
    auto seed_order = [](const Candidate& a, const Candidate& b) { return better(a, b); };

    std::vector<double> x(dims);
    std::vector<int> idx(dims, 0);
    for (long long g = 0; g < grid; ++g) {
        for (int d = 0; d < dims; ++d) {
            x[d] = -h + spacing * idx[d];
        }
        double v = objective.signed_value(x);
        Candidate c{std::abs(v), v, x};
        if (seeds.size() < keep || better(c, seeds.back())) {
            seeds.insert(std::upper_bound(seeds.begin(), seeds.end(), c, seed_order), c);
            if (seeds.size() > keep) {
                seeds.pop_back();
            }
        }
        for (int d = dims - 1; d >= 0; --d) {
            if (++idx[d] < per_axis) {
                break;
            }
            idx[d] = 0;
        }
    }
    result.evaluations = static_cast<int>(grid);

    Candidate best = seeds.front();
    bool best_converged = false;
    const long long remaining = options.budget - grid;
    const int per_seed = static_cast<int>(remaining / static_cast<long long>(seeds.size()));
    if (per_seed > dims) {
        NelderMeadOptions nm;
        nm.initial_step = spacing / 2.0;
        nm.diameter_tol = options.diameter_tol;
        nm.max_evaluations = per_seed;
        auto minus_abs = [&](std::span<const double> p) { return -std::abs(objective.signed_value(p)); };
        for (const auto& seed : seeds) {
            NelderMeadResult r = nelder_mead_minimize(minus_abs, seed.x, nm);
            result.evaluations += r.evaluations;
            double v = objective.signed_value(r.x);
            Candidate c{std::abs(v), v, r.x};
            if (better(c, best)) {
                best = c;
                best_converged = r.converged;
            }
        }
    }
    result.best_settings = objective.settings_of(best.x);
    result.best_value = best.value;
    result.best_abs = best.abs_value;
    result.converged = best_converged;
    return result;
}

ThresholdResult threshold_efficiency(const StateModel& state, double tol,
                                     const SearchOptions& options) {
    if (!(tol > 0.0)) {
        throw ConfigError("threshold tolerance must be positive");
    }
    ThresholdResult out{};
    auto best_abs = [&](double eta) {
        return maximize_witness(state, Efficiency(eta), std::nullopt, options).best_abs;
    };
    std::vector<double> scan_etas;
    for (int k = 30; k <= 100; k += 5) {
        scan_etas.push_back(k / 100.0);
    }
    std::vector<double> values(scan_etas.size());
    parallel_for(scan_etas.size(), options.jobs,
                 [&](std::size_t i) { values[i] = best_abs(scan_etas[i]); });
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < scan_etas.size(); ++i) {
        out.scan.emplace_back(scan_etas[i], values[i]);
        if (!first && exceeds(values[i], separable_bound())) {
            first = i;
        }
    }
    if (!first) {
        throw NoViolation("the optimized witness never exceeds 2 on the efficiency scan for " +
                          describe(state));
    }
    if (*first == 0) {
        out.lower = out.upper = out.eta = scan_etas[0];
        return out;
    }
    double lo = scan_etas[*first - 1];
    double hi = scan_etas[*first];
    while (hi - lo >= tol) {
        double mid = 0.5 * (lo + hi);
        if (exceeds(best_abs(mid), separable_bound())) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.lower = lo;
    out.upper = hi;
    out.eta = 0.5 * (lo + hi);
    return out;
}

SweepCurve sweep_eta(const StateModel& state, const std::vector<double>& eta_grid,
                     const SearchOptions& options) {
    std::vector<double> grid = sorted_grid(eta_grid, "efficiency");
    for (double e : grid) {
        (void)Efficiency(e);
    }
    SweepCurve curve{"eta", state_context(state), std::vector<SweepPoint>(grid.size())};
    parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
        Efficiency eta(grid[i]);
        OptimizationResult r = maximize_witness(state, eta, std::nullopt, options);
        curve.points[i] = make_point(grid[i], r, true, lr_bound(eta));
    });
    return curve;
}

std::vector<SweepCurve> sweep_r(const std::vector<double>& eta_list,
                                const std::vector<double>& r_grid, const SearchOptions& options) {
    std::vector<double> grid = sorted_grid(r_grid, "squeezing");
    std::vector<SweepCurve> curves;
    for (double e : eta_list) {
        Efficiency eta(e);
        curves.push_back({"r", {{"state", "tmss"}, {"eta", e}}, std::vector<SweepPoint>(grid.size())});
    }
    const std::size_t n = grid.size();
    parallel_for(eta_list.size() * n, options.jobs, [&](std::size_t k) {
        const std::size_t c = k / n;
        const std::size_t i = k % n;
        Efficiency eta(eta_list[c]);
        StateModel tmss = TwoModeSqueezed{SqueezingParameter(grid[i])};
        OptimizationResult r = maximize_witness(tmss, eta, std::nullopt, options);
        curves[c].points[i] = make_point(grid[i], r, true, lr_bound(eta));
    });
    return curves;
}

SweepCurve sweep_epsilon(const StateModel& state, Efficiency eta,
                         const std::vector<double>& eps_grid, const SearchOptions& options) {
    if (eta.regime() != Regime::kHigh) {
        throw ConfigError("estimated-efficiency sweeps need a true efficiency above 1/2");
    }
    std::vector<double> grid = sorted_grid(eps_grid, "estimated efficiency");
    for (double e : grid) {
        (void)EstimatedEfficiency(e);
    }
    nlohmann::json ctx = state_context(state);
    ctx["eta"] = eta.value();
    SweepCurve curve{"epsilon", ctx, std::vector<SweepPoint>(grid.size())};
    parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
        EstimatedEfficiency eps(grid[i]);
        OptimizationResult r = maximize_witness(state, eta, eps, options);
        curve.points[i] =
            make_point(grid[i], r, eta.value() <= eps.value(), lr_bound(Efficiency(eps.value())));
    });
    return curve;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
        throw ConfigError("grid bounds must be finite with min <= max");
    }
    if (!(step > 0.0)) {
        throw ConfigError("grid step must be positive");
    }
    std::vector<double> out;
    const long long n = static_cast<long long>(std::floor((hi - lo) / step + 1e-3));
    for (long long k = 0; k <= n; ++k) {
        out.push_back(lo + static_cast<double>(k) * step);
    }
    if (hi - out.back() > step * 1e-3) {
        out.push_back(hi);
    } else {
        out.back() = std::min(out.back(), hi);
    }
    // Round away representation noise such as 0.30000000000000004.
    for (double& v : out) {
        v = round_sig12(v);
    }
    return out;
}

void write_csv(std::ostream& out, const SweepCurve& curve) {
    out << kSweepCsvHeader << '\n';
    for (const auto& p : curve.points) {
        const auto& s = p.settings;
        out << fmt12(p.parameter) << ',' << fmt12(p.best_abs) << ','
            << (p.violated ? "true" : "false") << ',' << (p.valid ? "true" : "false") << ','
            << fmt12(s.alpha1.value().real()) << ',' << fmt12(s.alpha1.value().imag()) << ','
            << fmt12(s.alpha2.value().real()) << ',' << fmt12(s.alpha2.value().imag()) << ','
            << fmt12(s.beta1.value().real()) << ',' << fmt12(s.beta1.value().imag()) << ','
            << fmt12(s.beta2.value().real()) << ',' << fmt12(s.beta2.value().imag()) << ','
            << fmt12(p.sep_bound) << ',' << fmt12(p.lr_bound) << '\n';
    }
}

nlohmann::json to_json(const SweepCurve& curve) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : curve.points) {
        pts.push_back({{"parameter", round_sig12(p.parameter)},
                       {"best_abs", round_sig12(p.best_abs)},
                       {"best_value", round_sig12(p.best_value)},
                       {"violated", p.violated},
                       {"valid", p.valid},
                       {"settings", to_json(p.settings)},
                       {"sep_bound", round_sig12(p.sep_bound)},
                       {"lr_bound", round_sig12(p.lr_bound)}});
    }
    return {{"parameter_name", curve.parameter_name}, {"context", curve.context}, {"points", pts}};
}

nlohmann::json to_json(const OptimizationResult& r) {
    return {{"best_settings", to_json(r.best_settings)},
            {"best_value", round_sig12(r.best_value)},
            {"best_abs", round_sig12(r.best_abs)},
            {"evaluations", r.evaluations},
            {"converged", r.converged}};
}

}  // namespace phasewitness
