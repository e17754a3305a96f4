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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.h"
#include "phasewitness/errors.h"
#include "phasewitness/montecarlo.h"
#include "phasewitness/optimize.h"

using namespace phasewitness;
using std::numbers::pi;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s;
    std::function<Verdict()> check;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

StateModel tmss(double r) { return TwoModeSqueezed{SqueezingParameter(r)}; }

PhasePoint random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    Complex z;
    do {
        z = Complex(u(rng), u(rng));
    } while (std::abs(z) > radius);
    return PhasePoint(z);
}

MeasurementSettings random_settings(std::mt19937_64& rng, double half_width) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    return {PhasePoint(u(rng), u(rng)), PhasePoint(u(rng), u(rng)), PhasePoint(u(rng), u(rng)),
            PhasePoint(u(rng), u(rng))};
}

TwoModeDensityMatrix random_product_state(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 6);
    int da = dim(rng), db = dim(rng);
    int d = std::max({da, db, 2});
    Eigen::MatrixXcd ra = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd rb = Eigen::MatrixXcd::Zero(d, d);
    ra.topLeftCorner(da, da) = oracle::random_density(da, rng);
    rb.topLeftCorner(db, db) = oracle::random_density(db, rng);
    return TwoModeDensityMatrix::product(FockCutoff(d), ra, rb);
}

Verdict threshold_single_photon() {
    double t = threshold_efficiency(SinglePhotonEntangled{}).eta;
    return {t >= 0.38 && t <= 0.42, fmt("eta* = %.4f, window [0.38, 0.42]", t)};
}

Verdict threshold_squeezed() {
    double t = threshold_efficiency(tmss(0.4)).eta;
    double half = maximize_witness(tmss(0.8), Efficiency(0.5)).best_abs;
    bool ok = t >= 0.37 && t <= 0.43 && half > 2.0;
    return {ok, fmt("r=0.4: eta* = %.4f, window [0.37, 0.43]", t) + fmt("; r=0.8 at eta=0.5: max |W| = %.4f > 2", half)};
}

Verdict squeezing_cross_over() {
    const std::vector<double> etas = {1.0, 0.99, 0.7, 0.5};
    const auto grid = linear_grid(0.1, 2.0, 0.02);
    const auto curves = sweep_r(etas, grid);
    auto winner = [&](std::size_t i) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < etas.size(); ++k) {
            if (curves[k].points[i].best_abs > curves[best].points[i].best_abs) best = k;
        }
        return etas[best];
    };
    auto index_of = [&](double r) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (std::abs(grid[i] - r) < 1e-9) return i;
        }
        return grid.size();
    };
    double low = winner(index_of(0.2));
    double high = winner(index_of(1.5));
    // Smallest r from which eta = 1 stays the winner for the rest of the grid.
    double switch_r = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = grid.size(); i-- > 0;) {
        if (winner(i) != 1.0) break;
        switch_r = grid[i];
    }
    bool ok = low == 0.5 && high == 1.0 && switch_r >= 0.8 && switch_r <= 1.6;
    return {ok, fmt("winner at r=0.2: eta=%.2f", low) + fmt(", at r=1.5: eta=%.2f", high) +
                    fmt(", eta=1 leads from r = %.2f (window [0.8, 1.6])", switch_r)};
}

Verdict estimated_efficiency_example() {
    auto res = maximize_witness(tmss(0.4), Efficiency(0.55), EstimatedEfficiency(0.65));
    return {res.best_abs > 2.0, fmt("max |W_eps| = %.4f > 2", res.best_abs)};
}

Verdict unit_efficiency_reduction() {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (const StateModel& model : {StateModel(SinglePhotonEntangled{}), tmss(0.4)}) {
        for (int t = 0; t < 50; ++t) {
            auto in = gather_inputs(model, random_settings(rng, 1.5), Efficiency(1.0), WignerSource::kClosedForm);
            double w = witness_from_wigner(in, Efficiency(1.0));
            double bw = (pi * pi / 4.0) * in.correlation_sum();
            worst = std::max(worst, std::abs(w - bw) / std::max(1.0, std::abs(bw)));
        }
    }
    return {worst <= 2 * std::numeric_limits<double>::epsilon(), fmt("max relative difference %.3g", worst)};
}

Verdict oracle_equivalence() {
    std::mt19937_64 rng(6);
    std::vector<StateModel> models = {SinglePhotonEntangled{}, tmss(0.2), tmss(0.4), tmss(0.8), tmss(1.5)};
    double worst = 0.0;
    int checks = 0;
    for (const auto& model : models) {
        FockWignerEvaluator ev(build_state(model), 2.0);
        for (double e : {0.3, 0.5, 0.7, 1.0}) {
            Efficiency eta(e);
            for (int t = 0; t < 8; ++t) {
                PhasePoint a = random_in_disk(rng, 2.0), b = random_in_disk(rng, 2.0);
                worst = std::max(worst, std::abs(ev.two_mode(a, b, eta).value - closed_form_wigner(model, a, b, eta).value));
                worst = std::max(worst, std::abs(ev.single_mode(Mode::kA, a, eta).value -
                                                 closed_form_marginal(model, a, eta).value));
                worst = std::max(worst, std::abs(ev.single_mode(Mode::kB, b, eta).value -
                                                 closed_form_marginal(model, b, eta).value));
                checks += 3;
            }
        }
    }
    return {worst < 1e-6, fmt("max deviation %.3g", worst) + " over " + std::to_string(checks) + " values"};
}

Verdict separable_bound_property() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_plain = 0.0, worst_est = 0.0;
    for (int t = 0; t < 200; ++t) {
        auto rho = random_product_state(rng);
        FockWignerEvaluator ev(rho, 1.5 * std::sqrt(2.0));
        CustomState state{std::make_shared<const TwoModeDensityMatrix>(rho)};
        Efficiency eta(std::max(u(rng), 1e-3));
        auto in = gather_inputs(state, random_settings(rng, 1.5), eta, WignerSource::kFockOracle, &ev);
        worst_plain = std::max(worst_plain, std::abs(witness_from_wigner(in, eta)));
    }
    for (int t = 0; t < 200; ++t) {
        auto rho = random_product_state(rng);
        FockWignerEvaluator ev(rho, 1.5 * std::sqrt(2.0));
        CustomState state{std::make_shared<const TwoModeDensityMatrix>(rho)};
        double eps = 0.5 + 0.5 * std::max(u(rng), 1e-9);
        double eta = 0.5 + (eps - 0.5) * std::max(u(rng), 1e-9);
        auto in = gather_inputs(state, random_settings(rng, 1.5), Efficiency(eta), WignerSource::kFockOracle, &ev);
        worst_est = std::max(worst_est, std::abs(witness_estimated(in, Regime::kHigh, EstimatedEfficiency(eps))));
    }
    bool ok = worst_plain <= 2.0 + 1e-8 && worst_est <= 2.0 + 1e-8;
    return {ok, fmt("max |W| = %.10f", worst_plain) + fmt(", max |W_eps| = %.10f (bound 2 + 1e-8)", worst_est)};
}

Verdict observable_bound() {
    std::mt19937_64 rng(8);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        int d = 2 + t % 3;
        FockWignerEvaluator ev(TwoModeDensityMatrix::from_dense(FockCutoff(d), oracle::random_density(d * d, rng)));
        for (int k = 1; k <= 10; ++k) {
            Efficiency eta(k / 10.0);
            PhasePoint a = random_in_disk(rng, 2.0);
            for (Mode m : {Mode::kA, Mode::kB}) {
                worst = std::max(worst, std::abs(observable_expectation(ev.single_mode(m, a, eta), eta)));
            }
        }
    }
    return {worst <= 1.0 + 1e-9, fmt("max |<O>| = %.12f", worst)};
}

Verdict parity_identity() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> support(1, 20);
    double worst = 0.0;
    int checks = 0;
    for (int t = 0; t < 500; ++t) {
        const int dim = 48;
        int s = support(rng);
        std::vector<double> p(dim, 0.0);
        double total = 0.0;
        for (int n = 0; n < s; ++n) total += (p[n] = u(rng));
        for (auto& x : p) x /= total;
        CountDistribution dist(p);
        for (int k = 1; k <= 20; ++k) {
            Efficiency eta(k / 20.0);
            worst = std::max(worst, std::abs(alternating_sum(bernoulli_transform(dist, eta)) -
                                             parity_expectation_measured(dist, eta)));
            ++checks;
        }
    }
    return {worst <= 1e-10, fmt("max difference %.3g", worst) + " over " + std::to_string(checks) + " cases"};
}

Verdict monte_carlo_consistency() {
    std::string detail;
    bool ok = true;
    for (const StateModel& model : {StateModel(SinglePhotonEntangled{}), tmss(0.4)}) {
        for (double e : {0.7, 1.0}) {
            Efficiency eta(e);
            auto best = maximize_witness(model, eta);
            SampleSpec spec(1000000, 20260101, eta);
            auto a = witness_from_samples(model, best.best_settings, spec);
            auto b = witness_from_samples(model, best.best_settings, spec);
            double z = std::abs(a.outcome.value - best.best_value) / a.std_error;
            bool same = to_json(a).dump() == to_json(b).dump() &&
                        histograms_to_json(a.histograms).dump() == histograms_to_json(b.histograms).dump();
            ok = ok && z <= 4.0 && same;
            detail += (detail.empty() ? "" : "; ") + describe(model) + fmt(" eta=%.1f: ", e) + fmt("%.2f sigma", z) +
                      (same ? "" : " (rerun differs)");
        }
    }
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "threshold efficiency, single photon", 60, threshold_single_photon},
        {2, "threshold efficiency, two-mode squeezed", 120, threshold_squeezed},
        {3, "squeezing cross-over between efficiencies", 300, squeezing_cross_over},
        {4, "estimated-efficiency violation", 30, estimated_efficiency_example},
        {5, "unit-efficiency reduction to the correlation form", 60, unit_efficiency_reduction},
        {6, "closed forms agree with the Fock route", 60, oracle_equivalence},
        {7, "separable bound on product states", 120, separable_bound_property},
        {8, "observable expectation bounded by 1", 60, observable_bound},
        {9, "parity identity after loss", 60, parity_identity},
        {10, "Monte Carlo agrees with closed form and is reproducible", 120, monte_carlo_consistency},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs <= c.time_limit_s;
        bool pass = v.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("AC%-2d %s  %s: %s [%.2f s, limit %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                    v.detail.c_str(), secs, c.time_limit_s, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
