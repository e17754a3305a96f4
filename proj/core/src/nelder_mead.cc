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

#include "phasewitness/nelder_mead.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "phasewitness/errors.h"

namespace phasewitness {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    if (n == 0) {
        throw ConfigError("Nelder-Mead needs at least one dimension");
    }
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += opt.initial_step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n && evals < opt.max_evaluations; ++i) {
        fv[i] = eval(pts[i]);
    }
    if (evals < static_cast<int>(n + 1)) {
        return {x0, fv[0], evals, false};
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    bool converged = false;

    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        // Stable on ties so the run is deterministic.
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            p2[i] = std::move(pts[order[i]]);
            f2[i] = fv[order[i]];
        }
        pts.swap(p2);
        fv.swap(f2);
    };
    auto along = [&](double t, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = centroid[i] + t * (pts[n][i] - centroid[i]);
        }
    };

    while (true) {
        sort_simplex();
        double diam = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            diam = std::max(diam, distance(pts[i], pts[0]));
        }
        if (diam < opt.diameter_tol) {
            converged = true;
            break;
        }
        if (evals >= opt.max_evaluations) {
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                centroid[k] += pts[i][k] / static_cast<double>(n);
            }
        }

        along(-opt.reflection, trial);
        double fr = eval(trial);
        if (fr < fv[0]) {
            along(-opt.reflection * opt.expansion, trial2);
            double fe = evals < opt.max_evaluations ? eval(trial2) : fr;
            if (fe < fr) {
                pts[n] = trial2;
                fv[n] = fe;
            } else {
                pts[n] = trial;
                fv[n] = fr;
            }
            continue;
        }
        if (fr < fv[n - 1]) {
            pts[n] = trial;
            fv[n] = fr;
            continue;
        }
        if (evals >= opt.max_evaluations) {
            break;
        }
        // Outside contraction when the reflected point beats the worst one.
        const bool outside = fr < fv[n];
        along(outside ? -opt.reflection * opt.contraction : opt.contraction, trial2);
        double fc = eval(trial2);
        if (fc < (outside ? fr : fv[n])) {
            pts[n] = trial2;
            fv[n] = fc;
            continue;
        }
        for (std::size_t i = 1; i <= n && evals < opt.max_evaluations; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                pts[i][k] = pts[0][k] + opt.shrink * (pts[i][k] - pts[0][k]);
            }
            fv[i] = eval(pts[i]);
        }
    }
    return {pts[0], fv[0], evals, converged};
}

}  // namespace phasewitness
