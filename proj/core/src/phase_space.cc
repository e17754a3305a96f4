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

#include "phasewitness/phase_space.h"

#include <cmath>
#include <numbers>
#include <variant>

#include "phasewitness/errors.h"
#include "format.h"

namespace phasewitness {

namespace {

using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

MeasuredWignerValue two_mode_value(double v, Efficiency eta, PhasePoint a, PhasePoint b) {
    return {v, eta, 2, {a, b}};
}

MeasuredWignerValue single_mode_value(double v, Efficiency eta, PhasePoint a) {
    return {v, eta, 1, {a, PhasePoint()}};
}

}  // namespace

std::string_view to_string(Regime regime) { return regime == Regime::kHigh ? "HIGH" : "LOW"; }

Efficiency::Efficiency(double eta) : eta_(eta) {
    if (!std::isfinite(eta) || eta <= 0.0 || eta > 1.0) {
        throw ConfigError("efficiency must lie in (0, 1], got " + internal::fmt_double(eta));
    }
}

CountDistribution bernoulli_transform(const CountDistribution& p, Efficiency eta) {
    const double e = eta.value();
    const double log_keep = std::log(e);
    const double log_lose = std::log1p(-e);
    const std::size_t size = p.size();
    std::vector<double> out(size, 0.0);
    for (std::size_t n = 0; n < size; ++n) {
        if (p[n] == 0.0) {
            continue;
        }
        for (std::size_t m = 0; m <= n; ++m) {
            double log_binom = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
            double log_term = log_binom + (m == 0 ? 0.0 : m * log_keep) +
                              (n == m ? 0.0 : (n - m) * log_lose);
            out[m] += p[n] * std::exp(log_term);
        }
    }
    return CountDistribution(std::move(out), 1.0 - p.total() + 1e-9);
}

Eigen::VectorXd parity_weights(Efficiency eta, Eigen::Index size) {
    Eigen::VectorXd f(size);
    const double base = 1.0 - 2.0 * eta.value();
    double w = 1.0;
    for (Eigen::Index n = 0; n < size; ++n) {
        f(n) = w;
        w *= base;
    }
    return f;
}

double parity_expectation_measured(const CountDistribution& p, Efficiency eta) {
    Eigen::VectorXd f = parity_weights(eta, static_cast<Eigen::Index>(p.size()));
    double s = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        s += f(static_cast<Eigen::Index>(n)) * p[n];
    }
    return s;
}

double alternating_sum(const CountDistribution& p) {
    double s = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) {
        s += (m % 2 == 0 ? 1.0 : -1.0) * p[m];
    }
    return s;
}

double s_parameter_of(Efficiency eta) { return -(1.0 - eta.value()) / eta.value(); }

double s_ordered_value(const CountDistribution& displaced, double s) {
    if (!(s < 1.0)) {
        throw ConfigError("s-ordered value needs s < 1");
    }
    const double ratio = (s + 1.0) / (s - 1.0);
    double w = 1.0;
    double sum = 0.0;
    for (std::size_t n = 0; n < displaced.size(); ++n) {
        sum += w * displaced[n];
        w *= ratio;
    }
    return 2.0 / (pi * (1.0 - s)) * sum;
}

// ---------------------------------------------------------------------------
// Fock route

FockWignerEvaluator::FockWignerEvaluator(TwoModeDensityMatrix rho, double reach)
    : rho_(std::move(rho)), reach_(reach), basis_(padded_dim(reach, rho_.dim())) {}

const DisplacementBasis& FockWignerEvaluator::basis_for(
    double reach, std::optional<DisplacementBasis>& tmp) const {
    if (reach <= reach_) {
        return basis_;
    }
    tmp.emplace(padded_dim(reach, rho_.dim()));
    return *tmp;
}

JointCountDistribution FockWignerEvaluator::joint_distribution(PhasePoint alpha,
                                                               PhasePoint beta) const {
    std::optional<DisplacementBasis> tmp;
    const auto& basis =
        basis_for(std::max(std::abs(alpha.value()), std::abs(beta.value())), tmp);
    return displaced_number_distribution(rho_, basis, alpha, beta);
}

CountDistribution FockWignerEvaluator::marginal_distribution(Mode mode, PhasePoint alpha) const {
    std::optional<DisplacementBasis> tmp;
    const auto& basis = basis_for(std::abs(alpha.value()), tmp);
    return displaced_marginal_distribution(rho_, basis, mode == Mode::kB, alpha);
}

MeasuredWignerValue FockWignerEvaluator::two_mode(PhasePoint alpha, PhasePoint beta,
                                                  Efficiency eta) const {
    JointCountDistribution p = joint_distribution(alpha, beta);
    Eigen::VectorXd f = parity_weights(eta, p.probs().rows());
    double v = 4.0 / (pi * pi) * f.dot(p.probs() * f);
    return two_mode_value(v, eta, alpha, beta);
}

MeasuredWignerValue FockWignerEvaluator::single_mode(Mode mode, PhasePoint alpha,
                                                     Efficiency eta) const {
    CountDistribution p = marginal_distribution(mode, alpha);
    double v = 2.0 / pi * parity_expectation_measured(p, eta);
    return single_mode_value(v, eta, alpha);
}

MeasuredWignerValue measured_wigner_2m(const TwoModeDensityMatrix& rho, PhasePoint alpha,
                                       PhasePoint beta, Efficiency eta) {
    FockWignerEvaluator ev(rho, std::max(std::abs(alpha.value()), std::abs(beta.value())));
    return ev.two_mode(alpha, beta, eta);
}

MeasuredWignerValue measured_wigner_1m(const TwoModeDensityMatrix& rho, Mode mode,
                                       PhasePoint alpha, Efficiency eta) {
    FockWignerEvaluator ev(rho, std::abs(alpha.value()));
    return ev.single_mode(mode, alpha, eta);
}

// ---------------------------------------------------------------------------
// Closed forms

double tmss_r_factor(double r, double eta) {
    return 2.0 * (1.0 - 1.0 / eta) * (1.0 - std::cosh(2.0 * r)) + 1.0 / (eta * eta);
}

double tmss_s_factor(double r, double eta) { return std::cosh(2.0 * r) - 1.0 + 1.0 / eta; }

MeasuredWignerValue closed_form_wigner(const StateModel& model, PhasePoint alpha, PhasePoint beta,
                                       Efficiency eta) {
    const double e = eta.value();
    const Complex a = alpha.value();
    const Complex b = beta.value();
    const double v = std::visit(
        overloaded{
            [&](const SinglePhotonEntangled&) {
                return 4.0 / (pi * pi) * (1.0 - 2.0 * e + 2.0 * e * e * std::norm(a + b)) *
                       std::exp(-2.0 * e * (std::norm(a) + std::norm(b)));
            },
            [&](const TwoModeSqueezed& t) {
                const double r = t.r.value();
                const double big_r = tmss_r_factor(r, e);
                const double big_s = tmss_s_factor(r, e);
                const double cross = 2.0 * (a * b).real();
                return 4.0 / (pi * pi * e * e * big_r) *
                       std::exp(-2.0 / big_r *
                                (big_s * (std::norm(a) + std::norm(b)) -
                                 std::sinh(2.0 * r) * cross));
            },
            [](const CustomState&) -> double {
                throw UnsupportedModel("no closed-form Wigner function for custom states");
            },
        },
        model);
    return two_mode_value(v, eta, alpha, beta);
}

MeasuredWignerValue closed_form_marginal(const StateModel& model, PhasePoint alpha,
                                         Efficiency eta) {
    const double e = eta.value();
    const double a2 = alpha.norm_sq();
    const double v = std::visit(
        overloaded{
            [&](const SinglePhotonEntangled&) {
                return 1.0 / pi * (2.0 - 2.0 * e + 4.0 * e * e * a2) * std::exp(-2.0 * e * a2);
            },
            [&](const TwoModeSqueezed& t) {
                const double big_s = tmss_s_factor(t.r.value(), e);
                return 2.0 / (pi * e * big_s) * std::exp(-2.0 * a2 / big_s);
            },
            [](const CustomState&) -> double {
                throw UnsupportedModel("no closed-form marginal for custom states");
            },
        },
        model);
    return single_mode_value(v, eta, alpha);
}

}  // namespace phasewitness
