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

#ifndef PHASEWITNESS_PHASE_SPACE_H
#define PHASEWITNESS_PHASE_SPACE_H

#include <array>
#include <optional>
#include <string_view>

#include "phasewitness/distributions.h"
#include "phasewitness/states.h"

namespace phasewitness {

enum class Regime { kHigh, kLow };

std::string_view to_string(Regime regime);

/// Detection efficiency eta in (0, 1]. eta > 1/2 is the HIGH regime.
class Efficiency {
   public:
    explicit Efficiency(double eta);
    double value() const { return eta_; }
    Regime regime() const { return eta_ > 0.5 ? Regime::kHigh : Regime::kLow; }
    bool operator==(const Efficiency&) const = default;

   private:
    double eta_;
};

enum class Mode { kA, kB };

/// Value of a measured (efficiency-smoothed) Wigner function at one point
/// (single mode) or a pair of points (two mode).
struct MeasuredWignerValue {
    double value;
    Efficiency eta;
    int num_modes;
    std::array<PhasePoint, 2> points;
};

/// P_eta(m) = sum_{n >= m} P(n) C(n, m) (1 - eta)^(n - m) eta^m.
CountDistribution bernoulli_transform(const CountDistribution& p, Efficiency eta);

/// sum_n (1 - 2 eta)^n P(n), with 0^0 = 1.
double parity_expectation_measured(const CountDistribution& p, Efficiency eta);

/// Alternating sum sum_m (-1)^m P(m) of an already-thinned distribution.
double alternating_sum(const CountDistribution& p);

/// (1 - 2 eta)^n for n = 0..size-1, with 0^0 = 1.
Eigen::VectorXd parity_weights(Efficiency eta, Eigen::Index size);

/// s = -(1 - eta) / eta.
double s_parameter_of(Efficiency eta);

/// s-ordered quasi-probability (2 / (pi (1 - s))) sum_n ((s + 1) / (s - 1))^n P(n)
/// for s < 1.
double s_ordered_value(const CountDistribution& displaced, double s);

/// Fock-basis evaluator for one density matrix. Holds a padded displacement
/// basis sized for points with |alpha| <= reach; farther points get a
/// temporary basis. Immutable, so one instance may be shared across threads.
class FockWignerEvaluator {
   public:
    explicit FockWignerEvaluator(TwoModeDensityMatrix rho, double reach = 2.0);

    const TwoModeDensityMatrix& state() const { return rho_; }

    JointCountDistribution joint_distribution(PhasePoint alpha, PhasePoint beta) const;
    CountDistribution marginal_distribution(Mode mode, PhasePoint alpha) const;

    MeasuredWignerValue two_mode(PhasePoint alpha, PhasePoint beta, Efficiency eta) const;
    MeasuredWignerValue single_mode(Mode mode, PhasePoint alpha, Efficiency eta) const;

   private:
    const DisplacementBasis& basis_for(double reach, std::optional<DisplacementBasis>& tmp) const;

    TwoModeDensityMatrix rho_;
    double reach_;
    DisplacementBasis basis_;
};

/// W^eta(alpha, beta) = (4 / pi^2) sum_{n,m} (1 - 2 eta)^(n + m) P(alpha, n; beta, m).
MeasuredWignerValue measured_wigner_2m(const TwoModeDensityMatrix& rho, PhasePoint alpha,
                                       PhasePoint beta, Efficiency eta);

/// (2 / pi) sum_n (1 - 2 eta)^n P(alpha, n) of the reduced state of `mode`.
MeasuredWignerValue measured_wigner_1m(const TwoModeDensityMatrix& rho, Mode mode,
                                       PhasePoint alpha, Efficiency eta);

/// Closed-form two-mode measured Wigner function of the single-photon
/// entangled state or the TMSS. Throws UnsupportedModel for custom states.
MeasuredWignerValue closed_form_wigner(const StateModel& model, PhasePoint alpha, PhasePoint beta,
                                       Efficiency eta);

/// Closed-form single-mode marginal. Both modes of both families share it.
MeasuredWignerValue closed_form_marginal(const StateModel& model, PhasePoint alpha,
                                         Efficiency eta);

/// R(eta) = 2 (1 - 1/eta)(1 - cosh 2r) + 1/eta^2.
double tmss_r_factor(double r, double eta);
/// S(eta) = cosh 2r - 1 + 1/eta.
double tmss_s_factor(double r, double eta);

}  // namespace phasewitness

#endif
