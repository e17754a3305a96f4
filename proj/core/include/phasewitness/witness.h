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

#ifndef PHASEWITNESS_WITNESS_H
#define PHASEWITNESS_WITNESS_H

#include <array>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "phasewitness/phase_space.h"

namespace phasewitness {

/// Alice's two displacements and Bob's two displacements.
struct MeasurementSettings {
    PhasePoint alpha1;
    PhasePoint alpha2;
    PhasePoint beta1;
    PhasePoint beta2;

    double max_abs() const;
    bool operator==(const MeasurementSettings&) const = default;
};

/// The experimenter's a-priori efficiency guess, in (1/2, 1].
class EstimatedEfficiency {
   public:
    explicit EstimatedEfficiency(double epsilon);
    double value() const { return epsilon_; }

   private:
    double epsilon_;
};

/// The six measured Wigner values entering the witness: w[a][b] at
/// (alpha_a, beta_b), plus the single-mode marginals at alpha1 and beta1.
struct WitnessInputs {
    MeasuredWignerValue w11, w12, w21, w22;
    MeasuredWignerValue wa1, wb1;

    double correlation_sum() const { return w11.value + w12.value + w21.value - w22.value; }
    double marginal_sum() const { return wa1.value + wb1.value; }
};

enum class WignerSource { kClosedForm, kFockOracle };

struct WitnessOutcome {
    double value = 0.0;
    double separable_bound = 2.0;
    double lr_bound = 2.0;
    Regime regime = Regime::kHigh;
    bool entangled_witnessed = false;
    bool nonlocality_witnessed = false;
    /// False when an estimated efficiency below the true one was used.
    bool valid = true;
    MeasurementSettings settings;
    Efficiency eta{1.0};
    std::optional<EstimatedEfficiency> epsilon_used;
    std::optional<WitnessInputs> inputs;
    std::string note;
};

/// <O(alpha)>_eta from a single-mode measured Wigner value.
/// HIGH: (pi / (2 eta)) w + 1 - 1/eta.  LOW: pi w - 1.
double observable_expectation(const MeasuredWignerValue& w, Efficiency eta);

/// Signed witness value from the six measured Wigner values.
double witness_from_wigner(const WitnessInputs& in, Efficiency eta);

/// Witness with the estimated efficiency in the HIGH-regime coefficients.
/// The LOW branch contains no efficiency and ignores epsilon. Throws
/// ConfigError if the HIGH branch is requested without epsilon.
double witness_estimated(const WitnessInputs& in, Regime coarse_regime,
                         std::optional<EstimatedEfficiency> epsilon);

/// Maximum |<W>| over separable states.
constexpr double separable_bound() { return 2.0; }

/// Local-realism bound: 2 (1 - 2/eta)^2 when eta > 1/2, else 18.
double lr_bound(Efficiency eta);

/// Strict comparison |value| > bound, with a relative 1e-12 roundoff guard.
bool exceeds(double value, double bound);

/// Gathers the six measured Wigner values from the chosen source.
/// ClosedForm needs a non-custom model. `fock` may supply a prebuilt
/// evaluator for the FockOracle route.
WitnessInputs gather_inputs(const StateModel& state, const MeasurementSettings& settings,
                            Efficiency eta, WignerSource source,
                            const FockWignerEvaluator* fock = nullptr);

/// Fills a WitnessOutcome from already-gathered inputs.
WitnessOutcome make_outcome(const WitnessInputs& in, const MeasurementSettings& settings,
                            Efficiency eta, std::optional<EstimatedEfficiency> epsilon);

WitnessOutcome evaluate(const StateModel& state, const MeasurementSettings& settings,
                        Efficiency eta, std::optional<EstimatedEfficiency> epsilon = std::nullopt,
                        WignerSource source = WignerSource::kClosedForm);

nlohmann::json to_json(const MeasurementSettings& s);
MeasurementSettings settings_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WitnessOutcome& outcome);

/// Rounds to 12 significant digits for emitted files.
double round_sig12(double x);

}  // namespace phasewitness

#endif
