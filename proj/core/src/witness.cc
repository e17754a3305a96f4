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

#include "phasewitness/witness.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <variant>

#include "phasewitness/errors.h"
#include "format.h"

namespace phasewitness {

namespace {

using std::numbers::pi;

void check_same_eta(const WitnessInputs& in) {
    const MeasuredWignerValue* all[] = {&in.w11, &in.w12, &in.w21, &in.w22, &in.wa1, &in.wb1};
    for (const auto* w : all) {
        if (!(w->eta == in.w11.eta)) {
            throw ConfigError("witness inputs were measured at different efficiencies");
        }
    }
    if (in.w11.num_modes != 2 || in.w12.num_modes != 2 || in.w21.num_modes != 2 ||
        in.w22.num_modes != 2 || in.wa1.num_modes != 1 || in.wb1.num_modes != 1) {
        throw ConfigError("witness needs four two-mode values and two single-mode marginals");
    }
}

double high_branch(const WitnessInputs& in, double e) {
    return pi * pi / (4.0 * e * e) * in.correlation_sum() +
           pi * (e - 1.0) / (e * e) * in.marginal_sum() + 2.0 * std::pow(1.0 - 1.0 / e, 2);
}

double low_branch(const WitnessInputs& in) {
    return pi * pi * in.correlation_sum() - 2.0 * pi * in.marginal_sum() + 2.0;
}

nlohmann::json point_json(PhasePoint p) {
    return nlohmann::json::array({round_sig12(p.value().real()), round_sig12(p.value().imag())});
}

PhasePoint point_from_json(const nlohmann::json& j) {
    if (j.is_number()) {
        return PhasePoint(j.get<double>());
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("phase-space point must be [re, im] or a number");
    }
    return PhasePoint(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

double MeasurementSettings::max_abs() const {
    return std::max({std::abs(alpha1.value()), std::abs(alpha2.value()), std::abs(beta1.value()),
                     std::abs(beta2.value())});
}

EstimatedEfficiency::EstimatedEfficiency(double epsilon) : epsilon_(epsilon) {
    if (!std::isfinite(epsilon) || epsilon <= 0.5 || epsilon > 1.0) {
        throw ConfigError("estimated efficiency must lie in (1/2, 1], got " +
                          internal::fmt_double(epsilon));
    }
}

double observable_expectation(const MeasuredWignerValue& w, Efficiency eta) {
    if (w.num_modes != 1) {
        throw ConfigError("observable expectation needs a single-mode Wigner value");
    }
    if (w.eta.regime() != eta.regime()) {
        throw ConfigError("Wigner value measured in the " + std::string(to_string(w.eta.regime())) +
                          " regime, observable requested in the " +
                          std::string(to_string(eta.regime())) + " regime");
    }
    const double e = eta.value();
    if (eta.regime() == Regime::kHigh) {
        return pi / (2.0 * e) * w.value + 1.0 - 1.0 / e;
    }
    return pi * w.value - 1.0;
}

double witness_from_wigner(const WitnessInputs& in, Efficiency eta) {
    check_same_eta(in);
    if (!(in.w11.eta == eta)) {
        throw ConfigError("witness inputs were measured at a different efficiency");
    }
    return eta.regime() == Regime::kHigh ? high_branch(in, eta.value()) : low_branch(in);
}

double witness_estimated(const WitnessInputs& in, Regime coarse_regime,
                         std::optional<EstimatedEfficiency> epsilon) {
    check_same_eta(in);
    if (coarse_regime == Regime::kLow) {
        return low_branch(in);
    }
    if (!epsilon) {
        throw ConfigError("HIGH-regime estimated witness needs an estimated efficiency");
    }
    return high_branch(in, epsilon->value());
}

double lr_bound(Efficiency eta) {
    if (eta.regime() == Regime::kLow) {
        return 18.0;
    }
    return 2.0 * std::pow(1.0 - 2.0 / eta.value(), 2);
}

bool exceeds(double value, double bound) { return std::abs(value) > bound * (1.0 + 1e-12); }

WitnessInputs gather_inputs(const StateModel& state, const MeasurementSettings& s, Efficiency eta,
                            WignerSource source, const FockWignerEvaluator* fock) {
    if (source == WignerSource::kClosedForm) {
        return {closed_form_wigner(state, s.alpha1, s.beta1, eta),
                closed_form_wigner(state, s.alpha1, s.beta2, eta),
                closed_form_wigner(state, s.alpha2, s.beta1, eta),
                closed_form_wigner(state, s.alpha2, s.beta2, eta),
                closed_form_marginal(state, s.alpha1, eta),
                closed_form_marginal(state, s.beta1, eta)};
    }
    std::optional<FockWignerEvaluator> own;
    if (fock == nullptr) {
        own.emplace(build_state(state), s.max_abs());
        fock = &*own;
    }
    return {fock->two_mode(s.alpha1, s.beta1, eta), fock->two_mode(s.alpha1, s.beta2, eta),
            fock->two_mode(s.alpha2, s.beta1, eta), fock->two_mode(s.alpha2, s.beta2, eta),
            fock->single_mode(Mode::kA, s.alpha1, eta),
            fock->single_mode(Mode::kB, s.beta1, eta)};
}

WitnessOutcome make_outcome(const WitnessInputs& in, const MeasurementSettings& settings,
                            Efficiency eta, std::optional<EstimatedEfficiency> epsilon) {
    WitnessOutcome out;
    out.settings = settings;
    out.eta = eta;
    out.regime = eta.regime();
    out.inputs = in;
    out.separable_bound = separable_bound();
    if (epsilon && out.regime == Regime::kHigh) {
        out.value = witness_estimated(in, out.regime, epsilon);
        out.epsilon_used = epsilon;
        out.lr_bound = lr_bound(Efficiency(epsilon->value()));
        if (eta.value() > epsilon->value()) {
            out.valid = false;
            out.note = "estimated efficiency below the true efficiency; separable bound not valid";
        }
    } else {
        out.value = witness_from_wigner(in, eta);
        out.lr_bound = lr_bound(eta);
        if (epsilon) {
            out.note = "estimated efficiency ignored in the LOW regime";
        }
    }
    out.entangled_witnessed = exceeds(out.value, out.separable_bound);
    out.nonlocality_witnessed = exceeds(out.value, out.lr_bound);
    return out;
}

WitnessOutcome evaluate(const StateModel& state, const MeasurementSettings& settings,
                        Efficiency eta, std::optional<EstimatedEfficiency> epsilon,
                        WignerSource source) {
    return make_outcome(gather_inputs(state, settings, eta, source), settings, eta, epsilon);
}

double round_sig12(double x) {
    if (x == 0.0 || !std::isfinite(x)) {
        return x;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

nlohmann::json to_json(const MeasurementSettings& s) {
    return {{"alpha1", point_json(s.alpha1)},
            {"alpha2", point_json(s.alpha2)},
            {"beta1", point_json(s.beta1)},
            {"beta2", point_json(s.beta2)}};
}

MeasurementSettings settings_from_json(const nlohmann::json& j) {
    if (j.is_array()) {
        if (j.size() != 8) {
            throw ConfigError("settings array needs 8 numbers: a1re a1im a2re a2im b1re b1im b2re b2im");
        }
        std::array<double, 8> v{};
        for (std::size_t i = 0; i < 8; ++i) {
            if (!j[i].is_number()) {
                throw ConfigError("settings entries must be numbers");
            }
            v[i] = j[i].get<double>();
        }
        return {PhasePoint(v[0], v[1]), PhasePoint(v[2], v[3]), PhasePoint(v[4], v[5]),
                PhasePoint(v[6], v[7])};
    }
    if (!j.is_object()) {
        throw ConfigError("settings must be an object or an array of 8 numbers");
    }
    for (const char* key : {"alpha1", "alpha2", "beta1", "beta2"}) {
        if (!j.contains(key)) {
            throw ConfigError(std::string("settings object is missing \"") + key + "\"");
        }
    }
    return {point_from_json(j["alpha1"]), point_from_json(j["alpha2"]), point_from_json(j["beta1"]),
            point_from_json(j["beta2"])};
}

nlohmann::json to_json(const WitnessOutcome& o) {
    nlohmann::json j = {
        {"value", round_sig12(o.value)},
        {"separable_bound", round_sig12(o.separable_bound)},
        {"lr_bound", round_sig12(o.lr_bound)},
        {"regime", std::string(to_string(o.regime))},
        {"entangled_witnessed", o.entangled_witnessed},
        {"nonlocality_witnessed", o.nonlocality_witnessed},
        {"valid", o.valid},
        {"settings", to_json(o.settings)},
        {"eta", round_sig12(o.eta.value())},
        {"epsilon_used", o.epsilon_used ? nlohmann::json(round_sig12(o.epsilon_used->value()))
                                        : nlohmann::json(nullptr)},
        {"note", o.note},
    };
    if (o.inputs) {
        const auto& in = *o.inputs;
        j["wigner_inputs"] = {{"w11", round_sig12(in.w11.value)}, {"w12", round_sig12(in.w12.value)},
                              {"w21", round_sig12(in.w21.value)}, {"w22", round_sig12(in.w22.value)},
                              {"wa1", round_sig12(in.wa1.value)}, {"wb1", round_sig12(in.wb1.value)}};
    }
    return j;
}

}  // namespace phasewitness
