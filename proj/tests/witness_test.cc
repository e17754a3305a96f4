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
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"
#include "phasewitness/errors.h"

using namespace phasewitness;
using std::numbers::pi;

namespace {

MeasuredWignerValue two_mode(double v, double eta) { return {v, Efficiency(eta), 2, {}}; }
MeasuredWignerValue one_mode(double v, double eta) { return {v, Efficiency(eta), 1, {}}; }

WitnessInputs uniform_inputs(double w, double m, double eta) {
    return {two_mode(w, eta), two_mode(w, eta), two_mode(w, eta), two_mode(w, eta),
            one_mode(m, eta), one_mode(m, eta)};
}

MeasurementSettings zero_settings() { return {0.0, 0.0, 0.0, 0.0}; }

MeasurementSettings random_settings(std::mt19937_64& rng, double half_width) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    return {PhasePoint(u(rng), u(rng)), PhasePoint(u(rng), u(rng)), PhasePoint(u(rng), u(rng)),
            PhasePoint(u(rng), u(rng))};
}

// rho_A (x) rho_B with independent random dimensions up to 6, embedded in a
// common cutoff.
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

StateModel tmss(double r) { return TwoModeSqueezed{SqueezingParameter(r)}; }

}  // namespace

TEST(observable, examples) {
    EXPECT_NEAR(observable_expectation(one_mode(2.0 / pi, 1.0), Efficiency(1.0)), 1.0, 1e-15);
    EXPECT_NEAR(observable_expectation(one_mode(0.0, 0.5), Efficiency(0.5)), -1.0, 1e-15);
    EXPECT_NEAR(observable_expectation(one_mode(0.0, 0.75), Efficiency(0.75)), -1.0 / 3.0, 1e-15);
}

TEST(observable, rejects_regime_mismatch) {
    EXPECT_THROW(observable_expectation(one_mode(0.1, 0.4), Efficiency(0.8)), ConfigError);
    EXPECT_THROW(observable_expectation(one_mode(0.1, 0.8), Efficiency(0.4)), ConfigError);
}

TEST(observable, bounded_for_random_states) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> ue(0.01, 1.0);
    for (int t = 0; t < 100; ++t) {
        int d = 2 + t % 3;
        FockWignerEvaluator ev(TwoModeDensityMatrix::from_dense(FockCutoff(d), oracle::random_density(d * d, rng)));
        Efficiency eta(ue(rng));
        for (Mode m : {Mode::kA, Mode::kB}) {
            double o = observable_expectation(ev.single_mode(m, PhasePoint(u(rng), u(rng)), eta), eta);
            EXPECT_LE(std::abs(o), 1.0 + 1e-9);
        }
    }
}

TEST(observable, branch_continuity_at_half) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    auto rho = build_state(tmss(0.6));
    FockWignerEvaluator ev(rho);
    for (int t = 0; t < 10; ++t) {
        PhasePoint a(u(rng), u(rng));
        Efficiency lo(0.5), hi(0.5 + 1e-9);
        double o_lo = observable_expectation(ev.single_mode(Mode::kA, a, lo), lo);
        double o_hi = observable_expectation(ev.single_mode(Mode::kA, a, hi), hi);
        EXPECT_NEAR(o_lo, o_hi, 1e-6);

        auto s = random_settings(rng, 1.5);
        auto in_lo = gather_inputs(tmss(0.6), s, lo, WignerSource::kClosedForm);
        auto in_hi = gather_inputs(tmss(0.6), s, hi, WignerSource::kClosedForm);
        EXPECT_NEAR(witness_from_wigner(in_lo, lo), witness_from_wigner(in_hi, hi), 1e-6);
    }
}

TEST(witness, formula_examples) {
    EXPECT_NEAR(witness_from_wigner(uniform_inputs(4.0 / (pi * pi), 2.0 / pi, 1.0), Efficiency(1.0)), 2.0,
                1e-14);
    EXPECT_NEAR(witness_from_wigner(uniform_inputs(0.0, 1.0 / pi, 0.5), Efficiency(0.5)), -2.0, 1e-14);
}

TEST(witness, rejects_mixed_efficiency) {
    auto in = uniform_inputs(0.1, 0.2, 0.7);
    in.wb1.eta = Efficiency(0.8);
    EXPECT_THROW(witness_from_wigner(in, Efficiency(0.7)), ConfigError);
    EXPECT_THROW(witness_from_wigner(uniform_inputs(0.1, 0.2, 0.7), Efficiency(0.8)), ConfigError);
}

TEST(witness, product_vacuum_sits_on_the_bound) {
    auto out = evaluate(tmss(0.0), zero_settings(), Efficiency(1.0));
    EXPECT_NEAR(out.value, 2.0, 1e-14);
    EXPECT_FALSE(out.entangled_witnessed);
}

TEST(witness, single_photon_at_origin_is_boundary) {
    auto hi = evaluate(SinglePhotonEntangled{}, zero_settings(), Efficiency(1.0));
    EXPECT_NEAR(hi.value, -2.0, 1e-14);
    EXPECT_FALSE(hi.entangled_witnessed);
    auto lo = evaluate(SinglePhotonEntangled{}, zero_settings(), Efficiency(0.5));
    EXPECT_NEAR(lo.value, -2.0, 1e-14);
    EXPECT_FALSE(lo.entangled_witnessed);
}

TEST(witness, unit_efficiency_reduces_to_correlation_form) {
    std::mt19937_64 rng(12);
    for (const StateModel& model : {StateModel(SinglePhotonEntangled{}), tmss(0.4)}) {
        for (int t = 0; t < 50; ++t) {
            auto in = gather_inputs(model, random_settings(rng, 1.5), Efficiency(1.0), WignerSource::kClosedForm);
            EXPECT_EQ(witness_from_wigner(in, Efficiency(1.0)), (pi * pi / 4.0) * in.correlation_sum());
        }
    }
}

TEST(witness, estimated_equals_plain_when_epsilon_is_eta) {
    std::mt19937_64 rng(2);
    for (double e : {0.55, 0.7, 1.0}) {
        auto in = gather_inputs(tmss(0.4), random_settings(rng, 1.0), Efficiency(e), WignerSource::kClosedForm);
        EXPECT_EQ(witness_estimated(in, Regime::kHigh, EstimatedEfficiency(e)), witness_from_wigner(in, Efficiency(e)));
    }
    auto low = gather_inputs(tmss(0.4), random_settings(rng, 1.0), Efficiency(0.4), WignerSource::kClosedForm);
    EXPECT_EQ(witness_estimated(low, Regime::kLow, EstimatedEfficiency(0.9)), witness_from_wigner(low, Efficiency(0.4)));
    EXPECT_EQ(witness_estimated(low, Regime::kLow, std::nullopt), witness_from_wigner(low, Efficiency(0.4)));
    EXPECT_THROW(witness_estimated(uniform_inputs(0.1, 0.2, 0.7), Regime::kHigh, std::nullopt), ConfigError);
}

TEST(estimated_efficiency, domain) {
    EXPECT_THROW(EstimatedEfficiency(0.5), ConfigError);
    EXPECT_THROW(EstimatedEfficiency(1.0 + 1e-12), ConfigError);
    EXPECT_THROW(EstimatedEfficiency(std::nan("")), ConfigError);
    EXPECT_DOUBLE_EQ(EstimatedEfficiency(1.0).value(), 1.0);
    EXPECT_DOUBLE_EQ(EstimatedEfficiency(0.5000001).value(), 0.5000001);
}

TEST(bounds, separable_and_local_realism) {
    EXPECT_EQ(separable_bound(), 2.0);
    EXPECT_EQ(lr_bound(Efficiency(1.0)), 2.0);
    EXPECT_EQ(lr_bound(Efficiency(0.5)), 18.0);
    EXPECT_NEAR(lr_bound(Efficiency(0.8)), 4.5, 1e-14);
    for (int i = 1; i < 1000; ++i) {
        double e = i / 1000.0;
        EXPECT_GT(lr_bound(Efficiency(e)), 2.0) << e;
    }
}

TEST(bounds, violation_is_strict) {
    EXPECT_TRUE(exceeds(2.0000001, separable_bound()));
    EXPECT_TRUE(exceeds(-2.0000001, separable_bound()));
    EXPECT_FALSE(exceeds(2.0, separable_bound()));
    EXPECT_FALSE(exceeds(-2.0, separable_bound()));
    EXPECT_FALSE(exceeds(2.0000000000000004, separable_bound()));
}

TEST(evaluate, outcome_flags_are_consistent) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ue(0.05, 1.0);
    for (int t = 0; t < 200; ++t) {
        const StateModel model = t % 2 ? StateModel(SinglePhotonEntangled{}) : tmss(0.2 + t / 100.0);
        auto out = evaluate(model, random_settings(rng, 1.0), Efficiency(ue(rng)));
        EXPECT_EQ(out.entangled_witnessed, std::abs(out.value) > out.separable_bound * (1 + 1e-12));
        EXPECT_EQ(out.nonlocality_witnessed, std::abs(out.value) > out.lr_bound * (1 + 1e-12));
        if (out.nonlocality_witnessed) EXPECT_TRUE(out.entangled_witnessed);
        EXPECT_EQ(out.separable_bound, 2.0);
        EXPECT_EQ(out.regime, out.eta.regime());
    }
}

TEST(evaluate, unit_efficiency_bounds_coincide) {
    for (const StateModel& model : {StateModel(SinglePhotonEntangled{}), tmss(0.9)}) {
        auto out = evaluate(model, {0.1, -0.3, PhasePoint(0.2, 0.1), 0.4}, Efficiency(1.0));
        EXPECT_EQ(out.lr_bound, out.separable_bound);
    }
}

TEST(evaluate, closed_form_and_fock_routes_agree) {
    std::mt19937_64 rng(101);
    for (const StateModel& model : {StateModel(SinglePhotonEntangled{}), tmss(0.4), tmss(0.8)}) {
        for (double e : {0.35, 0.5, 0.8, 1.0}) {
            for (int t = 0; t < 3; ++t) {
                auto s = random_settings(rng, 1.4);
                auto c = evaluate(model, s, Efficiency(e), std::nullopt, WignerSource::kClosedForm);
                auto f = evaluate(model, s, Efficiency(e), std::nullopt, WignerSource::kFockOracle);
                EXPECT_NEAR(c.value, f.value, 1e-6) << describe(model) << " eta=" << e;
            }
        }
    }
}

TEST(evaluate, closed_form_needs_a_model_state) {
    auto rho = std::make_shared<const TwoModeDensityMatrix>(build_state(SinglePhotonEntangled{}, FockCutoff(2)));
    EXPECT_THROW(evaluate(CustomState{rho}, zero_settings(), Efficiency(1.0)), UnsupportedModel);
    auto f = evaluate(CustomState{rho}, zero_settings(), Efficiency(1.0), std::nullopt, WignerSource::kFockOracle);
    EXPECT_NEAR(f.value, -2.0, 1e-12);
}

TEST(evaluate, estimated_efficiency_bookkeeping) {
    MeasurementSettings s{0.1, -0.2, 0.3, PhasePoint(0.0, 0.2)};
    auto ok = evaluate(tmss(0.4), s, Efficiency(0.55), EstimatedEfficiency(0.65));
    EXPECT_TRUE(ok.valid);
    ASSERT_TRUE(ok.epsilon_used.has_value());
    EXPECT_DOUBLE_EQ(ok.epsilon_used->value(), 0.65);
    EXPECT_NEAR(ok.lr_bound, lr_bound(Efficiency(0.65)), 1e-15);

    auto bad = evaluate(tmss(0.4), s, Efficiency(0.8), EstimatedEfficiency(0.65));
    EXPECT_FALSE(bad.valid);
    EXPECT_FALSE(bad.note.empty());

    auto low = evaluate(tmss(0.4), s, Efficiency(0.4), EstimatedEfficiency(0.65));
    EXPECT_TRUE(low.valid);
    EXPECT_EQ(low.value, evaluate(tmss(0.4), s, Efficiency(0.4)).value);
    EXPECT_FALSE(low.note.empty());
}

TEST(separable, product_states_respect_the_bound) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ue(0.01, 1.0);
    for (int t = 0; t < 200; ++t) {
        auto rho = std::make_shared<const TwoModeDensityMatrix>(random_product_state(rng));
        auto s = random_settings(rng, 1.5);
        auto out = evaluate(CustomState{rho}, s, Efficiency(ue(rng)), std::nullopt, WignerSource::kFockOracle);
        EXPECT_LE(std::abs(out.value), 2.0 + 1e-8) << "trial " << t;
    }
}

TEST(separable, estimated_witness_respects_the_bound_when_epsilon_covers_eta) {
    std::mt19937_64 rng(4048);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        auto rho = random_product_state(rng);
        double eps = 0.5 + 0.5 * std::max(u(rng), 1e-9);
        double eta = 0.5 + (eps - 0.5) * std::max(u(rng), 1e-9);
        FockWignerEvaluator ev(rho);
        auto in = gather_inputs(CustomState{std::make_shared<const TwoModeDensityMatrix>(rho)},
                                random_settings(rng, 1.5), Efficiency(eta), WignerSource::kFockOracle, &ev);
        EXPECT_LE(std::abs(witness_estimated(in, Regime::kHigh, EstimatedEfficiency(eps))), 2.0 + 1e-8)
            << "eta=" << eta << " eps=" << eps;
    }
}

TEST(json, outcome_carries_all_fields) {
    auto out = evaluate(SinglePhotonEntangled{}, {0.1, -0.2, 0.3, PhasePoint(0.0, 0.2)}, Efficiency(0.9),
                        EstimatedEfficiency(0.95));
    auto j = to_json(out);
    for (const char* key : {"value", "separable_bound", "lr_bound", "regime", "entangled_witnessed",
                            "nonlocality_witnessed", "valid", "settings", "eta", "epsilon_used", "wigner_inputs"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["regime"], "HIGH");
    EXPECT_EQ(j["wigner_inputs"].size(), 6u);
    EXPECT_EQ(settings_from_json(j["settings"]), out.settings);
}

TEST(json, settings_parse_both_layouts) {
    auto a = settings_from_json(nlohmann::json::array({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}));
    EXPECT_EQ(a.alpha1.value(), Complex(0.1, 0.2));
    EXPECT_EQ(a.beta2.value(), Complex(0.7, 0.8));
    EXPECT_EQ(settings_from_json(to_json(a)), a);
    EXPECT_THROW(settings_from_json(nlohmann::json::array({0.1, 0.2})), ConfigError);
    EXPECT_THROW(settings_from_json(nlohmann::json::parse(R"({"alpha1": [0, 0]})")), ConfigError);
    EXPECT_THROW(settings_from_json(nlohmann::json("x")), ConfigError);
}

TEST(json, round_to_twelve_digits) {
    EXPECT_EQ(round_sig12(0.1 + 0.2), 0.3);
    EXPECT_EQ(round_sig12(0.0), 0.0);
    EXPECT_EQ(round_sig12(-123456.7890123456), -123456.789012);
}
