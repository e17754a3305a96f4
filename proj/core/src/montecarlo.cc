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

#include "phasewitness/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "phasewitness/errors.h"
#include "phasewitness/parallel.h"

namespace phasewitness {

namespace {

using std::numbers::pi;

int binomial_thin(int n, double eta, CounterRng& rng) {
    if (eta >= 1.0) {
        return n;
    }
    int kept = 0;
    for (int i = 0; i < n; ++i) {
        kept += rng.uniform() < eta ? 1 : 0;
    }
    return kept;
}

EstimatedValue parity_estimate(const CountHistogram& h, double scale, bool use_a, bool use_b) {
    if (h.shots < 1) {
        throw ConfigError("histogram has no shots");
    }
    long long plus = 0;
    for (const auto& [key, c] : h.counts) {
        int m = (use_a ? key.first : 0) + (use_b ? key.second : 0);
        plus += (m % 2 == 0) ? c : -c;
    }
    const double n = static_cast<double>(h.shots);
    const double mean = static_cast<double>(plus) / n;
    double sd;
    if (h.shots == 1) {
        // Bound on the spread of a +-1 variable.
        sd = 1.0;
    } else {
        double var = n * (1.0 - mean * mean) / (n - 1.0);
        sd = std::sqrt(std::max(0.0, var));
    }
    return {scale * mean, scale * sd / std::sqrt(n), h.shots};
}

nlohmann::json point_json(PhasePoint p) {
    return nlohmann::json::array({round_sig12(p.value().real()), round_sig12(p.value().imag())});
}

PhasePoint point_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("histogram points must be [re, im]");
    }
    return PhasePoint(j[0].get<double>(), j[1].get<double>());
}

MeasuredWignerValue as_measured(const EstimatedValue& e, const CountHistogram& h, int modes) {
    return {e.estimate, h.eta, modes, {h.alpha, h.beta}};
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, int point_index) {
    return seed ^ mix64(static_cast<std::uint64_t>(point_index) * 0xD1B54A32D192ED03ULL);
}

SampleSpec::SampleSpec(long long shots_, std::uint64_t seed_, Efficiency eta_)
    : shots(shots_), seed(seed_), eta(eta_) {
    if (shots_ < 1) {
        throw ConfigError("shots must be >= 1");
    }
}

CountHistogram sample_joint_counts(const TwoModeDensityMatrix& rho, PhasePoint alpha,
                                   PhasePoint beta, const SampleSpec& spec) {
    JointCountDistribution dist = displaced_number_distribution(rho, alpha, beta);
    const Eigen::MatrixXd& p = dist.probs();
    const int rows = static_cast<int>(p.rows());
    const int cols = static_cast<int>(p.cols());

    // Row-major cumulative table over (n_A, n_B).
    std::vector<double> cdf(static_cast<std::size_t>(rows) * cols);
    double acc = 0.0;
    for (int n = 0; n < rows; ++n) {
        for (int m = 0; m < cols; ++m) {
            acc += p(n, m);
            cdf[static_cast<std::size_t>(n) * cols + m] = acc;
        }
    }

    CountHistogram h;
    h.shots = spec.shots;
    h.eta = spec.eta;
    h.alpha = alpha;
    h.beta = beta;
    h.residual_mass = std::max(0.0, 1.0 - acc);

    CounterRng rng(spec.seed);
    const double eta = spec.eta.value();
    for (long long s = 0; s < spec.shots; ++s) {
        double u = rng.uniform();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t flat = it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
        int n = static_cast<int>(flat / cols);
        int m = static_cast<int>(flat % cols);
        int ma = binomial_thin(n, eta, rng);
        int mb = binomial_thin(m, eta, rng);
        ++h.counts[{ma, mb}];
    }
    return h;
}

EstimatedValue estimate_measured_wigner(const CountHistogram& h) {
    return parity_estimate(h, 4.0 / (pi * pi), true, true);
}

EstimatedValue estimate_marginal_wigner(const CountHistogram& h, Mode mode) {
    return parity_estimate(h, 2.0 / pi, mode == Mode::kA, mode == Mode::kB);
}

SampledWitness witness_from_histograms(const WitnessHistograms& hs,
                                       std::optional<EstimatedEfficiency> epsilon) {
    for (const auto& h : hs) {
        if (!(h.eta == hs[0].eta)) {
            throw ConfigError("histograms were recorded at different efficiencies");
        }
    }
    MeasurementSettings settings{hs[0].alpha, hs[2].alpha, hs[0].beta, hs[1].beta};
    auto mismatch = [](PhasePoint a, PhasePoint b) { return std::abs(a.value() - b.value()) > 1e-12; };
    if (mismatch(hs[1].alpha, settings.alpha1) || mismatch(hs[2].beta, settings.beta1) ||
        mismatch(hs[3].alpha, settings.alpha2) || mismatch(hs[3].beta, settings.beta2) ||
        mismatch(hs[4].alpha, settings.alpha1) || mismatch(hs[5].beta, settings.beta1)) {
        throw ConfigError("histogram displacements do not form a consistent settings set");
    }

    SampledWitness out{};
    out.histograms = hs;
    for (int i = 0; i < 4; ++i) {
        out.estimates[i] = estimate_measured_wigner(hs[i]);
    }
    out.estimates[4] = estimate_marginal_wigner(hs[4], Mode::kA);
    out.estimates[5] = estimate_marginal_wigner(hs[5], Mode::kB);

    WitnessInputs in{as_measured(out.estimates[0], hs[0], 2), as_measured(out.estimates[1], hs[1], 2),
                     as_measured(out.estimates[2], hs[2], 2), as_measured(out.estimates[3], hs[3], 2),
                     as_measured(out.estimates[4], hs[4], 1), as_measured(out.estimates[5], hs[5], 1)};
    const Efficiency eta = hs[0].eta;
    out.outcome = make_outcome(in, settings, eta, epsilon);

    double c2, c1;
    if (eta.regime() == Regime::kHigh) {
        const double c = out.outcome.epsilon_used ? out.outcome.epsilon_used->value() : eta.value();
        c2 = pi * pi / (4.0 * c * c);
        c1 = pi * (c - 1.0) / (c * c);
    } else {
        c2 = pi * pi;
        c1 = -2.0 * pi;
    }
    double var = 0.0;
    for (int i = 0; i < 4; ++i) {
        var += c2 * c2 * out.estimates[i].std_error * out.estimates[i].std_error;
    }
    for (int i = 4; i < 6; ++i) {
        var += c1 * c1 * out.estimates[i].std_error * out.estimates[i].std_error;
    }
    out.std_error = std::sqrt(var);

    long long fewest = hs[0].shots;
    for (const auto& h : hs) {
        fewest = std::min(fewest, h.shots);
    }
    if (fewest < 2) {
        std::string note = "single-shot histogram: standard error is a bound and the violation flag "
                           "carries no statistical weight";
        out.outcome.note = out.outcome.note.empty() ? note : out.outcome.note + "; " + note;
    }
    return out;
}

SampledWitness witness_from_samples(const StateModel& state, const MeasurementSettings& s,
                                    const SampleSpec& spec,
                                    std::optional<EstimatedEfficiency> epsilon, int jobs) {
    TwoModeDensityMatrix rho = build_state(state);
    const std::array<std::pair<PhasePoint, PhasePoint>, 6> points = {{{s.alpha1, s.beta1},
                                                                      {s.alpha1, s.beta2},
                                                                      {s.alpha2, s.beta1},
                                                                      {s.alpha2, s.beta2},
                                                                      {s.alpha1, s.beta1},
                                                                      {s.alpha1, s.beta1}}};
    WitnessHistograms hs;
    parallel_for(6, jobs, [&](std::size_t i) {
        SampleSpec sub(spec.shots, sub_seed(spec.seed, static_cast<int>(i) + 1), spec.eta);
        hs[i] = sample_joint_counts(rho, points[i].first, points[i].second, sub);
    });
    return witness_from_histograms(hs, epsilon);
}

nlohmann::json to_json(const CountHistogram& h) {
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& [key, c] : h.counts) {
        counts.push_back({key.first, key.second, c});
    }
    return {{"shots", h.shots},
            {"eta", round_sig12(h.eta.value())},
            {"alpha", point_json(h.alpha)},
            {"beta", point_json(h.beta)},
            {"counts", counts},
            {"residual_mass", round_sig12(h.residual_mass)}};
}

CountHistogram histogram_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("histogram must be a JSON object");
    }
    for (const char* key : {"shots", "eta", "alpha", "beta", "counts"}) {
        if (!j.contains(key)) {
            throw ConfigError(std::string("histogram is missing \"") + key + "\"");
        }
    }
    if (!j["shots"].is_number_integer() || !j["eta"].is_number() || !j["counts"].is_array()) {
        throw ConfigError("histogram fields have the wrong types");
    }
    CountHistogram h;
    h.shots = j["shots"].get<long long>();
    h.eta = Efficiency(j["eta"].get<double>());
    h.alpha = point_from_json(j["alpha"]);
    h.beta = point_from_json(j["beta"]);
    if (j.contains("residual_mass") && j["residual_mass"].is_number()) {
        h.residual_mass = j["residual_mass"].get<double>();
    }
    long long total = 0;
    for (const auto& e : j["counts"]) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !e[2].is_number_integer()) {
            throw ConfigError("histogram counts must be [m_A, m_B, count]");
        }
        int ma = e[0].get<int>();
        int mb = e[1].get<int>();
        long long c = e[2].get<long long>();
        if (ma < 0 || mb < 0 || c < 0) {
            throw ConfigError("histogram counts must be non-negative");
        }
        if (!h.counts.emplace(std::make_pair(ma, mb), c).second) {
            throw ConfigError("duplicate histogram bin");
        }
        total += c;
    }
    if (h.shots < 1 || total != h.shots) {
        throw ConfigError("histogram counts sum to " + std::to_string(total) + ", shots is " +
                          std::to_string(h.shots));
    }
    return h;
}

nlohmann::json histograms_to_json(const WitnessHistograms& hs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& h : hs) {
        arr.push_back(to_json(h));
    }
    return {{"histograms", arr}};
}

WitnessHistograms histograms_from_json(const nlohmann::json& j) {
    const nlohmann::json& arr = j.is_object() && j.contains("histograms") ? j["histograms"] : j;
    if (!arr.is_array() || arr.size() != 6) {
        throw ConfigError("ingestion file needs six histograms in the order "
                          "(a1,b1) (a1,b2) (a2,b1) (a2,b2) marginal-A marginal-B");
    }
    WitnessHistograms hs;
    for (std::size_t i = 0; i < 6; ++i) {
        hs[i] = histogram_from_json(arr[i]);
    }
    return hs;
}

nlohmann::json to_json(const SampledWitness& s, double k_sigma) {
    nlohmann::json j = to_json(s.outcome);
    j["std_error"] = round_sig12(s.std_error);
    j["k_sigma"] = round_sig12(k_sigma);
    j["entangled_at_k_sigma"] =
        std::abs(s.outcome.value) - k_sigma * s.std_error > s.outcome.separable_bound;
    nlohmann::json est = nlohmann::json::array();
    static constexpr const char* kNames[] = {"w11", "w12", "w21", "w22", "wa1", "wb1"};
    for (int i = 0; i < 6; ++i) {
        est.push_back({{"name", kNames[i]},
                       {"estimate", round_sig12(s.estimates[i].estimate)},
                       {"std_error", round_sig12(s.estimates[i].std_error)},
                       {"shots", s.estimates[i].shots}});
    }
    j["estimates"] = est;
    return j;
}

}  // namespace phasewitness
