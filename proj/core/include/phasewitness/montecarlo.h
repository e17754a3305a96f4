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

#ifndef PHASEWITNESS_MONTECARLO_H
#define PHASEWITNESS_MONTECARLO_H

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include <nlohmann/json.hpp>

#include "phasewitness/witness.h"

namespace phasewitness {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based generator: output k (k = 1, 2, ...) is
/// mix64(key + k * 0x9E3779B97F4A7C15). Identical to a SplitMix64 stream
/// seeded with `key`, so any output can be recomputed from (key, k).
class CounterRng {
   public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}
    std::uint64_t next() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }
    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    std::uint64_t counter() const { return counter_; }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Seed for the i-th Wigner point (1..6) of a witness run:
/// seed XOR mix64(i * 0xD1B54A32D192ED03).
std::uint64_t sub_seed(std::uint64_t seed, int point_index);

struct SampleSpec {
    SampleSpec(long long shots, std::uint64_t seed, Efficiency eta);
    long long shots;
    std::uint64_t seed;
    Efficiency eta;
};

/// Detected photon counts (m_A, m_B) -> number of shots.
struct CountHistogram {
    std::map<std::pair<int, int>, long long> counts;
    long long shots = 0;
    Efficiency eta{1.0};
    PhasePoint alpha;
    PhasePoint beta;
    /// Probability mass beyond the truncated table; folded into the last bin.
    double residual_mass = 0.0;
};

struct EstimatedValue {
    double estimate;
    double std_error;
    long long shots;
};

/// Draws `spec.shots` photon-number pairs from the displaced joint
/// distribution of `rho` by inverse CDF and thins each count binomially
/// with success probability eta. Deterministic in spec.seed.
CountHistogram sample_joint_counts(const TwoModeDensityMatrix& rho, PhasePoint alpha,
                                   PhasePoint beta, const SampleSpec& spec);

/// (4 / pi^2) times the sample mean of (-1)^(m_A + m_B), with its standard error.
EstimatedValue estimate_measured_wigner(const CountHistogram& h);

/// (2 / pi) times the sample mean of (-1)^(m_mode).
EstimatedValue estimate_marginal_wigner(const CountHistogram& h, Mode mode);

/// Histogram order: (a1,b1), (a1,b2), (a2,b1), (a2,b2), marginal A at a1,
/// marginal B at b1.
using WitnessHistograms = std::array<CountHistogram, 6>;

struct SampledWitness {
    WitnessOutcome outcome;
    double std_error;
    std::array<EstimatedValue, 6> estimates;
    WitnessHistograms histograms;
};

/// Six independent sampling runs, one per Wigner value, with sub-seeds from
/// sub_seed(spec.seed, 1..6). The witness standard error propagates the six
/// errors through the linear witness coefficients as independent terms.
SampledWitness witness_from_samples(const StateModel& state, const MeasurementSettings& settings,
                                    const SampleSpec& spec,
                                    std::optional<EstimatedEfficiency> epsilon = std::nullopt,
                                    int jobs = 0);

/// Witness from externally supplied histograms. Settings and eta are read
/// from the histograms and must be consistent.
SampledWitness witness_from_histograms(const WitnessHistograms& histograms,
                                       std::optional<EstimatedEfficiency> epsilon = std::nullopt);

nlohmann::json to_json(const CountHistogram& h);
CountHistogram histogram_from_json(const nlohmann::json& j);
nlohmann::json histograms_to_json(const WitnessHistograms& hs);
WitnessHistograms histograms_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SampledWitness& s, double k_sigma = 3.0);

}  // namespace phasewitness

#endif
