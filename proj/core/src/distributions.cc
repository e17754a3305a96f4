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

#include "phasewitness/distributions.h"

#include <cmath>
#include <numeric>
#include <string>

#include "phasewitness/errors.h"
#include "format.h"

namespace phasewitness {

namespace {

constexpr double kUpperSlack = 1e-9;
constexpr double kLowerSlack = 1e-8;

void clamp_and_check(double* data, std::size_t n, double trace_tol) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double& p = data[i];
        if (!std::isfinite(p)) {
            throw ConfigError("count distribution has a non-finite entry");
        }
        if (p < -kClampSlack) {
            throw NumericError("count distribution entry " + internal::fmt_double(p) +
                               " is negative beyond roundoff");
        }
        if (p < 0.0) {
            p = 0.0;
        }
        total += p;
    }
    if (total > 1.0 + kUpperSlack) {
        throw ConfigError("count distribution sums to " + std::to_string(total) + " > 1");
    }
    if (total < 1.0 - trace_tol - kLowerSlack) {
        throw ConfigError("count distribution sums to " + std::to_string(total) +
                          ", below 1 - trace_tol");
    }
}

}  // namespace

CountDistribution::CountDistribution(std::vector<double> probs, double trace_tol)
    : probs_(std::move(probs)) {
    clamp_and_check(probs_.data(), probs_.size(), trace_tol);
}

double CountDistribution::total() const {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

JointCountDistribution::JointCountDistribution(Eigen::MatrixXd probs, double trace_tol)
    : probs_(std::move(probs)), trace_tol_(trace_tol) {
    clamp_and_check(probs_.data(), static_cast<std::size_t>(probs_.size()), trace_tol);
}

CountDistribution JointCountDistribution::marginal_a() const {
    Eigen::VectorXd m = probs_.rowwise().sum();
    return CountDistribution(std::vector<double>(m.data(), m.data() + m.size()), trace_tol_);
}

CountDistribution JointCountDistribution::marginal_b() const {
    Eigen::VectorXd m = probs_.colwise().sum().transpose();
    return CountDistribution(std::vector<double>(m.data(), m.data() + m.size()), trace_tol_);
}

}  // namespace phasewitness
