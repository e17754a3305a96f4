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

#ifndef PHASEWITNESS_DISTRIBUTIONS_H
#define PHASEWITNESS_DISTRIBUTIONS_H

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace phasewitness {

/// Entries in [-kClampSlack, 0) are roundoff and get clamped to zero.
inline constexpr double kClampSlack = 1e-12;

/// Photon-number distribution of one mode. Index = photon number.
///
/// Entries must be >= -kClampSlack (smaller negatives are clamped) and the
/// total must lie in [1 - trace_tol - 1e-8, 1 + 1e-9].
class CountDistribution {
   public:
    explicit CountDistribution(std::vector<double> probs, double trace_tol = 1e-9);

    std::span<const double> probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t n) const { return n < probs_.size() ? probs_[n] : 0.0; }
    double total() const;

   private:
    std::vector<double> probs_;
};

/// Joint distribution P(n_A, n_B); rows are Alice's photon number.
class JointCountDistribution {
   public:
    explicit JointCountDistribution(Eigen::MatrixXd probs, double trace_tol = 1e-9);

    const Eigen::MatrixXd& probs() const { return probs_; }
    double operator()(Eigen::Index n, Eigen::Index m) const {
        return n < probs_.rows() && m < probs_.cols() ? probs_(n, m) : 0.0;
    }
    double total() const { return probs_.sum(); }
    CountDistribution marginal_a() const;
    CountDistribution marginal_b() const;

   private:
    Eigen::MatrixXd probs_;
    double trace_tol_;
};

}  // namespace phasewitness

#endif
