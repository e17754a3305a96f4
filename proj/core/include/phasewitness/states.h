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

#ifndef PHASEWITNESS_STATES_H
#define PHASEWITNESS_STATES_H

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "phasewitness/distributions.h"

namespace phasewitness {

using Complex = std::complex<double>;

/// Default tolerated trace deficit from Fock truncation.
inline constexpr double kDefaultTraceTol = 1e-9;

/// Number of Fock levels kept per mode (levels 0..dim-1).
class FockCutoff {
   public:
    explicit FockCutoff(int dim_per_mode);
    int dim() const { return dim_; }
    bool operator==(const FockCutoff&) const = default;

   private:
    int dim_;
};

class SqueezingParameter {
   public:
    explicit SqueezingParameter(double r);
    double value() const { return r_; }

   private:
    double r_;
};

/// A complex phase-space displacement with finite components.
class PhasePoint {
   public:
    PhasePoint() = default;
    PhasePoint(double re, double im = 0.0) : PhasePoint(Complex(re, im)) {}
    explicit PhasePoint(Complex value);
    Complex value() const { return value_; }
    double norm_sq() const { return std::norm(value_); }
    bool operator==(const PhasePoint&) const = default;

   private:
    Complex value_{0.0, 0.0};
};

/// Two-mode density operator on a truncated Fock space.
///
/// Stored as a convex mixture of (possibly unnormalized) pure states,
/// rho = sum_k w_k |psi_k><psi_k|, where psi_k is a dim x dim amplitude
/// matrix with psi_k(n_A, n_B) = <n_A, n_B|psi_k>. Dense input is
/// eigendecomposed on construction, which is also where positivity is
/// checked. The dense form is available through `entries()` using the
/// flattening index n_A * dim + n_B.
class TwoModeDensityMatrix {
   public:
    struct Component {
        double weight;
        Eigen::MatrixXcd amplitudes;
    };

    /// Validates Hermiticity (1e-12), positivity (min eigenvalue >= -1e-10)
    /// and trace in [1 - trace_tol, 1]. Throws InvalidState naming the
    /// violated invariant.
    static TwoModeDensityMatrix from_dense(FockCutoff dim, const Eigen::MatrixXcd& entries,
                                           double trace_tol = kDefaultTraceTol);

    /// Mixture of pure components. Weights must be non-negative.
    static TwoModeDensityMatrix from_mixture(FockCutoff dim, std::vector<Component> components,
                                             double trace_tol = kDefaultTraceTol);

    static TwoModeDensityMatrix pure(FockCutoff dim, Eigen::MatrixXcd amplitudes,
                                     double trace_tol = kDefaultTraceTol);

    /// rho_A (x) rho_B, both given densely on `dim` levels.
    static TwoModeDensityMatrix product(FockCutoff dim, const Eigen::MatrixXcd& rho_a,
                                        const Eigen::MatrixXcd& rho_b,
                                        double trace_tol = kDefaultTraceTol);

    FockCutoff cutoff() const { return cutoff_; }
    int dim() const { return cutoff_.dim(); }
    double trace_tol() const { return trace_tol_; }
    double trace() const;
    const std::vector<Component>& components() const { return components_; }

    /// Dense (dim^2 x dim^2) matrix. Allocates; meant for small cutoffs.
    Eigen::MatrixXcd entries() const;

    /// Reduced single-mode density matrix of mode A (`mode_b == false`) or B.
    Eigen::MatrixXcd reduced(bool mode_b) const;

   private:
    TwoModeDensityMatrix(FockCutoff cutoff, std::vector<Component> components, double trace_tol)
        : cutoff_(cutoff), components_(std::move(components)), trace_tol_(trace_tol) {}
    void check_trace() const;

    FockCutoff cutoff_;
    std::vector<Component> components_;
    double trace_tol_;
};

struct SinglePhotonEntangled {};

struct TwoModeSqueezed {
    SqueezingParameter r;
};

struct CustomState {
    std::shared_ptr<const TwoModeDensityMatrix> rho;
};

using StateModel = std::variant<SinglePhotonEntangled, TwoModeSqueezed, CustomState>;

std::string describe(const StateModel& model);

/// Cutoff policy for TMSS: max(12, ceil(8 sinh^2 r + 10)), grown until
/// tanh(r)^(2 dim) <= trace_tol. Single-photon states need 2 levels; custom
/// states keep their own cutoff.
FockCutoff default_cutoff(const StateModel& model, double trace_tol = kDefaultTraceTol);

/// Throws CutoffTooSmall if the truncation deficit of a TMSS exceeds
/// trace_tol, InvalidState if a custom matrix does not fit `cutoff`.
TwoModeDensityMatrix build_state(const StateModel& model, FockCutoff cutoff,
                                 double trace_tol = kDefaultTraceTol);
TwoModeDensityMatrix build_state(const StateModel& model, double trace_tol = kDefaultTraceTol);

/// Levels used when displacing by `alpha` with `dim` retained levels:
/// dim + ceil(|alpha|^2 + 8 |alpha| sqrt(2 dim - 1)) + 16.
int padded_dim(double abs_alpha, int dim);

/// Largest padded basis the library will build before giving up.
inline constexpr int kMaxPaddedDim = 4096;

/// Spectral factorization of the truncated quadrature a + a^dagger on N
/// levels. Every displacement on those N levels is a phase-conjugated
/// exponential of it:
///   alpha a^dag - alpha^* a = R (i |alpha| (a + a^dag)) R^dag,
///   R = diag(exp(i n (arg alpha - pi/2))).
/// Immutable after construction.
class DisplacementBasis {
   public:
    explicit DisplacementBasis(int padded_dim);
    int size() const { return static_cast<int>(eigenvalues_.size()); }

    /// Full N x N matrix of exp(alpha a^dag - alpha^* a).
    Eigen::MatrixXcd matrix(PhasePoint alpha) const;

    /// First `retained` columns of the same matrix (N x retained).
    Eigen::MatrixXcd slab(PhasePoint alpha, int retained) const;

   private:
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

/// Truncated displacement operator. `full` lives on the padded basis; the
/// retained block is its first `retained` columns.
struct DisplacementMatrix {
    Eigen::MatrixXcd full;
    int retained;

    Eigen::MatrixXcd slab() const { return full.leftCols(retained); }
    Eigen::MatrixXcd retained_block() const { return full.topLeftCorner(retained, retained); }
};

/// Throws PaddingInsufficient when the padded size would exceed
/// kMaxPaddedDim or when retained columns leak into the padding edge.
DisplacementMatrix displacement_operator(PhasePoint alpha, FockCutoff cutoff);

/// Throws PaddingInsufficient if any retained column of `slab` carries
/// weight above 1e-10 in its last four rows.
void check_padding(const Eigen::MatrixXcd& slab);

/// P(n, m) = <alpha, n|<beta, m| rho |alpha, n>|beta, m> for all n, m below
/// the padded size for max(|alpha|, |beta|), which is at least dim, so the
/// displaced mass stays inside the returned table.
JointCountDistribution displaced_number_distribution(const TwoModeDensityMatrix& rho,
                                                     PhasePoint alpha, PhasePoint beta);

/// Same as above on a caller-supplied padded basis (size >= dim).
JointCountDistribution displaced_number_distribution(const TwoModeDensityMatrix& rho,
                                                     const DisplacementBasis& basis,
                                                     PhasePoint alpha, PhasePoint beta);

/// Displaced number distribution of the reduced state of mode A
/// (`mode_b == false`) or mode B.
CountDistribution displaced_marginal_distribution(const TwoModeDensityMatrix& rho,
                                                  const DisplacementBasis& basis, bool mode_b,
                                                  PhasePoint alpha);

/// Custom-state file format:
///   {"dim": d, "entries": [[row, col, re, im], ...]}
/// Indices use n_A * d + n_B. Missing entries are zero.
TwoModeDensityMatrix density_matrix_from_json(const nlohmann::json& j,
                                              double trace_tol = kDefaultTraceTol);
nlohmann::json density_matrix_to_json(const TwoModeDensityMatrix& rho);
TwoModeDensityMatrix load_density_matrix(const std::string& path,
                                         double trace_tol = kDefaultTraceTol);

}  // namespace phasewitness

#endif
