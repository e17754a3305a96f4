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

#include "phasewitness/states.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "phasewitness/errors.h"
#include "format.h"

namespace phasewitness {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kTraceUpperSlack = 1e-12;
// Probability mass allowed in the last four padded levels.
constexpr double kEdgeMassTol = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

using internal::fmt_double;

// log of the TMSS trace deficit tanh(r)^(2 dim); -inf at r = 0.
double log_tmss_deficit(double r, int dim) {
    double t = std::tanh(r);
    if (t == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 2.0 * dim * std::log(t);
}

// Eigendecomposition of a Hermitian single- or two-mode matrix after the
// Hermiticity check. Returns eigenpairs with strictly positive eigenvalue.
std::vector<std::pair<double, Eigen::VectorXcd>> positive_eigenpairs(const Eigen::MatrixXcd& m,
                                                                     const char* what) {
    double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol) {
        throw InvalidState(std::string(what) + " is not Hermitian (max |rho - rho^dag| = " +
                           fmt_double(asym) + ")");
    }
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericError(std::string(what) + ": eigendecomposition failed");
    }
    const Eigen::VectorXd& evals = solver.eigenvalues();
    if (evals.size() > 0 && evals.minCoeff() < -kPsdTol) {
        throw InvalidState(std::string(what) + " is not positive semidefinite (min eigenvalue " +
                           fmt_double(evals.minCoeff()) + ")");
    }
    std::vector<std::pair<double, Eigen::VectorXcd>> out;
    for (Eigen::Index k = evals.size() - 1; k >= 0; --k) {
        if (evals(k) > 0.0) {
            out.emplace_back(evals(k), solver.eigenvectors().col(k));
        }
    }
    return out;
}

}  // namespace

FockCutoff::FockCutoff(int dim_per_mode) : dim_(dim_per_mode) {
    if (dim_per_mode < 2) {
        throw ConfigError("Fock cutoff must keep at least 2 levels per mode, got " +
                          std::to_string(dim_per_mode));
    }
}

SqueezingParameter::SqueezingParameter(double r) : r_(r) {
    if (!std::isfinite(r) || r < 0.0) {
        throw ConfigError("squeezing parameter must be finite and >= 0, got " + fmt_double(r));
    }
}

PhasePoint::PhasePoint(Complex value) : value_(value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw ConfigError("phase-space point must be finite");
    }
}

// ---------------------------------------------------------------------------
// TwoModeDensityMatrix

TwoModeDensityMatrix TwoModeDensityMatrix::from_dense(FockCutoff cutoff,
                                                      const Eigen::MatrixXcd& entries,
                                                      double trace_tol) {
    const int d = cutoff.dim();
    if (entries.rows() != d * d || entries.cols() != d * d) {
        throw InvalidState("density matrix must be " + std::to_string(d * d) + " x " +
                           std::to_string(d * d));
    }
    std::vector<Component> comps;
    for (auto& [w, v] : positive_eigenpairs(entries, "density matrix")) {
        // v is indexed n_A * d + n_B; reshape row-major into amplitudes(n_A, n_B).
        Eigen::MatrixXcd amps(d, d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                amps(a, b) = v(a * d + b);
            }
        }
        comps.push_back({w, std::move(amps)});
    }
    TwoModeDensityMatrix rho(cutoff, std::move(comps), trace_tol);
    rho.check_trace();
    return rho;
}

TwoModeDensityMatrix TwoModeDensityMatrix::from_mixture(FockCutoff cutoff,
                                                        std::vector<Component> components,
                                                        double trace_tol) {
    for (const auto& c : components) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
            throw InvalidState("mixture weights must be finite and non-negative");
        }
        if (c.amplitudes.rows() != cutoff.dim() || c.amplitudes.cols() != cutoff.dim()) {
            throw InvalidState("mixture component does not match the cutoff");
        }
    }
    TwoModeDensityMatrix rho(cutoff, std::move(components), trace_tol);
    rho.check_trace();
    return rho;
}

TwoModeDensityMatrix TwoModeDensityMatrix::pure(FockCutoff cutoff, Eigen::MatrixXcd amplitudes,
                                                double trace_tol) {
    std::vector<Component> comps;
    comps.push_back({1.0, std::move(amplitudes)});
    return from_mixture(cutoff, std::move(comps), trace_tol);
}

TwoModeDensityMatrix TwoModeDensityMatrix::product(FockCutoff cutoff, const Eigen::MatrixXcd& rho_a,
                                                   const Eigen::MatrixXcd& rho_b,
                                                   double trace_tol) {
    const int d = cutoff.dim();
    if (rho_a.rows() != d || rho_a.cols() != d || rho_b.rows() != d || rho_b.cols() != d) {
        throw InvalidState("product factors must be " + std::to_string(d) + " x " +
                           std::to_string(d));
    }
    auto pa = positive_eigenpairs(rho_a, "mode-A factor");
    auto pb = positive_eigenpairs(rho_b, "mode-B factor");
    std::vector<Component> comps;
    comps.reserve(pa.size() * pb.size());
    for (const auto& [wa, va] : pa) {
        for (const auto& [wb, vb] : pb) {
            comps.push_back({wa * wb, va * vb.transpose()});
        }
    }
    return from_mixture(cutoff, std::move(comps), trace_tol);
}

double TwoModeDensityMatrix::trace() const {
    double t = 0.0;
    for (const auto& c : components_) {
        t += c.weight * c.amplitudes.squaredNorm();
    }
    return t;
}

void TwoModeDensityMatrix::check_trace() const {
    if (!(trace_tol_ >= 0.0) || trace_tol_ >= 1.0) {
        throw ConfigError("trace tolerance must lie in [0, 1)");
    }
    double t = trace();
    if (t > 1.0 + kTraceUpperSlack || t < 1.0 - trace_tol_) {
        throw InvalidState("density matrix trace " + fmt_double(t) + " outside [1 - " +
                           fmt_double(trace_tol_) + ", 1]");
    }
}

Eigen::MatrixXcd TwoModeDensityMatrix::entries() const {
    const int d = dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d * d, d * d);
    Eigen::VectorXcd v(d * d);
    for (const auto& c : components_) {
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                v(a * d + b) = c.amplitudes(a, b);
            }
        }
        out.noalias() += c.weight * v * v.adjoint();
    }
    return out;
}

Eigen::MatrixXcd TwoModeDensityMatrix::reduced(bool mode_b) const {
    const int d = dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& c : components_) {
        if (mode_b) {
            out.noalias() += c.weight * c.amplitudes.transpose() * c.amplitudes.conjugate();
        } else {
            out.noalias() += c.weight * c.amplitudes * c.amplitudes.adjoint();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Models

std::string describe(const StateModel& model) {
    return std::visit(overloaded{
                          [](const SinglePhotonEntangled&) { return std::string("single_photon"); },
                          [](const TwoModeSqueezed& t) {
                              return "tmss(r=" + fmt_double(t.r.value()) + ")";
                          },
                          [](const CustomState&) { return std::string("custom"); },
                      },
                      model);
}

FockCutoff default_cutoff(const StateModel& model, double trace_tol) {
    return std::visit(
        overloaded{
            [](const SinglePhotonEntangled&) { return FockCutoff(2); },
            [&](const TwoModeSqueezed& t) {
                double r = t.r.value();
                double s = std::sinh(r);
                int dim = std::max(12, static_cast<int>(std::ceil(8.0 * s * s + 10.0)));
                const double log_tol = std::log(trace_tol);
                while (log_tmss_deficit(r, dim) > log_tol) {
                    ++dim;
                    if (dim > kMaxPaddedDim) {
                        throw CutoffTooSmall("no admissible cutoff for r = " + fmt_double(r));
                    }
                }
                return FockCutoff(dim);
            },
            [](const CustomState& c) {
                if (!c.rho) {
                    throw InvalidState("custom state carries no density matrix");
                }
                return c.rho->cutoff();
            },
        },
        model);
}

TwoModeDensityMatrix build_state(const StateModel& model, FockCutoff cutoff, double trace_tol) {
    const int d = cutoff.dim();
    return std::visit(
        overloaded{
            [&](const SinglePhotonEntangled&) {
                Eigen::MatrixXcd amps = Eigen::MatrixXcd::Zero(d, d);
                amps(0, 1) = amps(1, 0) = 1.0 / std::numbers::sqrt2;
                return TwoModeDensityMatrix::pure(cutoff, std::move(amps), trace_tol);
            },
            [&](const TwoModeSqueezed& t) {
                double r = t.r.value();
                if (log_tmss_deficit(r, d) > std::log(trace_tol)) {
                    throw CutoffTooSmall("cutoff " + std::to_string(d) + " leaves trace deficit " +
                                         fmt_double(std::exp(log_tmss_deficit(r, d))) +
                                         " > trace_tol " + fmt_double(trace_tol) +
                                         " for r = " + fmt_double(r));
                }
                Eigen::MatrixXcd amps = Eigen::MatrixXcd::Zero(d, d);
                double sech = 1.0 / std::cosh(r);
                double th = std::tanh(r);
                double c = sech;
                for (int n = 0; n < d; ++n) {
                    amps(n, n) = c;
                    c *= th;
                }
                return TwoModeDensityMatrix::pure(cutoff, std::move(amps), trace_tol);
            },
            [&](const CustomState& c) {
                if (!c.rho) {
                    throw InvalidState("custom state carries no density matrix");
                }
                if (c.rho->cutoff() != cutoff) {
                    throw InvalidState("custom state has dim " + std::to_string(c.rho->dim()) +
                                       ", requested cutoff " + std::to_string(d));
                }
                return *c.rho;
            },
        },
        model);
}

TwoModeDensityMatrix build_state(const StateModel& model, double trace_tol) {
    return build_state(model, default_cutoff(model, trace_tol), trace_tol);
}

// ---------------------------------------------------------------------------
// Displacements

int padded_dim(double abs_alpha, int dim) {
    // mean n + |alpha|^2, spread |alpha| sqrt(2n + 1) for the highest retained level
    double extra = std::ceil(abs_alpha * abs_alpha + 8.0 * abs_alpha * std::sqrt(2.0 * dim - 1.0));
    if (!std::isfinite(extra) || extra > kMaxPaddedDim) {
        return kMaxPaddedDim + 1;
    }
    return dim + static_cast<int>(extra) + 16;
}

DisplacementBasis::DisplacementBasis(int n) {
    if (n < 2) {
        throw ConfigError("displacement basis needs at least 2 levels");
    }
    if (n > kMaxPaddedDim) {
        throw PaddingInsufficient("padded basis of " + std::to_string(n) +
                                  " levels exceeds the limit of " + std::to_string(kMaxPaddedDim));
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 0; k < n - 1; ++k) {
        sub(k) = std::sqrt(static_cast<double>(k + 1));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericError("tridiagonal eigensolver failed for " + std::to_string(n) + " levels");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd DisplacementBasis::slab(PhasePoint alpha, int retained) const {
    const int n = size();
    if (retained < 1 || retained > n) {
        throw ConfigError("retained block must fit inside the padded basis");
    }
    const double t = std::abs(alpha.value());
    const double phi = (t == 0.0 ? 0.0 : std::arg(alpha.value())) - std::numbers::pi / 2.0;

    Eigen::VectorXcd phases(n);
    for (int k = 0; k < n; ++k) {
        phases(k) = std::polar(1.0, t * eigenvalues_(k));
    }
    // M = U diag(e^{i t q}) U^T restricted to the first `retained` columns.
    Eigen::MatrixXcd right =
        phases.asDiagonal() * eigenvectors_.topRows(retained).transpose().cast<Complex>();
    Eigen::MatrixXcd out = eigenvectors_.cast<Complex>() * right;
    for (int c = 0; c < retained; ++c) {
        for (int r = 0; r < n; ++r) {
            out(r, c) *= std::polar(1.0, (r - c) * phi);
        }
    }
    return out;
}

Eigen::MatrixXcd DisplacementBasis::matrix(PhasePoint alpha) const { return slab(alpha, size()); }

void check_padding(const Eigen::MatrixXcd& slab) {
    const Eigen::Index edge = std::min<Eigen::Index>(4, slab.rows());
    double worst = slab.bottomRows(edge).colwise().squaredNorm().maxCoeff();
    if (worst > 1e-10) {
        throw PaddingInsufficient("displaced columns reach the padding edge (weight " +
                                  fmt_double(worst) + ")");
    }
}

DisplacementMatrix displacement_operator(PhasePoint alpha, FockCutoff cutoff) {
    int n = padded_dim(std::abs(alpha.value()), cutoff.dim());
    DisplacementBasis basis(n);
    DisplacementMatrix d{basis.matrix(alpha), cutoff.dim()};
    check_padding(d.slab());
    return d;
}

JointCountDistribution displaced_number_distribution(const TwoModeDensityMatrix& rho,
                                                     PhasePoint alpha, PhasePoint beta) {
    double reach = std::max(std::abs(alpha.value()), std::abs(beta.value()));
    DisplacementBasis basis(padded_dim(reach, rho.dim()));
    return displaced_number_distribution(rho, basis, alpha, beta);
}

JointCountDistribution displaced_number_distribution(const TwoModeDensityMatrix& rho,
                                                     const DisplacementBasis& basis,
                                                     PhasePoint alpha, PhasePoint beta) {
    const int d = rho.dim();
    // <n| D(alpha)^dag = <n| D(-alpha)
    Eigen::MatrixXcd sa = basis.slab(PhasePoint(-alpha.value()), d);
    Eigen::MatrixXcd sb = basis.slab(PhasePoint(-beta.value()), d);
    const int n = basis.size();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (const auto& c : rho.components()) {
        Eigen::MatrixXcd m = sa * c.amplitudes * sb.transpose();
        p.noalias() += c.weight * m.cwiseAbs2();
    }
    double edge = p.bottomRows(4).sum() + p.rightCols(4).sum();
    if (edge > kEdgeMassTol) {
        throw PaddingInsufficient("displaced distribution reaches the padding edge (mass " +
                                  fmt_double(edge) + ")");
    }
    return JointCountDistribution(std::move(p), rho.trace_tol());
}

CountDistribution displaced_marginal_distribution(const TwoModeDensityMatrix& rho,
                                                  const DisplacementBasis& basis, bool mode_b,
                                                  PhasePoint alpha) {
    const int d = rho.dim();
    Eigen::MatrixXcd s = basis.slab(PhasePoint(-alpha.value()), d);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(basis.size());
    for (const auto& c : rho.components()) {
        Eigen::MatrixXcd m = mode_b ? Eigen::MatrixXcd(s * c.amplitudes.transpose())
                                    : Eigen::MatrixXcd(s * c.amplitudes);
        p.noalias() += c.weight * m.rowwise().squaredNorm();
    }
    if (p.tail(4).sum() > kEdgeMassTol) {
        throw PaddingInsufficient("displaced marginal reaches the padding edge (mass " +
                                  fmt_double(p.tail(4).sum()) + ")");
    }
    return CountDistribution(std::vector<double>(p.data(), p.data() + p.size()), rho.trace_tol());
}

// ---------------------------------------------------------------------------
// JSON

TwoModeDensityMatrix density_matrix_from_json(const nlohmann::json& j, double trace_tol) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
        throw InvalidState("state file needs \"dim\" and \"entries\"");
    }
    if (!j["dim"].is_number_integer()) {
        throw InvalidState("\"dim\" must be an integer");
    }
    FockCutoff cutoff(j["dim"].get<int>());
    const int n = cutoff.dim() * cutoff.dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : j["entries"]) {
        if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !e[2].is_number() || !e[3].is_number()) {
            throw InvalidState("entries must be [row, col, re, im]");
        }
        int row = e[0].get<int>();
        int col = e[1].get<int>();
        if (row < 0 || row >= n || col < 0 || col >= n) {
            throw InvalidState("entry index (" + std::to_string(row) + ", " +
                               std::to_string(col) + ") out of range");
        }
        if (!seen.emplace(row, col).second) {
            throw InvalidState("duplicate entry (" + std::to_string(row) + ", " +
                               std::to_string(col) + ")");
        }
        m(row, col) = Complex(e[2].get<double>(), e[3].get<double>());
    }
    return TwoModeDensityMatrix::from_dense(cutoff, m, trace_tol);
}

nlohmann::json density_matrix_to_json(const TwoModeDensityMatrix& rho) {
    Eigen::MatrixXcd m = rho.entries();
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c) != Complex(0.0, 0.0)) {
                entries.push_back({r, c, m(r, c).real(), m(r, c).imag()});
            }
        }
    }
    return {{"dim", rho.dim()}, {"entries", entries}};
}

TwoModeDensityMatrix load_density_matrix(const std::string& path, double trace_tol) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open state file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("state file " + path + " is not valid JSON: " + e.what());
    }
    return density_matrix_from_json(j, trace_tol);
}

}  // namespace phasewitness
