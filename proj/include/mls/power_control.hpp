#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mls/geometry.hpp"
#include "mls/sinr.hpp"

namespace mls {

/// Normalized cross-gain matrix: F(l, k) = beta_l * d(s_l, r_l)^alpha / d(s_k, r_l)^alpha
/// for k != l, zero diagonal. Throws DomainError for co-located pairs.
Eigen::MatrixXd gain_matrix(const std::vector<Link>& links, const ModelParams& model);

struct SpectralEstimate {
    double rho = 0.0;
    /// Collatz-Wielandt enclosure of the Perron root.
    double lower = 0.0;
    double upper = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Perron root of a nonnegative matrix by power iteration on F + eps*I from
/// the all-ones vector. Falls back to the Gershgorin row-sum bound for the
/// upper end when the iteration cap is hit.
SpectralEstimate spectral_radius(const Eigen::MatrixXd& F, double tol = 1e-12, int max_iter = 20000);

enum class FeasibilityStatus { Feasible, Infeasible, InfeasibleWithinTolerance, Structural };

std::string to_string(FeasibilityStatus s);

struct FeasibilityResult {
    bool feasible = false;
    FeasibilityStatus status = FeasibilityStatus::Infeasible;
    SpectralEstimate spectrum;
    std::string reason;
};

/// Single-round power feasibility: true iff the links are node-disjoint and
/// rho(F) < 1. |rho - 1| <= boundary_tol is reported as infeasible within
/// tolerance.
FeasibilityResult round_feasible(const std::vector<Link>& links, const ModelParams& model,
                                 double boundary_tol = 1e-9);

struct InfeasibleError : Error {
    InfeasibleError(const std::string& what, double rho_value) : Error(what), rho(rho_value) {}
    double rho;
};

struct PowerSolution {
    std::vector<double> powers;
    double rho = 0.0;
    /// Worst certified margin of verify_round with these powers.
    double achieved_margin = 0.0;
};

/// Witness powers p = (I - (1 + margin) F)^(-1) 1, normalized to min 1 and
/// scaled up when noise is present. Throws InfeasibleError carrying rho(F)
/// when no such powers exist.
PowerSolution synthesize_powers(const std::vector<Link>& links, const ModelParams& model, double margin = 0.0);

struct FmOptions {
    double target_margin = 0.01;
    int max_iter = 500;
    /// Interference is computed exactly up to this many links, otherwise by
    /// tree aggregation.
    std::size_t direct_limit = 1500;
};

struct FmResult {
    std::vector<double> powers;
    int iterations = 0;
    bool converged = false;
};

/// Iterative power control seeded with the round's current powers: links that
/// already meet the target keep their slack as a virtual noise floor, failing
/// links are raised. Stops once every link meets the target (floating point
/// estimate; callers re-verify).
FmResult foschini_miljanic(const RoundConfig& round, const ModelParams& model, const FmOptions& opts = {});

std::vector<Link> links_of(const RoundConfig& round);

}  // namespace mls
