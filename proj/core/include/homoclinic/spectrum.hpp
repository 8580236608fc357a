#pragma once

#include "homoclinic/discretization.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace homoclinic {

/// Eigenpairs of the discrete operator, ascending, with eigenvectors
/// orthonormal in the discrete L2 inner product (h u^T v).
struct SpectralDecomposition {
  Grid grid;
  Vector lambda;  // ascending
  Matrix modes;   // grid.size() x lambda.size(), L2-orthonormal columns
  double zero_tol = 0.0;
  int n_minus = 0;  // # lambda_i < -zero_tol
  int n_zero = 0;   // # |lambda_i| <= zero_tol

  int retained() const { return static_cast<int>(lambda.size()); }
  bool full() const { return retained() == grid.size(); }
  int n_bar() const { return n_minus + n_zero; }

  /// L2 eigen-coefficients c_i = (u, e_i)_2.
  Vector coefficients(const StateVector& u) const;
  /// Nodal state from eigen-coefficients.
  StateVector synthesize(const Vector& c) const;
};

inline constexpr int kAllModes = -1;

/// Computes the `count` algebraically smallest eigenpairs (all when count ==
/// kAllModes) by a banded symmetric solve, L2-orthonormalized and
/// residual-checked. Throws std::runtime_error on eigensolver failure.
SpectralDecomposition eigendecompose(const DiscreteOperator& op, int count = kAllModes);

/// Scale-aware default: 1e-8 * max(1, |lambda|_max).
double default_zero_tol(const Vector& lambda);

/// Index partition of the retained modes plus the counts the minimax stage
/// needs. `warnings` flags fragile classifications.
struct SubspaceSplit {
  std::vector<int> minus, zero, plus;
  int ell = 0;  // # eigenvalues in (zero_tol, m0)
  double m0 = 0.0;
  double zero_tol = 0.0;
  std::optional<int> b_count;  // # |lambda_i| <= b when a b-split was requested
  std::vector<std::string> warnings;
};

SubspaceSplit classify(const SpectralDecomposition& dec, double zero_tol, double m0,
                       std::optional<double> b = std::nullopt);

struct Projection {
  StateVector minus, zero, plus;
};

/// Splits u into its E^-, E^0, E^+ components. Requires the retained span to
/// capture u up to 1e-8 relative L2 residual; throws otherwise.
Projection project(const StateVector& u, const SpectralDecomposition& dec,
                   const SubspaceSplit& split);

/// ||u||^2 = sum |lambda_i| c_i^2 over nonzero modes + sum c_i^2 over kernel
/// modes.
double energy_norm_sq(const StateVector& u, const SpectralDecomposition& dec,
                      const SubspaceSplit& split);
double energy_norm(const StateVector& u, const SpectralDecomposition& dec,
                   const SubspaceSplit& split);
double energy_inner(const StateVector& u, const StateVector& v,
                    const SpectralDecomposition& dec, const SubspaceSplit& split);

/// Truncated-domain certificate for 0 not being an eigenvalue of A - M,
/// recomputed on the h/2 grid to confirm the verdict is discretization-stable.
struct W4Certificate {
  double min_abs_eig = 0.0;
  double min_abs_eig_refined = 0.0;
  bool holds = false;
  bool stable = false;
};

W4Certificate check_W4(const ProblemSpec& spec, const Grid& grid, double tol);

/// Fills the decomposition-dependent fields of a ConditionReport:
/// sigma_min_positive, W3_holds, and the empirical embedding constant beta2
/// (max |u|_2 / ||u|| over `trials` seeded random states).
void complete_report(ConditionReport& report, const SpectralDecomposition& dec,
                     const SubspaceSplit& split, std::uint64_t seed, int trials = 200);

}  // namespace homoclinic
