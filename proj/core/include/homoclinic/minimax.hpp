#pragma once

#include "homoclinic/functional.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace homoclinic {

/// Sampled linking geometry: Phi >= alpha_hat > 0 on the sphere of radius rho
/// in E^+ and Phi <= sup_boundary <= 0 on the boundary of
/// Q = (ball of radius R in V) + {r e : 0 < r < R}, V = E^- + E^0.
struct LinkingGeometry {
  double rho = 0.0;
  double alpha_hat = 0.0;
  double R = 0.0;
  StateVector e_dir;  // unit-energy eigen-direction of the smallest eigenvalue in (0, m0)
  double sup_boundary = 0.0;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveConfig {
  double tol = 1e-6;        // outer stop: energy norm of grad Phi at the peak
  double inner_tol = 1e-8;  // slice stationarity in peak_map
  int inner_max = 5000;
  int max_iter = 5000;      // outer iterations
  double armijo_c = 1e-4;   // backtracking slope fraction, factor 1/2, <= 40 halvings
  int max_halvings = 40;
  double r_cap = 1e3;          // R doubling gives up past this
  int sphere_samples = 200;    // random directions per rho candidate
  int boundary_samples = 500;  // samples of the boundary of Q
  double dedupe_tol = 1e-3;    // orbits closer than dedupe_tol*(1+||u||) coincide
  std::uint64_t seed = 0;
  int extra_starts = 2;  // random outer starts beyond the ell eigen-directions
  SamplingPlan plan;     // used to locate m0 = inf_t min-eig M(t)
};

enum class SolveStatus { converged, max_iter, geometry_failure };

const char* to_string(SolveStatus s);

struct HistoryEntry {
  int iteration = 0;
  double phi = 0.0;
  double grad_norm = 0.0;
};

struct SolveReport {
  StateVector solution;
  double critical_value = 0.0;  // candidate critical value Phi(solution)
  double grad_norm = 0.0;
  int iterations = 0;
  LinkingGeometry geometry;
  std::vector<HistoryEntry> history;
  SolveStatus status = SolveStatus::max_iter;
};

/// Everything the solver derives once per (problem, grid): full spectral
/// decomposition, classification against m0, and the index bookkeeping.
struct MinimaxContext {
  ProblemSpec spec;
  Grid grid;
  SpectralDecomposition dec;
  SubspaceSplit split;
  double m0 = 0.0;
};

MinimaxContext prepare_context(const ProblemSpec& spec, const Grid& grid,
                               const SolveConfig& cfg);

/// Samples the linking sets. rho: largest value in {1, 1/2, 1/4, ...} whose
/// sampled sphere minimum exceeds rho^2/8; R: doubled from 2 rho until the
/// sampled maximum of Phi over the radius-R sphere of E^- + E^0 + E_ell^+ is
/// negative. Throws GeometryError when either sweep fails.
LinkingGeometry estimate_geometry(const MinimaxContext& ctx, const SolveConfig& cfg);
LinkingGeometry estimate_geometry(const ProblemSpec& spec, const SpectralDecomposition& dec,
                                  const SubspaceSplit& split, const Grid& grid,
                                  const SolveConfig& cfg);

/// Maximizes Phi over the slice {u1 + s w : u1 in V, ||u1|| <= R, 0 <= s <= R}
/// by projected gradient ascent. w must be a unit-energy direction in E^+.
StateVector peak_map(const StateVector& w, const ProblemSpec& spec,
                     const SpectralDecomposition& dec, const SubspaceSplit& split,
                     const LinkingGeometry& geo, const SolveConfig& cfg);

/// Linking minimax: minimizes w -> Phi(peak_map(w)) over unit w in E^+ by
/// monotone energy-gradient descent with retraction to the sphere.
SolveReport mountain_pass_solve(const ProblemSpec& spec, const Grid& grid,
                                const SolveConfig& cfg);
SolveReport mountain_pass_solve(const MinimaxContext& ctx, const SolveConfig& cfg);
/// Warm-started variant: w0 is any nonzero E^+ direction, u_init seeds the
/// slice maximizer (pass the interpolated solution when re-solving).
SolveReport mountain_pass_solve(const MinimaxContext& ctx, const SolveConfig& cfg,
                                const StateVector& u_init);

struct MultiSolveResult {
  std::vector<SolveReport> solutions;  // distinct converged representatives
  int ell = 0;
  int starts = 0;
  int converged = 0;
};

/// Multi-start search for the +-pairs of an even potential: outer starts at
/// the ell eigen-directions in (0, m0) plus seeded random directions,
/// deduplicated by min(||u-u'||, ||u+u'||).
MultiSolveResult multi_solve(const ProblemSpec& spec, const Grid& grid,
                             const SolveConfig& cfg);

}  // namespace homoclinic
