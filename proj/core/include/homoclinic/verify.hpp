#pragma once

#include "homoclinic/minimax.hpp"

namespace homoclinic {

struct ResidualNorms {
  double l2 = 0.0;
  double inf = 0.0;
};

/// Nodewise residual of u'' - L u + W_u = 0 with the central stencil and
/// Dirichlet padding; trapezoid L2 norm and max norm.
ResidualNorms ode_residual(const StateVector& u, const ProblemSpec& spec);

struct DecayTails {
  double u = 0.0;
  double du = 0.0;
};

/// Max nodal |u| and |central difference quotient| over |t| >= 0.9 T.
DecayTails decay_report(const StateVector& u);

/// Linear interpolation onto another grid, zero outside the source domain.
StateVector interpolate(const StateVector& u, const Grid& target);

struct VerifyConfig {
  double residual_inf_tol = 1e-4;
  double tail_tol = 1e-5;
  double drift_tol = 1e-3;     // relative L2 drift under re-solves
  double domain_growth = 1.5;  // T -> domain_growth * T for the domain check
};

struct VerificationReport {
  double residual_l2 = 0.0;
  double residual_inf = 0.0;
  double decay_tail_u = 0.0;
  double decay_tail_du = 0.0;
  double refinement_drift = 0.0;  // ||u_h - u_{h/2}||_2 / ||u||_2 after re-solve
  double domain_drift = 0.0;      // same for T -> 1.5 T
  bool passed = false;
  std::vector<std::string> notes;
};

/// Independent certification of a converged solve: residual and tail metrics,
/// plus warm-started re-solves on the h/2 grid and the 1.5 T domain.
/// Nontriviality gate: ||u|| < rho fails the report outright.
VerificationReport refine_and_compare(const SolveReport& report, const ProblemSpec& spec,
                                      const SolveConfig& solver_cfg,
                                      const VerifyConfig& cfg = {});

}  // namespace homoclinic
