#include "homoclinic/verify.hpp"

#include "homoclinic/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homoclinic {

ResidualNorms ode_residual(const StateVector& u, const ProblemSpec& spec) {
  const Grid& g = u.grid;
  if (g.N != spec.dim) throw std::invalid_argument("ode_residual: dimension mismatch");
  const double h2 = g.h * g.h;
  ResidualNorms out;
  double acc = 0.0;
  Vector prev = Vector::Zero(g.N);  // Dirichlet padding
  for (int i = 0; i < g.n; ++i) {
    const Vector ui = u.node(i);
    const Vector next = i + 1 < g.n ? Vector(u.node(i + 1)) : Vector(Vector::Zero(g.N));
    const double t = g.node(i);
    const Vector r = (next - 2.0 * ui + prev) / h2 - spec.L.eval(t) * ui +
                     spec.potential.gradient(t, ui);
    acc += r.squaredNorm();
    out.inf = std::max(out.inf, r.cwiseAbs().maxCoeff());
    prev = ui;
  }
  out.l2 = std::sqrt(g.h * acc);
  return out;
}

DecayTails decay_report(const StateVector& u) {
  const Grid& g = u.grid;
  DecayTails out;
  for (int i = 0; i < g.n; ++i) {
    if (std::abs(g.node(i)) < 0.9 * g.T) continue;
    const Vector prev = i > 0 ? Vector(u.node(i - 1)) : Vector(Vector::Zero(g.N));
    const Vector next = i + 1 < g.n ? Vector(u.node(i + 1)) : Vector(Vector::Zero(g.N));
    out.u = std::max(out.u, u.node(i).norm());
    out.du = std::max(out.du, ((next - prev) / (2.0 * g.h)).norm());
  }
  return out;
}

StateVector interpolate(const StateVector& u, const Grid& target) {
  if (u.grid.N != target.N) throw std::invalid_argument("interpolate: dimension mismatch");
  StateVector out = StateVector::zero(target);
  const Grid& src = u.grid;
  for (int i = 0; i < target.n; ++i) {
    const double t = target.node(i);
    if (t <= -src.T || t >= src.T) continue;  // zero outside, Dirichlet at the rim
    const double x = (t + src.T) / src.h - 1.0;  // fractional source index
    const int j = static_cast<int>(std::floor(x));
    const double w = x - j;
    Vector left = (j >= 0 && j < src.n) ? Vector(u.node(j)) : Vector(Vector::Zero(src.N));
    Vector right = (j + 1 >= 0 && j + 1 < src.n) ? Vector(u.node(j + 1))
                                                 : Vector(Vector::Zero(src.N));
    out.node(i) = (1.0 - w) * left + w * right;
  }
  return out;
}

namespace {

// Relative L2 distance on the finer of the two grids.
double relative_drift(const StateVector& coarse, const StateVector& fine) {
  const StateVector lifted = interpolate(coarse, fine.grid);
  const double base = l2_norm(lifted);
  if (base == 0) return std::numeric_limits<double>::infinity();
  StateVector diff{fine.grid, fine.values - lifted.values};
  return l2_norm(diff) / base;
}

}  // namespace

VerificationReport refine_and_compare(const SolveReport& report, const ProblemSpec& spec,
                                      const SolveConfig& solver_cfg, const VerifyConfig& cfg) {
  VerificationReport out;
  const StateVector& u = report.solution;
  const Grid& g = u.grid;

  const ResidualNorms rn = ode_residual(u, spec);
  out.residual_l2 = rn.l2;
  out.residual_inf = rn.inf;
  const DecayTails tails = decay_report(u);
  out.decay_tail_u = tails.u;
  out.decay_tail_du = tails.du;
  out.refinement_drift = std::numeric_limits<double>::infinity();
  out.domain_drift = std::numeric_limits<double>::infinity();

  if (report.status != SolveStatus::converged) {
    out.notes.push_back("solve did not converge; nothing to certify");
    out.passed = false;
    return out;
  }

  // Nontriviality gate: anything inside the linking sphere is not a solution
  // candidate.
  const MinimaxContext ctx0 = prepare_context(spec, g, solver_cfg);
  if (energy_norm(u, ctx0.dec, ctx0.split) < report.geometry.rho) {
    out.notes.push_back("solution norm below rho: trivial candidate rejected");
    out.passed = false;
    return out;
  }

  // Re-solve on the h/2 grid, warm started from the interpolated solution.
  {
    const Grid fine = build_grid(g.T, 2 * g.n + 1, g.N);
    const MinimaxContext ctx = prepare_context(spec, fine, solver_cfg);
    const SolveReport re = mountain_pass_solve(ctx, solver_cfg, interpolate(u, fine));
    if (re.status == SolveStatus::converged)
      out.refinement_drift = relative_drift(u, re.solution);
    else
      out.notes.push_back("refinement re-solve did not converge");
  }

  // Re-solve on the widened domain with the same spacing.
  {
    const double T2 = cfg.domain_growth * g.T;
    const int n2 = static_cast<int>(std::lround(2.0 * T2 / g.h)) - 1;
    const Grid wide = build_grid(T2, n2, g.N);
    const MinimaxContext ctx = prepare_context(spec, wide, solver_cfg);
    const SolveReport re = mountain_pass_solve(ctx, solver_cfg, interpolate(u, wide));
    if (re.status == SolveStatus::converged) {
      // Compare where both are defined; the tail the wide solve adds is
      // covered by its own decay metric.
      out.domain_drift = relative_drift(u, interpolate(re.solution, u.grid));
    } else {
      out.notes.push_back("domain re-solve did not converge");
    }
  }

  out.passed = out.residual_inf <= cfg.residual_inf_tol && out.decay_tail_u <= cfg.tail_tol &&
               out.decay_tail_du <= cfg.tail_tol && out.refinement_drift <= cfg.drift_tol &&
               out.domain_drift <= cfg.drift_tol;
  return out;
}

}  // namespace homoclinic
