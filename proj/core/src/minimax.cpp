#include "homoclinic/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <cstdio>

namespace homoclinic {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::geometry_failure: return "geometry_failure";
  }
  return "unknown";
}

namespace {

// Solver-internal view of the problem in energy coordinates. Eigenvalues are
// ascending, so the minus/zero/plus index sets are contiguous ranges; the
// workspace leans on that to use block views instead of copies.
struct Workspace {
  const MinimaxContext& ctx;
  int m = 0;       // total modes
  int d = 0;       // dim V = n_minus + n_zero
  int p = 0;       // dim E^+ retained
  int n_minus = 0;
  Vector lam_plus;       // ascending positive eigenvalues
  Vector sqrt_lam_plus;
  Matrix v_cols;         // nodal V-modes, energy-normalized (m x d)
  Vector t_nodes;        // cached node coordinates

  explicit Workspace(const MinimaxContext& c) : ctx(c) {
    const auto& dec = ctx.dec;
    const auto& split = ctx.split;
    m = dec.retained();
    n_minus = static_cast<int>(split.minus.size());
    d = n_minus + static_cast<int>(split.zero.size());
    p = static_cast<int>(split.plus.size());
    for (int k = 0; k + 1 < static_cast<int>(split.plus.size()); ++k)
      if (split.plus[k] + 1 != split.plus[k + 1])
        throw std::logic_error("plus indices are not contiguous");
    lam_plus = dec.lambda.tail(p);
    sqrt_lam_plus = lam_plus.cwiseSqrt();
    v_cols.resize(dec.grid.size(), d);
    for (int k = 0; k < d; ++k) {
      const int i = k < n_minus ? split.minus[k] : split.zero[k - n_minus];
      const double scale = k < n_minus ? std::sqrt(std::abs(dec.lambda(i))) : 1.0;
      v_cols.col(k) = dec.modes.col(i) / scale;
    }
    t_nodes.resize(dec.grid.n);
    for (int i = 0; i < dec.grid.n; ++i) t_nodes(i) = dec.grid.node(i);
  }

  // Nodal representation of a unit-energy E^+ direction given in energy
  // coordinates over the plus modes.
  Vector plus_nodal(const Vector& wy) const {
    return ctx.dec.modes.rightCols(p) * (wy.cwiseQuotient(sqrt_lam_plus));
  }

  Vector v_nodal(const Vector& z) const {
    return d ? Vector(v_cols * z) : Vector(Vector::Zero(ctx.grid.size()));
  }

  double psi_nodal(const Vector& u) const {
    const auto& g = ctx.grid;
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i)
      acc += ctx.spec.potential.value(t_nodes(i), u.segment(i * g.N, g.N));
    return g.h * acc;
  }

  Vector wu_nodal(const Vector& u) const {
    const auto& g = ctx.grid;
    Vector out(u.size());
    for (int i = 0; i < g.n; ++i)
      out.segment(i * g.N, g.N) = ctx.spec.potential.gradient(t_nodes(i), u.segment(i * g.N, g.N));
    return out;
  }

  // Full energy gradient in energy coordinates at the slice point (z, s, wy).
  // One dense GEMV against all modes.
  Vector full_gradient(const Vector& z, double s, const Vector& wy, const Vector& wu) const {
    const Vector b = ctx.grid.h * (ctx.dec.modes.transpose() * wu);
    Vector g(m);
    for (int k = 0; k < d; ++k) {
      const int i = k < n_minus ? ctx.split.minus[k] : ctx.split.zero[k - n_minus];
      if (k < n_minus)
        g(i) = -z(k) - b(i) / std::sqrt(std::abs(ctx.dec.lambda(i)));
      else
        g(i) = -b(i);
    }
    const int off = m - p;
    for (int k = 0; k < p; ++k) g(off + k) = s * wy(k) - b(off + k) / sqrt_lam_plus(k);
    return g;
  }

  StateVector state_from(const Vector& u_nodal) const { return {ctx.grid, u_nodal}; }
};

struct SlicePoint {
  Vector z;      // V coordinates (energy scale)
  double s = 0;  // coordinate along w
  double phi = 0;
  Vector u;  // nodal
};

// Maximizes Phi over {u1 + s w : ||u1|| <= R, 0 <= s <= R} by projected
// gradient ascent. Steps are Barzilai-Borwein initialized and Armijo
// safeguarded (factor 1/2, at most cfg.max_halvings); the stop test is the
// unit-step projected gradient.
SlicePoint ascend_slice(const Workspace& ws, const Vector& w_nodal, Vector z, double s,
                        double R, const SolveConfig& cfg) {
  const int d = ws.d;
  auto project = [&](Vector& zz, double& ss) {
    const double zn = zz.norm();
    if (zn > R) zz *= R / zn;
    ss = std::clamp(ss, 0.0, R);
  };
  project(z, s);

  auto u_of = [&](const Vector& zz, double ss) -> Vector {
    Vector u = ss * w_nodal;
    if (d) u += ws.v_cols * zz;
    return u;
  };
  auto phi_of = [&](const Vector& zz, double ss, const Vector& u) {
    return 0.5 * ss * ss - 0.5 * zz.head(ws.n_minus).squaredNorm() - ws.psi_nodal(u);
  };

  Vector u = u_of(z, s);
  double phi = phi_of(z, s, u);

  Vector gz(d), gz_prev(d);
  double gs = 0, gs_prev = 0;
  Vector z_prev = z;
  double s_prev = s;
  double eta = 1.0;

  for (int it = 0; it < cfg.inner_max; ++it) {
    const Vector wu = ws.wu_nodal(u);
    if (d) {
      gz = -(ws.ctx.grid.h * (ws.v_cols.transpose() * wu));
      gz.head(ws.n_minus) -= z.head(ws.n_minus);
    }
    gs = s - ws.ctx.grid.h * w_nodal.dot(wu);

    // KKT measure: displacement of a unit ascent step after projection.
    Vector zt = z + gz;
    double st = s + gs;
    project(zt, st);
    const double pg = std::sqrt((zt - z).squaredNorm() + (st - s) * (st - s));
    if (pg <= cfg.inner_tol) return {z, s, phi, u};

    if (it > 0) {
      // BB2 step from the last displacement/gradient-change pair.
      const Vector dz = z - z_prev;
      const double dsv = s - s_prev;
      const Vector dg = gz - gz_prev;
      const double dgs = gs - gs_prev;
      const double denom = dg.squaredNorm() + dgs * dgs;
      const double numer = dz.dot(dg) + dsv * dgs;
      if (denom > 0 && std::isfinite(numer / denom))
        eta = std::clamp(std::abs(numer) / denom, 1e-12, 1e6);
      else
        eta = 1.0;
    }
    z_prev = z;
    s_prev = s;
    gz_prev = gz;
    gs_prev = gs;

    // Near the peak the true Armijo gain sinks below the round-off of Phi;
    // the slack keeps the guard from rejecting honest gradient steps there.
    const double slack = 1e-12 * (1.0 + std::abs(phi));
    bool accepted = false;
    for (int half = 0; half < cfg.max_halvings; ++half) {
      Vector zn = z + eta * gz;
      double sn = s + eta * gs;
      project(zn, sn);
      const Vector un = u_of(zn, sn);
      const double phin = phi_of(zn, sn, un);
      const double gain = gz.dot(zn - z) + gs * (sn - s);
      if (phin >= phi + cfg.armijo_c * gain - slack) {
        z = zn;
        s = sn;
        u = un;
        phi = phin;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) return {z, s, phi, u};  // numerically stationary
  }
  {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "peak_map inner ascent did not converge within inner_max"
                  " (phi=%.6g s=%.6g |z|=%.3g eta=%.3g)",
                  phi, s, z.norm(), eta);
    throw std::runtime_error(buf);
  }
}

Vector random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
  const double n = v.norm();
  return n > 0 ? Vector(v / n) : Vector(Vector::Unit(dim, 0));
}

SolveReport solve_from_direction(const Workspace& ws, const LinkingGeometry& geo,
                                 Vector wy, Vector z0, double s0, const SolveConfig& cfg) {
  const double R = geo.R;
  wy /= wy.norm();
  Vector w_nodal = ws.plus_nodal(wy);

  SolveReport rep;
  rep.geometry = geo;
  rep.status = SolveStatus::max_iter;

  SlicePoint pk{z0, s0, 0.0, Vector()};
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    pk = ascend_slice(ws, w_nodal, pk.z, pk.s, R, cfg);
    const Vector wu = ws.wu_nodal(pk.u);
    const Vector g = ws.full_gradient(pk.z, pk.s, wy, wu);
    const double gn = g.norm();
    rep.history.push_back({iter, pk.phi, gn});
    if (gn <= cfg.tol) {
      rep.status = SolveStatus::converged;
      break;
    }

    // Danskin direction: the peak moves the outer objective by s* times the
    // E^+ gradient tangent to the w-sphere.
    Vector gp = g.tail(ws.p);
    gp -= gp.dot(wy) * wy;
    const double slope = pk.s * pk.s * gp.squaredNorm();
    if (slope <= std::numeric_limits<double>::min()) break;

    const double slack = 1e-12 * (1.0 + std::abs(pk.phi));
    bool moved = false;
    double eta = 1.0;
    for (int half = 0; half < cfg.max_halvings; ++half) {
      Vector wn = wy - (eta * pk.s) * gp;
      wn /= wn.norm();
      const Vector wn_nodal = ws.plus_nodal(wn);
      const SlicePoint trial = ascend_slice(ws, wn_nodal, pk.z, pk.s, R, cfg);
      if (trial.phi <= pk.phi - cfg.armijo_c * eta * slope + slack) {
        wy = wn;
        w_nodal = wn_nodal;
        pk = trial;
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;  // no decrease available; report the best iterate
  }

  rep.solution = ws.state_from(pk.u);
  rep.critical_value = pk.phi;
  rep.grad_norm = rep.history.empty() ? 0.0 : rep.history.back().grad_norm;
  rep.iterations = iter;
  return rep;
}

}  // namespace

MinimaxContext prepare_context(const ProblemSpec& spec, const Grid& grid,
                               const SolveConfig& cfg) {
  if (!spec.potential.asymptotic_part)
    throw std::invalid_argument("the minimax stage requires the split part M of the potential");
  MinimaxContext ctx{spec, grid, {}, {}, 0.0};

  // m0 from the same sampling plan the hypothesis audit uses.
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  double m0 = std::numeric_limits<double>::infinity();
  const auto& M = *spec.potential.asymptotic_part;
  for (int k = 0; k < cfg.plan.count; ++k) {
    const double t = -cfg.plan.t_half_width +
                     2.0 * cfg.plan.t_half_width * k / (cfg.plan.count - 1);
    const Matrix Mt = M.eval(t);
    if (Mt.rows() == 1) {
      m0 = std::min(m0, Mt(0, 0));
    } else {
      es.compute(Mt, Eigen::EigenvaluesOnly);
      m0 = std::min(m0, es.eigenvalues()(0));
    }
  }
  ctx.m0 = m0;

  ctx.dec = eigendecompose(assemble_operator(spec, grid));
  ctx.split = classify(ctx.dec, ctx.dec.zero_tol, m0);
  return ctx;
}

LinkingGeometry estimate_geometry(const MinimaxContext& ctx, const SolveConfig& cfg) {
  const Workspace ws(ctx);
  if (ctx.split.ell < 1)
    throw GeometryError("no eigenvalues in (0, m0): the linking slice E_ell^+ is empty");

  std::mt19937_64 rng(cfg.seed);

  // Directions on the unit sphere of E^+: the ell eigen-directions carry the
  // worst Phi values, the random ones probe the rest of the span.
  std::vector<Vector> dir_nodal;
  const int pure = std::min(ws.p, ctx.split.ell + 3);
  for (int k = 0; k < pure; ++k) {
    Vector wy = Vector::Zero(ws.p);
    wy(k) = 1.0;
    dir_nodal.push_back(ws.plus_nodal(wy));
  }
  for (int k = 0; k < cfg.sphere_samples; ++k)
    dir_nodal.push_back(ws.plus_nodal(random_unit(rng, ws.p)));

  LinkingGeometry geo;
  bool found_rho = false;
  for (int j = 0; j < 24 && !found_rho; ++j) {
    const double rho = std::pow(0.5, j);
    double mn = std::numeric_limits<double>::infinity();
    for (const Vector& wn : dir_nodal)
      mn = std::min(mn, 0.5 * rho * rho - ws.psi_nodal(rho * wn));
    if (mn > rho * rho / 8) {
      geo.rho = rho;
      geo.alpha_hat = mn;
      found_rho = true;
    }
  }
  if (!found_rho)
    throw GeometryError("no rho in the sweep gives a positive sampled infimum on the sphere");

  // e: unit-energy eigenvector of the smallest eigenvalue in (0, m0).
  const int e_idx = ctx.split.plus.front();
  Vector ey = Vector::Zero(ws.p);
  ey(0) = 1.0;
  const Vector e_nodal = ws.plus_nodal(ey);
  geo.e_dir = ws.state_from(e_nodal);

  // Sphere directions in E~ = V + E_ell^+, as (z, y_ell) energy coordinates.
  const int dt = ws.d + ctx.split.ell;
  std::vector<Vector> tilde_dirs;
  for (int k = 0; k < dt; ++k) {
    Vector v = Vector::Unit(dt, k);
    tilde_dirs.push_back(v);
    tilde_dirs.push_back(-v);
  }
  for (int k = 0; k < cfg.sphere_samples; ++k) tilde_dirs.push_back(random_unit(rng, dt));

  auto tilde_nodal = [&](const Vector& dir) {
    Vector wy = Vector::Zero(ws.p);
    wy.head(ctx.split.ell) = dir.tail(ctx.split.ell);
    Vector u = ws.plus_nodal(wy);
    if (ws.d) u += ws.v_cols * dir.head(ws.d);
    return u;
  };
  auto phi_tilde = [&](const Vector& dir, double r) {
    const double plus_sq = dir.tail(ctx.split.ell).squaredNorm();
    const double minus_sq = dir.head(ws.n_minus).squaredNorm();
    return 0.5 * r * r * (plus_sq - minus_sq) - ws.psi_nodal(r * tilde_nodal(dir));
  };

  double R = 2.0 * geo.rho;
  for (;;) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const Vector& dir : tilde_dirs) mx = std::max(mx, phi_tilde(dir, R));
    if (mx < 0) break;
    R *= 2.0;
    if (R > cfg.r_cap)
      throw GeometryError("R doubling exceeded the cap: Phi stays positive on E~ spheres");
  }
  geo.R = R;

  // sup Phi over the three faces of the boundary of Q.
  auto phi_point = [&](const Vector& z, double r) {
    Vector u = r * e_nodal;
    if (ws.d) u += ws.v_cols * z;
    return 0.5 * r * r - 0.5 * z.head(ws.n_minus).squaredNorm() - ws.psi_nodal(u);
  };
  // With dim V = 0 the boundary degenerates to the endpoints {0, Re}.
  double sup = phi_point(Vector::Zero(ws.d), 0.0);
  sup = std::max(sup, phi_point(Vector::Zero(ws.d), R));
  if (ws.d) {
    std::uniform_real_distribution<double> unif;
    const int per_face = std::max(1, cfg.boundary_samples / 3);
    for (int k = 0; k < per_face; ++k) {
      const Vector zdir = random_unit(rng, ws.d);
      const double rad = R * std::pow(unif(rng), 1.0 / ws.d);
      sup = std::max(sup, phi_point(rad * zdir, 0.0));          // r = 0 face
      sup = std::max(sup, phi_point(rad * zdir, R));            // r = R face
      sup = std::max(sup, phi_point(R * zdir, R * unif(rng)));  // ||u1|| = R side
    }
  }
  geo.sup_boundary = sup;
  if (sup > 0)
    throw GeometryError("sampled sup of Phi on the boundary of Q is positive");
  return geo;
}

LinkingGeometry estimate_geometry(const ProblemSpec& spec, const SpectralDecomposition& dec,
                                  const SubspaceSplit& split, const Grid& grid,
                                  const SolveConfig& cfg) {
  MinimaxContext ctx{spec, grid, dec, split, split.m0};
  return estimate_geometry(ctx, cfg);
}

StateVector peak_map(const StateVector& w, const ProblemSpec& spec,
                     const SpectralDecomposition& dec, const SubspaceSplit& split,
                     const LinkingGeometry& geo, const SolveConfig& cfg) {
  MinimaxContext ctx{spec, w.grid, dec, split, split.m0};
  const Workspace ws(ctx);

  const Vector c = dec.coefficients(w);
  for (int i : split.minus)
    if (std::abs(c(i)) > 1e-8) throw std::invalid_argument("peak_map: w is not orthogonal to V");
  for (int i : split.zero)
    if (std::abs(c(i)) > 1e-8) throw std::invalid_argument("peak_map: w is not orthogonal to V");

  Vector wy(ws.p);
  const int off = ws.m - ws.p;
  for (int k = 0; k < ws.p; ++k) wy(k) = ws.sqrt_lam_plus(k) * c(off + k);
  const double wn = wy.norm();
  if (wn == 0) throw std::invalid_argument("peak_map: w vanishes");
  wy /= wn;

  const SlicePoint pk =
      ascend_slice(ws, ws.plus_nodal(wy), Vector::Zero(ws.d), geo.rho, geo.R, cfg);
  return ws.state_from(pk.u);
}

SolveReport mountain_pass_solve(const MinimaxContext& ctx, const SolveConfig& cfg) {
  const Workspace ws(ctx);
  try {
    const LinkingGeometry geo = estimate_geometry(ctx, cfg);
    Vector wy = Vector::Zero(ws.p);
    wy(0) = 1.0;  // eigen-direction of the smallest eigenvalue in (0, m0)
    return solve_from_direction(ws, geo, wy, Vector::Zero(ws.d), geo.rho, cfg);
  } catch (const GeometryError&) {
    SolveReport rep;
    rep.solution = StateVector::zero(ctx.grid);
    rep.status = SolveStatus::geometry_failure;
    return rep;
  }
}

SolveReport mountain_pass_solve(const MinimaxContext& ctx, const SolveConfig& cfg,
                                const StateVector& u_init) {
  const Workspace ws(ctx);
  const LinkingGeometry geo = estimate_geometry(ctx, cfg);

  const Vector c = ctx.dec.coefficients(u_init);
  Vector z0 = Vector::Zero(ws.d);
  for (int k = 0; k < ws.d; ++k) {
    const int i = k < ws.n_minus ? ctx.split.minus[k] : ctx.split.zero[k - ws.n_minus];
    const double scale = k < ws.n_minus ? std::sqrt(std::abs(ctx.dec.lambda(i))) : 1.0;
    z0(k) = scale * c(i);
  }
  Vector wy(ws.p);
  const int off = ws.m - ws.p;
  for (int k = 0; k < ws.p; ++k) wy(k) = ws.sqrt_lam_plus(k) * c(off + k);
  const double s0 = wy.norm();
  if (s0 == 0) return mountain_pass_solve(ctx, cfg);
  wy /= s0;
  return solve_from_direction(ws, geo, wy, z0, s0, cfg);
}

SolveReport mountain_pass_solve(const ProblemSpec& spec, const Grid& grid,
                                const SolveConfig& cfg) {
  return mountain_pass_solve(prepare_context(spec, grid, cfg), cfg);
}

MultiSolveResult multi_solve(const ProblemSpec& spec, const Grid& grid,
                             const SolveConfig& cfg) {
  if (!spec.potential.even)
    throw std::invalid_argument("multi_solve requires an even potential");

  const MinimaxContext ctx = prepare_context(spec, grid, cfg);
  const Workspace ws(ctx);

  MultiSolveResult result;
  result.ell = ctx.split.ell;

  LinkingGeometry geo;
  try {
    geo = estimate_geometry(ctx, cfg);
  } catch (const GeometryError&) {
    SolveReport rep;
    rep.solution = StateVector::zero(grid);
    rep.status = SolveStatus::geometry_failure;
    result.solutions.push_back(std::move(rep));
    return result;
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<Vector> starts;
  for (int k = 0; k < std::min(ctx.split.ell, ws.p); ++k) {
    Vector wy = Vector::Zero(ws.p);
    wy(k) = 1.0;
    starts.push_back(std::move(wy));
  }
  for (int k = 0; k < cfg.extra_starts; ++k) starts.push_back(random_unit(rng, ws.p));

  std::vector<SolveReport> converged;
  result.starts = static_cast<int>(starts.size());
  for (const Vector& wy : starts) {
    SolveReport rep = solve_from_direction(ws, geo, wy, Vector::Zero(ws.d), geo.rho, cfg);
    if (rep.status == SolveStatus::converged) {
      ++result.converged;
      converged.push_back(std::move(rep));
    }
  }

  // Orbits come in +- pairs: u and u' coincide when min(||u-u'||,||u+u'||) is
  // below the scaled tolerance. The lower-Phi representative wins.
  for (SolveReport& rep : converged) {
    bool duplicate = false;
    for (SolveReport& kept : result.solutions) {
      StateVector diff{grid, rep.solution.values - kept.solution.values};
      StateVector sum{grid, rep.solution.values + kept.solution.values};
      const double dist = std::min(energy_norm(diff, ctx.dec, ctx.split),
                                   energy_norm(sum, ctx.dec, ctx.split));
      const double scale = 1.0 + energy_norm(kept.solution, ctx.dec, ctx.split);
      if (dist <= cfg.dedupe_tol * scale) {
        duplicate = true;
        if (rep.critical_value < kept.critical_value) kept = std::move(rep);
        break;
      }
    }
    if (!duplicate) result.solutions.push_back(std::move(rep));
  }
  return result;
}

}  // namespace homoclinic
