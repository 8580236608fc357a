#include "homoclinic/problem.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace homoclinic {

namespace {

double smallest_eigenvalue(const Matrix& m) {
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double spectral_norm(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> uniform_samples(const SamplingPlan& plan) {
  if (plan.count < 2) throw std::invalid_argument("sampling plan needs at least 2 points");
  if (plan.t_half_width <= 0) throw std::invalid_argument("sampling half-width must be positive");
  std::vector<double> t(plan.count);
  const double w = plan.t_half_width;
  for (int k = 0; k < plan.count; ++k)
    t[k] = -w + 2.0 * w * k / (plan.count - 1);
  return t;
}

// Probe directions for the |u|-sweeps: coordinate axes plus the diagonal.
std::vector<Vector> probe_directions(int dim) {
  std::vector<Vector> dirs;
  for (int j = 0; j < dim; ++j) dirs.push_back(Vector::Unit(dim, j));
  if (dim > 1) dirs.push_back(Vector::Constant(dim, 1.0 / std::sqrt(double(dim))));
  return dirs;
}

}  // namespace

void require_symmetric(const Matrix& m, double t, const char* name) {
  if (m.rows() != m.cols())
    throw std::runtime_error(std::string(name) + " evaluation is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::runtime_error(std::string(name) + " is not symmetric at t = " + std::to_string(t));
}

ProblemSpec paper_example(double a, int dim) {
  if (a <= 0) throw std::invalid_argument("paper_example requires a > 0");
  if (dim < 1) throw std::invalid_argument("paper_example requires dim >= 1");

  const double t_split = 1.0 / std::sqrt(M_E);  // both branches give -1 here

  MatrixFunction L{dim, [dim, t_split](double t) -> Matrix {
                     const double v = std::abs(t) <= t_split ? M_E * t * t - 2.0
                                                             : std::log(t * t);
                     return v * Matrix::Identity(dim, dim);
                   }};

  auto kappa = [a](double t) { return std::exp(-t * t) + a; };

  PotentialSpec pot;
  pot.dim = dim;
  pot.value = [kappa](double t, const Vector& u) {
    const double s = u.norm();
    return 0.5 * kappa(t) * s * s * (1.0 - 1.0 / std::log(M_E + s));
  };
  pot.gradient = [kappa](double t, const Vector& u) -> Vector {
    const double s = u.norm();
    const double l = std::log(M_E + s);
    const double fac = (1.0 - 1.0 / l) + 0.5 * s / ((M_E + s) * l * l);
    return kappa(t) * fac * u;
  };
  pot.asymptotic_part = MatrixFunction{dim, [dim, kappa](double t) -> Matrix {
                                         return kappa(t) * Matrix::Identity(dim, dim);
                                       }};
  pot.even = true;

  return ProblemSpec{dim, std::move(L), std::move(pot)};
}

ConditionReport check_conditions(const ProblemSpec& spec, const SamplingPlan& plan) {
  if (spec.dim < 1 || spec.L.dim != spec.dim || spec.potential.dim != spec.dim)
    throw std::invalid_argument("problem spec dimensions are inconsistent");
  if (!spec.potential.asymptotic_part)
    throw std::invalid_argument("check_conditions requires the split part M of the potential");
  if (spec.potential.asymptotic_part->dim != spec.dim)
    throw std::invalid_argument("split part M has the wrong dimension");

  const auto t_samples = uniform_samples(plan);
  const auto dirs = probe_directions(spec.dim);
  ConditionReport rep;

  // (L1): smallest eigenvalue of L along the sample line.
  rep.l_samples.reserve(t_samples.size());
  for (double t : t_samples) {
    const Matrix Lt = spec.L.eval(t);
    require_symmetric(Lt, t, "L");
    const double l = smallest_eigenvalue(Lt);
    if (!std::isfinite(l)) throw std::runtime_error("L has a non-finite eigenvalue sample");
    rep.l_samples.emplace_back(t, l);
  }
  // Plausible when l clears the prescribed bound at the outermost samples and
  // trends upward over the outer quarter on both sides.
  {
    const int n = static_cast<int>(rep.l_samples.size());
    const int quarter = std::max(2, n / 4);
    bool ok = rep.l_samples.front().second >= plan.l_tail_min &&
              rep.l_samples.back().second >= plan.l_tail_min;
    for (int k = n - quarter; ok && k + 1 < n; ++k)
      ok = rep.l_samples[k + 1].second >= rep.l_samples[k].second - 1e-9;
    for (int k = 0; ok && k + 1 < quarter; ++k)
      ok = rep.l_samples[k + 1].second <= rep.l_samples[k].second + 1e-9;
    rep.L1_plausible = ok;
  }

  // (L2)(i): |L'(t)| <= a |L(t)| for |t| >= r_bar, L' by central differences.
  // First candidate radius where |L| stays clear of zero wins.
  {
    for (double r_bar : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) {
      if (r_bar >= plan.t_half_width) break;
      double min_norm = std::numeric_limits<double>::infinity();
      double ratio_sup = 0.0;
      for (double t : t_samples) {
        if (std::abs(t) < r_bar) continue;
        const double step = 1e-5 * std::max(1.0, std::abs(t));
        const Matrix Lp = (spec.L.eval(t + step) - spec.L.eval(t - step)) / (2.0 * step);
        const double denom = spectral_norm(spec.L.eval(t));
        min_norm = std::min(min_norm, denom);
        if (denom > 0) ratio_sup = std::max(ratio_sup, spectral_norm(Lp) / denom);
      }
      if (min_norm >= 1e-2) {
        rep.L2_estimate = std::make_pair(ratio_sup, r_bar);
        break;
      }
    }
  }

  // (W1) smallness table plus the Lipschitz-type constants, sampled over a
  // coarse t-subset (the potential varies slowly compared to L).
  std::vector<double> t_coarse;
  for (std::size_t k = 0; k < t_samples.size(); k += std::max<std::size_t>(1, t_samples.size() / 128))
    t_coarse.push_back(t_samples[k]);

  for (double t : t_coarse) {
    const double w0 = spec.potential.value(t, Vector::Zero(spec.dim));
    if (std::abs(w0) > 1e-12) throw std::runtime_error("W(t,0) != 0 at t = " + std::to_string(t));
  }
  if (spec.potential.even) {
    for (double t : {t_coarse.front(), 0.0, t_coarse.back()})
      for (const auto& d : dirs)
        for (double s : {0.37, 1.7}) {
          const double diff = std::abs(spec.potential.value(t, s * d) -
                                       spec.potential.value(t, -s * d));
          if (diff > 1e-12 * std::max(1.0, std::abs(spec.potential.value(t, s * d))))
            throw std::runtime_error("potential declared even but W(t,-u) != W(t,u)");
        }
  }

  auto ratio_sup_at = [&](double s) {
    double sup = 0.0;
    for (double t : t_coarse)
      for (const auto& d : dirs)
        sup = std::max(sup, spec.potential.gradient(t, s * d).norm() / s);
    return sup;
  };
  for (double s : plan.u_magnitudes) rep.W1_smallness.emplace_back(s, ratio_sup_at(s));

  rep.C_W_estimate = 0.0;
  for (double s : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0})
    rep.C_W_estimate = std::max(rep.C_W_estimate, ratio_sup_at(s));

  rep.C_w_estimate = 0.0;
  for (double s : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0})
    for (double t : t_coarse) {
      const Matrix Mt = spec.potential.asymptotic_part->eval(t);
      for (const auto& d : dirs) {
        const Vector wu = spec.potential.gradient(t, s * d) - Mt * (s * d);
        rep.C_w_estimate = std::max(rep.C_w_estimate, wu.norm() / s);
      }
    }

  // (W3): m0 = inf over t of the smallest eigenvalue of M(t).
  double m0 = std::numeric_limits<double>::infinity();
  for (double t : t_samples) {
    const Matrix Mt = spec.potential.asymptotic_part->eval(t);
    require_symmetric(Mt, t, "M");
    m0 = std::min(m0, smallest_eigenvalue(Mt));
  }
  rep.m0 = m0;

  return rep;
}

}  // namespace homoclinic
