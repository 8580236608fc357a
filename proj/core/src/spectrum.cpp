#include "homoclinic/spectrum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace homoclinic {

namespace {

constexpr int kDenseLimit = 20000;

struct RawEigen {
  Vector lambda;
  Matrix vectors;  // euclidean-orthonormal columns (may be empty for values-only)
};

// Full banded symmetric solve; divide-and-conquer keeps the basis orthogonal
// to machine precision.
RawEigen banded_eigensolve(const DiscreteOperator& op, bool vectors) {
  const int m = op.grid().size();
  const int N = op.grid().N;
  RawEigen out;
  out.lambda.resize(m);
  if (vectors) out.vectors.resize(m, m);
  lapack_int info = 0;
  const char jobz = vectors ? 'V' : 'N';
  if (N == 1) {
    Vector d(m), e(std::max(m - 1, 1));
    const auto& blocks = op.diagonal_blocks();
    for (int i = 0; i < m; ++i) d(i) = blocks[i](0, 0);
    e.setConstant(op.off_diagonal());
    info = LAPACKE_dstevd(LAPACK_COL_MAJOR, jobz, m, d.data(), e.data(),
                          vectors ? out.vectors.data() : nullptr, m);
    out.lambda = d;
  } else {
    Matrix ab = op.banded_lower();
    info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, jobz, 'L', m, N, ab.data(), N + 1,
                          out.lambda.data(), vectors ? out.vectors.data() : nullptr, m);
  }
  if (info != 0)
    throw std::runtime_error("banded eigensolver failed to converge at index " +
                             std::to_string(info));
  return out;
}

// Selected smallest eigenpairs by bisection + inverse iteration; used when the
// full basis would not fit.
RawEigen banded_eigensolve_selected(const DiscreteOperator& op, int count) {
  const int m = op.grid().size();
  const int N = op.grid().N;
  Matrix ab = op.banded_lower();
  Matrix q(m, m);
  RawEigen out;
  out.lambda.resize(m);
  out.vectors.resize(m, count);
  std::vector<lapack_int> ifail(m);
  lapack_int found = 0;
  lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'V', 'I', 'L', m, N, ab.data(), N + 1,
                                   q.data(), m, 0.0, 0.0, 1, count, 2.0 * LAPACKE_dlamch('S'),
                                   &found, out.lambda.data(), out.vectors.data(), m,
                                   ifail.data());
  if (info != 0 || found != count) {
    const lapack_int idx = info > 0 && info <= m ? ifail[info - 1] : info;
    throw std::runtime_error("selected eigensolve failed to converge at index " +
                             std::to_string(idx));
  }
  out.lambda.conservativeResize(count);
  return out;
}

void check_residuals(const DiscreteOperator& op, const Vector& lambda, const Matrix& vectors) {
  for (int k = 0; k < lambda.size(); ++k) {
    const Vector r = op.apply(Vector(vectors.col(k))) - lambda(k) * vectors.col(k);
    if (r.norm() > 1e-8 * std::max(1.0, std::abs(lambda(k))))
      throw std::runtime_error("eigenpair residual out of tolerance at index " +
                               std::to_string(k));
  }
}

}  // namespace

double default_zero_tol(const Vector& lambda) {
  const double lmax = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  return 1e-8 * std::max(1.0, lmax);
}

Vector SpectralDecomposition::coefficients(const StateVector& u) const {
  if (!(u.grid == grid)) throw std::invalid_argument("coefficients: grid mismatch");
  return grid.h * (modes.transpose() * u.values);
}

StateVector SpectralDecomposition::synthesize(const Vector& c) const {
  if (c.size() != lambda.size()) throw std::invalid_argument("synthesize: coefficient count");
  return {grid, modes * c};
}

SpectralDecomposition eigendecompose(const DiscreteOperator& op, int count) {
  const int m = op.grid().size();
  if (count == kAllModes) count = m;
  if (count < 1 || count > m)
    throw std::invalid_argument("eigendecompose: count out of range");

  RawEigen raw;
  if (count < m && m > kDenseLimit) {
    raw = banded_eigensolve_selected(op, count);
  } else {
    raw = banded_eigensolve(op, true);
    if (count < m) {
      raw.lambda.conservativeResize(count);
      raw.vectors = raw.vectors.leftCols(count).eval();
    }
  }
  check_residuals(op, raw.lambda, raw.vectors);

  SpectralDecomposition dec;
  dec.grid = op.grid();
  dec.lambda = std::move(raw.lambda);
  // L2-orthonormal modes e_k = v_k / sqrt(h).
  dec.modes = raw.vectors / std::sqrt(op.grid().h);
  dec.zero_tol = default_zero_tol(dec.lambda);
  dec.n_minus = static_cast<int>((dec.lambda.array() < -dec.zero_tol).count());
  dec.n_zero = static_cast<int>((dec.lambda.array().abs() <= dec.zero_tol).count());
  return dec;
}

SubspaceSplit classify(const SpectralDecomposition& dec, double zero_tol, double m0,
                       std::optional<double> b) {
  if (zero_tol < 0) throw std::invalid_argument("classify: zero_tol must be >= 0");
  if (!(m0 > 0)) throw std::invalid_argument("classify: m0 must be positive");

  SubspaceSplit s;
  s.m0 = m0;
  s.zero_tol = zero_tol;
  for (int i = 0; i < dec.lambda.size(); ++i) {
    const double l = dec.lambda(i);
    if (l < -zero_tol)
      s.minus.push_back(i);
    else if (l <= zero_tol)
      s.zero.push_back(i);
    else
      s.plus.push_back(i);
    if (zero_tol > 0 && std::abs(l) > zero_tol / 10 && std::abs(l) <= 10 * zero_tol)
      s.warnings.push_back("eigenvalue " + std::to_string(i) +
                           " within a factor 10 of zero_tol: classification is fragile");
    if (std::abs(l - m0) <= 1e-3 * std::max(1.0, m0))
      s.warnings.push_back("eigenvalue " + std::to_string(i) +
                           " within 1e-3 of m0: ell may be grid-sensitive");
    if (l > zero_tol && l < m0) ++s.ell;
  }
  if (b) {
    if (!(*b > 0)) throw std::invalid_argument("classify: b must be positive");
    s.b_count = static_cast<int>((dec.lambda.array().abs() <= *b).count());
  }
  return s;
}

namespace {

// Coefficients plus the span-coverage check shared by project and the energy
// norms.
Vector checked_coefficients(const StateVector& u, const SpectralDecomposition& dec) {
  Vector c = dec.coefficients(u);
  if (!dec.full()) {
    const StateVector rec = dec.synthesize(c);
    const double un = l2_norm(u);
    if (std::sqrt(u.grid.h) * (u.values - rec.values).norm() > 1e-8 * un)
      throw std::runtime_error(
          "state has mass outside the retained span; a full decomposition is required");
  }
  return c;
}

}  // namespace

Projection project(const StateVector& u, const SpectralDecomposition& dec,
                   const SubspaceSplit& split) {
  const Vector c = checked_coefficients(u, dec);
  auto part = [&](const std::vector<int>& idx) {
    Vector ci = Vector::Zero(c.size());
    for (int i : idx) ci(i) = c(i);
    return dec.synthesize(ci);
  };
  return Projection{part(split.minus), part(split.zero), part(split.plus)};
}

double energy_norm_sq(const StateVector& u, const SpectralDecomposition& dec,
                      const SubspaceSplit& split) {
  const Vector c = checked_coefficients(u, dec);
  double acc = 0.0;
  for (int i : split.minus) acc += std::abs(dec.lambda(i)) * c(i) * c(i);
  for (int i : split.plus) acc += dec.lambda(i) * c(i) * c(i);
  for (int i : split.zero) acc += c(i) * c(i);
  return acc;
}

double energy_norm(const StateVector& u, const SpectralDecomposition& dec,
                   const SubspaceSplit& split) {
  return std::sqrt(energy_norm_sq(u, dec, split));
}

double energy_inner(const StateVector& u, const StateVector& v,
                    const SpectralDecomposition& dec, const SubspaceSplit& split) {
  const Vector cu = checked_coefficients(u, dec);
  const Vector cv = checked_coefficients(v, dec);
  double acc = 0.0;
  for (int i : split.minus) acc += std::abs(dec.lambda(i)) * cu(i) * cv(i);
  for (int i : split.plus) acc += dec.lambda(i) * cu(i) * cv(i);
  for (int i : split.zero) acc += cu(i) * cv(i);
  return acc;
}

W4Certificate check_W4(const ProblemSpec& spec, const Grid& grid, double tol) {
  if (!spec.potential.asymptotic_part)
    throw std::invalid_argument("check_W4 requires the split part M");
  const MatrixFunction& M = *spec.potential.asymptotic_part;
  if (M.dim != spec.dim) throw std::invalid_argument("split part M has the wrong dimension");

  MatrixFunction shifted{spec.dim, [&L = spec.L, &M](double t) -> Matrix {
                           return L.eval(t) - M.eval(t);
                         }};

  auto min_abs = [&](const Grid& g) {
    const RawEigen raw = banded_eigensolve(assemble_operator(shifted, g), false);
    return raw.lambda.cwiseAbs().minCoeff();
  };

  W4Certificate cert;
  cert.min_abs_eig = min_abs(grid);
  cert.min_abs_eig_refined = min_abs(build_grid(grid.T, 2 * grid.n + 1, grid.N));
  cert.holds = cert.min_abs_eig > tol;
  cert.stable = cert.holds == (cert.min_abs_eig_refined > tol);
  return cert;
}

void complete_report(ConditionReport& report, const SpectralDecomposition& dec,
                     const SubspaceSplit& split, std::uint64_t seed, int trials) {
  if (!split.plus.empty()) {
    report.sigma_min_positive = dec.lambda(split.plus.front());
    report.W3_holds = report.m0 > *report.sigma_min_positive;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double beta2 = 0.0;
  for (int k = 0; k < trials; ++k) {
    StateVector u = StateVector::zero(dec.grid);
    for (int i = 0; i < u.values.size(); ++i) u.values(i) = gauss(rng);
    const double en = energy_norm(u, dec, split);
    if (en > 0) beta2 = std::max(beta2, l2_norm(u) / en);
  }
  report.beta2_estimate = beta2;
}

}  // namespace homoclinic
