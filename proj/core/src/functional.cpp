#include "homoclinic/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace homoclinic {

Vector potential_gradient_nodal(const StateVector& u, const ProblemSpec& spec) {
  const int N = u.grid.N;
  if (N != spec.dim) throw std::invalid_argument("potential dimension does not match the grid");
  Vector out(u.values.size());
  for (int i = 0; i < u.grid.n; ++i)
    out.segment(i * N, N) = spec.potential.gradient(u.grid.node(i), u.node(i));
  return out;
}

double Psi(const StateVector& u, const ProblemSpec& spec) {
  const int N = u.grid.N;
  if (N != spec.dim) throw std::invalid_argument("potential dimension does not match the grid");
  Vector w(u.grid.n);
  for (int i = 0; i < u.grid.n; ++i) w(i) = spec.potential.value(u.grid.node(i), u.node(i));
  return integrate(w, u.grid);
}

double Phi(const StateVector& u, const SpectralDecomposition& dec,
           const SubspaceSplit& split, const ProblemSpec& spec) {
  if (!(u.grid == dec.grid)) throw std::invalid_argument("Phi: grid mismatch");
  const Vector c = dec.coefficients(u);
  double quad = 0.0;
  for (int i : split.plus) quad += 0.5 * dec.lambda(i) * c(i) * c(i);
  for (int i : split.minus) quad -= 0.5 * std::abs(dec.lambda(i)) * c(i) * c(i);
  return quad - Psi(u, spec);
}

EnergyGradient grad_Phi(const StateVector& u, const SpectralDecomposition& dec,
                        const SubspaceSplit& split, const ProblemSpec& spec) {
  if (!(u.grid == dec.grid)) throw std::invalid_argument("grad_Phi: grid mismatch");
  if (!dec.full())
    throw std::invalid_argument("grad_Phi requires the full decomposition");

  const Vector c = dec.coefficients(u);
  const Vector b = dec.grid.h * (dec.modes.transpose() * potential_gradient_nodal(u, spec));

  Vector g(c.size());
  double norm_sq = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    const double l = dec.lambda(i);
    if (std::abs(l) <= split.zero_tol) {
      g(i) = -b(i);  // kernel modes pair in L2
      norm_sq += g(i) * g(i);
    } else {
      g(i) = (l > 0 ? c(i) : -c(i)) - b(i) / std::abs(l);
      norm_sq += std::abs(l) * g(i) * g(i);
    }
  }
  return EnergyGradient{dec.synthesize(g), std::sqrt(norm_sq)};
}

double fd_directional(const StateVector& u, const StateVector& v, double step,
                      const SpectralDecomposition& dec, const SubspaceSplit& split,
                      const ProblemSpec& spec) {
  if (!(step > 0)) throw std::invalid_argument("fd_directional: step must be positive");
  StateVector up{u.grid, u.values + step * v.values};
  StateVector um{u.grid, u.values - step * v.values};
  return (Phi(up, dec, split, spec) - Phi(um, dec, split, spec)) / (2.0 * step);
}

}  // namespace homoclinic
