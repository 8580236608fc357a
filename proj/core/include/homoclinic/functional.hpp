#pragma once

#include "homoclinic/spectrum.hpp"

namespace homoclinic {

/// Riesz representer of Phi'(u) in the energy inner product.
struct EnergyGradient {
  StateVector g;
  double norm = 0.0;  // energy norm of g
};

/// Psi(u) = integral of W(t, u(t)) by the grid's trapezoid rule.
double Psi(const StateVector& u, const ProblemSpec& spec);

/// Phi(u) = 1/2 ||u+||^2 - 1/2 ||u-||^2 - Psi(u).
double Phi(const StateVector& u, const SpectralDecomposition& dec,
           const SubspaceSplit& split, const ProblemSpec& spec);

/// Energy gradient in eigen-coordinates: g_i = sign(lambda_i) c_i - b_i/|lambda_i|
/// for nonzero modes and g_i = -b_i on the kernel, where b_i are the L2
/// eigen-coefficients of t -> W_u(t, u(t)). Requires a full decomposition.
EnergyGradient grad_Phi(const StateVector& u, const SpectralDecomposition& dec,
                        const SubspaceSplit& split, const ProblemSpec& spec);

/// Central difference (Phi(u+hv) - Phi(u-hv)) / (2h); the independent check
/// for grad_Phi.
double fd_directional(const StateVector& u, const StateVector& v, double step,
                      const SpectralDecomposition& dec, const SubspaceSplit& split,
                      const ProblemSpec& spec);

/// Nodal values of t -> W_u(t, u(t)), flattened like a StateVector.
Vector potential_gradient_nodal(const StateVector& u, const ProblemSpec& spec);

}  // namespace homoclinic
