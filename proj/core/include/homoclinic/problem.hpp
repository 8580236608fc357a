#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace homoclinic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Time-dependent symmetric N x N coefficient matrix, evaluated pointwise.
struct MatrixFunction {
  int dim = 0;
  std::function<Matrix(double)> eval;
};

/// Potential W(t,u) together with its u-gradient and the optional
/// asymptotically linear part M(t) of the split W_u = M(t)u + w_u(t,u).
struct PotentialSpec {
  int dim = 0;
  std::function<double(double, const Vector&)> value;
  std::function<Vector(double, const Vector&)> gradient;
  std::optional<MatrixFunction> asymptotic_part;
  bool even = false;
};

/// Full problem data for  u'' - L(t) u + W_u(t,u) = 0.
struct ProblemSpec {
  int dim = 0;
  MatrixFunction L;
  PotentialSpec potential;
};

/// Built-in example: L(t) = (e t^2 - 2) I inside |t| <= 1/sqrt(e), (ln t^2) I
/// outside, and W(t,u) = (exp(-t^2)+a)/2 * |u|^2 (1 - 1/ln(e+|u|)).
/// The split part is M(t) = (exp(-t^2)+a) I; the potential is even in u.
ProblemSpec paper_example(double a, int dim = 1);

/// Where and how the hypothesis audit samples the coefficient functions.
struct SamplingPlan {
  double t_half_width = 50.0;  // samples live on [-t_half_width, t_half_width]
  int count = 2048;
  double l_tail_min = 1.0;  // smallest eigenvalue of L must exceed this at the tails
  std::vector<double> u_magnitudes = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
};

/// Outcome of the finite sampling audit. The asymptotic hypotheses cannot be
/// proven by sampling; the booleans mean "plausible on the sampled range".
struct ConditionReport {
  std::vector<std::pair<double, double>> l_samples;  // (t, smallest eig of L(t))
  bool L1_plausible = false;
  std::optional<std::pair<double, double>> L2_estimate;  // (a, r_bar): |L'| <= a|L| for |t| >= r_bar
  std::vector<std::pair<double, double>> W1_smallness;   // (|u|, sup_t |W_u|/|u|)
  double C_W_estimate = 0.0;  // sup of |W_u(t,u)|/|u| over the sampled box
  double C_w_estimate = 0.0;  // sup of |W_u(t,u) - M(t)u|/|u|
  double m0 = 0.0;            // inf_t smallest eigenvalue of M(t)
  // Filled once a spectral decomposition is available (spectrum module).
  std::optional<double> sigma_min_positive;
  std::optional<bool> W3_holds;  // m0 > sigma_min_positive
  std::optional<double> beta2_estimate;
};

/// Samples the problem data and fills every field of ConditionReport that does
/// not require the discrete spectrum. Throws std::invalid_argument when the
/// split part M is absent and std::runtime_error when a sampled matrix is not
/// symmetric or a potential invariant (W(t,0)=0, declared evenness) fails.
ConditionReport check_conditions(const ProblemSpec& spec, const SamplingPlan& plan = {});

/// Throws std::runtime_error if m is not symmetric to tolerance.
void require_symmetric(const Matrix& m, double t, const char* name);

}  // namespace homoclinic
