#pragma once

#include "homoclinic/problem.hpp"

#include <vector>

namespace homoclinic {

/// Uniform grid of n interior nodes on [-T, T] with implied Dirichlet values
/// at +-T. Node spacing h = 2T/(n+1); node(i) = -T + (i+1)h.
struct Grid {
  double T = 0.0;
  int n = 0;
  int N = 1;
  double h = 0.0;

  double node(int i) const { return -T + h * (i + 1); }
  int size() const { return n * N; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

Grid build_grid(double T, int n, int N);

/// Nodal values of a function R -> R^N on a grid, flattened node-major.
struct StateVector {
  Grid grid;
  Vector values;

  static StateVector zero(const Grid& g) { return {g, Vector::Zero(g.size())}; }

  auto node(int i) { return values.segment(i * grid.N, grid.N); }
  auto node(int i) const { return values.segment(i * grid.N, grid.N); }
};

/// Block-tridiagonal discretization of -d^2/dt^2 + L(t) with Dirichlet
/// boundary: diagonal blocks (2/h^2) I + L(t_i), off-diagonal (-1/h^2) I.
class DiscreteOperator {
 public:
  DiscreteOperator(Grid grid, std::vector<Matrix> diag_blocks);

  const Grid& grid() const { return grid_; }
  const std::vector<Matrix>& diagonal_blocks() const { return diag_; }
  double off_diagonal() const { return off_; }

  Vector apply(const Vector& u) const;
  StateVector apply(const StateVector& u) const;

  /// Lower banded storage (LAPACK sb layout, column-major, ldab = N+1).
  Matrix banded_lower() const;

 private:
  Grid grid_;
  std::vector<Matrix> diag_;
  double off_;
};

DiscreteOperator assemble_operator(const MatrixFunction& L, const Grid& grid);
DiscreteOperator assemble_operator(const ProblemSpec& spec, const Grid& grid);

/// Discrete quadratic form a(u,v) = h u^T (A v); symmetric in (u,v).
double quad_form_a(const StateVector& u, const StateVector& v, const DiscreteOperator& op);

/// Composite trapezoid over [-T,T] of a nodal scalar sequence with zero
/// boundary contributions: h * sum f_i.
double integrate(const Vector& nodal, const Grid& grid);

/// Discrete L2 inner product h u^T v and associated norm.
double l2_inner(const StateVector& u, const StateVector& v);
double l2_norm(const StateVector& u);

}  // namespace homoclinic
