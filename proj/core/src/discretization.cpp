#include "homoclinic/discretization.hpp"

#include <cmath>
#include <stdexcept>

namespace homoclinic {

Grid build_grid(double T, int n, int N) {
  if (!(T > 0)) throw std::invalid_argument("grid half-width T must be positive");
  if (n < 3) throw std::invalid_argument("grid needs at least 3 interior nodes");
  if (N < 1) throw std::invalid_argument("system dimension must be >= 1");
  Grid g;
  g.T = T;
  g.n = n;
  g.N = N;
  g.h = 2.0 * T / (n + 1);
  return g;
}

DiscreteOperator::DiscreteOperator(Grid grid, std::vector<Matrix> diag_blocks)
    : grid_(grid), diag_(std::move(diag_blocks)), off_(-1.0 / (grid.h * grid.h)) {
  if (static_cast<int>(diag_.size()) != grid_.n)
    throw std::invalid_argument("diagonal block count does not match the grid");
}

Vector DiscreteOperator::apply(const Vector& u) const {
  const int n = grid_.n, N = grid_.N;
  if (u.size() != grid_.size()) throw std::invalid_argument("operator/state size mismatch");
  Vector out(u.size());
  for (int i = 0; i < n; ++i) {
    auto seg = out.segment(i * N, N);
    seg = diag_[i] * u.segment(i * N, N);
    if (i > 0) seg += off_ * u.segment((i - 1) * N, N);
    if (i + 1 < n) seg += off_ * u.segment((i + 1) * N, N);
  }
  return out;
}

StateVector DiscreteOperator::apply(const StateVector& u) const {
  if (!(u.grid == grid_)) throw std::invalid_argument("operator and state grids differ");
  return {grid_, apply(u.values)};
}

Matrix DiscreteOperator::banded_lower() const {
  const int n = grid_.n, N = grid_.N, m = grid_.size();
  Matrix ab = Matrix::Zero(N + 1, m);
  // Column j holds A(j..j+N, j); the off-diagonal -1/h^2 I sits at offset N.
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < N; ++a) {
      const int j = i * N + a;
      for (int b = a; b < N; ++b) ab(b - a, j) = diag_[i](b, a);
      if (i + 1 < n) ab(N, j) = off_;
    }
  return ab;
}

DiscreteOperator assemble_operator(const MatrixFunction& L, const Grid& grid) {
  if (L.dim != grid.N) throw std::invalid_argument("coefficient dimension does not match the grid");
  const double two_h2 = 2.0 / (grid.h * grid.h);
  std::vector<Matrix> blocks;
  blocks.reserve(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double t = grid.node(i);
    Matrix Lt = L.eval(t);
    require_symmetric(Lt, t, "L");
    // Symmetrize round-off so the assembled matrix equals its transpose exactly.
    Lt = 0.5 * (Lt + Lt.transpose()).eval();
    Lt.diagonal().array() += two_h2;
    blocks.push_back(std::move(Lt));
  }
  return DiscreteOperator(grid, std::move(blocks));
}

DiscreteOperator assemble_operator(const ProblemSpec& spec, const Grid& grid) {
  if (spec.dim != grid.N) throw std::invalid_argument("problem dimension does not match the grid");
  return assemble_operator(spec.L, grid);
}

double quad_form_a(const StateVector& u, const StateVector& v, const DiscreteOperator& op) {
  if (!(u.grid == v.grid) || !(u.grid == op.grid()))
    throw std::invalid_argument("quad_form_a: grid mismatch");
  return op.grid().h * u.values.dot(op.apply(v.values));
}

double integrate(const Vector& nodal, const Grid& grid) {
  if (nodal.size() != grid.n) throw std::invalid_argument("integrate: length mismatch");
  return grid.h * nodal.sum();
}

double l2_inner(const StateVector& u, const StateVector& v) {
  if (!(u.grid == v.grid)) throw std::invalid_argument("l2_inner: grid mismatch");
  return u.grid.h * u.values.dot(v.values);
}

double l2_norm(const StateVector& u) { return std::sqrt(u.grid.h) * u.values.norm(); }

}  // namespace homoclinic
