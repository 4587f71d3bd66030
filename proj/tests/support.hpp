#pragma once

#include <random>

#include "lsd/density.hpp"

namespace lsd::testing {

using Rng = std::mt19937_64;

inline ComplexMatrix ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n) {
  const ComplexMatrix g = ginibre(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(rng, n, n));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

// Ginibre ensemble of the given rank.
inline DensityMatrix random_density(Rng& rng, const Dims& dims, Eigen::Index rank = 0) {
  const auto n = static_cast<Eigen::Index>(total_dimension(dims));
  const ComplexMatrix g = ginibre(rng, n, rank > 0 ? rank : n);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(dims, m);
}

inline PureState random_pure(Rng& rng, const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(total_dimension(dims));
  return PureState::normalized(dims, ginibre(rng, n, 1).col(0));
}

inline std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> e;
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = e(rng));
  for (auto& x : p) x /= total;
  return p;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace lsd::testing
