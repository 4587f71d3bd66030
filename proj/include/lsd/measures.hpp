#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "lsd/density.hpp"

namespace lsd {

inline ComplexMatrix spin_flip_operator() { return kron(pauli_y(), pauli_y()); }

inline ComplexMatrix spin_flip(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) fail(ErrorKind::WrongDims, "spin_flip needs a 4x4 matrix");
  const ComplexMatrix s = spin_flip_operator();
  return s * m.conjugate() * s;
}

inline ComplexMatrix spin_flip(const DensityMatrix& rho) {
  if (!rho.has_dims({2, 2})) fail(ErrorKind::WrongDims, "spin_flip needs dims [2,2]");
  return spin_flip(rho.matrix());
}

namespace detail {

// Eigenvectors of a PSD matrix scaled by sqrt of their eigenvalue, keeping only
// the numerical support. Columns are the subnormalized |v_i>.
inline ComplexMatrix support_vectors(const ComplexMatrix& m, const Tolerances& tol) {
  const HermitianEigen eig = hermitian_eigen(m, tol);
  const double top = eig.values.size() ? eig.values(0) : 0.0;
  if (!(top > 0.0)) return ComplexMatrix(m.rows(), 0);
  const double cut = tol.support * top;
  Eigen::Index r = 0;
  while (r < eig.values.size() && eig.values(r) > cut) ++r;
  ComplexMatrix v = eig.vectors.leftCols(r);
  for (Eigen::Index k = 0; k < r; ++k) v.col(k) *= std::sqrt(eig.values(k));
  return v;
}

}  // namespace detail

// Square roots of the eigenvalues of sqrt(m) m~ sqrt(m), descending. Works for
// unnormalized PSD 4x4 matrices. The product is formed on the support of m, which
// keeps rank-deficient inputs free of square-root noise.
inline std::array<double, 4> r_eigenvalues(const ComplexMatrix& m, const Tolerances& tol = default_tolerances) {
  if (m.rows() != 4 || m.cols() != 4) fail(ErrorKind::WrongDims, "r_eigenvalues needs a 4x4 matrix");
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  const ComplexMatrix v = detail::support_vectors(m, tol);
  if (v.cols() == 0) return out;
  const ComplexMatrix inner = v.adjoint() * spin_flip(m) * v;
  const RealVector mu = hermitian_eigenvalues(detail::hermitian_part(inner), tol);
  for (Eigen::Index k = 0; k < mu.size(); ++k) out[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, mu(k)));
  return out;
}

// The literal R matrix, for callers that want the operator itself.
inline ComplexMatrix r_matrix(const DensityMatrix& rho, const Tolerances& tol = default_tolerances) {
  const ComplexMatrix root = psd_sqrt(rho.matrix(), tol);
  return psd_sqrt(detail::hermitian_part(root * spin_flip(rho) * root), tol);
}

inline double concurrence_from(const std::array<double, 4>& l) {
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double concurrence(const ComplexMatrix& m) { return concurrence_from(r_eigenvalues(m)); }

// Binary entropy of (1 + sqrt(1 - C^2))/2, natural log.
inline double entanglement_of_formation(double c) {
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - c * c));
  auto term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  return term(x) + term(1.0 - x);
}

inline double entanglement_of_formation_bits(double c) { return entanglement_of_formation(c) / std::log(2.0); }

struct ConcurrenceReport {
  double concurrence = 0.0;
  std::array<double, 4> r_eigenvalues{};
  double eof = 0.0;       // nats
  double eof_bits = 0.0;
};

inline ConcurrenceReport wootters_concurrence(const DensityMatrix& rho) {
  if (!rho.has_dims({2, 2})) fail(ErrorKind::WrongDims, "wootters_concurrence needs dims [2,2]");
  ConcurrenceReport report;
  report.r_eigenvalues = r_eigenvalues(rho.matrix());
  report.concurrence = std::min(1.0, concurrence_from(report.r_eigenvalues));
  report.eof = entanglement_of_formation(report.concurrence);
  report.eof_bits = entanglement_of_formation_bits(report.concurrence);
  return report;
}

struct Takagi {
  RealVector values;  // descending, non-negative
  ComplexMatrix q;    // unitary, tau = q diag(values) q^T
};

// Factorization of a complex symmetric matrix through the real symmetric
// embedding [[Re, Im], [Im, -Re]]. Its spectrum is {+s, -s}; an eigenvector
// [x; y] of +s gives u = x + i y with tau conj(u) = s u.
inline Takagi takagi(const ComplexMatrix& tau) {
  const Eigen::Index n = tau.rows();
  RealMatrix h(2 * n, 2 * n);
  h << tau.real(), tau.imag(), tau.imag(), -tau.real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (h + h.transpose()));
  const RealVector& w = solver.eigenvalues();
  const double top = std::max(w(2 * n - 1), 0.0);
  const double cut = 1e-13 * std::max(top, std::numeric_limits<double>::min());

  Takagi out{RealVector::Zero(n), ComplexMatrix::Zero(n, n)};
  Eigen::Index r = 0;
  for (Eigen::Index k = 2 * n - 1; k >= n && w(k) > cut; --k, ++r) {
    const auto col = solver.eigenvectors().col(k);
    ComplexVector u = col.head(n).cast<Complex>() + I_unit * col.tail(n).cast<Complex>();
    out.q.col(r) = u / u.norm();
    out.values(r) = w(k);
  }
  if (r < n) {
    // Null directions of tau: any orthonormal completion satisfies tau conj(u) = 0.
    const ComplexMatrix taken = out.q.leftCols(r);
    const ComplexMatrix rest = ComplexMatrix::Identity(n, n) - taken * taken.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> comp(0.5 * (rest + rest.adjoint()));
    for (Eigen::Index k = 0; k < n - r; ++k) out.q.col(r + k) = comp.eigenvectors().col(n - 1 - k);
  }
  return out;
}

struct WoottersDecomposition {
  std::array<double, 4> lambdas{};
  std::array<ComplexVector, 4> subnormalized;  // |x_i>, with <x_i|x~_j> = lambda_i delta_ij

  // |x'_i> = |x_i>/sqrt(lambda_i); zero for vanishing lambda_i.
  ComplexVector basis(std::size_t i, double cut = 1e-14) const {
    if (lambdas[i] <= cut) return ComplexVector::Zero(4);
    return subnormalized[i] / std::sqrt(lambdas[i]);
  }

  ComplexMatrix reconstruct() const {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    for (const auto& x : subnormalized) m += x * x.adjoint();
    return m;
  }
};

inline WoottersDecomposition wootters_basis(const ComplexMatrix& m, const Tolerances& tol = default_tolerances) {
  if (m.rows() != 4 || m.cols() != 4) fail(ErrorKind::WrongDims, "wootters_basis needs a 4x4 matrix");
  WoottersDecomposition out;
  for (auto& x : out.subnormalized) x = ComplexVector::Zero(4);
  const ComplexMatrix v = detail::support_vectors(m, tol);
  if (v.cols() == 0) return out;
  const ComplexMatrix s = spin_flip_operator();
  ComplexMatrix tau = v.adjoint() * s * v.conjugate();
  tau = 0.5 * (tau + tau.transpose()).eval();
  const Takagi t = takagi(tau);
  const ComplexMatrix x = v * t.q;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    out.lambdas[static_cast<std::size_t>(k)] = t.values(k);
    out.subnormalized[static_cast<std::size_t>(k)] = x.col(k);
  }
  return out;
}

inline WoottersDecomposition wootters_basis(const DensityMatrix& rho) {
  if (!rho.has_dims({2, 2})) fail(ErrorKind::WrongDims, "wootters_basis needs dims [2,2]");
  return wootters_basis(rho.matrix());
}

inline double i_concurrence_pure(const PureState& psi) {
  if (psi.dims().size() != 2) fail(ErrorKind::WrongDims, "I-concurrence needs a bipartite state");
  const ComplexMatrix reduced = partial_trace(psi.projector(), psi.dims(), 0);
  const double purity = (reduced * reduced).trace().real();
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

struct RestrictedConcurrence {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

struct LowerBoundReport {
  double bound = 0.0;
  std::vector<RestrictedConcurrence> restricted;
};

// P(ij) rho P(ij) on the qubit times span{|i>,|j>}, left unnormalized.
inline ComplexMatrix restricted_block(const ComplexMatrix& m, std::size_t k, std::size_t i, std::size_t j) {
  const std::array<Eigen::Index, 4> idx{static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j),
                                        static_cast<Eigen::Index>(k + i), static_cast<Eigen::Index>(k + j)};
  ComplexMatrix block(4, 4);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(idx[a], idx[b]);
  return block;
}

inline LowerBoundReport concurrence_lower_bound_2k(const DensityMatrix& rho) {
  const Dims& dims = rho.dims();
  if (dims.size() != 2 || dims[0] != 2 || dims[1] < 2)
    fail(ErrorKind::WrongDims, "concurrence lower bound needs dims [2,K] with K >= 2");
  const std::size_t k = dims[1];
  LowerBoundReport report;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double c = concurrence(restricted_block(rho.matrix(), k, i, j));
      report.restricted.push_back({i, j, c});
      sum += c * c;
    }
  report.bound = std::sqrt(sum);
  return report;
}

}  // namespace lsd
