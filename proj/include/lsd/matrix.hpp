#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "lsd/error.hpp"
#include "lsd/tolerances.hpp"

namespace lsd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

inline constexpr Complex I_unit{0.0, 1.0};

inline std::size_t total_dimension(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector kron_vec(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

struct HermitianEigen {
  RealVector values;     // descending
  ComplexMatrix vectors; // column k pairs with values(k)
};

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* op) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorKind::WrongDims, std::string(op) + " needs a non-empty square matrix");
}

inline void require_hermitian(const ComplexMatrix& m, const Tolerances& tol, const char* op) {
  require_square(m, op);
  const double defect = hermiticity_defect(m);
  if (defect > tol.hermitian)
    fail(ErrorKind::NotHermitian,
         std::string(op) + ": |M - M^dagger| = " + std::to_string(defect));
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// First component above a small fraction of the norm becomes real-positive.
inline void fix_phase(Eigen::Ref<ComplexVector> v) {
  const double cut = 1e-12 * std::max(1.0, v.norm());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > cut) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

}  // namespace detail

inline HermitianEigen hermitian_eigen(const ComplexMatrix& m, const Tolerances& tol = default_tolerances) {
  detail::require_hermitian(m, tol, "hermitian_eigen");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(detail::hermitian_part(m));
  const Eigen::Index n = m.rows();
  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    detail::fix_phase(out.vectors.col(k));
  }
  return out;
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m, const Tolerances& tol = default_tolerances) {
  detail::require_hermitian(m, tol, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(detail::hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

inline double min_eigenvalue(const ComplexMatrix& m, const Tolerances& tol = default_tolerances) {
  return hermitian_eigenvalues(m, tol).minCoeff();
}

inline bool is_psd(const ComplexMatrix& m, double tol) {
  return min_eigenvalue(m) >= -tol;
}

inline ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerances& tol = default_tolerances) {
  const HermitianEigen eig = hermitian_eigen(m, tol);
  const double lowest = eig.values.minCoeff();
  if (lowest < -tol.not_psd)
    fail(ErrorKind::NotPSD, "psd_sqrt: min eigenvalue " + std::to_string(lowest));
  RealVector roots = eig.values.unaryExpr([](double w) { return w > 0.0 ? std::sqrt(w) : 0.0; });
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

inline std::size_t numeric_rank(const ComplexMatrix& m, double threshold) {
  const RealVector w = hermitian_eigenvalues(m);
  return static_cast<std::size_t>((w.array() > threshold).count());
}

// Mixed-radix digits of a flat product-basis index; subsystem 0 is most significant.
inline void index_digits(std::size_t index, const Dims& dims, std::vector<std::size_t>& digits) {
  digits.resize(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
}

inline std::size_t digits_index(const std::vector<std::size_t>& digits, const Dims& dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, std::size_t subsystem) {
  if (subsystem >= dims.size()) fail(ErrorKind::BadIndex, "partial_transpose: subsystem out of range");
  const std::size_t n = total_dimension(dims);
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n)
    fail(ErrorKind::WrongDims, "partial_transpose: matrix size does not match dims");
  ComplexMatrix out(m.rows(), m.cols());
  std::vector<std::size_t> r, c;
  for (std::size_t row = 0; row < n; ++row) {
    index_digits(row, dims, r);
    for (std::size_t col = 0; col < n; ++col) {
      index_digits(col, dims, c);
      std::swap(r[subsystem], c[subsystem]);
      out(digits_index(r, dims), digits_index(c, dims)) = m(row, col);
      std::swap(r[subsystem], c[subsystem]);
    }
  }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, std::size_t keep) {
  if (keep >= dims.size()) fail(ErrorKind::BadIndex, "partial_trace: subsystem out of range");
  const std::size_t n = total_dimension(dims);
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n)
    fail(ErrorKind::WrongDims, "partial_trace: matrix size does not match dims");
  ComplexMatrix out = ComplexMatrix::Zero(dims[keep], dims[keep]);
  std::vector<std::size_t> r, c;
  for (std::size_t row = 0; row < n; ++row) {
    index_digits(row, dims, r);
    for (std::size_t col = 0; col < n; ++col) {
      index_digits(col, dims, c);
      bool traced_equal = true;
      for (std::size_t k = 0; k < dims.size() && traced_equal; ++k)
        if (k != keep && r[k] != c[k]) traced_equal = false;
      if (traced_equal) out(r[keep], c[keep]) += m(row, col);
    }
  }
  return out;
}

inline ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, -I_unit, I_unit, 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace lsd
