#pragma once

#include <array>
#include <cmath>

#include "lsd/matrix.hpp"

namespace lsd {

inline ComplexVector product_ket(const Dims& dims, const std::vector<std::size_t>& digits) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(total_dimension(dims)));
  v(static_cast<Eigen::Index>(digits_index(digits, dims))) = 1.0;
  return v;
}

// |00>+|11>, |00>-|11>, |01>+|10>, |01>-|10>, each over sqrt 2.
inline std::array<ComplexVector, 4> bell_states() {
  const double h = 1.0 / std::sqrt(2.0);
  std::array<ComplexVector, 4> b;
  for (auto& v : b) v = ComplexVector::Zero(4);
  b[0](0) = h; b[0](3) = h;
  b[1](0) = h; b[1](3) = -h;
  b[2](1) = h; b[2](2) = h;
  b[3](1) = h; b[3](2) = -h;
  return b;
}

// Columns psi1, i psi2, i psi3, psi4. In this basis the spin flip is plain
// complex conjugation, so a matrix Y with Y^T Y = 1 acts as an LOCC map.
inline ComplexMatrix magic_basis() {
  const auto b = bell_states();
  ComplexMatrix m(4, 4);
  m.col(0) = b[0];
  m.col(1) = I_unit * b[1];
  m.col(2) = I_unit * b[2];
  m.col(3) = b[3];
  return m;
}

inline ComplexMatrix from_magic(const ComplexMatrix& coords) {
  const ComplexMatrix e = magic_basis();
  return e * coords * e.adjoint();
}

inline ComplexMatrix to_magic(const ComplexMatrix& product) {
  const ComplexMatrix e = magic_basis();
  return e.adjoint() * product * e;
}

// cos|00>+sin|11>, sin|00>-cos|11>, cos|01>+sin|10>, sin|01>-cos|10>.
inline std::array<ComplexVector, 4> icd_states(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  std::array<ComplexVector, 4> b;
  for (auto& v : b) v = ComplexVector::Zero(4);
  b[0](0) = c; b[0](3) = s;
  b[1](0) = s; b[1](3) = -c;
  b[2](1) = c; b[2](2) = s;
  b[3](1) = s; b[3](2) = -c;
  return b;
}

// Pairs (|0,k>±|1,k+1>)/sqrt 2 for k = 0,1,2 on a qubit times qutrit.
inline std::array<ComplexVector, 6> bd23_states() {
  const double h = 1.0 / std::sqrt(2.0);
  const Dims dims{2, 3};
  std::array<ComplexVector, 6> b;
  for (std::size_t k = 0; k < 3; ++k) {
    const ComplexVector a = product_ket(dims, {0, k});
    const ComplexVector c = product_ket(dims, {1, (k + 1) % 3});
    b[2 * k] = h * (a + c);
    b[2 * k + 1] = h * (a - c);
  }
  return b;
}

// sum_k |k...k> / sqrt d over n parties.
inline ComplexVector max_entangled(std::size_t d, std::size_t parties = 2) {
  const Dims dims(parties, d);
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(total_dimension(dims)));
  for (std::size_t k = 0; k < d; ++k) v += product_ket(dims, std::vector<std::size_t>(parties, k));
  return v / std::sqrt(static_cast<double>(d));
}

inline ComplexMatrix swap_operator(std::size_t d) {
  const Dims dims{d, d};
  const auto n = static_cast<Eigen::Index>(d * d);
  ComplexMatrix f = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      f(static_cast<Eigen::Index>(digits_index({j, i}, dims)), static_cast<Eigen::Index>(digits_index({i, j}, dims))) = 1.0;
  return f;
}

inline ComplexMatrix diagonal_in(const std::vector<ComplexVector>& basis, const std::vector<double>& weights) {
  ComplexMatrix m = ComplexMatrix::Zero(basis.front().size(), basis.front().size());
  for (std::size_t k = 0; k < basis.size(); ++k) m += weights[k] * projector(basis[k]);
  return m;
}

}  // namespace lsd
