#pragma once

#include <sstream>
#include <utility>

#include "lsd/matrix.hpp"

namespace lsd {

namespace detail {

inline void require_dims(const Dims& dims, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (dims.empty()) fail(ErrorKind::ValidationError, std::string(what) + ": empty dims");
  for (std::size_t d : dims)
    if (d == 0) fail(ErrorKind::ValidationError, std::string(what) + ": zero subsystem dimension");
  const auto n = static_cast<Eigen::Index>(total_dimension(dims));
  if (rows != n || cols != n)
    fail(ErrorKind::ValidationError, std::string(what) + ": size does not match product of dims");
}

}  // namespace detail

class PureState {
 public:
  PureState(Dims dims, ComplexVector amplitudes, const Tolerances& tol = default_tolerances)
      : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    detail::require_dims(dims_, amplitudes_.size(), amplitudes_.size(), "PureState");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tol.pure_norm)
      fail(ErrorKind::ValidationError, "PureState: norm " + std::to_string(norm) + " is not 1");
  }

  // Accepts any non-zero vector and rescales it.
  static PureState normalized(Dims dims, const ComplexVector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0)) fail(ErrorKind::ValidationError, "PureState: zero vector");
    return PureState(std::move(dims), v / norm);
  }

  const Dims& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Dims dims_;
  ComplexVector amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix(Dims dims, const ComplexMatrix& m, const Tolerances& tol = default_tolerances)
      : dims_(std::move(dims)) {
    detail::require_dims(dims_, m.rows(), m.cols(), "DensityMatrix");
    const double defect = hermiticity_defect(m);
    if (defect > tol.hermitian)
      fail(ErrorKind::ValidationError, "DensityMatrix: not Hermitian, |M - M^dagger| = " + std::to_string(defect));
    matrix_ = detail::hermitian_part(m);
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "DensityMatrix: trace " << tr << " is not 1";
      fail(ErrorKind::ValidationError, msg.str());
    }
    const double lowest = min_eigenvalue(matrix_, tol);
    if (lowest < -tol.psd)
      fail(ErrorKind::ValidationError, "DensityMatrix: min eigenvalue " + std::to_string(lowest) + " below -1e-9");
  }

  explicit DensityMatrix(const PureState& psi) : dims_(psi.dims()), matrix_(psi.projector()) {}

  const Dims& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }

  bool has_dims(const Dims& d) const { return dims_ == d; }

 private:
  Dims dims_;
  ComplexMatrix matrix_;
};

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
  return partial_transpose(rho.matrix(), rho.dims(), subsystem);
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep) {
  if (keep >= rho.dims().size()) fail(ErrorKind::BadIndex, "partial_trace: subsystem out of range");
  return DensityMatrix({rho.dims()[keep]}, partial_trace(rho.matrix(), rho.dims(), keep));
}

// Smallest partial-transpose eigenvalue over every single-party transpose.
// For two parties both transposes share a spectrum, so one suffices.
inline double ppt_margin(const ComplexMatrix& m, const Dims& dims) {
  const std::size_t parties = dims.size() == 2 ? 1 : dims.size();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < parties; ++k)
    margin = std::min(margin, min_eigenvalue(partial_transpose(m, dims, k)));
  return margin;
}

inline double ppt_margin(const DensityMatrix& rho) { return ppt_margin(rho.matrix(), rho.dims()); }

inline bool is_ppt(const DensityMatrix& rho, double tol = default_tolerances.psd) { return ppt_margin(rho) >= -tol; }

inline DensityMatrix maximally_mixed(const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(total_dimension(dims));
  return DensityMatrix(dims, ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

}  // namespace lsd
