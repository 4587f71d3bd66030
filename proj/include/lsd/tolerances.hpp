#pragma once

namespace lsd {

// Every numerical threshold lives here so tests and tools agree on them.
struct Tolerances {
  double hermitian = 1e-10;   // max |M - M^dagger| entry
  double trace = 1e-10;       // |tr rho - 1|
  double psd = 1e-9;          // eigenvalues in [-psd, 0) count as zero
  double not_psd = 1e-6;      // psd_sqrt refuses below -not_psd
  double pure_norm = 1e-12;   // | ||psi|| - 1 |
  double support = 64.0 * 2.220446049250313e-16;  // relative eigenvalue cut for the support of rho
  double rank = 1e-8;         // eigenvalue threshold for rank counts
  double boundary = 1e-12;    // slack when testing closed-form separability predicates
  double weight = 1e-9;       // closed-form lambda may stray this far outside [0,1] before clamping
  double reconstruction = 1e-8;
};

inline constexpr Tolerances default_tolerances{};

}  // namespace lsd
