#pragma once

#include <array>
#include <cctype>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "lsd/bases.hpp"
#include "lsd/density.hpp"

namespace lsd {

enum class FamilyTag { BD22, ICD, BD23, Werner, Isotropic, Locc1, Locc3, Horodecki33, MultiIso };

constexpr std::string_view family_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::BD22: return "bd22";
    case FamilyTag::ICD: return "icd";
    case FamilyTag::BD23: return "bd23";
    case FamilyTag::Werner: return "werner";
    case FamilyTag::Isotropic: return "isotropic";
    case FamilyTag::Locc1: return "locc1";
    case FamilyTag::Locc3: return "locc3";
    case FamilyTag::Horodecki33: return "horodecki33";
    case FamilyTag::MultiIso: return "multi_iso";
  }
  return "unknown";
}

inline std::optional<FamilyTag> parse_family(std::string_view text) {
  std::string key;
  for (char c : text)
    if (c != '_' && c != '-') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (FamilyTag tag : {FamilyTag::BD22, FamilyTag::ICD, FamilyTag::BD23, FamilyTag::Werner, FamilyTag::Isotropic,
                        FamilyTag::Locc1, FamilyTag::Locc3, FamilyTag::Horodecki33, FamilyTag::MultiIso}) {
    std::string name;
    for (char c : family_name(tag))
      if (c != '_') name += c;
    if (key == name) return tag;
  }
  if (key == "multiisotropic") return FamilyTag::MultiIso;
  return std::nullopt;
}

struct BD22Params {
  std::array<double, 4> p{};
};

struct ICDParams {
  std::array<double, 4> p{};
  double theta = std::numbers::pi / 4;
};

struct BD23Params {
  std::array<double, 6> p{};
  bool canonical() const { return p[0] >= p[1] && p[2] >= p[3] && p[4] >= p[5]; }
};

struct WernerParams {
  std::size_t d = 2;
  double f = 0.0;
};

struct IsotropicParams {
  std::size_t d = 2;
  double F = 0.0;
};

struct Locc1Params {
  std::array<double, 4> lambdas{};
  double theta = 0.0;
};

struct Locc3Params {
  std::array<double, 4> lambdas{};
  double theta = 0.0;
  double xi = 0.0;
  double phi = 0.0;
};

struct Horodecki33Params {
  double alpha = 2.0;
};

struct MultiIsoParams {
  std::size_t d = 2;
  std::size_t n = 2;
  double s = 0.0;
  double s0() const { return 1.0 / (1.0 + std::pow(static_cast<double>(d), static_cast<double>(n - 1))); }
};

using FamilyState = std::variant<BD22Params, ICDParams, BD23Params, WernerParams, IsotropicParams, Locc1Params,
                                 Locc3Params, Horodecki33Params, MultiIsoParams>;

inline FamilyTag tag_of(const FamilyState& state) {
  constexpr std::array<FamilyTag, 9> tags{FamilyTag::BD22,      FamilyTag::ICD,   FamilyTag::BD23,
                                          FamilyTag::Werner,    FamilyTag::Isotropic, FamilyTag::Locc1,
                                          FamilyTag::Locc3,     FamilyTag::Horodecki33, FamilyTag::MultiIso};
  return tags[state.index()];
}

// ---- LOCC matrices, in magic-basis coordinates ----

inline ComplexMatrix locc1_y(double theta) {
  ComplexMatrix y = ComplexMatrix::Identity(4, 4);
  const double c = std::cosh(theta), s = std::sinh(theta);
  y(0, 0) = c;
  y(0, 1) = I_unit * s;
  y(1, 0) = -I_unit * s;
  y(1, 1) = c;
  return y;
}

inline ComplexMatrix locc3_y(double theta, double xi, double phi) {
  const double ct = std::cosh(theta), st = std::sinh(theta);
  const double cx = std::cosh(xi), sx = std::sinh(xi);
  const double cf = std::cosh(phi), sf = std::sinh(phi);
  ComplexMatrix y = ComplexMatrix::Zero(4, 4);
  y(0, 0) = ct * cx * cf + st * sf;
  y(0, 1) = I_unit * (ct * cx * sf + st * cf);
  y(0, 2) = I_unit * ct * sx;
  y(1, 0) = -I_unit * (st * cx * cf + ct * sf);
  y(1, 1) = st * cx * sf + ct * cf;
  y(1, 2) = st * sx;
  y(2, 0) = -I_unit * sx * cf;
  y(2, 1) = sx * sf;
  y(2, 2) = cx;
  y(3, 3) = 1.0;
  return y;
}

inline double locc1_trace(const std::array<double, 4>& l, double theta) {
  return (l[0] + l[1]) * std::cosh(2 * theta) + l[2] + l[3];
}

inline double locc3_trace(const std::array<double, 4>& l, double theta, double xi, double phi) {
  const double c2t = std::cosh(2 * theta), s2t = std::sinh(2 * theta);
  const double cx = std::cosh(xi), sx = std::sinh(xi);
  const double cf = std::cosh(phi), sf = std::sinh(phi), s2f = std::sinh(2 * phi);
  const double a = l[0] * cf * cf + l[1] * sf * sf;
  const double b = l[0] * sf * sf + l[1] * cf * cf;
  return (a * cx * cx + l[2] * sx * sx + b) * c2t + a * sx * sx + l[2] * cx * cx + (l[0] + l[1]) * cx * s2t * s2f + l[3];
}

// ---- validation ----

namespace detail {

template <std::size_t N>
void require_distribution(const std::array<double, N>& p, const char* family) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::BadParams, std::string(family) + ": probability outside [0,1]");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::BadParams, std::string(family) + ": probabilities do not sum to 1");
}

inline void require_lambdas(const std::array<double, 4>& l, const char* family) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(l[k] >= 0.0)) fail(ErrorKind::BadParams, std::string(family) + ": lambdas must be non-negative");
    if (k > 0 && l[k] > l[k - 1]) fail(ErrorKind::BadParams, std::string(family) + ": lambdas must be descending");
  }
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) fail(ErrorKind::BadParams, std::string(what) + " must be finite");
}

}  // namespace detail

inline void validate(const BD22Params& x) { detail::require_distribution(x.p, "bd22"); }

inline void validate(const ICDParams& x) {
  detail::require_distribution(x.p, "icd");
  if (!(x.theta > 0.0 && x.theta <= std::numbers::pi / 4 + 1e-15))
    fail(ErrorKind::BadParams, "icd: theta must lie in (0, pi/4]");
}

inline void validate(const BD23Params& x) { detail::require_distribution(x.p, "bd23"); }

inline void validate(const WernerParams& x) {
  if (x.d < 2) fail(ErrorKind::BadParams, "werner: d must be at least 2");
  if (!(x.f >= -1.0 && x.f <= 1.0)) fail(ErrorKind::BadParams, "werner: f must lie in [-1,1]");
}

inline void validate(const IsotropicParams& x) {
  if (x.d < 2) fail(ErrorKind::BadParams, "isotropic: d must be at least 2");
  if (!(x.F >= 0.0 && x.F <= 1.0)) fail(ErrorKind::BadParams, "isotropic: F must lie in [0,1]");
}

inline void validate(const Locc1Params& x) {
  detail::require_lambdas(x.lambdas, "locc1");
  detail::require_finite(x.theta, "locc1: theta");
  if (std::abs(locc1_trace(x.lambdas, x.theta) - 1.0) > 1e-10)
    fail(ErrorKind::BadParams, "locc1: (l1+l2)cosh2theta + l3 + l4 must equal 1");
}

inline void validate(const Locc3Params& x) {
  detail::require_lambdas(x.lambdas, "locc3");
  for (double a : {x.theta, x.xi, x.phi}) detail::require_finite(a, "locc3: angles");
  if (std::abs(locc3_trace(x.lambdas, x.theta, x.xi, x.phi) - 1.0) > 1e-10)
    fail(ErrorKind::BadParams, "locc3: trace identity must equal 1");
}

inline void validate(const Horodecki33Params& x) {
  if (!(x.alpha >= 2.0 && x.alpha <= 5.0)) fail(ErrorKind::BadParams, "horodecki33: alpha must lie in [2,5]");
}

inline void validate(const MultiIsoParams& x) {
  if (x.d < 2 || x.n < 2) fail(ErrorKind::BadParams, "multi_iso: need d >= 2 and n >= 2");
  if (!(x.s >= 0.0 && x.s <= 1.0)) fail(ErrorKind::BadParams, "multi_iso: s must lie in [0,1]");
}

inline void validate(const FamilyState& state) {
  std::visit([](const auto& x) { validate(x); }, state);
}

// Rescales an unnormalized spectrum so the state has unit trace.
inline Locc1Params make_locc1(std::array<double, 4> lambdas, double theta) {
  detail::require_lambdas(lambdas, "locc1");
  const double t = locc1_trace(lambdas, theta);
  if (!(t > 0.0)) fail(ErrorKind::BadParams, "locc1: zero spectrum");
  for (double& l : lambdas) l /= t;
  Locc1Params x{lambdas, theta};
  validate(x);
  return x;
}

inline Locc3Params make_locc3(std::array<double, 4> lambdas, double theta, double xi, double phi) {
  detail::require_lambdas(lambdas, "locc3");
  const double t = locc3_trace(lambdas, theta, xi, phi);
  if (!(t > 0.0)) fail(ErrorKind::BadParams, "locc3: zero spectrum");
  for (double& l : lambdas) l /= t;
  Locc3Params x{lambdas, theta, xi, phi};
  validate(x);
  return x;
}

// ---- realization ----

inline Dims dims_of(const FamilyState& state) {
  struct Visitor {
    Dims operator()(const BD23Params&) const { return {2, 3}; }
    Dims operator()(const WernerParams& x) const { return {x.d, x.d}; }
    Dims operator()(const IsotropicParams& x) const { return {x.d, x.d}; }
    Dims operator()(const Horodecki33Params&) const { return {3, 3}; }
    Dims operator()(const MultiIsoParams& x) const { return Dims(x.n, x.d); }
    Dims operator()(const BD22Params&) const { return {2, 2}; }
    Dims operator()(const ICDParams&) const { return {2, 2}; }
    Dims operator()(const Locc1Params&) const { return {2, 2}; }
    Dims operator()(const Locc3Params&) const { return {2, 2}; }
  };
  return std::visit(Visitor{}, state);
}

inline ComplexMatrix bell_diagonal_matrix(const std::array<double, 4>& p) {
  const auto b = bell_states();
  return diagonal_in({b.begin(), b.end()}, {p.begin(), p.end()});
}

inline ComplexMatrix icd_matrix(const std::array<double, 4>& p, double theta) {
  const auto b = icd_states(theta);
  return diagonal_in({b.begin(), b.end()}, {p.begin(), p.end()});
}

inline ComplexMatrix bd23_matrix(const std::array<double, 6>& p) {
  const auto b = bd23_states();
  return diagonal_in({b.begin(), b.end()}, {p.begin(), p.end()});
}

inline ComplexMatrix werner_matrix(std::size_t d, double f) {
  const double dd = static_cast<double>(d);
  const auto n = static_cast<Eigen::Index>(d * d);
  return ((dd - f) * ComplexMatrix::Identity(n, n) + (dd * f - 1.0) * swap_operator(d)) / (dd * dd * dd - dd);
}

inline ComplexMatrix isotropic_matrix(std::size_t d, double F) {
  const double dd = static_cast<double>(d);
  const auto n = static_cast<Eigen::Index>(d * d);
  const ComplexMatrix plus = projector(max_entangled(d));
  return (1.0 - F) / (dd * dd - 1.0) * (ComplexMatrix::Identity(n, n) - plus) + F * plus;
}

inline ComplexMatrix horodecki_sigma(bool plus) {
  const Dims dims{3, 3};
  ComplexMatrix m = ComplexMatrix::Zero(9, 9);
  for (std::size_t k = 0; k < 3; ++k) {
    const std::vector<std::size_t> digits = plus ? std::vector<std::size_t>{k, (k + 1) % 3}
                                                 : std::vector<std::size_t>{(k + 1) % 3, k};
    m += projector(product_ket(dims, digits)) / 3.0;
  }
  return m;
}

inline ComplexMatrix horodecki33_matrix(double alpha) {
  return 2.0 / 7.0 * projector(max_entangled(3)) + alpha / 7.0 * horodecki_sigma(true) +
         (5.0 - alpha) / 7.0 * horodecki_sigma(false);
}

inline ComplexMatrix multi_iso_matrix(std::size_t d, std::size_t n, double s) {
  const Dims dims(n, d);
  const auto size = static_cast<Eigen::Index>(total_dimension(dims));
  return s * projector(max_entangled(d, n)) +
         (1.0 - s) / static_cast<double>(size) * ComplexMatrix::Identity(size, size);
}

inline ComplexMatrix density_matrix_of(const FamilyState& state) {
  struct Visitor {
    ComplexMatrix operator()(const BD22Params& x) const { return bell_diagonal_matrix(x.p); }
    ComplexMatrix operator()(const ICDParams& x) const { return icd_matrix(x.p, x.theta); }
    ComplexMatrix operator()(const BD23Params& x) const { return bd23_matrix(x.p); }
    ComplexMatrix operator()(const WernerParams& x) const { return werner_matrix(x.d, x.f); }
    ComplexMatrix operator()(const IsotropicParams& x) const { return isotropic_matrix(x.d, x.F); }
    ComplexMatrix operator()(const Locc1Params& x) const {
      const ComplexMatrix y = locc1_y(x.theta);
      return from_magic(y * RealVector::Map(x.lambdas.data(), 4).cast<Complex>().asDiagonal() * y.adjoint());
    }
    ComplexMatrix operator()(const Locc3Params& x) const {
      const ComplexMatrix y = locc3_y(x.theta, x.xi, x.phi);
      return from_magic(y * RealVector::Map(x.lambdas.data(), 4).cast<Complex>().asDiagonal() * y.adjoint());
    }
    ComplexMatrix operator()(const Horodecki33Params& x) const { return horodecki33_matrix(x.alpha); }
    ComplexMatrix operator()(const MultiIsoParams& x) const { return multi_iso_matrix(x.d, x.n, x.s); }
  };
  return std::visit(Visitor{}, state);
}

inline DensityMatrix to_density(const FamilyState& state) {
  validate(state);
  return DensityMatrix(dims_of(state), density_matrix_of(state));
}

// ---- closed-form spectra and predicates ----

// Wootters weights of an ICD state, descending.
inline std::array<double, 4> icd_lambda(const ICDParams& x) {
  validate(x);
  const double s = std::sin(2 * x.theta);
  auto pair = [s](double a, double b) {
    const double root = std::sqrt(4 * a * b + (a - b) * (a - b) * s * s);
    return std::array<double, 2>{0.5 * (std::abs(a - b) * s + root), 0.5 * (-std::abs(a - b) * s + root)};
  };
  const auto top = pair(x.p[0], x.p[1]);
  const auto bottom = pair(x.p[2], x.p[3]);
  std::array<double, 4> l{top[0], top[1], bottom[0], bottom[1]};
  std::sort(l.begin(), l.end(), std::greater<>());
  return l;
}

// Amount by which each of the four ICD PPT conditions is violated (positive = violated):
// (p_a - p_b) sin2theta against sqrt(4 p_c p_d + (p_c - p_d)^2 sin^2 2theta).
inline std::array<double, 4> icd_violations(const ICDParams& x) {
  const double s = std::sin(2 * x.theta);
  auto q = [s](double a, double b) { return std::sqrt(4 * a * b + (a - b) * (a - b) * s * s); };
  const double q12 = q(x.p[0], x.p[1]), q34 = q(x.p[2], x.p[3]);
  return {(x.p[0] - x.p[1]) * s - q34, (x.p[1] - x.p[0]) * s - q34, (x.p[2] - x.p[3]) * s - q12,
          (x.p[3] - x.p[2]) * s - q12};
}

inline double icd_concurrence(const ICDParams& x) {
  const auto v = icd_violations(x);
  return std::max(0.0, *std::max_element(v.begin(), v.end()));
}

// Amount by which S1..S3 fail: |p_a - p_b| - sqrt((other pairs) product).
inline std::array<double, 3> bd23_violations(const std::array<double, 6>& p) {
  std::array<double, 3> v{};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t a = (k + 1) % 3, b = (k + 2) % 3;
    const double other = (p[2 * a] + p[2 * a + 1]) * (p[2 * b] + p[2 * b + 1]);
    v[k] = std::abs(p[2 * k] - p[2 * k + 1]) - std::sqrt(other);
  }
  return v;
}

enum class EntanglementClass { Separable, BoundEntangled, FreeEntangled };

constexpr std::string_view to_string(EntanglementClass c) {
  switch (c) {
    case EntanglementClass::Separable: return "separable";
    case EntanglementClass::BoundEntangled: return "bound-entangled";
    case EntanglementClass::FreeEntangled: return "free-entangled";
  }
  return "unknown";
}

inline EntanglementClass entanglement_class_33(double alpha) {
  validate(Horodecki33Params{alpha});
  if (alpha <= 3.0) return EntanglementClass::Separable;
  if (alpha <= 4.0) return EntanglementClass::BoundEntangled;
  return EntanglementClass::FreeEntangled;
}

inline bool is_separable(const FamilyState& state, double slack = default_tolerances.boundary) {
  validate(state);
  struct Visitor {
    double slack;
    bool operator()(const BD22Params& x) const { return *std::max_element(x.p.begin(), x.p.end()) <= 0.5 + slack; }
    bool operator()(const ICDParams& x) const {
      const auto v = icd_violations(x);
      return *std::max_element(v.begin(), v.end()) <= slack;
    }
    bool operator()(const BD23Params& x) const {
      const auto v = bd23_violations(x.p);
      return *std::max_element(v.begin(), v.end()) <= slack;
    }
    bool operator()(const WernerParams& x) const { return x.f >= -slack; }
    bool operator()(const IsotropicParams& x) const { return x.F <= 1.0 / static_cast<double>(x.d) + slack; }
    bool operator()(const Locc1Params& x) const {
      return x.lambdas[0] <= x.lambdas[1] + x.lambdas[2] + x.lambdas[3] + slack;
    }
    bool operator()(const Locc3Params& x) const {
      return x.lambdas[0] <= x.lambdas[1] + x.lambdas[2] + x.lambdas[3] + slack;
    }
    bool operator()(const Horodecki33Params& x) const { return x.alpha <= 3.0 + slack; }
    bool operator()(const MultiIsoParams& x) const { return x.s <= x.s0() + slack; }
  };
  return std::visit(Visitor{slack}, state);
}

// ---- local frames that move the violated condition into canonical position ----

// Relabelings of the ICD vectors by local unitaries that keep theta fixed.
// perm[k] is the ICD index that lands on position k.
struct IcdFrame {
  int violated = 0;  // 0..3, which of the four conditions was violated
  std::array<std::size_t, 4> perm{0, 1, 2, 3};
  ComplexMatrix unitary = ComplexMatrix::Identity(4, 4);
};

inline IcdFrame icd_frame(int violated) {
  const ComplexMatrix zx = pauli_z() * pauli_x();
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  IcdFrame f;
  f.violated = violated;
  switch (violated) {
    case 1: f.perm = {1, 0, 3, 2}; f.unitary = kron(zx, pauli_x()); break;
    case 2: f.perm = {2, 3, 0, 1}; f.unitary = kron(id, pauli_x()); break;
    case 3: f.perm = {3, 2, 1, 0}; f.unitary = kron(zx, id); break;
    default: break;
  }
  return f;
}

// Qutrit shift moves pair k to pair k+shift; the phase layer then swaps
// members within the flagged pairs.
struct Bd23Frame {
  std::size_t shift = 0;
  std::array<bool, 3> flips{false, false, false};
  bool identity() const { return shift == 0 && !flips[0] && !flips[1] && !flips[2]; }
};

inline std::array<double, 6> apply_frame(const Bd23Frame& frame, const std::array<double, 6>& p) {
  std::array<double, 6> q{};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t to = (k + frame.shift) % 3;
    q[2 * to] = p[2 * k];
    q[2 * to + 1] = p[2 * k + 1];
  }
  for (std::size_t k = 0; k < 3; ++k)
    if (frame.flips[k]) std::swap(q[2 * k], q[2 * k + 1]);
  return q;
}

inline ComplexMatrix bd23_local_unitary(const Bd23Frame& frame) {
  ComplexMatrix shift = ComplexMatrix::Zero(3, 3);
  for (std::size_t j = 0; j < 3; ++j) shift(static_cast<Eigen::Index>((j + frame.shift) % 3), static_cast<Eigen::Index>(j)) = 1.0;
  const int total = int(frame.flips[0]) + int(frame.flips[1]) + int(frame.flips[2]);
  const double b = total % 2 ? -1.0 : 1.0;
  const double a1 = (frame.flips[0] ? -1.0 : 1.0) * b;
  const double a2 = a1 * (frame.flips[1] ? -1.0 : 1.0) * b;
  ComplexMatrix qubit = ComplexMatrix::Identity(2, 2);
  qubit(1, 1) = b;
  ComplexMatrix qutrit = ComplexMatrix::Identity(3, 3);
  qutrit(1, 1) = a1;
  qutrit(2, 2) = a2;
  return kron(qubit, qutrit) * kron(ComplexMatrix::Identity(2, 2), shift);
}

struct Bd23Canonical {
  BD23Params params;
  Bd23Frame frame;
};

// Sorts each pair so the first member dominates; equal members stay put.
inline Bd23Canonical bd23_canonicalize(const BD23Params& x) {
  validate(x);
  Bd23Frame frame;
  for (std::size_t k = 0; k < 3; ++k) frame.flips[k] = x.p[2 * k] < x.p[2 * k + 1];
  return {BD23Params{apply_frame(frame, x.p)}, frame};
}

}  // namespace lsd
