#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsd/families.hpp"
#include "lsd/measures.hpp"

namespace lsd {

// Which branch fired and the primed / double-primed parameters it produced.
struct Derivation {
  std::string branch;
  std::string frame;  // local relabeling applied before the canonical formulas, empty if none
  std::vector<std::pair<std::string, double>> values;

  void set(const std::string& name, double v) {
    for (auto& [k, x] : values)
      if (k == name) {
        x = v;
        return;
      }
    values.emplace_back(name, v);
  }

  std::optional<double> get(std::string_view name) const {
    for (const auto& [k, x] : values)
      if (k == name) return x;
    return std::nullopt;
  }
};

struct LSDecomposition {
  double lambda = 0.0;
  DensityMatrix rho_s;
  DensityMatrix rho_e;
  std::optional<FamilyTag> family;  // empty for an explicit two-qubit matrix
  Derivation derivation;
};

namespace detail {

inline double checked_weight(double lambda, const Tolerances& tol = default_tolerances) {
  if (!(lambda >= -tol.weight && lambda <= 1.0 + tol.weight))
    fail(ErrorKind::InvalidDecomposition, "separable weight " + std::to_string(lambda) + " outside [0,1]");
  return std::clamp(lambda, 0.0, 1.0);
}

// Below this the separable part carries no weight and its formulas divide by zero.
inline constexpr double vanishing_weight = 1e-12;

inline DensityMatrix as_state(const Dims& dims, const ComplexMatrix& m, const char* which) {
  try {
    return DensityMatrix(dims, m);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidDecomposition, std::string(which) + " is not a state: " + e.what());
  }
}

inline LSDecomposition assemble(const DensityMatrix& rho, double lambda, const ComplexMatrix& rho_s,
                                const ComplexMatrix& rho_e, std::optional<FamilyTag> family, Derivation derivation,
                                const Tolerances& tol = default_tolerances) {
  const ComplexMatrix sep = lambda > vanishing_weight
                                ? rho_s
                                : ComplexMatrix::Identity(rho.matrix().rows(), rho.matrix().cols()) /
                                      static_cast<double>(rho.dimension());
  LSDecomposition out{lambda, as_state(rho.dims(), sep, "separable part"), as_state(rho.dims(), rho_e, "entangled part"),
                      family, std::move(derivation)};
  const double residual =
      max_abs_entry(lambda * out.rho_s.matrix() + (1.0 - lambda) * out.rho_e.matrix() - rho.matrix());
  if (residual > tol.reconstruction)
    fail(ErrorKind::InvalidDecomposition, "reconstruction residual " + std::to_string(residual));
  return out;
}

inline std::string indexed(const char* stem, std::size_t k) { return std::string(stem) + std::to_string(k + 1); }

}  // namespace detail

inline double reconstruction_residual(const DensityMatrix& rho, const LSDecomposition& dec) {
  return max_abs_entry(dec.lambda * dec.rho_s.matrix() + (1.0 - dec.lambda) * dec.rho_e.matrix() - rho.matrix());
}

// ---- Bell-diagonal two-qubit states ----

inline LSDecomposition decompose_bd22(const BD22Params& x) {
  validate(x);
  const auto top = std::max_element(x.p.begin(), x.p.end());
  const auto k = static_cast<std::size_t>(top - x.p.begin());
  if (*top <= 0.5 + default_tolerances.boundary) fail(ErrorKind::NotEntangled, "bd22: every weight is at most 1/2");
  const double c = 2.0 * *top - 1.0;
  const double lambda = detail::checked_weight(1.0 - c);

  std::array<double, 4> sep{};
  for (std::size_t j = 0; j < 4; ++j) sep[j] = j == k ? 0.5 : (lambda > detail::vanishing_weight ? x.p[j] / lambda : 0.0);

  Derivation d;
  d.branch = "bell-dominant";
  if (k != 0) d.frame = "dominant Bell vector " + std::to_string(k + 1);
  d.set("dominant", static_cast<double>(k + 1));
  d.set("concurrence", c);
  for (std::size_t j = 0; j < 4; ++j) d.set(detail::indexed("p_s", j), sep[j]);
  return detail::assemble(to_density(x), lambda, bell_diagonal_matrix(sep), projector(bell_states()[k]), FamilyTag::BD22,
                          std::move(d));
}

// ---- arbitrary two-qubit states through the Wootters basis ----

inline LSDecomposition decompose_wootters(const DensityMatrix& rho) {
  if (!rho.has_dims({2, 2})) fail(ErrorKind::WrongDims, "decompose_wootters needs dims [2,2]");
  const WoottersDecomposition w = wootters_basis(rho);
  const auto& l = w.lambdas;
  const double c = l[0] - l[1] - l[2] - l[3];
  if (c <= default_tolerances.boundary) fail(ErrorKind::NotEntangled, "two-qubit state has zero concurrence");

  const ComplexVector x1 = w.basis(0);
  const double norm2 = x1.squaredNorm();
  const double lambda_e = 1.0 / norm2;
  const double lambda = detail::checked_weight(1.0 - c * norm2);

  ComplexMatrix sep = ComplexMatrix::Zero(4, 4);
  std::array<double, 4> primed{};
  if (lambda > detail::vanishing_weight) {
    primed = {(l[1] + l[2] + l[3]) / lambda, l[1] / lambda, l[2] / lambda, l[3] / lambda};
    for (std::size_t k = 0; k < 4; ++k) sep += primed[k] * projector(w.basis(k));
  }

  Derivation d;
  d.branch = "wootters-basis";
  d.set("concurrence", c);
  d.set("lambda_e1", lambda_e);
  for (std::size_t k = 0; k < 4; ++k) d.set(detail::indexed("lambda", k), l[k]);
  for (std::size_t k = 0; k < 4; ++k) d.set(detail::indexed("lambda_s", k), primed[k]);
  return detail::assemble(rho, lambda, sep, lambda_e * projector(x1), std::nullopt, std::move(d));
}

// ---- states diagonal in the ICD basis ----

namespace detail {

inline LSDecomposition rotate_back(LSDecomposition dec, const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.isIdentity(0.0)) return dec;
  const ComplexMatrix s = u.adjoint() * dec.rho_s.matrix() * u;
  const ComplexMatrix e = u.adjoint() * dec.rho_e.matrix() * u;
  return assemble(rho, dec.lambda, s, e, dec.family, std::move(dec.derivation));
}

inline ICDParams icd_in_frame(const ICDParams& x, const IcdFrame& f) {
  ICDParams moved{{}, x.theta};
  for (std::size_t k = 0; k < 4; ++k) moved.p[k] = x.p[f.perm[k]];
  return moved;
}

inline int icd_violated(const ICDParams& x) {
  const auto v = icd_violations(x);
  const auto top = std::max_element(v.begin(), v.end());
  if (*top <= default_tolerances.boundary) fail(ErrorKind::NotEntangled, "icd: all four PPT conditions hold");
  return static_cast<int>(top - v.begin());
}

inline bool at_bell_angle(double theta) { return theta >= std::numbers::pi / 4 - 1e-15; }

}  // namespace detail

// Bell-angle family: entangled part at angle theta_pp, separable part at theta'.
// Needs theta = pi/4 and p3 = p4 once the violated condition is canonical.
inline LSDecomposition decompose_icd_case2(const ICDParams& x, double theta_pp) {
  validate(x);
  if (!detail::at_bell_angle(x.theta)) fail(ErrorKind::UnsupportedShape, "icd case 2 needs theta = pi/4");
  if (!(theta_pp > 0.0 && theta_pp <= std::numbers::pi / 4 + 1e-15))
    fail(ErrorKind::BadParams, "icd case 2: theta'' must lie in (0, pi/4]");
  const DensityMatrix rho = to_density(x);
  const IcdFrame frame = icd_frame(detail::icd_violated(x));
  const ICDParams c = detail::icd_in_frame(x, frame);
  const auto& p = c.p;
  if (std::abs(p[2] - p[3]) > 1e-12) fail(ErrorKind::UnsupportedShape, "icd case 2 needs p3 = p4");

  const double conc = icd_violations(c)[0];
  const double s_pp = std::sin(2 * theta_pp);
  const double floor = (p[0] + p[1]) * conc / (p[0] * conc + p[1]);
  if (s_pp < floor * (1.0 - 1e-12))
    fail(ErrorKind::ConstraintViolated, "icd case 2: sin2theta'' below (p1+p2)C/(p1 C+p2)");
  const double lambda = detail::checked_weight(1.0 - conc / s_pp);
  const double theta_p = 0.5 * std::atan2((1.0 - p[0] - p[1]) * s_pp, -conc * std::cos(2 * theta_pp));
  const double s_p = std::sin(2 * theta_p);

  std::array<double, 4> sep{};
  if (lambda > detail::vanishing_weight) {
    const double base = p[0] + p[1] - conc / s_pp;
    const double spread = s_p > 0.0 ? (1.0 - p[0] - p[1]) / s_p : 0.0;
    sep = {(base + spread) / (2 * lambda), (base - spread) / (2 * lambda), p[2] / lambda, p[3] / lambda};
    for (double q : sep)
      if (q < -1e-12) fail(ErrorKind::ConstraintViolated, "icd case 2: theta'' leaves a negative separable weight");
    for (double& q : sep) q = std::max(q, 0.0);
  }
  const ComplexMatrix sep_m = icd_matrix(sep, theta_p);
  if (lambda > detail::vanishing_weight && ppt_margin(sep_m, {2, 2}) < -1e-9)
    fail(ErrorKind::ConstraintViolated, "icd case 2: separable part fails PPT for this theta''");

  Derivation d;
  d.branch = "icd-case-2";
  if (frame.violated != 0) d.frame = "ppt condition " + std::to_string(frame.violated + 1);
  d.set("concurrence", conc);
  d.set("theta_pp", theta_pp);
  d.set("theta_p", theta_p);
  for (std::size_t k = 0; k < 4; ++k) d.set(detail::indexed("p_s", k), sep[k]);
  const DensityMatrix canonical = to_density(c);
  auto dec = detail::assemble(canonical, lambda, sep_m, projector(icd_states(theta_pp)[0]), FamilyTag::ICD, std::move(d));
  return detail::rotate_back(std::move(dec), rho, frame.unitary);
}

inline LSDecomposition decompose_icd(const ICDParams& x) {
  validate(x);
  const DensityMatrix rho = to_density(x);
  const IcdFrame frame = icd_frame(detail::icd_violated(x));
  const ICDParams c = detail::icd_in_frame(x, frame);

  if (detail::at_bell_angle(x.theta)) {
    if (std::abs(c.p[2] - c.p[3]) <= 1e-12) return decompose_icd_case2(x, std::numbers::pi / 4);
    // Any Bell-diagonal input is handled by the Bell-dominant formulas, which the
    // case-2 family reduces to at theta'' = pi/4.
    LSDecomposition dec = decompose_bd22(BD22Params{x.p});
    dec.family = FamilyTag::ICD;
    dec.derivation.branch = "icd-bell-limit";
    return dec;
  }

  const auto& p = c.p;
  const double s = std::sin(2 * x.theta);
  const double conc = icd_violations(c)[0];
  // Entangled part |phi1(theta)> has concurrence sin2theta.
  const double lambda = detail::checked_weight(1.0 - conc / s);
  std::array<double, 4> sep{};
  if (lambda > detail::vanishing_weight)
    sep = {(p[0] - (1.0 - lambda)) / lambda, p[1] / lambda, p[2] / lambda, p[3] / lambda};
  const ComplexMatrix sep_m = icd_matrix(sep, x.theta);
  if (lambda > detail::vanishing_weight && ppt_margin(sep_m, {2, 2}) < -1e-9)
    fail(ErrorKind::InvalidDecomposition, "icd case 1: separable part fails PPT");

  Derivation d;
  d.branch = "icd-case-1";
  if (frame.violated != 0) d.frame = "ppt condition " + std::to_string(frame.violated + 1);
  d.set("concurrence", conc);
  d.set("theta_p", x.theta);
  d.set("theta_pp", x.theta);
  for (std::size_t k = 0; k < 4; ++k) d.set(detail::indexed("p_s", k), sep[k]);
  auto dec = detail::assemble(to_density(c), lambda, sep_m, projector(icd_states(x.theta)[0]), FamilyTag::ICD,
                              std::move(d));
  return detail::rotate_back(std::move(dec), rho, frame.unitary);
}

// ---- one-parameter LOCC family ----

namespace detail {

inline ComplexMatrix magic_state(const ComplexMatrix& y, const std::array<double, 4>& l) {
  return from_magic(y * RealVector::Map(l.data(), 4).cast<Complex>().asDiagonal() * y.adjoint());
}

inline double locc_concurrence(const std::array<double, 4>& l) { return l[0] - l[1] - l[2] - l[3]; }

inline double locc1_bound(const std::array<double, 4>& l, double c) {
  const double s = l[0] + l[1];
  return (l[0] - l[1]) / s + 2 * l[0] * l[1] / (s * c);
}

}  // namespace detail

// Entangled-part angle closest to zero that satisfies both validity constraints;
// it maximizes lambda = 1 - C cosh 2theta''.
inline double optimal_locc1_angle(const Locc1Params& x) {
  validate(x);
  const double c = detail::locc_concurrence(x.lambdas);
  if (c <= default_tolerances.boundary) fail(ErrorKind::NotEntangled, "locc1: lambda1 <= lambda2 + lambda3 + lambda4");
  const double half_width = 0.5 * std::acosh(std::max(1.0, detail::locc1_bound(x.lambdas, c)));
  const double angle = std::clamp(0.0, x.theta - half_width, x.theta + half_width);
  if (std::cosh(2 * angle) > (1.0 / c) * (1.0 + 1e-12))
    fail(ErrorKind::ConstraintViolated, "locc1: no entangled-part angle satisfies cosh2theta'' <= 1/C");
  return angle;
}

inline LSDecomposition decompose_locc1(const Locc1Params& x, double theta_pp) {
  validate(x);
  const auto& l = x.lambdas;
  const double c = detail::locc_concurrence(l);
  if (c <= default_tolerances.boundary) fail(ErrorKind::NotEntangled, "locc1: lambda1 <= lambda2 + lambda3 + lambda4");
  const double ch_pp = std::cosh(2 * theta_pp);
  if (ch_pp > (1.0 / c) * (1.0 + 1e-12)) fail(ErrorKind::ConstraintViolated, "locc1: cosh2theta'' exceeds 1/C");
  const double bound = detail::locc1_bound(l, c);
  if (std::cosh(2 * (x.theta - theta_pp)) > bound * (1.0 + 1e-12))
    fail(ErrorKind::ConstraintViolated, "locc1: cosh2(theta - theta'') exceeds the separability bound");

  const double lambda = detail::checked_weight(1.0 - c * ch_pp);
  const double lambda_e = 1.0 / ch_pp;
  const double s12 = l[0] + l[1];
  const double delta = x.theta - theta_pp;
  const double top = s12 * std::cosh(2 * delta) - c;
  const double ratio = s12 * std::sinh(2 * delta) / top;
  if (!(std::abs(ratio) < 1.0)) fail(ErrorKind::ConstraintViolated, "locc1: separable-part angle is undefined");
  const double theta_p = theta_pp + 0.5 * std::atanh(ratio);

  std::array<double, 4> primed{};
  if (lambda > detail::vanishing_weight) {
    const double shared = top / std::cosh(2 * (theta_p - theta_pp));
    primed = {(shared + l[2] + l[3]) / (2 * lambda), (shared - l[2] - l[3]) / (2 * lambda), l[2] / lambda, l[3] / lambda};
    for (double q : primed)
      if (q < -1e-12) fail(ErrorKind::ConstraintViolated, "locc1: negative separable weight");
    for (double& q : primed) q = std::max(q, 0.0);
  }
  const ComplexMatrix sep = detail::magic_state(locc1_y(theta_p), primed);
  const ComplexMatrix ent = detail::magic_state(locc1_y(theta_pp), {lambda_e, 0, 0, 0});

  Derivation d;
  d.branch = theta_pp == x.theta ? "locc1-equal-angles" : (theta_pp == 0.0 ? "locc1-maximal-entangled-part" : "locc1");
  d.set("concurrence", c);
  d.set("theta_pp", theta_pp);
  d.set("theta_p", theta_p);
  d.set("lambda_e1", lambda_e);
  for (std::size_t k = 0; k < 4; ++k) d.set(detail::indexed("lambda_s", k), primed[k]);
  return detail::assemble(to_density(x), lambda, sep, ent, FamilyTag::Locc1, std::move(d));
}

// ---- three-parameter LOCC family ----

struct EntangledAngles {
  double theta = 0.0;
  double xi = 0.0;
  double phi = 0.0;
};

struct Locc3Solver {
  int max_iterations = 200;
  double target = 1e-12;
  double accept = 1e-9;
};

namespace detail {

struct Locc3Coefficients {
  double p1, p2, p3, a, b, dd, e, f, g;
};

inline std::array<double, 2> locc3_residual(const Locc3Coefficients& k, double t, double x) {
  const double sh2 = std::sinh(2 * t), ch2 = std::cosh(2 * t), sh = std::sinh(t), ch = std::cosh(t);
  const double pp = (k.p1 + k.p2 - k.a) * sh2 + k.e * ch2;
  const double rr = k.p1 * ch * ch + k.p2 * sh * sh + k.p3 - 0.5 * (k.a * ch2 - k.e * sh2 + k.b + 2 * k.dd);
  return {std::tanh(x) * pp - (-k.f * sh + k.g * ch), std::tanh(2 * x) * rr - (-k.f * ch + k.g * sh)};
}

inline Eigen::Matrix2d locc3_jacobian(const Locc3Coefficients& k, double t, double x) {
  const double sh2 = std::sinh(2 * t), ch2 = std::cosh(2 * t), sh = std::sinh(t), ch = std::cosh(t);
  const double pp = (k.p1 + k.p2 - k.a) * sh2 + k.e * ch2;
  const double dpp = 2 * (k.p1 + k.p2 - k.a) * ch2 + 2 * k.e * sh2;
  const double rr = k.p1 * ch * ch + k.p2 * sh * sh + k.p3 - 0.5 * (k.a * ch2 - k.e * sh2 + k.b + 2 * k.dd);
  const double n1 = -k.f * sh + k.g * ch;
  const double dn1 = -k.f * ch + k.g * sh;
  const double sech = 1.0 / std::cosh(x), sech2 = 1.0 / std::cosh(2 * x);
  Eigen::Matrix2d j;
  j(0, 0) = std::tanh(x) * dpp - dn1;
  j(0, 1) = sech * sech * pp;
  j(1, 0) = std::tanh(2 * x) * pp - n1;
  j(1, 1) = 2 * sech2 * sech2 * rr;
  return j;
}

// Damped Newton with backtracking on the residual norm.
inline std::pair<Eigen::Vector2d, double> locc3_solve(const Locc3Coefficients& k, Eigen::Vector2d z, const Locc3Solver& opt) {
  auto norm = [&](const Eigen::Vector2d& v) {
    const auto r = locc3_residual(k, v(0), v(1));
    return std::hypot(r[0], r[1]);
  };
  double current = norm(z);
  for (int it = 0; it < opt.max_iterations && current > opt.target; ++it) {
    const auto r = locc3_residual(k, z(0), z(1));
    const Eigen::Matrix2d j = locc3_jacobian(k, z(0), z(1));
    const Eigen::Vector2d step = j.fullPivLu().solve(-Eigen::Vector2d(r[0], r[1]));
    if (!step.allFinite()) break;
    double damping = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, damping *= 0.5) {
      const Eigen::Vector2d trial = z + damping * step;
      const double next = norm(trial);
      if (std::isfinite(next) && next < current) {
        z = trial;
        current = next;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {z, current};
}

}  // namespace detail

inline LSDecomposition decompose_locc3(const Locc3Params& x, const EntangledAngles& pp, const Locc3Solver& opt = {}) {
  validate(x);
  const auto& l = x.lambdas;
  const double c = detail::locc_concurrence(l);
  if (c <= default_tolerances.boundary) fail(ErrorKind::NotEntangled, "locc3: lambda1 <= lambda2 + lambda3 + lambda4");

  if (std::abs(x.xi) <= 1e-14 && std::abs(pp.xi) <= 1e-14) {
    // Without xi the transformation collapses to the one-parameter family at theta + phi.
    LSDecomposition dec = decompose_locc1(Locc1Params{l, x.theta + x.phi}, pp.theta + pp.phi);
    dec.family = FamilyTag::Locc3;
    dec.derivation.branch = "locc3-without-xi";
    dec.derivation.set("xi_p", 0.0);
    dec.derivation.set("phi_p", 0.0);
    return dec;
  }

  const ComplexMatrix y = locc3_y(x.theta, x.xi, x.phi);
  const ComplexMatrix coords = y * RealVector::Map(l.data(), 4).cast<Complex>().asDiagonal() * y.adjoint();
  const double norm_e = locc3_trace({1.0, 0.0, 0.0, 0.0}, pp.theta, pp.xi, pp.phi);
  const double lambda_e = 1.0 / norm_e;
  const double lambda = detail::checked_weight(1.0 - c * norm_e);
  if (lambda <= detail::vanishing_weight) fail(ErrorKind::InvalidDecomposition, "locc3: separable weight vanishes");

  // Coefficients of the entangled part, scaled by its weight (1 - lambda) lambda''_1 = C.
  const double t = pp.theta, xi = pp.xi, f = pp.phi;
  const double cx = std::cosh(xi), sx = std::sinh(xi), cf = std::cosh(f), sf = std::sinh(f);
  const double w = (1.0 - lambda) * lambda_e;
  detail::Locc3Coefficients k{};
  k.p1 = coords(0, 0).real();
  k.p2 = coords(1, 1).real();
  k.p3 = coords(2, 2).real();
  k.a = w * ((cx * cx * cf * cf + sf * sf) * std::cosh(2 * t) + cx * std::sinh(2 * t) * std::sinh(2 * f));
  k.b = w * (cx * cx * cf * cf - sf * sf);
  k.dd = w * sx * sx * cf * cf;
  k.e = w * ((cx * cx * cf * cf + sf * sf) * std::sinh(2 * t) + cx * std::cosh(2 * t) * std::sinh(2 * f)) -
        2 * coords(0, 1).imag();
  k.f = w * (std::cosh(t) * cf * cf * std::sinh(2 * xi) + std::sinh(t) * sx * std::sinh(2 * f)) - 2 * coords(0, 2).imag();
  k.g = w * (std::sinh(t) * cf * cf * std::sinh(2 * xi) + std::cosh(t) * sx * std::sinh(2 * f)) - 2 * coords(1, 2).real();

  const auto [z, residual] = detail::locc3_solve(k, Eigen::Vector2d(x.theta, x.xi), opt);
  if (!(residual <= opt.accept))
    fail(ErrorKind::NoConvergence, "locc3: root finder stopped at residual " + std::to_string(residual));
  const double tp = z(0), xp = z(1);
  const double ch = std::cosh(tp), sh = std::sinh(tp), ch2 = std::cosh(2 * tp), sh2 = std::sinh(2 * tp);
  if (std::abs(std::sinh(2 * xp)) < 1e-14) fail(ErrorKind::InvalidDecomposition, "locc3: xi' vanished");

  const double l3 = (1.0 / (2 * lambda)) *
                    ((-k.f * ch + k.g * sh) / std::sinh(2 * xp) - k.p1 * ch * ch - k.p2 * sh * sh + k.p3 +
                     0.5 * (k.a * ch2 - k.e * sh2 + k.b - 2 * k.dd));
  const double q = lambda * l3 + (k.p1 + k.p2 - k.a) * ch2 - k.p3 + k.e * sh2 + k.dd;
  const double arg = (k.f * sh - k.g * ch) / (std::sinh(xp) * q);
  if (!(std::abs(arg) < 1.0)) fail(ErrorKind::InvalidDecomposition, "locc3: phi' is undefined");
  const double fp = 0.5 * std::atanh(arg);
  const double l1 = (1.0 / (2 * lambda)) * (q / std::cosh(2 * fp) + lambda * l3 + k.p1 - k.p2 - k.p3 - k.b + k.dd);
  const double l2 = (1.0 / (2 * lambda)) * (q / std::cosh(2 * fp) - lambda * l3 - k.p1 + k.p2 + k.p3 + k.b - k.dd);
  const std::array<double, 4> primed{l1, l2, l3, l[3] / lambda};
  for (double v : primed)
    if (!(v >= -1e-9)) fail(ErrorKind::InvalidDecomposition, "locc3: negative separable weight");

  const ComplexMatrix sep = detail::magic_state(locc3_y(tp, xp, fp), primed);
  const ComplexMatrix ent = detail::magic_state(locc3_y(pp.theta, pp.xi, pp.phi), {lambda_e, 0, 0, 0});

  Derivation d;
  d.branch = "locc3-root-solve";
  d.set("concurrence", c);
  d.set("theta_pp", pp.theta);
  d.set("xi_pp", pp.xi);
  d.set("phi_pp", pp.phi);
  d.set("theta_p", tp);
  d.set("xi_p", xp);
  d.set("phi_p", fp);
  d.set("root_residual", residual);
  d.set("lambda_e1", lambda_e);
  for (std::size_t j = 0; j < 4; ++j) d.set(detail::indexed("lambda_s", j), primed[j]);
  LSDecomposition dec = detail::assemble(to_density(x), lambda, sep, ent, FamilyTag::Locc3, std::move(d));
  const double boundary = wootters_concurrence(dec.rho_s).concurrence;
  if (boundary > 1e-8) fail(ErrorKind::InvalidDecomposition, "locc3: separable part has concurrence " + std::to_string(boundary));
  return dec;
}

// ---- Bell-diagonal qubit-qutrit states ----

namespace detail {

struct Bd23Candidate {
  std::string branch;
  double lambda;
  std::array<double, 6> sep;
  std::array<double, 6> ent;  // weights of the entangled part on the six Bell-type vectors
};

inline bool bd23_candidate_valid(const std::array<double, 6>& p, const Bd23Candidate& c) {
  if (!(c.lambda > vanishing_weight && c.lambda <= 1.0 + 1e-12)) return false;
  double total = 0.0;
  for (std::size_t k = 0; k < 6; ++k) {
    if (c.sep[k] < -1e-12 || c.ent[k] < -1e-12) return false;
    total += c.sep[k];
    if (std::abs(c.lambda * c.sep[k] + (1.0 - c.lambda) * c.ent[k] - p[k]) > 1e-12) return false;
  }
  if (std::abs(total - 1.0) > 1e-10) return false;
  const auto v = bd23_violations(c.sep);
  return *std::max_element(v.begin(), v.end()) <= 1e-10;
}

inline Bd23Candidate bd23_with_entangled_part(std::string branch, const std::array<double, 6>& p, double lambda,
                                              std::array<double, 6> sep) {
  Bd23Candidate c{std::move(branch), lambda, sep, {}};
  if (lambda < 1.0)
    for (std::size_t k = 0; k < 6; ++k) c.ent[k] = (p[k] - lambda * sep[k]) / (1.0 - lambda);
  return c;
}

inline std::optional<Bd23Candidate> bd23_case_i(const std::array<double, 6>& p) {
  const double s = std::sqrt((p[2] + p[3]) * (p[4] + p[5]));
  const double lambda = 1.0 - p[0] + p[1] + s;
  if (lambda <= vanishing_weight) return std::nullopt;
  const std::array<double, 6> sep{(p[1] + s) / lambda, p[1] / lambda, p[2] / lambda,
                                  p[3] / lambda,       p[4] / lambda, p[5] / lambda};
  return bd23_with_entangled_part("bd23-case-i", p, lambda, sep);
}

inline bool bd23_case_i_conditions(const std::array<double, 6>& p) {
  const double s = std::sqrt((p[2] + p[3]) * (p[4] + p[5]));
  const double a = p[2] - p[3], b = p[4] - p[5];
  return a * a <= (p[4] + p[5]) * (2 * p[1] + s) + 1e-14 && b * b <= (p[2] + p[3]) * (2 * p[1] + s) + 1e-14;
}

// Cases iii and iv share a shape: the entangled part also covers the pair
// `other`, and `third` is the pair whose total enters with weight 1/4.
inline std::optional<Bd23Candidate> bd23_case_pair(const std::array<double, 6>& p, std::size_t other, std::size_t third,
                                                   const char* branch) {
  const double q = p[2 * third] + p[2 * third + 1];
  const double lambda = 1.0 - (p[0] - p[1]) - (p[2 * other] + p[2 * other + 1]) - 0.25 * q;
  if (lambda <= vanishing_weight) return std::nullopt;
  std::array<double, 6> sep{};
  for (std::size_t k = 0; k < 6; ++k) sep[k] = p[k] / lambda;
  sep[0] = (2 * p[1] - q) / (2 * lambda);
  sep[2 * other] = (q - 4 * p[2 * other + 1]) / (4 * lambda);
  return bd23_with_entangled_part(branch, p, lambda, sep);
}

inline bool bd23_case_pair_conditions(const std::array<double, 6>& p, std::size_t other, std::size_t third) {
  const double q = p[2 * third] + p[2 * third + 1];
  const double room = q * (p[1] - 0.25 * q);
  const double lead = p[2 * other + 1] - 0.125 * q;
  const double diff = p[2 * third] - p[2 * third + 1];
  return 2 * lead * lead <= room + 1e-14 && 2 * diff * diff <= room + 1e-14 && 4 * p[2 * other + 1] <= q + 1e-14 &&
         q <= 2 * p[1] + 1e-14;
}

inline std::optional<Bd23Candidate> bd23_case_v(const std::array<double, 6>& p) {
  if (p[3] > 1e-14 || p[5] > 1e-14) return std::nullopt;
  return bd23_with_entangled_part("bd23-case-v", p, 2 * p[1], {0.5, 0.5, 0, 0, 0, 0});
}

}  // namespace detail

inline LSDecomposition decompose_bd23(const BD23Params& x) {
  validate(x);
  const DensityMatrix rho = to_density(x);
  const auto v = bd23_violations(x.p);
  const auto top = std::max_element(v.begin(), v.end());
  if (*top <= default_tolerances.boundary) fail(ErrorKind::NotEntangled, "bd23: all three separability conditions hold");

  Bd23Frame frame;
  frame.shift = (3 - static_cast<std::size_t>(top - v.begin())) % 3;
  const auto shifted = apply_frame(frame, x.p);
  for (std::size_t k = 0; k < 3; ++k) frame.flips[k] = shifted[2 * k] < shifted[2 * k + 1];
  const auto p = apply_frame(frame, x.p);

  std::vector<detail::Bd23Candidate> tried;
  auto attempt = [&](bool conditions, std::optional<detail::Bd23Candidate> c) -> std::optional<detail::Bd23Candidate> {
    if (!conditions || !c) return std::nullopt;
    if (!detail::bd23_candidate_valid(p, *c)) {
      tried.push_back(*c);
      return std::nullopt;
    }
    return c;
  };
  std::optional<detail::Bd23Candidate> chosen = attempt(detail::bd23_case_i_conditions(p), detail::bd23_case_i(p));
  if (!chosen)
    chosen = attempt(detail::bd23_case_pair_conditions(p, 1, 2), detail::bd23_case_pair(p, 1, 2, "bd23-case-iii"));
  if (!chosen)
    chosen = attempt(detail::bd23_case_pair_conditions(p, 2, 1), detail::bd23_case_pair(p, 2, 1, "bd23-case-iv"));
  if (!chosen) chosen = attempt(true, detail::bd23_case_v(p));
  if (!chosen) {
    std::string msg = "bd23: no case applies";
    for (const auto& c : tried) msg += "; " + c.branch + " gave an invalid triple";
    fail(ErrorKind::NoApplicableCase, msg);
  }

  Derivation d;
  d.branch = chosen->branch;
  if (!frame.identity()) {
    d.frame = "shift " + std::to_string(frame.shift) + ", swapped pairs";
    for (std::size_t k = 0; k < 3; ++k)
      if (frame.flips[k]) d.frame += " " + std::to_string(k + 1);
  }
  for (std::size_t k = 0; k < 6; ++k) d.set(detail::indexed("p_s", k), chosen->sep[k]);
  for (std::size_t k = 0; k < 6; ++k) d.set(detail::indexed("p_e", k), chosen->ent[k]);
  const double lambda = detail::checked_weight(chosen->lambda);
  auto dec = detail::assemble(DensityMatrix({2, 3}, bd23_matrix(p)), lambda, bd23_matrix(chosen->sep),
                              bd23_matrix(chosen->ent), FamilyTag::BD23, std::move(d));
  return detail::rotate_back(std::move(dec), rho, bd23_local_unitary(frame));
}

// ---- one-line families ----

inline LSDecomposition decompose_werner(const WernerParams& x) {
  validate(x);
  if (x.f >= -default_tolerances.boundary) fail(ErrorKind::NotEntangled, "werner: f >= 0");
  Derivation d;
  d.branch = "werner-line";
  d.set("f_s", 0.0);
  d.set("f_e", -1.0);
  return detail::assemble(to_density(x), detail::checked_weight(x.f + 1.0), werner_matrix(x.d, 0.0),
                          werner_matrix(x.d, -1.0), FamilyTag::Werner, std::move(d));
}

inline LSDecomposition decompose_isotropic(const IsotropicParams& x) {
  validate(x);
  const double dd = static_cast<double>(x.d);
  if (x.F <= 1.0 / dd + default_tolerances.boundary) fail(ErrorKind::NotEntangled, "isotropic: F <= 1/d");
  Derivation d;
  d.branch = "isotropic-line";
  d.set("F_s", 1.0 / dd);
  d.set("F_e", 1.0);
  return detail::assemble(to_density(x), detail::checked_weight(dd * (1.0 - x.F) / (dd - 1.0)),
                          isotropic_matrix(x.d, 1.0 / dd), projector(max_entangled(x.d)), FamilyTag::Isotropic,
                          std::move(d));
}

inline LSDecomposition decompose_horodecki33(const Horodecki33Params& x) {
  validate(x);
  const EntanglementClass cls = entanglement_class_33(x.alpha);
  if (cls == EntanglementClass::Separable) fail(ErrorKind::NotEntangled, "horodecki33: alpha <= 3");
  Derivation d;
  d.branch = std::string(to_string(cls));
  d.set("alpha_s", 3.0);
  d.set("alpha_e", 5.0);
  return detail::assemble(to_density(x), detail::checked_weight((5.0 - x.alpha) / 2.0), horodecki33_matrix(3.0),
                          horodecki33_matrix(5.0), FamilyTag::Horodecki33, std::move(d));
}

inline LSDecomposition decompose_multi_isotropic(const MultiIsoParams& x) {
  validate(x);
  const double s0 = x.s0();
  if (x.s <= s0 + default_tolerances.boundary) fail(ErrorKind::NotEntangled, "multi_iso: s <= s0");
  Derivation d;
  d.branch = "multi-isotropic-line";
  d.set("s0", s0);
  d.set("s_e", 1.0);
  return detail::assemble(to_density(x), detail::checked_weight((1.0 - x.s) / (1.0 - s0)), multi_iso_matrix(x.d, x.n, s0),
                          projector(max_entangled(x.d, x.n)), FamilyTag::MultiIso, std::move(d));
}

// Default decomposition per family: optimal entangled angle for locc1, the
// state's own angles for locc3.
inline LSDecomposition decompose(const FamilyState& state) {
  struct Visitor {
    LSDecomposition operator()(const BD22Params& x) const { return decompose_bd22(x); }
    LSDecomposition operator()(const ICDParams& x) const { return decompose_icd(x); }
    LSDecomposition operator()(const BD23Params& x) const { return decompose_bd23(x); }
    LSDecomposition operator()(const WernerParams& x) const { return decompose_werner(x); }
    LSDecomposition operator()(const IsotropicParams& x) const { return decompose_isotropic(x); }
    LSDecomposition operator()(const Locc1Params& x) const { return decompose_locc1(x, optimal_locc1_angle(x)); }
    LSDecomposition operator()(const Locc3Params& x) const {
      return decompose_locc3(x, EntangledAngles{x.theta, x.xi, x.phi});
    }
    LSDecomposition operator()(const Horodecki33Params& x) const { return decompose_horodecki33(x); }
    LSDecomposition operator()(const MultiIsoParams& x) const { return decompose_multi_isotropic(x); }
  };
  return std::visit(Visitor{}, state);
}

// (1 - lambda) times the concurrence of a pure entangled part.
inline double average_concurrence(const LSDecomposition& dec) {
  const HermitianEigen e = hermitian_eigen(dec.rho_e.matrix());
  if (e.values.size() > 1 && e.values(1) > default_tolerances.rank)
    fail(ErrorKind::MixedEntangledPart, "entangled part is not pure");
  const PureState psi = PureState::normalized(dec.rho_e.dims(), e.vectors.col(0));
  const double c = dec.rho_e.has_dims({2, 2}) ? wootters_concurrence(DensityMatrix(psi)).concurrence : i_concurrence_pure(psi);
  return (1.0 - dec.lambda) * c;
}

}  // namespace lsd
