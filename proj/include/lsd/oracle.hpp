#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "lsd/decomposition.hpp"

namespace lsd {

// ---- largest subtractable weight ----

namespace detail {

// Positive shift keeps the Cholesky test honest on rank-deficient differences.
inline constexpr double dominance_shift = 1e-12;

inline bool dominates(const ComplexMatrix& rho, const ComplexMatrix& sigma, double lambda) {
  ComplexMatrix m = rho - lambda * sigma;
  m.diagonal().array() += dominance_shift;
  Eigen::LLT<ComplexMatrix> llt(m);
  return llt.info() == Eigen::Success;
}

inline double bisect_lambda(const ComplexMatrix& rho, const ComplexMatrix& sigma, double lo, double tol) {
  if (dominates(rho, sigma, 1.0)) return 1.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (dominates(rho, sigma, mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

inline double max_lambda_for(const DensityMatrix& rho, const DensityMatrix& rho_s, double tol = 1e-10) {
  if (rho.dims() != rho_s.dims()) fail(ErrorKind::DimMismatch, "max_lambda_for: dims differ");
  return detail::bisect_lambda(rho.matrix(), rho_s.matrix(), 0.0, tol);
}

// ---- boundary samplers ----

struct Axis {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t points = 2;

  double at(std::size_t i) const {
    return points < 2 ? 0.5 * (lower + upper)
                      : lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  double step() const { return points < 2 ? 0.0 : (upper - lower) / static_cast<double>(points - 1); }
};

// Subtracted matrix base + t ray, with (base + t ray)/tr separable for every
// t >= t_min. The weight is tr(base + t ray) at the largest admissible t.
struct Cone {
  ComplexMatrix base;
  ComplexMatrix ray;
  double t_min = 0.0;  // separable only from here on
};

// One parameterized patch of the separable set. Exactly one of `candidate` (a
// state), `cone` or `remainder` is set; each returns nothing outside the patch.
// `remainder` gives a pure projector P instead, and the weight is 1 - w for the
// smallest w leaving rho - w P PSD and PPT, so it is only complete for 2x2 and 2x3.
struct Chart {
  std::string name;
  std::vector<Axis> axes;
  std::function<std::optional<ComplexMatrix>(const std::vector<double>&)> candidate;
  std::function<std::optional<Cone>(const std::vector<double>&)> cone = {};
  std::function<std::optional<ComplexMatrix>(const std::vector<double>&)> remainder = {};
};

struct BoundarySampler {
  std::optional<FamilyTag> family;
  Dims dims;
  std::vector<Chart> charts;
  std::vector<ComplexMatrix> extra;  // fixed candidates tried before the grids
};

// points = 0 picks a per-dimension default; refinement halves the cell size per level.
struct GridOptions {
  std::size_t points = 0;
  std::size_t levels = 40;
  std::size_t refine_points = 0;
  std::size_t max_recenter = 50;
  std::size_t starts = 4;  // lattice local maxima zoomed per chart
};

inline std::size_t default_points(std::size_t axes) {
  switch (axes) {
    case 1: return 201;
    case 2: return 41;
    case 3: return 21;
    case 4: return 11;
    default: return 7;
  }
}

inline std::size_t default_refine_points(std::size_t axes) { return axes <= 2 ? 9 : 5; }

namespace detail {

inline std::vector<double> simplex_point(double u, double v, double total) {
  const double a = u * total;
  const double b = (total - a) * v;
  return {a, b, total - a - b};
}

inline Chart line_chart(std::string name, double lower, double upper, std::function<ComplexMatrix(double)> f) {
  return {std::move(name), {{lower, upper, 0}}, [f = std::move(f)](const std::vector<double>& x) {
            return std::optional<ComplexMatrix>(f(x[0]));
          }};
}

// Face p_k = 1/2 as subtracted matrices sum_j m_j (P_j + P_k) over the other
// three Bell projectors; two m_j on the axes, the third is the cone parameter.
inline std::vector<Chart> bd22_charts() {
  const auto b = bell_states();
  std::vector<Chart> out;
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<ComplexMatrix> pair;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != k) pair.push_back(projector(b[j]) + projector(b[k]));
    out.push_back({"p" + std::to_string(k + 1) + "=1/2", {{0, 0.5, 0}, {0, 0.5, 0}}, {},
                   [pair](const std::vector<double>& x) {
                     return std::optional(Cone{x[0] * pair[0] + x[1] * pair[1], pair[2]});
                   }});
  }
  return out;
}

// Faces where one of the four PPT conditions is tight, at the state's own angle.
// In canonical labels m3, m4 are the axes, m2 = t and m1 = t + gap; the other
// conditions hold for every t >= 0.
inline std::vector<Chart> icd_charts(double theta) {
  const auto v = icd_states(theta);
  std::array<ComplexMatrix, 4> proj;
  for (std::size_t k = 0; k < 4; ++k) proj[k] = projector(v[k]);
  std::vector<Chart> out;
  for (int face = 0; face < 4; ++face) {
    const IcdFrame frame = icd_frame(face);
    std::array<ComplexMatrix, 4> at;  // projector carrying canonical label k
    for (std::size_t k = 0; k < 4; ++k) at[k] = proj[frame.perm[k]];
    const double s = std::sin(2 * theta);
    out.push_back({"ppt" + std::to_string(face + 1) + " tight", {{0, 1, 0}, {0, 1, 0}}, {},
                   [at, s](const std::vector<double>& x) {
                     const double m3 = x[0], m4 = x[1];
                     const double gap = std::sqrt(4 * m3 * m4 + (m3 - m4) * (m3 - m4) * s * s) / s;
                     return std::optional(Cone{gap * at[0] + m3 * at[2] + m4 * at[3], at[0] + at[1]});
                   }});
  }
  return out;
}

// Pair `pair` tight with its first (sign +) or second member ahead by
// sqrt(product of the other pair totals); the four other weights are the axes
// and the trailing member of the tight pair is the cone parameter.
inline std::vector<Chart> bd23_charts() {
  const auto v = bd23_states();
  std::array<ComplexMatrix, 6> proj;
  for (std::size_t k = 0; k < 6; ++k) proj[k] = projector(v[k]);
  std::vector<Chart> out;
  for (std::size_t pair = 0; pair < 3; ++pair)
    for (int sign : {1, -1}) {
      out.push_back({"pair" + std::to_string(pair + 1) + (sign > 0 ? "+" : "-") + " tight",
                     {{0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}},
                     {},
                     [proj, pair, sign](const std::vector<double>& x) -> std::optional<Cone> {
                       const std::size_t a = (pair + 1) % 3, b = (pair + 2) % 3;
                       const double ta = x[0] + x[1], tb = x[2] + x[3];
                       const double root = std::sqrt(ta * tb);
                       // pair a needs |diff_a|^2 <= T_pair * tb, pair b likewise with ta
                       double t_min = 0.0;
                       for (const auto& [diff, other] : {std::pair{x[0] - x[1], tb}, std::pair{x[2] - x[3], ta}}) {
                         if (diff == 0.0) continue;
                         if (other <= 0.0) return std::nullopt;
                         t_min = std::max(t_min, 0.5 * (diff * diff / other - root));
                       }
                       const std::size_t lead = sign > 0 ? 2 * pair : 2 * pair + 1;
                       const std::size_t trail = sign > 0 ? 2 * pair + 1 : 2 * pair;
                       ComplexMatrix base = root * proj[lead] + x[0] * proj[2 * a] + x[1] * proj[2 * a + 1] +
                                            x[2] * proj[2 * b] + x[3] * proj[2 * b + 1];
                       return Cone{std::move(base), proj[lead] + proj[trail], t_min};
                     }});
    }
  return out;
}

// Subtracted matrices Y diag(m2 + m3 + m4, m2, m3, m4) Y^dagger: zero concurrence
// once normalized. m3, m4 sit on the axes and m2 is the cone parameter, which
// keeps the diagonal constraints m3 <= l3, m4 <= l4 aligned with the grid.
inline Cone zero_concurrence_cone(const ComplexMatrix& y, double m3, double m4) {
  return {magic_state(y, {m3 + m4, 0, m3, m4}), magic_state(y, {1, 1, 0, 0})};
}

// Pure remainders cos a |m1> + e^{ib} sin a |m2> in the magic basis.
inline Chart pure_remainder_chart() {
  return {"pure remainder", {{0, std::numbers::pi / 2, 0}, {-std::numbers::pi, std::numbers::pi, 0}}, {}, {},
          [](const std::vector<double>& x) {
            ComplexMatrix v = ComplexMatrix::Zero(4, 1);
            v(0, 0) = std::cos(x[0]);
            v(1, 0) = std::polar(std::sin(x[0]), x[1]);
            return std::optional(from_magic(v * v.adjoint()));
          }};
}

inline std::vector<Chart> locc1_charts(double theta) {
  return {{"zero concurrence", {{theta - 2, theta + 2, 0}, {0, 0.5, 0}, {0, 0.5, 0}}, {},
           [](const std::vector<double>& x) { return std::optional(zero_concurrence_cone(locc1_y(x[0]), x[1], x[2])); }},
          pure_remainder_chart()};
}

inline std::vector<Chart> locc3_charts(const Locc3Params& s) {
  return {{"zero concurrence",
           {{s.theta - 1.5, s.theta + 1.5, 0}, {s.xi - 1.5, s.xi + 1.5, 0}, {s.phi - 1.5, s.phi + 1.5, 0}, {0, 0.5, 0}, {0, 0.5, 0}},
           {},
           [](const std::vector<double>& x) {
             return std::optional(zero_concurrence_cone(locc3_y(x[0], x[1], x[2]), x[3], x[4]));
           }}};
}

}  // namespace detail

inline BoundarySampler sampler_for(const FamilyState& state) {
  struct Visitor {
    std::vector<Chart> operator()(const BD22Params&) const { return detail::bd22_charts(); }
    std::vector<Chart> operator()(const ICDParams& x) const { return detail::icd_charts(x.theta); }
    std::vector<Chart> operator()(const BD23Params&) const { return detail::bd23_charts(); }
    std::vector<Chart> operator()(const WernerParams& x) const {
      return {detail::line_chart("f in [0,1]", 0, 1, [d = x.d](double f) { return werner_matrix(d, f); })};
    }
    std::vector<Chart> operator()(const IsotropicParams& x) const {
      return {detail::line_chart("F in [0,1/d]", 0, 1.0 / static_cast<double>(x.d),
                                 [d = x.d](double f) { return isotropic_matrix(d, f); })};
    }
    std::vector<Chart> operator()(const Locc1Params& x) const { return detail::locc1_charts(x.theta); }
    std::vector<Chart> operator()(const Locc3Params& x) const { return detail::locc3_charts(x); }
    std::vector<Chart> operator()(const Horodecki33Params&) const {
      return {detail::line_chart("alpha in [2,3]", 2, 3, [](double a) { return horodecki33_matrix(a); })};
    }
    std::vector<Chart> operator()(const MultiIsoParams& x) const {
      return {detail::line_chart("s in [0,s0]", 0, x.s0(),
                                 [d = x.d, n = x.n](double s) { return multi_iso_matrix(d, n, s); })};
    }
  };
  BoundarySampler out{tag_of(state), dims_of(state), std::visit(Visitor{}, state), {}};
  if (is_separable(state, 0.0)) out.extra.push_back(density_matrix_of(state));
  return out;
}

// Zero-concurrence states diagonal in the input's own Wootters basis.
inline BoundarySampler wootters_sampler(const DensityMatrix& rho) {
  if (!rho.has_dims({2, 2})) fail(ErrorKind::WrongDims, "wootters_sampler needs dims [2,2]");
  const WoottersDecomposition w = wootters_basis(rho);
  std::array<ComplexMatrix, 4> proj;
  for (std::size_t k = 0; k < 4; ++k) proj[k] = projector(w.basis(k));
  BoundarySampler out{std::nullopt, {2, 2}, {}, {}};
  // Basis vectors with vanishing lambda are zero; weights on them are dropped.
  std::array<bool, 4> live{};
  for (std::size_t k = 0; k < 4; ++k) live[k] = proj[k].norm() > 0.0;
  out.charts.push_back({"zero concurrence", {{0, 1, 0}, {0, 1, 0}},
                        [proj, live](const std::vector<double>& x) -> std::optional<ComplexMatrix> {
                          auto mu = detail::simplex_point(x[0], x[1], 1.0);
                          double total = 0.0;
                          for (std::size_t k = 0; k < 3; ++k) total += live[k + 1] ? mu[k] : (mu[k] = 0.0);
                          if (total <= 0.0) return std::nullopt;
                          ComplexMatrix m = proj[0];
                          for (std::size_t k = 0; k < 3; ++k) m += (mu[k] / total) * proj[k + 1];
                          return m / m.trace().real();
                        }});
  if (wootters_concurrence(rho).concurrence <= 0.0) out.extra.push_back(rho.matrix());
  // A pure entangled state admits no subtraction; keep the grid non-empty.
  out.extra.push_back(ComplexMatrix::Identity(4, 4) / 4.0);
  return out;
}

// ---- certification ----

struct OracleReport {
  double lambda_star = 0.0;
  std::optional<DensityMatrix> best_rho_s;
  std::string best_chart;
  std::vector<double> best_point;
  double reconstruction_residual = 0.0;
  double psd_margin_e = 0.0;
  double ppt_margin_s = 0.0;
  std::size_t samples = 0;
  double runtime = 0.0;
};

namespace detail {

struct SearchState {
  const ComplexMatrix& rho;
  const Dims& dims;
  double best = -1.0;
  ComplexMatrix best_sigma;
  std::string chart;
  std::vector<double> point;
  std::size_t samples = 0;

  // Only strictly better candidates replace the incumbent, so the first one wins ties.
  bool offer(const ComplexMatrix& sigma, const std::string& name, const std::vector<double>& x) {
    ++samples;
    if (best >= 0.0 && !dominates(rho, sigma, best)) return false;
    const double lambda = bisect_lambda(rho, sigma, std::max(best, 0.0), 1e-10);
    if (lambda <= best) return false;
    return take(lambda, sigma, name, x);
  }

  bool offer(const Cone& c, const std::string& name, const std::vector<double>& x) {
    ++samples;
    const double base = c.base.trace().real(), slope = c.ray.trace().real();
    if (!(slope > 0.0)) return false;
    const ComplexMatrix rest = rho - c.base;
    const double top = (1.0 - base) / slope;
    double lo = std::max(c.t_min, (best - base) / slope);
    if (lo > top || !dominates(rest, c.ray, lo)) return false;
    double hi = top;
    if (dominates(rest, c.ray, hi)) {
      lo = hi;
    } else {
      while ((hi - lo) * slope > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (dominates(rest, c.ray, mid) ? lo : hi) = mid;
      }
    }
    const double lambda = base + lo * slope;
    if (lambda <= best) return false;
    if (!(lambda > 0.0)) return take(0.0, c.ray / slope, name, x);
    return take(lambda, (c.base + lo * c.ray) / lambda, name, x);
  }

  bool offer_remainder(const ComplexMatrix& p, const std::string& name, const std::vector<double>& x) {
    ++samples;
    const ComplexMatrix rho_pt = partial_transpose(rho, dims, dims.size() - 1);
    const ComplexMatrix p_pt = partial_transpose(p, dims, dims.size() - 1);
    // concave in w, so the admissible w form an interval
    const auto margin = [&](double w) {
      return std::min(min_eigenvalue(rho - w * p), min_eigenvalue(rho_pt - w * p_pt)) + 1e-12;
    };
    const double cap = best >= 0.0 ? 1.0 - best : 1.0;
    double w = 0.0;
    if (margin(0.0) < 0.0) {
      const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = 0.0, b = cap;
      double c = b - golden * (b - a), d = a + golden * (b - a);
      double fc = margin(c), fd = margin(d);
      while (b - a > 1e-11 && fc < 0.0 && fd < 0.0) {
        if (fc < fd) {
          a = c, c = d, fc = fd;
          d = a + golden * (b - a), fd = margin(d);
        } else {
          b = d, d = c, fd = fc;
          c = b - golden * (b - a), fc = margin(c);
        }
      }
      double hi;
      if (fc >= 0.0) hi = c;
      else if (fd >= 0.0) hi = d;
      else return false;
      double lo = 0.0;
      while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) >= 0.0 ? hi : lo) = mid;
      }
      w = hi;
    }
    const double lambda = 1.0 - w;
    if (lambda <= best) return false;
    if (!(lambda > 0.0)) return false;
    return take(lambda, (rho - w * p) / lambda, name, x);
  }

  bool offer_point(const Chart& chart, const std::vector<double>& x) {
    if (chart.cone) {
      if (auto c = chart.cone(x)) return offer(*c, chart.name, x);
    } else if (chart.remainder) {
      if (auto p = chart.remainder(x)) return offer_remainder(*p, chart.name, x);
    } else if (auto sigma = chart.candidate(x)) {
      return offer(*sigma, chart.name, x);
    }
    return false;
  }

  bool take(double lambda, const ComplexMatrix& sigma, const std::string& name, const std::vector<double>& x) {
    best = lambda;
    best_sigma = sigma;
    chart = name;
    point = x;
    return true;
  }
};

// Visits every grid point in row-major order, last axis fastest.
inline void sweep_grid(const Chart& chart, const std::vector<Axis>& axes, SearchState& s, bool& improved) {
  std::vector<std::size_t> index(axes.size(), 0);
  std::vector<double> x(axes.size());
  while (true) {
    for (std::size_t k = 0; k < axes.size(); ++k) x[k] = axes[k].at(index[k]);
    improved |= s.offer_point(chart, x);
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++index[k] < axes[k].points) break;
      index[k] = 0;
      if (k == 0) return;
    }
    if (axes.empty()) return;
  }
}

// Value of every grid point on its own (no pruning), then the lattice local
// maxima in descending order, ties by index.
inline std::vector<std::vector<double>> lattice_starts(const Chart& chart, const std::vector<Axis>& axes,
                                                       const ComplexMatrix& rho, const Dims& dims, std::size_t limit,
                                                       std::size_t& samples) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.points;
  std::vector<double> value(total, -1.0);
  std::vector<std::size_t> index(axes.size(), 0);
  std::vector<double> x(axes.size());
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (std::size_t k = axes.size(); k-- > 0;) {
      index[k] = rem % axes[k].points;
      rem /= axes[k].points;
      x[k] = axes[k].at(index[k]);
    }
    SearchState one{rho, dims, -1.0, {}, {}, {}, 0};
    one.offer_point(chart, x);
    samples += one.samples;
    value[n] = one.best;
  }
  std::vector<std::size_t> peaks;
  for (std::size_t n = 0; n < total; ++n) {
    if (value[n] < 0.0) continue;
    bool peak = true;
    std::size_t stride = 1;
    for (std::size_t k = axes.size(); k-- > 0 && peak;) {
      const std::size_t i = (n / stride) % axes[k].points;
      if (i > 0 && value[n - stride] > value[n]) peak = false;
      if (i + 1 < axes[k].points && value[n + stride] > value[n]) peak = false;
      stride *= axes[k].points;
    }
    if (peak) peaks.push_back(n);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
  if (peaks.size() > limit) peaks.resize(limit);
  std::vector<std::vector<double>> out;
  for (std::size_t n : peaks) {
    std::size_t rem = n;
    for (std::size_t k = axes.size(); k-- > 0;) {
      x[k] = axes[k].at(rem % axes[k].points);
      rem /= axes[k].points;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace detail

inline OracleReport certify(const DensityMatrix& rho, const BoundarySampler& sampler, const GridOptions& grid = {}) {
  if (rho.dims() != sampler.dims) fail(ErrorKind::DimMismatch, "certify: sampler dims differ from the state");
  const auto start = std::chrono::steady_clock::now();
  detail::SearchState s{rho.matrix(), rho.dims(), -1.0, {}, {}, {}, 0};

  for (const auto& m : sampler.extra) s.offer(m, "input", {});

  // Every chart is zoomed from several lattice peaks; a coarse lattice can
  // favour the wrong face or the wrong hill.
  for (const auto& chart : sampler.charts) {
    std::vector<Axis> axes = chart.axes;
    for (auto& a : axes) a.points = grid.points ? grid.points : default_points(axes.size());
    const std::size_t refine = grid.refine_points ? grid.refine_points : default_refine_points(axes.size());
    for (const auto& start : detail::lattice_starts(chart, axes, rho.matrix(), rho.dims(), std::max<std::size_t>(grid.starts, 1), s.samples)) {
      detail::SearchState local{rho.matrix(), rho.dims(), -1.0, {}, {}, {}, 0};
      local.offer_point(chart, start);
      std::vector<double> steps;
      for (const auto& a : axes) steps.push_back(a.step());
      for (std::size_t level = 0; level < grid.levels; ++level) {
        // Re-center at this scale while the incumbent keeps moving, so ridges get followed.
        for (std::size_t pass = 0; pass < grid.max_recenter; ++pass) {
          std::vector<Axis> zoom;
          const std::vector<double> center = local.point;
          for (std::size_t k = 0; k < axes.size(); ++k) {
            const double half = steps[k] * static_cast<double>(refine - 1) / 4.0;
            const Axis& home = chart.axes[k];
            zoom.push_back({std::max(home.lower, center[k] - half), std::min(home.upper, center[k] + half), refine});
          }
          bool improved = false;
          detail::sweep_grid(chart, zoom, local, improved);
          if (!improved) break;
        }
        for (double& h : steps) h *= 0.5;
      }
      s.samples += local.samples;
      if (local.best > s.best) s.take(local.best, local.best_sigma, local.chart, local.point);
    }
  }
  if (s.best < 0.0) fail(ErrorKind::EmptyGrid, "certify: no grid point produced a separable candidate");

  OracleReport r;
  r.lambda_star = s.best;
  r.best_chart = s.chart;
  r.best_point = s.point;
  r.samples = s.samples;
  r.best_rho_s = DensityMatrix(rho.dims(), s.best_sigma);
  r.ppt_margin_s = ppt_margin(*r.best_rho_s);
  const ComplexMatrix rest = rho.matrix() - s.best * r.best_rho_s->matrix();
  r.psd_margin_e = s.best < 1.0 ? min_eigenvalue(rest) / (1.0 - s.best) : min_eigenvalue(rest);
  r.reconstruction_residual = 0.0;  // rho_e is defined as the remainder
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline OracleReport certify(const FamilyState& state, const GridOptions& grid = {}) {
  return certify(to_density(state), sampler_for(state), grid);
}

// ---- validation of a given triple ----

struct ValidationReport {
  double reconstruction_residual = 0.0;
  double psd_margin_e = 0.0;  // min eigenvalue of (rho - lambda rho_s)/(1 - lambda)
  double psd_margin_s = 0.0;
  double ppt_margin_s = 0.0;
  std::optional<bool> line_entangled;  // empty when PPT is not a complete witness for the dims
  std::string note;
  double runtime = 0.0;
  bool passed = false;
};

struct ValidationTolerances {
  double residual = 1e-8;
  double margin = 1e-8;
};

inline ValidationReport validate(const DensityMatrix& rho, const LSDecomposition& dec, const ValidationTolerances& tol = {}) {
  if (rho.dims() != dec.rho_s.dims() || rho.dims() != dec.rho_e.dims())
    fail(ErrorKind::DimMismatch, "validate: decomposition dims differ from the state");
  const auto start = std::chrono::steady_clock::now();
  ValidationReport r;
  r.reconstruction_residual = reconstruction_residual(rho, dec);
  const ComplexMatrix rest = rho.matrix() - dec.lambda * dec.rho_s.matrix();
  r.psd_margin_e = dec.lambda < 1.0 ? min_eigenvalue(rest) / (1.0 - dec.lambda) : min_eigenvalue(rest);
  r.psd_margin_s = min_eigenvalue(dec.rho_s.matrix());
  r.ppt_margin_s = ppt_margin(dec.rho_s);

  const bool witness = rho.dims().size() == 2 && rho.dimension() <= 6;
  if (witness && dec.lambda > 0.0 && ppt_margin(rho) < -tol.margin) {
    bool all = true;
    for (int k = 1; k <= 9; ++k) {
      const double eps = 0.1 * k;
      const ComplexMatrix line = eps * dec.rho_s.matrix() + (1 - eps) * rho.matrix();
      all = all && ppt_margin(line, rho.dims()) < 0.0;
    }
    r.line_entangled = all;
  } else if (!witness) {
    r.note = "segment check skipped: PPT is not a complete witness for these dims";
  } else {
    r.note = "segment check skipped: input is PPT or lambda = 0";
  }
  r.passed = r.reconstruction_residual <= tol.residual && r.psd_margin_e >= -tol.margin &&
             r.psd_margin_s >= -tol.margin && r.ppt_margin_s >= -tol.margin && r.line_entangled.value_or(true);
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace lsd
