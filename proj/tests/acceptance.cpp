// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "lsd/oracle.hpp"
#include "support.hpp"

using namespace lsd;
using lsd::testing::Rng;
using lsd::testing::uniform;

namespace {

template <std::size_t N>
std::array<double, N> simplex(Rng& rng) {
  const auto v = lsd::testing::random_simplex(rng, N);
  std::array<double, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
  void worst(double value, double limit, const std::string& what) {
    check(value <= limit, what + " " + std::to_string(value) + " > " + std::to_string(limit));
  }
};

// Rank check over every decomposition produced anywhere in the run.
struct RankLedger {
  std::size_t seen = 0;
  std::size_t broken = 0;
  std::string first;

  void record(const DensityMatrix& rho, const LSDecomposition& dec, const std::string& where) {
    const std::size_t r = numeric_rank(rho.matrix(), 1e-8);
    if (r <= 1) return;
    ++seen;
    if (numeric_rank(dec.rho_e.matrix(), 1e-8) >= r) {
      if (!broken) first = where;
      ++broken;
    }
  }
} ranks;

int failures = 0;

void run(int id, const char* title, double budget, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("unexpected exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget > 0 && secs > budget) o.check(false, "runtime " + std::to_string(secs) + " s over budget");
  if (!o.ok) ++failures;
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title, secs, o.detail.empty() ? "" : " -- ",
              o.detail.c_str());
  std::fflush(stdout);
}

BD22Params entangled_bd22(Rng& rng) {
  while (true) {
    const auto p = simplex<4>(rng);
    if (*std::max_element(p.begin(), p.end()) > 0.5 + 1e-6) return {p};
  }
}

// Canonical BD23 weights where the first pair violates and the case-i conditions hold.
BD23Params case_one_bd23(Rng& rng) {
  while (true) {
    auto p = simplex<6>(rng);
    for (std::size_t k = 0; k < 3; ++k)
      if (p[2 * k] < p[2 * k + 1]) std::swap(p[2 * k], p[2 * k + 1]);
    const auto v = bd23_violations(p);
    if (v[0] > 1e-6 && v[0] >= v[1] && v[0] >= v[2] && detail::bd23_case_i_conditions(p)) return {p};
  }
}

Locc1Params entangled_locc1(Rng& rng) {
  while (true) {
    auto l = simplex<4>(rng);
    std::sort(l.begin(), l.end(), std::greater<>());
    if (l[0] - l[1] - l[2] - l[3] > 0.02) return make_locc1(l, uniform(rng, -1.0, 1.0));
  }
}

ICDParams entangled_icd(Rng& rng) {
  while (true) {
    const ICDParams x{simplex<4>(rng), uniform(rng, 0.02, std::numbers::pi / 4 - 0.02)};
    if (!is_separable(x, 1e-6)) return x;
  }
}

}  // namespace

int main() {
  Rng rng(20261016);

  run(1, "BD22 identity suite, 500 states", 10.0, [&] {
    Outcome o;
    for (int i = 0; i < 500; ++i) {
      const BD22Params x = entangled_bd22(rng);
      const DensityMatrix rho = to_density(x);
      const auto dec = decompose_bd22(x);
      ranks.record(rho, dec, "bd22");
      const double top = *std::max_element(x.p.begin(), x.p.end());
      o.worst(std::abs(dec.lambda - (1 - (2 * top - 1))), 1e-12, "lambda");
      o.worst(reconstruction_residual(rho, dec), 1e-10, "residual");
      o.worst(wootters_concurrence(dec.rho_s).concurrence, 1e-8, "C(rho_s)");
      o.worst(std::abs(average_concurrence(dec) - wootters_concurrence(rho).concurrence), 1e-8, "average concurrence");
    }
    return o;
  });

  run(2, "oracle optimality, 50 states per family", 300.0, [&] {
    Outcome o;
    struct Group {
      const char* name;
      std::function<FamilyState()> draw;
    };
    const std::vector<Group> groups{
        {"bd22", [&] { return FamilyState(entangled_bd22(rng)); }},
        {"icd case 1", [&] { return FamilyState(entangled_icd(rng)); }},
        {"werner d=2", [&] { return FamilyState(WernerParams{2, uniform(rng, -1, -1e-3)}); }},
        {"werner d=3", [&] { return FamilyState(WernerParams{3, uniform(rng, -1, -1e-3)}); }},
        {"isotropic d=2", [&] { return FamilyState(IsotropicParams{2, uniform(rng, 0.5 + 1e-3, 1)}); }},
        {"isotropic d=3", [&] { return FamilyState(IsotropicParams{3, uniform(rng, 1. / 3 + 1e-3, 1)}); }},
        {"isotropic d=4", [&] { return FamilyState(IsotropicParams{4, uniform(rng, 0.25 + 1e-3, 1)}); }},
        {"horodecki33", [&] { return FamilyState(Horodecki33Params{uniform(rng, 3 + 1e-3, 5)}); }},
        {"bd23 case i", [&] { return FamilyState(case_one_bd23(rng)); }},
        {"locc1", [&] { return FamilyState(entangled_locc1(rng)); }},
    };
    std::string summary;
    for (const auto& g : groups) {
      double gap = 0.0;
      for (int i = 0; i < 50; ++i) {
        const FamilyState s = g.draw();
        const DensityMatrix rho = to_density(s);
        const auto dec = decompose(s);
        ranks.record(rho, dec, g.name);
        const OracleReport r = certify(rho, sampler_for(s));
        gap = std::max(gap, std::abs(dec.lambda - r.lambda_star));
      }
      o.worst(gap, 1e-3, std::string(g.name) + " |lambda - lambda*|");
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%s %.1e", summary.empty() ? "" : ", ", g.name, gap);
      summary += buf;
    }
    o.detail = (o.ok ? "" : o.detail + "; ") + "max gaps: " + summary;
    return o;
  });

  run(3, "Wootters cross-validation, 1000 mixed + 1000 pure", 0, [&] {
    Outcome o;
    for (int i = 0; i < 1000; ++i) {
      const DensityMatrix rho = lsd::testing::random_density(rng, {2, 2}, 1 + i % 4);
      const auto w = wootters_basis(rho);
      const double c = std::max(0.0, w.lambdas[0] - w.lambdas[1] - w.lambdas[2] - w.lambdas[3]);
      o.worst(std::abs(c - wootters_concurrence(rho).concurrence), 1e-8, "R-matrix vs Wootters basis");
      if (c > 1e-6) ranks.record(rho, decompose_wootters(rho), "wootters");
    }
    for (int i = 0; i < 1000; ++i) {
      const PureState psi = lsd::testing::random_pure(rng, {2, 2});
      const auto& a = psi.amplitudes();
      o.worst(std::abs(wootters_concurrence(DensityMatrix(psi)).concurrence - 2 * std::abs(a(0) * a(3) - a(1) * a(2))),
              1e-10, "pure-state concurrence");
    }
    return o;
  });

  run(4, "ICD closed forms, 500 states", 0, [&] {
    Outcome o;
    for (int i = 0; i < 500; ++i) {
      const ICDParams x{simplex<4>(rng), uniform(rng, 1e-3, std::numbers::pi / 4 - 1e-3)};
      const DensityMatrix rho = to_density(x);
      const auto closed = icd_lambda(x);
      const auto numeric = wootters_concurrence(rho);
      for (std::size_t k = 0; k < 4; ++k)
        o.worst(std::abs(closed[k] - numeric.r_eigenvalues[k]), 1e-8, "lambda_i vs R eigenvalues");
      o.worst(std::abs(icd_concurrence(x) - numeric.concurrence), 1e-8, "closed-form concurrence");
      if (!is_separable(x, 1e-9)) ranks.record(rho, decompose_icd(x), "icd");
    }
    return o;
  });

  run(5, "2x3 exact concurrence, 200 case-i states", 0, [&] {
    Outcome o;
    for (int i = 0; i < 200; ++i) {
      const BD23Params x = case_one_bd23(rng);
      const DensityMatrix rho = to_density(x);
      const auto dec = decompose_bd23(x);
      ranks.record(rho, dec, "bd23");
      o.check(dec.derivation.branch == "bd23-case-i", "branch " + dec.derivation.branch);
      const auto& p = x.p;
      const double exact = p[0] - p[1] - std::sqrt((p[2] + p[3]) * (p[4] + p[5]));
      const double avg = average_concurrence(dec);
      o.worst(std::abs(avg - exact), 1e-10, "average concurrence vs closed form");
      o.worst(std::abs(avg - concurrence_lower_bound_2k(rho).bound), 1e-8, "average concurrence vs lower bound");
    }
    return o;
  });

  run(6, "isotropic I-concurrence, d=2..6 x 20", 0, [&] {
    Outcome o;
    for (std::size_t d = 2; d <= 6; ++d) {
      const double dd = static_cast<double>(d);
      for (int i = 1; i <= 20; ++i) {
        const double f = 1 / dd + (1 - 1 / dd) * i / 20.0;
        const IsotropicParams x{d, f};
        const auto dec = decompose_isotropic(x);
        ranks.record(to_density(x), dec, "isotropic");
        const double lhs = (1 - dec.lambda) * std::sqrt(2 * (1 - 1 / dd));
        o.worst(std::abs(lhs - std::sqrt(2 * dd / (dd - 1)) * (f - 1 / dd)), 1e-12, "closed form");
        o.worst(std::abs(average_concurrence(dec) - lhs), 1e-12, "average_concurrence");
      }
    }
    return o;
  });

  run(7, "separability predicate vs PPT, 1000 per 2x2/2x3 family", 0, [&] {
    Outcome o;
    const std::vector<std::pair<const char*, std::function<FamilyState()>>> draws{
        {"bd22", [&] { return FamilyState(BD22Params{simplex<4>(rng)}); }},
        {"icd", [&] { return FamilyState(ICDParams{simplex<4>(rng), uniform(rng, 1e-3, std::numbers::pi / 4)}); }},
        {"bd23", [&] { return FamilyState(BD23Params{simplex<6>(rng)}); }},
        {"werner d=2", [&] { return FamilyState(WernerParams{2, uniform(rng, -1, 1)}); }},
        {"isotropic d=2", [&] { return FamilyState(IsotropicParams{2, uniform(rng, 0, 1)}); }},
        {"locc1",
         [&] {
           auto l = simplex<4>(rng);
           std::sort(l.begin(), l.end(), std::greater<>());
           return FamilyState(make_locc1(l, uniform(rng, -1.5, 1.5)));
         }},
        {"locc3",
         [&] {
           auto l = simplex<4>(rng);
           std::sort(l.begin(), l.end(), std::greater<>());
           return FamilyState(make_locc3(l, uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)));
         }},
    };
    for (const auto& [name, draw] : draws) {
      int disagree = 0;
      for (int i = 0; i < 1000; ++i) {
        const FamilyState s = draw();
        if (is_separable(s) != (ppt_margin(to_density(s)) >= -1e-9)) ++disagree;
      }
      o.check(disagree == 0, std::string(name) + ": " + std::to_string(disagree) + " disagreements");
    }
    return o;
  });

  run(9, "locc3 consistency, 50 reduced + 50 generic", 0, [&] {
    Outcome o;
    for (int i = 0; i < 50; ++i) {
      const Locc1Params one = entangled_locc1(rng);
      const Locc3Params three{one.lambdas, one.theta, 0.0, 0.0};
      const auto a = decompose_locc3(three, {one.theta, 0.0, 0.0});
      const auto b = decompose_locc1(one, one.theta);
      o.worst(std::abs(a.lambda - b.lambda), 1e-8, "lambda");
      o.worst(max_abs_entry(a.rho_s.matrix() - b.rho_s.matrix()), 1e-8, "rho_s");
      o.worst(max_abs_entry(a.rho_e.matrix() - b.rho_e.matrix()), 1e-8, "rho_e");
    }
    int solved = 0, raised = 0;
    for (int i = 0; i < 50; ++i) {
      auto l = simplex<4>(rng);
      std::sort(l.begin(), l.end(), std::greater<>());
      if (l[0] - l[1] - l[2] - l[3] < 0.02) {
        --i;
        continue;
      }
      const Locc3Params x = make_locc3(l, uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5));
      const DensityMatrix rho = to_density(x);
      try {
        const auto dec = decompose_locc3(x, {x.theta, x.xi, x.phi});
        ranks.record(rho, dec, "locc3");
        o.check(validate(rho, dec).passed, "locc3 returned a triple that fails validation");
        ++solved;
      } catch (const Error& e) {
        o.check(e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::InvalidDecomposition,
                std::string("unexpected error ") + e.what());
        ++raised;
      }
    }
    if (o.ok) o.detail = std::to_string(solved) + " solved, " + std::to_string(raised) + " raised";
    return o;
  });

  run(10, "multipartite isotropic, (2,2) (2,3) (3,2) x 10", 0, [&] {
    Outcome o;
    for (const auto& [d, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {2, 3}, {3, 2}}) {
      const MultiIsoParams probe{d, n, 1.0};
      const double s0 = probe.s0();
      const double big = std::pow(static_cast<double>(d), static_cast<double>(n - 1));
      for (int i = 1; i <= 10; ++i) {
        const MultiIsoParams x{d, n, s0 + (1 - s0) * i / 10.0};
        const DensityMatrix rho = to_density(x);
        const auto dec = decompose_multi_isotropic(x);
        ranks.record(rho, dec, "multi_iso");
        o.worst(std::abs(dec.lambda - (1 - x.s) * (1 + big) / big), 1e-12, "lambda");
        o.worst(reconstruction_residual(rho, dec), 1e-12, "residual");
        if (n == 2) {
          const double dd = static_cast<double>(d);
          const auto iso = decompose_isotropic({d, x.s + (1 - x.s) / (dd * dd)});
          o.worst(std::abs(iso.lambda - dec.lambda), 1e-12, "isotropic lambda");
          o.worst(max_abs_entry(iso.rho_s.matrix() - dec.rho_s.matrix()), 1e-12, "isotropic rho_s");
        }
      }
    }
    return o;
  });

  // Also covers families no other criterion decomposes.
  run(8, "edge-state rank, every decomposition above", 0, [&] {
    for (int i = 0; i < 50; ++i) {
      const WernerParams w{3, uniform(rng, -1 + 1e-3, -1e-3)};
      ranks.record(to_density(w), decompose_werner(w), "werner");
      const Horodecki33Params h{uniform(rng, 3 + 1e-3, 5 - 1e-3)};
      ranks.record(to_density(h), decompose_horodecki33(h), "horodecki33");
      const BD23Params b{simplex<6>(rng)};
      if (!is_separable(b, 1e-9)) {
        try {
          ranks.record(to_density(b), decompose_bd23(b), "bd23 any case");
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NoApplicableCase) throw;
        }
      }
    }
    Outcome o;
    o.check(ranks.broken == 0, std::to_string(ranks.broken) + " of " + std::to_string(ranks.seen) + " broken, first in " + ranks.first);
    if (o.ok) o.detail = std::to_string(ranks.seen) + " decompositions";
    return o;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
