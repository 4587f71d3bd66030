#include <gtest/gtest.h>

#include <numbers>

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

}  // namespace

TEST(MaxLambdaFor, Examples) {
  const BD22Params x{{0.7, 0.1, 0.1, 0.1}};
  const DensityMatrix rho = to_density(x);
  EXPECT_DOUBLE_EQ(max_lambda_for(rho, rho), 1.0);
  EXPECT_NEAR(max_lambda_for(rho, decompose_bd22(x).rho_s), 0.6, 1e-9);

  const DensityMatrix bell(PureState({2, 2}, bell_states()[0]));
  EXPECT_NEAR(max_lambda_for(bell, maximally_mixed({2, 2})), 0.0, 1e-10);
  EXPECT_THROW(max_lambda_for(rho, maximally_mixed({2, 3})), Error);
}

TEST(MaxLambdaFor, MixingTowardRhoNeverDecreases) {
  Rng rng(201);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = lsd::testing::random_density(rng, {2, 2});
    const DensityMatrix sigma = lsd::testing::random_density(rng, {2, 2});
    double last = max_lambda_for(rho, sigma);
    for (double t : {0.25, 0.5, 0.75}) {
      const double now = max_lambda_for(rho, DensityMatrix({2, 2}, (1 - t) * sigma.matrix() + t * rho.matrix()));
      EXPECT_GE(now, last - 1e-9);
      last = now;
    }
  }
}

TEST(Certify, Bd22DenseGrid) {
  const OracleReport r = certify(BD22Params{{0.7, 0.1, 0.1, 0.1}}, GridOptions{200});
  EXPECT_NEAR(r.lambda_star, 0.6, 1e-3);
  EXPECT_GE(r.samples, 4u * 200 * 200);
  EXPECT_GE(r.psd_margin_e, -1e-8);
}

TEST(Certify, RefinedGridsMatchClosedForms) {
  const std::vector<FamilyState> states{BD22Params{{0.1, 0.65, 0.2, 0.05}},
                                        ICDParams{{0.7, 0.1, 0.1, 0.1}, std::numbers::pi / 6},
                                        BD23Params{{0.7, 0.1, 0.05, 0.05, 0.05, 0.05}},
                                        WernerParams{2, -0.5},
                                        WernerParams{3, -0.4},
                                        IsotropicParams{4, 0.6},
                                        Horodecki33Params{4.2},
                                        MultiIsoParams{2, 3, 0.8},
                                        make_locc1({0.7, 0.1, 0.1, 0.1}, 0.3)};
  for (const auto& s : states) {
    const OracleReport r = certify(s);
    EXPECT_NEAR(r.lambda_star, decompose(s).lambda, 1e-3) << family_name(tag_of(s));
    EXPECT_GE(r.ppt_margin_s, -1e-9) << family_name(tag_of(s));
  }
}

// Optimum on a face or hill the coarse lattice ranks low.
TEST(Certify, RefinesEveryChart) {
  const auto normalized = [](auto p) {
    double total = 0;
    for (double q : p) total += q;
    for (double& q : p) q /= total;
    return p;
  };
  const std::vector<FamilyState> states{
      ICDParams{normalized(std::array{0.338, 0.099, 0.562, 0.0007}), 0.419},
      BD23Params{normalized(std::array{0.39223, 0.120515, 0.0803845, 0.0468617, 0.182968, 0.177041})},
      make_locc1(normalized(std::array{0.805276, 0.0945354, 0.0681141, 0.0320742}), -0.926291)};
  for (const auto& s : states) {
    EXPECT_NEAR(certify(s).lambda_star, decompose(s).lambda, 1e-6) << family_name(tag_of(s));
  }
}

TEST(Certify, SeparableInputGivesOne) {
  EXPECT_NEAR(certify(BD22Params{{0.4, 0.3, 0.2, 0.1}}).lambda_star, 1.0, 1e-12);
  EXPECT_NEAR(certify(WernerParams{3, 0.2}).lambda_star, 1.0, 1e-12);
  EXPECT_NEAR(certify(to_density(BD22Params{{0.4, 0.3, 0.2, 0.1}}),
                      wootters_sampler(to_density(BD22Params{{0.4, 0.3, 0.2, 0.1}})))
                  .lambda_star,
              1.0, 1e-12);
}

TEST(Certify, WootttersSamplerMatchesGenericDecomposition) {
  Rng rng(203);
  int checked = 0;
  while (checked < 5) {
    const DensityMatrix rho = lsd::testing::random_density(rng, {2, 2}, 3);
    if (wootters_concurrence(rho).concurrence < 0.05) continue;
    ++checked;
    EXPECT_NEAR(certify(rho, wootters_sampler(rho)).lambda_star, decompose_wootters(rho).lambda, 1e-3);
  }
}

TEST(Certify, ErrorsOnDimsAndEmptyGrid) {
  const DensityMatrix rho = to_density(BD22Params{{0.7, 0.1, 0.1, 0.1}});
  try {
    certify(rho, sampler_for(WernerParams{3, -0.2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimMismatch);
  }
  BoundarySampler empty{std::nullopt, {2, 2}, {}, {}};
  empty.charts.push_back({"nothing", {{0, 1, 3}}, [](const std::vector<double>&) { return std::optional<ComplexMatrix>(); }});
  try {
    certify(rho, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyGrid);
  }
}

TEST(Certify, TiesKeepTheFirstCandidate) {
  const DensityMatrix rho = to_density(BD22Params{{0.7, 0.1, 0.1, 0.1}});
  BoundarySampler twice{std::nullopt, {2, 2}, {}, {}};
  const ComplexMatrix sigma = decompose_bd22({{0.7, 0.1, 0.1, 0.1}}).rho_s.matrix();
  for (const char* name : {"first", "second"})
    twice.charts.push_back({name, {{0, 1, 2}}, [sigma](const std::vector<double>&) { return std::optional(sigma); }});
  const OracleReport r = certify(rho, twice, GridOptions{2, 0});
  EXPECT_EQ(r.best_chart, "first");
  ASSERT_EQ(r.best_point.size(), 1u);
  EXPECT_EQ(r.best_point[0], 0.0);
}

TEST(Certify, SamplersEmitSeparableCandidates) {
  Rng rng(205);
  const std::vector<FamilyState> states{BD22Params{{0.7, 0.1, 0.1, 0.1}}, ICDParams{{0.7, 0.1, 0.1, 0.1}, 0.4},
                                        BD23Params{{0.7, 0.1, 0.05, 0.05, 0.05, 0.05}},
                                        make_locc1({0.7, 0.1, 0.1, 0.1}, 0.3),
                                        make_locc3({0.7, 0.1, 0.1, 0.1}, 0.2, 0.1, 0.15)};
  for (const auto& s : states) {
    const BoundarySampler sampler = sampler_for(s);
    int emitted = 0;
    for (const auto& chart : sampler.charts)
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x;
        for (const auto& a : chart.axes) x.push_back(uniform(rng, a.lower, a.upper));
        std::optional<ComplexMatrix> m;
        if (chart.cone) {
          if (const auto c = chart.cone(x)) m = c->base + (c->t_min + uniform(rng, 0, 2)) * c->ray;
          if (m) *m /= m->trace().real();
        } else if (chart.remainder) {
          const ComplexMatrix rho = to_density(s).matrix();
          detail::SearchState one{rho, sampler.dims, -1.0, {}, {}, {}, 0};
          if (one.offer_point(chart, x)) m = one.best_sigma;
        } else {
          m = chart.candidate(x);
        }
        if (!m) continue;
        ++emitted;
        const DensityMatrix sigma(sampler.dims, *m);
        EXPECT_GE(ppt_margin(sigma), -1e-9) << chart.name;
        if (sampler.dims == Dims{2, 2}) {
          EXPECT_LE(wootters_concurrence(sigma).concurrence, 1e-8) << chart.name;
        }
      }
    EXPECT_GT(emitted, 0) << family_name(tag_of(s));
  }
}

TEST(Validate, ClosedFormOutputsPass) {
  const std::vector<FamilyState> states{BD22Params{{0.7, 0.1, 0.1, 0.1}},
                                        ICDParams{{0.7, 0.1, 0.1, 0.1}, 0.5},
                                        BD23Params{{0.7, 0.1, 0.05, 0.05, 0.05, 0.05}},
                                        WernerParams{3, -0.4},
                                        IsotropicParams{3, 0.7},
                                        make_locc1({0.7, 0.1, 0.1, 0.1}, 0.3),
                                        make_locc3({0.7, 0.1, 0.1, 0.1}, 0.2, 0.1, 0.15),
                                        Horodecki33Params{4.2},
                                        MultiIsoParams{2, 3, 0.6}};
  for (const auto& s : states) {
    const ValidationReport r = validate(to_density(s), decompose(s));
    EXPECT_TRUE(r.passed) << family_name(tag_of(s));
    if (dims_of(s).size() == 2 && dims_of(s)[0] * dims_of(s)[1] <= 6) {
      EXPECT_EQ(r.line_entangled, std::optional<bool>(true)) << family_name(tag_of(s));
    } else {
      EXPECT_FALSE(r.line_entangled.has_value());
    }
  }
}

TEST(Validate, CorruptedWeightFails) {
  const BD22Params x{{0.7, 0.1, 0.1, 0.1}};
  LSDecomposition dec = decompose_bd22(x);
  dec.lambda += 0.05;
  const ValidationReport r = validate(to_density(x), dec);
  EXPECT_LT(r.psd_margin_e, -1e-3);
  EXPECT_FALSE(r.passed);
}

TEST(Validate, PureStateWithZeroWeight) {
  const auto dec = decompose_bd22({{1, 0, 0, 0}});
  const ValidationReport r = validate(to_density(BD22Params{{1, 0, 0, 0}}), dec);
  EXPECT_EQ(r.reconstruction_residual, 0.0);
  EXPECT_TRUE(r.passed);
}
