#include <gtest/gtest.h>

#include <random>

#include "borelss/catalog.hpp"
#include "borelss/graded_algebra.hpp"
#include "oracles.hpp"

using namespace borelss;

namespace {

IdealFamily family(Field f, const std::string& id) {
  for (auto& fam : builtin_catalog(f))
    if (fam.id == id) return fam;
  throw std::runtime_error("missing family " + id);
}

std::vector<std::string> leading_terms(const GradedAlgebra& alg) {
  std::vector<std::string> out;
  for (const auto& lt : alg.leading_terms()) out.push_back(render_monomial(alg.generators(), lt));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> product_series(const std::vector<std::vector<int>>& factors) {
  std::vector<int> acc{1};
  for (const auto& f : factors) {
    std::vector<int> next(acc.size() + f.size() - 1, 0);
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += acc[i] * f[j];
    acc = next;
  }
  return acc;
}

}  // namespace

TEST(Presentation, ParseAndRenderRoundTrip) {
  auto p = parse_presentation("gen x 1\ngen y 2\n# comment\nrel x^3 + x*y\nrel y^2\n");
  EXPECT_EQ(p.generators.size(), 2u);
  EXPECT_EQ(p.relations.size(), 2u);
  auto again = parse_presentation(to_text(p));
  EXPECT_EQ(again.relations, p.relations);
  EXPECT_EQ(again.degree_cap, p.degree_cap);
  EXPECT_EQ(render_polynomial(p.generators, p.relations[0]), "x*y+x^3");
}

TEST(Presentation, WhitespaceInsensitive) {
  auto p = parse_presentation("gen x 1\ngen y 1\nrel  x ^ 2 *y +  y^3 \n");
  auto q = parse_presentation("gen x 1\ngen y 1\nrel x^2*y+y^3\n");
  EXPECT_EQ(p.relations, q.relations);
}

TEST(Presentation, RejectsInhomogeneousRelation) {
  EXPECT_THROW(parse_presentation("gen x 1\ngen y 2\nrel x + y\n"), InvalidPresentation);
}

TEST(Presentation, RejectsMalformedInput) {
  EXPECT_THROW(parse_presentation("gen x\n"), ParseError);
  EXPECT_THROW(parse_presentation("gen x 1\nrel q^2\n"), ParseError);
}

TEST(Completion, FiberAlgebraIsAlreadyConfluent) {
  for (int m = 1; m <= 6; ++m) {
    GradedAlgebra alg(FiberPresentation{Field::R, m, 4}.algebra());
    EXPECT_EQ(alg.rewrite_system().size(), 2u);
    EXPECT_EQ(leading_terms(alg), (std::vector<std::string>{"a^" + std::to_string(m + 1), "b^2"}));
  }
}

TEST(Completion, SecondRealFamilyAllOnesAtM3) {
  GradedAlgebra alg(instantiate(family(Field::R, "R/I2"), 3, {1, 1, 1, 1}));
  EXPECT_EQ(leading_terms(alg), (std::vector<std::string>{"x^5", "y^4"}));
  for (int d = 0; d <= 8; ++d)
    for (const auto& mono : alg.monomial_basis(d)) {
      EXPECT_LT(mono[0], 5);
      EXPECT_LT(mono[1], 4);
    }
}

TEST(Completion, ThirdRealFamilyZeroParamsAtM2) {
  GradedAlgebra alg(instantiate(family(Field::R, "R/I3"), 2, {0, 0, 0, 0}));
  EXPECT_EQ(leading_terms(alg), (std::vector<std::string>{"x^4*y", "x^7", "y^3"}));
  EXPECT_EQ(alg.poincare_series().coefficients, oracle::series(alg.presentation(), 12));
}

TEST(Completion, CapTooLowWhenRelationsNeedMoreRoom) {
  auto p = parse_presentation("gen x 1\ngen y 1\nrel x^2 + x*y\nrel y^3\ncap 3\n");
  // leading term is x*y; its S-pair with y^3 reduces to x^4
  EXPECT_THROW(GradedAlgebra{p}, CapTooLow);
  p.degree_cap = 8;
  EXPECT_NO_THROW(GradedAlgebra{p});
}

TEST(MonomialBasis, RealFiberDegreeFour) {
  GradedAlgebra alg(FiberPresentation{Field::R, 5, 4}.algebra());
  auto basis = alg.monomial_basis(4);
  ASSERT_EQ(basis.size(), 2u);
  EXPECT_EQ(alg.render(Polynomial{basis[0]}), "a^4");
  EXPECT_EQ(alg.render(Polynomial{basis[1]}), "b");
}

TEST(MonomialBasis, DegreeZeroIsUnit) {
  GradedAlgebra alg(FiberPresentation{Field::H, 2, 4}.algebra());
  auto basis = alg.monomial_basis(0);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(alg.render(Polynomial{basis[0]}), "1");
}

TEST(MonomialBasis, ComplexFiberOddDegreeVanishes) {
  EXPECT_TRUE(GradedAlgebra(FiberPresentation{Field::C, 3, 4}.algebra()).monomial_basis(5).empty());
}

TEST(MonomialBasis, AboveCapThrows) {
  GradedAlgebra alg(FiberPresentation{Field::R, 1, 4}.algebra());
  EXPECT_THROW(alg.monomial_basis(alg.degree_cap() + 1), CapTooLow);
}

TEST(PoincareSeries, TruncatedPolynomialRing) {
  GradedAlgebra alg(parse_presentation("gen x 1\nrel x^5\n"));
  EXPECT_EQ(alg.poincare_series().coefficients, (std::vector<int>{1, 1, 1, 1, 1}));
  EXPECT_EQ(render_series(alg.poincare_series()), "(1,1,1,1,1)");
}

TEST(PoincareSeries, FirstComplexFamilyAtM3) {
  GradedAlgebra alg(instantiate(family(Field::C, "C/I1"), 3, {}));
  auto expect = product_series({{1, 1, 1}, {1, 0, 0, 0, 1}, {1, 0, 0, 0, 1}});
  EXPECT_EQ(alg.poincare_series().coefficients, expect);
  EXPECT_EQ(oracle::series(alg.presentation(), 12), expect);
}

TEST(PoincareSeries, FirstRealFamilyAtM5IsCircleTimesCP2TimesS4) {
  GradedAlgebra alg(instantiate(family(Field::R, "R/I1"), 5, {}));
  EXPECT_EQ(alg.poincare_series().coefficients,
            product_series({{1, 1}, {1, 0, 1, 0, 1}, {1, 0, 0, 0, 1}}));
}

TEST(PoincareSeries, InfiniteQuotientDetected) {
  GradedAlgebra alg(parse_presentation("gen x 1\ngen y 1\nrel x^3\nrel x*y\ncap 10\n"));
  EXPECT_THROW(alg.poincare_series(), NotFiniteDimensional);
}

TEST(PoincareSeries, CoprimePurePowersGiveProductOfGeometricSeries) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int d1 = 1 + static_cast<int>(rng() % 3), d2 = 1 + static_cast<int>(rng() % 4);
    int e1 = 1 + static_cast<int>(rng() % 5), e2 = 1 + static_cast<int>(rng() % 4);
    AlgebraPresentation p;
    p.generators = {{"x", d1}, {"y", d2}};
    p.relations = {{{e1, 0}}, {{0, e2}}};
    p.degree_cap = e1 * d1 + e2 * d2 + 2;
    std::vector<int> f1(static_cast<std::size_t>((e1 - 1) * d1 + 1), 0), f2(static_cast<std::size_t>((e2 - 1) * d2 + 1), 0);
    for (int i = 0; i < e1; ++i) f1[static_cast<std::size_t>(i * d1)] = 1;
    for (int i = 0; i < e2; ++i) f2[static_cast<std::size_t>(i * d2)] = 1;
    EXPECT_EQ(GradedAlgebra(p).poincare_series().coefficients, product_series({f1, f2}));
  }
}

TEST(Multiply, UnitIsNeutral) {
  GradedAlgebra alg(FiberPresentation{Field::R, 3, 4}.algebra());
  auto u = parse_polynomial(alg.generators(), alg.order(), "a^2*b+a^3");
  Polynomial one{Monomial(2, 0)};
  EXPECT_EQ(alg.multiply(u, one), alg.normal_form(u));
}

TEST(Multiply, TopPowerOfAVanishes) {
  GradedAlgebra alg(FiberPresentation{Field::R, 4, 4}.algebra());
  auto am = parse_polynomial(alg.generators(), alg.order(), "a^4");
  auto a = parse_polynomial(alg.generators(), alg.order(), "a");
  EXPECT_TRUE(alg.multiply(am, a).empty());
}

TEST(Multiply, SecondRealFamilyReducesYCubed) {
  GradedAlgebra alg(instantiate(family(Field::R, "R/I2"), 2, {1, 0, 0, 0}));
  auto y2 = parse_polynomial(alg.generators(), alg.order(), "y^2");
  auto y = parse_polynomial(alg.generators(), alg.order(), "y");
  EXPECT_EQ(alg.render(alg.multiply(y2, y)), "x*y^2");
}

// Every monomial reduced along every available rewrite path lands on the
// same normal form (checked by reducing with relations in all orders).
TEST(Multiply, ConfluenceAcrossRewritePaths) {
  GradedAlgebra alg(instantiate(family(Field::R, "R/I4"), 3, {1, 0, 1, 1, 1, 0}));
  auto rs = alg.rewrite_system();
  std::sort(rs.begin(), rs.end());
  do {
    for (int d = 0; d <= 10; ++d)
      for (const auto& mono : oracle::monos_of_degree({1, 1}, d))
        ASSERT_EQ(normal_form(alg.order(), rs, Polynomial{mono}), alg.normal_form(mono));
  } while (std::next_permutation(rs.begin(), rs.end()));
}

TEST(Properties, NormalFormIdempotent) {
  auto pres = instantiate(family(Field::H, "H/I1"), 3, {1, 1, 1});
  pres.degree_cap = 30;  // y^3 = 0 only shows up in degree 24
  GradedAlgebra alg(pres);
  for (int d = 0; d <= alg.degree_cap(); ++d)
    for (const auto& mono : oracle::monos_of_degree({1, 8, 4}, d)) {
      auto nf = alg.normal_form(mono);
      EXPECT_EQ(alg.normal_form(nf), nf);
    }
}

TEST(Properties, MultiplicationAssociativeAndCommutative) {
  GradedAlgebra alg(instantiate(family(Field::R, "R/I6"), 4, {1, 0, 1, 1, 0, 1, 1, 0, 1}));
  std::mt19937 rng(3);
  auto random_element = [&](int d) {
    Polynomial p;
    for (const auto& mono : alg.monomial_basis(d))
      if (rng() & 1u) p = poly_add(alg.order(), p, Polynomial{mono});
    return p;
  };
  for (int trial = 0; trial < 100; ++trial) {
    int d1 = static_cast<int>(rng() % 4), d2 = static_cast<int>(rng() % 4), d3 = static_cast<int>(rng() % 4);
    auto u = random_element(d1), v = random_element(d2), w = random_element(d3);
    EXPECT_EQ(alg.multiply(alg.multiply(u, v), w), alg.multiply(u, alg.multiply(v, w)));
    EXPECT_EQ(alg.multiply(u, v), alg.multiply(v, u));
  }
}

// Basis counts against linear algebra on the ideal, all degrees <= 12, for
// every catalog family and parameter vector at m = 2..3 (plus the fiber).
TEST(OracleSweep, BasisDimensionsMatchIdealSpanUpToDegreeTwelve) {
  int checked = 0;
  for (Field f : {Field::R, Field::C, Field::H}) {
    for (int m = 1; m <= 3; ++m) {
      auto fp = FiberPresentation{f, m, 4}.algebra();
      fp.degree_cap = std::max(fp.degree_cap, 24);
      GradedAlgebra fib(fp);
      auto expect = oracle::series(fp, 12);
      for (int d = 0; d <= 12; ++d)
        ASSERT_EQ(static_cast<int>(fib.monomial_basis(d).size()), d < static_cast<int>(expect.size()) ? expect[d] : 0);
      for (const auto& fam : builtin_catalog(f)) {
        for (const auto& pv : fam.parameter_vectors(m)) {
          auto pres = instantiate(fam, m, pv);
          pres.degree_cap = std::max(pres.degree_cap, 24);
          GradedAlgebra alg(pres);
          auto want = oracle::series(pres, 12);
          for (int d = 0; d <= 12; ++d)
            ASSERT_EQ(static_cast<int>(alg.monomial_basis(d).size()), d < static_cast<int>(want.size()) ? want[d] : 0)
                << fam.id << " m=" << m << " params=" << render_params(pv) << " d=" << d;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 300);
}
