#include <gtest/gtest.h>

#include "borelss/cli.hpp"
#include "borelss/ss_engine.hpp"

using namespace borelss;

namespace {

std::size_t gen_index(const std::vector<PageGenerator>& gens, const std::string& label) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].label == label) return i;
  throw std::runtime_error("no generator " + label);
}

// Generator values for d_r on `page`, all zero except the named ones.
std::vector<BitVec> values(const Page& page, const std::vector<PageGenerator>& gens,
                           const std::vector<std::pair<std::string, std::string>>& nonzero) {
  std::vector<BitVec> out;
  for (const auto& g : gens) out.push_back(page.zero(g.deg + shift_of(page.r())));
  for (const auto& [gen, target] : nonzero) {
    auto i = gen_index(gens, gen);
    Bidegree tb = gens[i].deg + shift_of(page.r());
    bool found = false;
    for (std::size_t j = 0; j < page.dim(tb); ++j)
      if (page.label(tb, j) == target) {
        out[i].set(j);
        found = true;
      }
    if (!found) throw std::runtime_error("no class " + target);
  }
  return out;
}

const Scenario& find_case(const std::vector<Scenario>& ss, const std::string& id) {
  for (const auto& s : ss)
    if (s.case_id == id) return s;
  throw std::runtime_error("no scenario " + id);
}

std::vector<Scenario> scenarios(Field f, int m) {
  auto res = search_cases({f, m, 4});
  classify_all(res.scenarios);
  return std::move(res.scenarios);
}

}  // namespace

TEST(BuildE2, RealM5RowFourHasTwoClassesEverywhere) {
  auto p = build_e2({Field::R, 5, 4}, 20);
  for (int k = 0; k <= 20; ++k) {
    ASSERT_EQ(p.dim({k, 4}), 2u);
    EXPECT_EQ(p.label({k, 4}, 1), k == 0 ? "b" : k == 1 ? "t*b" : "t^" + std::to_string(k) + "*b");
  }
}

TEST(BuildE2, QuaternionicRowsOffMultiplesOfFourVanish) {
  auto p = build_e2({Field::H, 2, 4}, 12);
  for (int k = 0; k <= 12; ++k)
    for (int l = 0; l <= p.top(); ++l)
      if (l % 4 != 0) EXPECT_EQ(p.dim({k, l}), 0u) << k << "," << l;
}

TEST(BuildE2, OriginIsOneDimensional) {
  for (Field f : {Field::R, Field::C, Field::H}) EXPECT_EQ(build_e2({f, 3, 4}, 4).dim({0, 0}), 1u);
}

TEST(BuildE2, ProductsFollowTensorStructure) {
  auto p = build_e2({Field::R, 5, 4}, 10);
  auto gens = p.generators();
  auto& t = gens[gen_index(gens, "t")];
  auto& a = gens[gen_index(gens, "a")];
  auto ta = p.multiply(t.deg, t.coords, a.deg, a.coords);
  EXPECT_EQ(p.render({1, 1}, ta), "t*a");
}

TEST(BuildE2, GeneratorsAreTAB) {
  auto gens = build_e2({Field::C, 3, 4}, 10).generators();
  std::vector<std::string> labels;
  for (const auto& g : gens) labels.push_back(g.label);
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(labels, (std::vector<std::string>{"a", "b", "t"}));
}

TEST(ExtendLeibniz, ZeroValuesGiveZeroDifferential) {
  auto p = build_e2({Field::R, 3, 4}, 16);
  auto gens = p.generators();
  auto d = extend_leibniz(p, gens, values(p, gens, {}));
  EXPECT_TRUE(d.is_zero());
}

TEST(ExtendLeibniz, CaseOneOddMDerivativeOfAPowerTimesB) {
  const int m = 5;
  auto p = build_e2({Field::R, m, 4}, 20);
  auto gens = p.generators();
  auto d = extend_leibniz(p, gens, values(p, gens, {{"a", "t^2"}}));
  for (int j = 0; j <= m; ++j) {
    Bidegree src{0, 4 + j};
    std::size_t sd = p.dim(src);
    std::size_t idx = sd - 1;  // a^j*b is the larger class in its bidegree
    auto img = d.apply(src, BitVec::unit(sd, idx), p.dim(src + shift_of(2)));
    std::string want = j % 2 == 0 ? "0" : j == 1 ? "t^2*b" : "t^2*a^" + std::to_string(j - 1) + "*b";
    EXPECT_EQ(p.render(src + shift_of(2), img), want) << "j=" << j;
  }
}

TEST(ExtendLeibniz, CaseOneEvenMIsNotADerivation) {
  for (int m : {2, 4, 6}) {
    auto p = build_e2({Field::R, m, 4}, 20);
    auto gens = p.generators();
    EXPECT_THROW(extend_leibniz(p, gens, values(p, gens, {{"a", "t^2"}})), NotADerivation) << m;
  }
}

TEST(TurnPage, ZeroDifferentialOnlyIncrementsR) {
  auto p = build_e2({Field::R, 3, 4}, 16);
  auto gens = p.generators();
  auto next = turn_page(p, extend_leibniz(p, gens, values(p, gens, {})));
  EXPECT_EQ(next.r(), 3);
  EXPECT_EQ(dump_page(next.relabeled(2), 10, true), dump_page(p, 10, true));
}

TEST(TurnPage, RealM5CaseOneE3) {
  const int m = 5;
  auto p = build_e2({Field::R, m, 4}, 24);
  auto gens = p.generators();
  auto e3 = turn_page(p, extend_leibniz(p, gens, values(p, gens, {{"a", "t^2"}})));
  for (int k = 0; k <= 10; ++k)
    for (int l = 0; l <= p.top(); ++l) {
      std::size_t want = 0;
      if (k <= 1) {
        if (l == 0 || l == 2 || l == m + 1 || l == m + 3) want = 1;
        if (l >= 4 && l <= m && l % 2 == 0) want = 2;
      }
      EXPECT_EQ(e3.dim({k, l}), want) << k << "," << l;
    }
}

TEST(TurnPage, RealM3CaseTwoE6) {
  const int m = 3;
  auto p = build_e2({Field::R, m, 4}, 24).relabeled(5);
  auto gens = p.generators();
  auto e6 = turn_page(p, extend_leibniz(p, gens, values(p, gens, {{"b", "t^5"}})));
  EXPECT_EQ(e6.r(), 6);
  for (int k = 0; k <= 12; ++k)
    for (int l = 0; l <= p.top(); ++l) EXPECT_EQ(e6.dim({k, l}), (k <= 4 && l <= m) ? 1u : 0u) << k << "," << l;
  EXPECT_TRUE(is_terminal(e6));
}

TEST(TurnPage, DSquareNonzeroDetected) {
  // d_2(a) = t^2, d_2(b) = t^2*a^3 at m = 5 is a derivation but squares to t^4*a^2
  auto p = build_e2({Field::R, 5, 4}, 24);
  auto gens = p.generators();
  auto d = extend_leibniz(p, gens, values(p, gens, {{"a", "t^2"}, {"b", "t^2*a^3"}}));
  EXPECT_THROW(turn_page(p, d), DSquareNonzero);
}

TEST(TurnPage, WindowShrinksByR) {
  auto p = build_e2({Field::R, 3, 4}, 20);
  auto gens = p.generators();
  auto e3 = turn_page(p, extend_leibniz(p, gens, values(p, gens, {{"a", "t^2"}})));
  EXPECT_EQ(e3.k_valid(), 18);
  EXPECT_THROW(e3.dim({19, 0}), WindowExhausted);
}

TEST(IsTerminal, CaseTwoE6IsTerminal) {
  auto ss = scenarios(Field::R, 3);
  const auto& s = find_case(ss, "R.ii");
  EXPECT_EQ(s.terminal_page->r(), 6);
  EXPECT_TRUE(is_terminal(*s.terminal_page));
}

TEST(IsTerminal, CaseThreeBeforeLastDifferentialIsNot) {
  const int m = 5;
  auto ss = scenarios(Field::R, m);
  auto page = scenario_page(find_case(ss, "R.iii"), m + 3);
  EXPECT_FALSE(is_terminal(page));
  EXPECT_EQ(next_fork(page, page.generators()), m + 5);
}

TEST(IsTerminal, CaseOneAfterD2IsTerminal) {
  auto ss = scenarios(Field::R, 1);
  EXPECT_TRUE(is_terminal(*find_case(ss, "R.i").terminal_page));
}

TEST(TotSeries, CaseTwoM5) {
  auto ss = scenarios(Field::R, 5);
  auto tot = tot_series(*find_case(ss, "R.ii").terminal_page, k_window({Field::R, 5, 4}));
  EXPECT_TRUE(tot.vanishing_ok);
  EXPECT_EQ(tot.series.coefficients, (std::vector<int>{1, 2, 3, 4, 5, 5, 4, 3, 2, 1}));
}

TEST(TotSeries, CaseFourAfterFirstDifferentialFailsVanishing) {
  const int m = 5;
  auto ss = scenarios(Field::R, m);
  auto page = scenario_page(find_case(ss, "R.iv.1"), 4);
  auto tot = tot_series(page, 20);
  EXPECT_FALSE(tot.vanishing_ok);
  EXPECT_TRUE(has_infinite_tower(page, 20));
  EXPECT_GT(page.dim({12, 0}), 0u);
  EXPECT_GT(page.dim({12, m + 3}), 0u);
}

TEST(TotSeries, E2FailsVanishing) {
  auto p = build_e2({Field::C, 2, 4}, 20);
  EXPECT_FALSE(tot_series(p, 20).vanishing_ok);
}

TEST(DumpPage, FormatAndOrdering) {
  auto p = build_e2({Field::R, 1, 4}, 4);
  auto text = dump_page(p, 0, true);
  EXPECT_EQ(text, "E 2 0 0 1 1\nE 2 0 1 1 a\nE 2 0 4 1 b\nE 2 0 5 1 a*b\n");
  EXPECT_EQ(dump_page(p, 0, false), "E 2 0 0 1\nE 2 0 1 1\nE 2 0 4 1\nE 2 0 5 1\n");
}
