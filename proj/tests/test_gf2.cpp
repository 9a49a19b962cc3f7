#include <gtest/gtest.h>

#include <random>

#include "borelss/gf2.hpp"
#include "oracles.hpp"

using namespace borelss;

TEST(BitVec, ParseRenderRoundTrip) {
  auto v = BitVec::parse("0110");
  EXPECT_EQ(v.size(), 4u);
  EXPECT_FALSE(v.get(0));
  EXPECT_TRUE(v.get(1));
  EXPECT_EQ(v.str(), "0110");
  EXPECT_EQ(v.popcount(), 2u);
  EXPECT_EQ(v.first(), 1u);
}

TEST(BitVec, WideVectorsCrossWordBoundary) {
  BitVec v(130);
  v.set(0);
  v.set(64);
  v.set(129);
  EXPECT_EQ(v.ones(), (std::vector<std::size_t>{0, 64, 129}));
  BitVec w = v;
  w ^= v;
  EXPECT_TRUE(w.none());
}

TEST(Rank, Identity) { EXPECT_EQ(rank(BinMatrix::identity(3)), 3u); }

TEST(Rank, ZeroMatrix) { EXPECT_EQ(rank(BinMatrix(4, 2)), 0u); }

TEST(Rank, RandomSixBySixMatchesRowSpanSize) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto rows = oracle::random_rows(rng, 6, 6);
    auto r = rank(oracle::to_matrix(rows, 6));
    EXPECT_EQ(std::size_t{1} << r, oracle::row_span_size(rows));
  }
}

TEST(Kernel, IdentityHasNone) { EXPECT_TRUE(kernel_basis(BinMatrix::identity(2)).empty()); }

TEST(Kernel, NilpotentTwoByTwo) {
  auto k = kernel_basis(BinMatrix::from_strings({"01", "00"}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].str(), "10");
}

TEST(Kernel, RandomFiveBySevenExhaustive) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto rows = oracle::random_rows(rng, 5, 7);
    auto m = oracle::to_matrix(rows, 7);
    auto k = kernel_basis(m);
    std::vector<std::uint32_t> masks;
    for (const auto& v : k) {
      EXPECT_TRUE(m.apply(v).none());
      masks.push_back(oracle::to_mask(v));
    }
    EXPECT_EQ(k.size(), 7 - rank(m));
    EXPECT_EQ(oracle::span_of(masks), oracle::kernel_set(rows, 7));
  }
}

// 100% agreement with enumeration for every shape up to 8 x 8.
TEST(OracleSweep, RankAndKernelAllShapesUpToEight) {
  std::mt19937 rng(2024);
  for (int rows = 1; rows <= 8; ++rows) {
    for (int cols = 1; cols <= 8; ++cols) {
      for (int trial = 0; trial < 12; ++trial) {
        auto r = oracle::random_rows(rng, rows, cols);
        auto m = oracle::to_matrix(r, cols);
        auto rk = rank(m);
        ASSERT_EQ(std::size_t{1} << rk, oracle::row_span_size(r)) << rows << "x" << cols;
        std::vector<std::uint32_t> masks;
        for (const auto& v : kernel_basis(m)) masks.push_back(oracle::to_mask(v));
        ASSERT_EQ(oracle::span_of(masks), oracle::kernel_set(r, cols)) << rows << "x" << cols;
        ASSERT_EQ(rk + masks.size(), static_cast<std::size_t>(cols));
      }
    }
  }
}

TEST(Image, SpansColumnSpace) {
  auto m = BinMatrix::from_strings({"110", "011", "101"});
  auto im = image_basis(m);
  EXPECT_EQ(im.size(), 2u);
  Echelon e(3);
  for (const auto& v : im) e.insert(v);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(e.contains(m.apply(BitVec::unit(3, j))));
}

TEST(Matrix, ProductTransposeAndSum) {
  auto a = BinMatrix::from_strings({"10", "11"});
  EXPECT_EQ(a * a, BinMatrix::identity(2));
  EXPECT_EQ(a.transposed(), BinMatrix::from_strings({"11", "01"}));
  EXPECT_TRUE((a + a).is_zero());
}

TEST(Echelon, InsertReportsResidualPayload) {
  Echelon e(3, 2);
  EXPECT_FALSE(e.insert(BitVec::parse("110"), BitVec::parse("10")).has_value());
  EXPECT_FALSE(e.insert(BitVec::parse("011"), BitVec::parse("01")).has_value());
  auto res = e.insert(BitVec::parse("101"), BitVec::parse("00"));
  ASSERT_TRUE(res.has_value());
  EXPECT_EQ(res->str(), "11");
}

TEST(Subquotient, FullKernelZeroImageIsCopy) {
  LabeledSpace amb{{"u", "v", "w"}};
  std::vector<BitVec> ker{BitVec::unit(3, 0), BitVec::unit(3, 1), BitVec::unit(3, 2)};
  auto sq = subquotient(amb, ker, {});
  EXPECT_EQ(sq.space.dim(), 3u);
  EXPECT_EQ(sq.space.labels, amb.labels);
}

TEST(Subquotient, KernelEqualsImageIsZero) {
  std::vector<BitVec> ker{BitVec::parse("110"), BitVec::parse("001")};
  EXPECT_EQ(Subquotient::make(3, ker, ker).dim(), 0u);
}

TEST(Subquotient, ImageOutsideKernelThrows) {
  std::vector<BitVec> ker{BitVec::parse("100")};
  std::vector<BitVec> im{BitVec::parse("010")};
  EXPECT_THROW(Subquotient::make(3, ker, im), ImNotInKer);
}

TEST(Subquotient, FourThreeOneCosetsDistinct) {
  std::vector<BitVec> ker{BitVec::parse("1000"), BitVec::parse("0100"), BitVec::parse("0011")};
  std::vector<BitVec> im{BitVec::parse("1100")};
  auto sq = Subquotient::make(4, ker, im);
  ASSERT_EQ(sq.dim(), 2u);
  // every kernel vector reduces to coordinates; cosets of im are exactly 4
  std::set<std::string> classes;
  for (std::uint32_t s = 0; s < 8; ++s) {
    BitVec v(4);
    for (std::size_t i = 0; i < 3; ++i)
      if ((s >> i) & 1u) v ^= ker[i];
    auto c = sq.coords(v);
    ASSERT_TRUE(c.has_value());
    classes.insert(c->str());
    BitVec w = v;
    w ^= im[0];
    EXPECT_EQ(sq.coords(w)->str(), c->str());
  }
  EXPECT_EQ(classes.size(), 4u);
  EXPECT_FALSE(sq.coords(BitVec::parse("0001")).has_value());
}

TEST(Subquotient, LiftRoundTrip) {
  std::vector<BitVec> ker{BitVec::parse("10100"), BitVec::parse("01000"), BitVec::parse("00011")};
  std::vector<BitVec> im{BitVec::parse("11100")};
  auto sq = Subquotient::make(5, ker, im);
  for (std::uint32_t s = 0; s < (1u << sq.dim()); ++s) {
    BitVec c(sq.dim());
    for (std::size_t i = 0; i < sq.dim(); ++i)
      if ((s >> i) & 1u) c.set(i);
    EXPECT_EQ(sq.coords(sq.lift(c))->str(), c.str());
  }
}
