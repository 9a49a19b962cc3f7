#pragma once

#include <memory>
#include <string>
#include <vector>

#include "borelss/gf2.hpp"
#include "borelss/graded_algebra.hpp"

namespace borelss {

// An additive map g* on fiber cohomology determined by the images of a and b.
// It is an algebra automorphism only when the relations map to zero, which is
// recorded rather than assumed: the square obstruction inspects exactly the
// candidates for which it fails.
class ActionMatrix {
 public:
  ActionMatrix(const FiberPresentation& fiber, const std::string& image_a, const std::string& image_b,
               std::string name)
      : fiber_(fiber), alg_(std::make_shared<const GradedAlgebra>(fiber.algebra())), name_(std::move(name)) {
    const auto& gens = alg_->generators();
    img_a_ = alg_->normal_form(parse_polynomial(gens, alg_->order(), image_a));
    img_b_ = alg_->normal_form(parse_polynomial(gens, alg_->order(), image_b));
    degree_ok_ = homogeneous_of(img_a_, fiber.lambda()) && homogeneous_of(img_b_, fiber.n);
    multiplicative_ = alg_->power(img_a_, fiber.m + 1).empty() && alg_->power(img_b_, 2).empty();
    for (int l = 0; l <= fiber.top(); ++l) {
      const auto basis = alg_->monomial_basis(l);
      std::vector<BitVec> cols;
      for (const auto& mono : basis) {
        auto img = alg_->multiply(alg_->power(img_a_, mono[0]), alg_->power(img_b_, mono[1]));
        BitVec c(basis.size());
        for (const auto& t : img) {
          auto it = std::find(basis.begin(), basis.end(), t);
          if (it == basis.end()) {
            degree_ok_ = false;
            continue;
          }
          c.flip(static_cast<std::size_t>(it - basis.begin()));
        }
        cols.push_back(c);
      }
      matrices_.push_back(BinMatrix::from_columns(basis.size(), cols));
    }
  }

  const FiberPresentation& fiber() const { return fiber_; }
  const GradedAlgebra& algebra() const { return *alg_; }
  const std::string& name() const { return name_; }
  const Polynomial& image_a() const { return img_a_; }
  const Polynomial& image_b() const { return img_b_; }

  const BinMatrix& matrix(int l) const { return matrices_.at(static_cast<std::size_t>(l)); }
  BinMatrix tau(int l) const { return matrix(l) + BinMatrix::identity(matrix(l).rows()); }
  BinMatrix sigma(int l) const { return matrix(l) + BinMatrix::identity(matrix(l).rows()); }

  bool degree_preserving() const { return degree_ok_; }
  bool multiplicative() const { return multiplicative_; }
  bool involutive() const {
    for (const auto& m : matrices_)
      if (!(m * m == BinMatrix::identity(m.rows()))) return false;
    return true;
  }
  bool bijective() const {
    for (const auto& m : matrices_)
      if (rank(m) != m.rows()) return false;
    return true;
  }
  bool is_automorphism() const { return degree_ok_ && multiplicative_ && involutive() && bijective(); }
  bool is_identity() const {
    for (const auto& m : matrices_)
      if (!(m == BinMatrix::identity(m.rows()))) return false;
    return true;
  }

  Polynomial apply(const Polynomial& p) const {
    Polynomial acc;
    for (const auto& mono : p)
      acc = poly_add(alg_->order(), acc, alg_->multiply(alg_->power(img_a_, mono[0]), alg_->power(img_b_, mono[1])));
    return acc;
  }

 private:
  bool homogeneous_of(const Polynomial& p, int d) const {
    for (const auto& t : p)
      if (alg_->order().degree(t) != d) return false;
    return true;
  }

  FiberPresentation fiber_;
  std::shared_ptr<const GradedAlgebra> alg_;
  std::string name_;
  Polynomial img_a_;
  Polynomial img_b_;
  bool degree_ok_ = true;
  bool multiplicative_ = true;
  std::vector<BinMatrix> matrices_;
};

inline std::string a_power(int e) { return e == 0 ? "1" : e == 1 ? "a" : "a^" + std::to_string(e); }

inline std::vector<ActionMatrix> action_candidates(const FiberPresentation& fiber) {
  std::vector<ActionMatrix> out;
  out.emplace_back(fiber, "a", "b", "identity");
  const int lam = fiber.lambda(), n = fiber.n, m = fiber.m;
  if (n % lam == 0 && lam * m >= n) {
    std::string img = a_power(n / lam) + "+b";
    out.emplace_back(fiber, "a", img, "b -> " + img);
  }
  if (m % 4 == 3 && n == lam) out.emplace_back(fiber, "a+b", "b", "a -> a+b");
  return out;
}

// Per-k dimensions of the local-coefficient E2 column in row l:
// ker tau at k = 0, ker tau / im sigma for even k > 0, ker sigma / im tau for odd k > 0.
inline std::vector<int> local_e2_column(const ActionMatrix& act, int l, int k_max) {
  std::vector<int> out;
  if (l < 0 || l > act.fiber().top()) return std::vector<int>(static_cast<std::size_t>(k_max + 1), 0);
  BinMatrix tau = act.tau(l), sigma = act.sigma(l);
  auto ker_tau = kernel_basis(tau), ker_sigma = kernel_basis(sigma);
  auto im_tau = image_basis(tau), im_sigma = image_basis(sigma);
  for (int k = 0; k <= k_max; ++k) {
    if (k == 0)
      out.push_back(static_cast<int>(ker_tau.size()));
    else if (k % 2 == 0)
      out.push_back(static_cast<int>(Subquotient::make(tau.cols(), ker_tau, im_sigma).dim()));
    else
      out.push_back(static_cast<int>(Subquotient::make(tau.cols(), ker_sigma, im_tau).dim()));
  }
  return out;
}

struct ObstructionVerdict {
  bool inadmissible = false;
  std::vector<std::string> witnesses;
};

// Checks that a nontrivial action g*(a) = a, g*(b) = a^{n/lambda} + b cannot
// come from a free involution. Three independent arguments are tried:
//  - square: g*(b)^2 = a^{2n/lambda} is nonzero when lambda m >= 2n;
//  - cup: with lambda m = n + j, j = 0 mod 2 lambda, c = a^{j/2lambda} b has c g*(c) = a^m b != 0;
//  - skeleton: j = lambda mod 2 lambda, n/lambda odd: a permanent cocycle in a
//    row above the twisted band survives to arbitrarily high total degree.
inline ObstructionVerdict nontrivial_action_obstruction(const ActionMatrix& act) {
  const auto& f = act.fiber();
  const int lam = f.lambda(), n = f.n, m = f.m;
  const auto& alg = act.algebra();
  const auto& gens = alg.generators();
  auto poly = [&](const std::string& s) { return alg.normal_form(parse_polynomial(gens, alg.order(), s)); };
  auto mono = [&](int ea, int eb) {
    Polynomial p;
    if (ea <= m && eb <= 1) p.push_back({ea, eb});
    return p;
  };

  if (act.is_identity()) throw SkeletonInapplicable("identity action");
  if (n % lam != 0 || act.image_a() != poly("a") || act.image_b() != poly(a_power(n / lam) + "+b"))
    throw SkeletonInapplicable("action is not of the form g*(a)=a, g*(b)=a^{n/lambda}+b");

  const int N = n / lam;
  const int j = lam * m - n;
  ObstructionVerdict v;

  if (lam * m >= 2 * n) {
    auto sq = alg.multiply(act.image_b(), act.image_b());
    if (!sq.empty() && sq == mono(2 * N, 0))
      v.witnesses.push_back("g*(b^2) = " + alg.render(sq) + " != 0");
  }

  if (j >= 0 && j % (2 * lam) == 0) {
    auto c = mono(j / (2 * lam), 1);
    auto prod = alg.multiply(c, act.apply(c));
    if (!prod.empty() && prod == mono(m, 1))
      v.witnesses.push_back("c*g*(c) = " + alg.render(prod) + " != 0 for c = " + alg.render(c));
  }

  if (j > 0 && j < n && j % (2 * lam) == lam && N % 2 == 1 && N >= 3) {
    const int top = f.top();
    bool ok = true;
    std::vector<std::string> notes;
    // (a) twisted band n, n+lambda, ..., n+j: Z2 at k=0 and nothing at k>0
    for (int l = n; l <= n + j; l += lam) {
      auto col = local_e2_column(act, l, 4);
      ok = ok && col[0] == 1 && col[1] == 0 && col[2] == 0 && col[3] == 0 && col[4] == 0;
    }
    // (b) designated class a^{(n+j-lambda)/lambda} b, reached as c g*(c)
    const int lstar = 2 * n + j - lam;
    const int ea = (n + j - lam) / lam;
    auto c = mono((j - lam) / (2 * lam), 1);
    auto cg = alg.multiply(c, act.apply(c));
    ok = ok && !cg.empty() && cg == mono(ea, 1);
    auto row_star = local_e2_column(act, lstar, 4);
    ok = ok && row_star[0] == 1 && row_star[4] == 1;
    // incoming differentials: rows strictly between lstar and top are empty,
    // rows above top do not exist, and the top row is a product whose factors
    // both have vanishing d_{lambda+1}.
    for (int s = lstar + 1; s < top; ++s) ok = ok && alg.monomial_basis(s).empty();
    auto top_class = alg.multiply(mono((j + lam) / lam, 1), mono(N - 1, 0));
    ok = ok && top_class == mono(m, 1);
    auto band_end = local_e2_column(act, n + j, 2);
    ok = ok && band_end[1] == 0 && band_end[2] == 0;
    ok = ok && (N - 1) % 2 == 0;
    if (ok)
      v.witnesses.push_back("permanent cocycle t^k*" + alg.render(cg) + " in row " + std::to_string(lstar) +
                            " survives in total degree above " + std::to_string(top));
  }

  if (v.witnesses.empty())
    throw SkeletonInapplicable("no argument applies for lambda=" + std::to_string(lam) + ", m=" +
                               std::to_string(m) + ", n=" + std::to_string(n));
  v.inadmissible = true;
  return v;
}

// True when some nontrivial candidate action cannot be ruled out, so a run
// must be backed by an explicit assumption flag.
inline bool needs_action_assumption(const FiberPresentation& fiber) {
  for (const auto& act : action_candidates(fiber)) {
    if (act.is_identity()) continue;
    try {
      if (!nontrivial_action_obstruction(act).inadmissible) return true;
    } catch (const SkeletonInapplicable&) {
      return true;
    }
  }
  return false;
}

// The hypotheses attached to the classification statements.
inline bool exceptional_case(const FiberPresentation& fiber) {
  if (fiber.n != 4) return false;
  switch (fiber.field) {
    case Field::R: return fiber.m == 5 || fiber.m == 7;
    case Field::C: return fiber.m == 3;
    case Field::H: return fiber.m % 4 == 3;
  }
  return false;
}

}  // namespace borelss
