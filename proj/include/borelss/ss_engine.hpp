#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "borelss/gf2.hpp"
#include "borelss/graded_algebra.hpp"

namespace borelss {

struct Bidegree {
  int k = 0;
  int l = 0;
  auto operator<=>(const Bidegree&) const = default;
  Bidegree operator+(const Bidegree& o) const { return {k + o.k, l + o.l}; }
  Bidegree operator-(const Bidegree& o) const { return {k - o.k, l - o.l}; }
};

inline Bidegree shift_of(int r) { return {r, 1 - r}; }
inline int r_max(const FiberPresentation& f) { return f.top() + 1; }
inline int k_window(const FiberPresentation& f) { return 2 * (f.top() + 2); }

// F2[t] tensor the fiber algebra; E2^{k,l} has basis t^k (x) (standard monomials of degree l).
class E2Model {
 public:
  explicit E2Model(FiberPresentation fiber) : fiber_(fiber), alg_(fiber.algebra()) {
    top_ = fiber_.top();
    for (int l = 0; l <= top_; ++l) basis_.push_back(alg_.monomial_basis(l));
    table_.resize(static_cast<std::size_t>(top_ + 1));
    for (int l1 = 0; l1 <= top_; ++l1) {
      table_[l1].resize(static_cast<std::size_t>(top_ + 1 - l1));
      for (int l2 = 0; l1 + l2 <= top_; ++l2) {
        auto& cell = table_[l1][l2];
        for (const auto& u : basis_[l1])
          for (const auto& v : basis_[l2]) cell.push_back(coords(l1 + l2, alg_.normal_form(mono_mul(u, v))));
      }
    }
  }

  const FiberPresentation& fiber() const { return fiber_; }
  const GradedAlgebra& algebra() const { return alg_; }
  int top() const { return top_; }

  std::size_t fiber_dim(int l) const { return l < 0 || l > top_ ? 0 : basis_[l].size(); }
  const std::vector<Monomial>& fiber_basis(int l) const { return basis_.at(static_cast<std::size_t>(l)); }

  BitVec coords(int l, const Polynomial& p) const {
    BitVec v(fiber_dim(l));
    for (const auto& t : p) {
      const auto& b = basis_.at(static_cast<std::size_t>(l));
      auto it = std::find(b.begin(), b.end(), t);
      if (it == b.end()) throw std::logic_error("monomial not in standard basis");
      v.flip(static_cast<std::size_t>(it - b.begin()));
    }
    return v;
  }

  BitVec multiply(int l1, const BitVec& u, int l2, const BitVec& v) const {
    int l = l1 + l2;
    BitVec out(fiber_dim(l));
    if (out.size() == 0 || u.size() == 0 || v.size() == 0) return out;
    const auto& cell = table_[l1][l2];
    std::size_t w = fiber_dim(l2);
    for (auto i : u.ones())
      for (auto j : v.ones()) out ^= cell[i * w + j];
    return out;
  }

  std::string label(int k, int l, std::size_t i) const {
    std::string fib = render_monomial(alg_.generators(), basis_.at(static_cast<std::size_t>(l)).at(i));
    if (k == 0) return fib;
    std::string base = k == 1 ? "t" : "t^" + std::to_string(k);
    return fib == "1" ? base : base + "*" + fib;
  }

  std::string render(int k, int l, const BitVec& v) const {
    std::string out;
    for (auto i : v.ones()) {
      if (!out.empty()) out += '+';
      out += label(k, l, i);
    }
    return out.empty() ? "0" : out;
  }

 private:
  FiberPresentation fiber_;
  GradedAlgebra alg_;
  int top_ = 0;
  std::vector<std::vector<Monomial>> basis_;
  std::vector<std::vector<std::vector<BitVec>>> table_;
};

struct PageGenerator {
  Bidegree deg;
  BitVec coords;
  std::string label;
};

// E_r as subquotients Z_r/B_r of E2, trusted for 0 <= k <= k_valid.
class Page {
 public:
  static Page e2(std::shared_ptr<const E2Model> model, int k_max) {
    Page p;
    p.model_ = std::move(model);
    p.r_ = 2;
    p.k_valid_ = k_max;
    int top = p.model_->top();
    p.spaces_.reserve(static_cast<std::size_t>((k_max + 1) * (top + 1)));
    for (int k = 0; k <= k_max; ++k)
      for (int l = 0; l <= top; ++l) p.spaces_.push_back(Subquotient::full(p.model_->fiber_dim(l)));
    return p;
  }

  int r() const { return r_; }
  int k_valid() const { return k_valid_; }
  int top() const { return model_->top(); }
  const E2Model& model() const { return *model_; }
  const std::shared_ptr<const E2Model>& model_ptr() const { return model_; }

  bool in_support(Bidegree b) const { return b.k >= 0 && b.l >= 0 && b.l <= top(); }

  const Subquotient& space(Bidegree b) const {
    if (!in_support(b)) throw std::out_of_range("bidegree outside page support");
    check_window(b);
    return spaces_[index(b)];
  }

  std::size_t dim(Bidegree b) const {
    if (!in_support(b)) return 0;
    check_window(b);
    return spaces_[index(b)].dim();
  }

  BitVec zero(Bidegree b) const { return BitVec(dim(b)); }

  BitVec lift(Bidegree b, const BitVec& coords) const { return space(b).lift(coords); }

  BitVec multiply(Bidegree p, const BitVec& u, Bidegree q, const BitVec& v) const {
    Bidegree s = p + q;
    BitVec out = zero(s);
    if (out.size() == 0 || u.none() || v.none()) return out;
    BitVec prod = model_->multiply(p.l, lift(p, u), q.l, lift(q, v));
    auto c = space(s).coords(prod);
    if (!c) throw std::logic_error("product of cycles is not a cycle");
    return *c;
  }

  BitVec times_t(Bidegree p, const BitVec& u) const {
    return multiply(p, u, {1, 0}, BitVec::unit(1, 0));
  }

  std::string label(Bidegree b, std::size_t i) const {
    return model_->render(b.k, b.l, space(b).rep(i));
  }

  std::string render(Bidegree b, const BitVec& coords) const {
    if (coords.none()) return "0";
    return model_->render(b.k, b.l, lift(b, coords));
  }

  Page relabeled(int r) const {
    Page p = *this;
    p.r_ = r;
    return p;
  }

  // Minimal multiplicative generators, found bidegree by bidegree in increasing
  // total degree as a complement to the decomposables. The unit is excluded.
  std::vector<PageGenerator> generators() const {
    std::vector<PageGenerator> gens;
    int top = this->top();
    for (int q = 1; q <= k_valid_ + top; ++q) {
      for (int k = std::max(0, q - top); k <= std::min(q, k_valid_); ++k) {
        Bidegree b{k, q - k};
        std::size_t d = dim(b);
        if (d == 0) continue;
        Echelon dec(d);
        for (const auto& g : gens) {
          Bidegree rest = b - g.deg;
          if (rest.k < 0 || rest.l < 0) continue;
          std::size_t rd = dim(rest);
          for (std::size_t i = 0; i < rd; ++i) dec.insert(multiply(g.deg, g.coords, rest, BitVec::unit(rd, i)));
          if (dec.rank() == d) break;
        }
        for (std::size_t i = 0; i < d && dec.rank() < d; ++i) {
          auto e = BitVec::unit(d, i);
          if (!dec.insert(e)) gens.push_back({b, e, render(b, e)});
        }
      }
    }
    return gens;
  }

 private:
  friend class PageBuilder;
  Page() = default;

  void check_window(Bidegree b) const {
    if (b.k > k_valid_)
      throw WindowExhausted("column " + std::to_string(b.k) + " beyond trusted window " + std::to_string(k_valid_));
  }
  std::size_t index(Bidegree b) const { return static_cast<std::size_t>(b.k * (top() + 1) + b.l); }

  std::shared_ptr<const E2Model> model_;
  int r_ = 2;
  int k_valid_ = 0;
  std::vector<Subquotient> spaces_;
};

class PageBuilder {
 public:
  static Page make(const Page& like, int r, int k_valid, std::vector<Subquotient> spaces) {
    Page p;
    p.model_ = like.model_;
    p.r_ = r;
    p.k_valid_ = k_valid;
    p.spaces_ = std::move(spaces);
    return p;
  }
};

// d_r on a page, stored as images of basis vectors for sources with k <= k_limit.
class Differential {
 public:
  Differential() = default;
  Differential(int r, int k_limit, int top) : r_(r), k_limit_(k_limit), top_(top) {
    columns_.resize(static_cast<std::size_t>((k_limit + 1) * (top + 1)));
  }

  int r() const { return r_; }
  int k_limit() const { return k_limit_; }

  bool defined_at(Bidegree b) const { return b.k >= 0 && b.k <= k_limit_ && b.l >= 0 && b.l <= top_; }

  const std::vector<BitVec>& columns(Bidegree b) const { return columns_.at(index(b)); }
  void set_columns(Bidegree b, std::vector<BitVec> cols) { columns_.at(index(b)) = std::move(cols); }

  BitVec apply(Bidegree src, const BitVec& v, std::size_t target_dim) const {
    BitVec out(target_dim);
    if (!(src.l >= 0 && src.l <= top_ && src.k >= 0)) return out;
    if (src.k > k_limit_) throw WindowExhausted("differential undefined beyond its window");
    const auto& cols = columns_[index(src)];
    for (auto i : v.ones()) out ^= cols[i];
    return out;
  }

  bool is_zero() const {
    for (const auto& cols : columns_)
      for (const auto& c : cols)
        if (c.any()) return false;
    return true;
  }

 private:
  std::size_t index(Bidegree b) const { return static_cast<std::size_t>(b.k * (top_ + 1) + b.l); }

  int r_ = 0;
  int k_limit_ = -1;
  int top_ = 0;
  std::vector<std::vector<BitVec>> columns_;
};

inline Page build_e2(const FiberPresentation& fiber, int k_max) {
  return Page::e2(std::make_shared<const E2Model>(fiber), k_max);
}

// Extends generator values to all of E_r by the Leibniz rule, checking that
// the result is well defined: every linear relation among monomials in the
// generators must also hold among their derivatives.
inline Differential extend_leibniz(const Page& page, const std::vector<PageGenerator>& gens,
                                   const std::vector<BitVec>& values) {
  if (gens.size() != values.size()) throw std::invalid_argument("one value per generator required");
  const int r = page.r();
  const Bidegree sh = shift_of(r);
  const int k_src = page.k_valid() - r;
  if (k_src < 0) throw WindowExhausted("window too small for d_" + std::to_string(r));
  const int top = page.top();
  const int l_src = top + r - 1;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (values[i].size() != page.dim(gens[i].deg + sh))
      throw std::invalid_argument("generator value has wrong dimension");

  struct Entry {
    BitVec val;
    BitVec dval;
    std::vector<int> exps;
  };
  const int width = l_src + 1;
  std::vector<std::vector<Entry>> cells(static_cast<std::size_t>((k_src + 1) * width));
  auto cell = [&](Bidegree b) -> std::vector<Entry>& { return cells[static_cast<std::size_t>(b.k * width + b.l)]; };

  std::vector<int> exps(gens.size(), 0);
  auto dfs = [&](auto&& self, std::size_t i, Bidegree b, const BitVec& val, const BitVec& dval) -> void {
    if (i == gens.size()) {
      cell(b).push_back({val, dval, exps});
      return;
    }
    BitVec v = val, dv = dval;
    Bidegree cur = b;
    const auto& g = gens[i];
    for (int e = 0;; ++e) {
      exps[i] = e;
      self(self, i + 1, cur, v, dv);
      Bidegree next = cur + g.deg;
      if (next.k > k_src || next.l > l_src) break;
      BitVec nv = page.multiply(cur, v, g.deg, g.coords);
      BitVec ndv = page.multiply(cur + sh, dv, g.deg, g.coords) ^ page.multiply(cur, v, g.deg + sh, values[i]);
      v = std::move(nv);
      dv = std::move(ndv);
      cur = next;
    }
    exps[i] = 0;
  };
  dfs(dfs, 0, {0, 0}, BitVec::unit(1, 0), page.zero(sh));

  Differential d(r, k_src, top);
  for (int k = 0; k <= k_src; ++k) {
    for (int l = 0; l <= l_src; ++l) {
      Bidegree b{k, l};
      std::size_t sd = page.dim(b);
      std::size_t td = page.dim(b + sh);
      Echelon ech(sd, td);
      for (const auto& e : cell(b)) {
        auto residual = ech.insert(e.val, e.dval);
        if (residual && residual->any()) {
          std::string mono;
          for (std::size_t i = 0; i < gens.size(); ++i) {
            if (!e.exps[i]) continue;
            if (!mono.empty()) mono += '*';
            mono += "(" + gens[i].label + ")";
            if (e.exps[i] > 1) mono += "^" + std::to_string(e.exps[i]);
          }
          throw NotADerivation("d_" + std::to_string(r) + " not well defined at (" + std::to_string(k) + "," +
                               std::to_string(l) + "): relation through " + (mono.empty() ? "1" : mono) +
                               " has derivative " + page.render(b + sh, *residual));
        }
      }
      if (l > top) continue;
      if (ech.rank() != sd) throw std::logic_error("page generators do not span a bidegree");
      std::vector<BitVec> cols;
      for (std::size_t j = 0; j < sd; ++j) {
        auto red = ech.reduce(BitVec::unit(sd, j), BitVec(td));
        cols.push_back(std::move(red.payload));
      }
      d.set_columns(b, std::move(cols));
    }
  }
  return d;
}

inline void check_d_squared(const Page& page, const Differential& d) {
  const Bidegree sh = shift_of(d.r());
  for (int k = 0; k + d.r() <= d.k_limit(); ++k) {
    for (int l = 0; l <= page.top(); ++l) {
      Bidegree b{k, l};
      std::size_t sd = page.dim(b);
      for (std::size_t j = 0; j < sd; ++j) {
        BitVec once = d.apply(b, BitVec::unit(sd, j), page.dim(b + sh));
        BitVec twice = d.apply(b + sh, once, page.dim(b + sh + sh));
        if (twice.any())
          throw DSquareNonzero("d_" + std::to_string(d.r()) + "^2 of " + page.label(b, j) + " is " +
                               page.render(b + sh + sh, twice));
      }
    }
  }
}

inline Page turn_page(const Page& page, const Differential& d) {
  if (d.r() != page.r()) throw std::invalid_argument("differential index does not match page");
  check_d_squared(page, d);
  if (d.is_zero()) return page.relabeled(page.r() + 1);
  const int r = page.r();
  const Bidegree sh = shift_of(r);
  const int k_new = d.k_limit();
  std::vector<Subquotient> spaces;
  spaces.reserve(static_cast<std::size_t>((k_new + 1) * (page.top() + 1)));
  for (int k = 0; k <= k_new; ++k) {
    for (int l = 0; l <= page.top(); ++l) {
      Bidegree b{k, l};
      const auto& sq = page.space(b);
      std::vector<BitVec> z = sq.boundaries().rows();
      std::vector<BitVec> bd = sq.boundaries().rows();
      std::size_t td = page.dim(b + sh);
      const auto& out_cols = d.columns(b);
      BinMatrix dm = BinMatrix::from_columns(td, out_cols);
      if (sq.dim() > 0) {
        if (td == 0) {
          for (const auto& rep : sq.reps()) z.push_back(rep);
        } else {
          for (const auto& v : kernel_basis(dm)) z.push_back(sq.lift(v));
        }
      }
      Bidegree src = b - sh;
      if (src.k >= 0 && src.l <= page.top() && page.dim(src) > 0)
        for (const auto& c : d.columns(src)) bd.push_back(sq.lift(c));
      spaces.push_back(Subquotient::make(sq.ambient(), z, bd));
    }
  }
  return PageBuilder::make(page, r + 1, k_new, std::move(spaces));
}


// Smallest r' in [page.r(), r_max] at which some generator has a nonzero
// target space; nullopt when the page is terminal.
inline std::optional<int> next_fork(const Page& page, const std::vector<PageGenerator>& gens) {
  const int rm = r_max(page.model().fiber());
  for (int r = page.r(); r <= rm; ++r)
    for (const auto& g : gens)
      if (page.dim(g.deg + shift_of(r)) > 0) return r;
  return std::nullopt;
}

inline bool is_terminal(const Page& page) { return !next_fork(page, page.generators()); }

struct TotResult {
  PoincareSeries series;
  bool vanishing_ok = true;  // zero in every total degree above the fiber top
};

inline TotResult tot_series(const Page& page, int window_end) {
  TotResult out;
  for (int q = 0; q <= window_end; ++q) {
    int d = 0;
    for (int k = std::max(0, q - page.top()); k <= q; ++k) d += static_cast<int>(page.dim({k, q - k}));
    out.series.coefficients.push_back(d);
    if (q > page.top() && d > 0) out.vanishing_ok = false;
  }
  out.series.trim();
  return out;
}

// True when some class above the fiber top keeps a nonzero t-multiple all the
// way to the window end.
inline bool has_infinite_tower(const Page& page, int window_end) {
  for (int k = 0; k <= window_end; ++k) {
    for (int l = 0; l <= page.top(); ++l) {
      if (k + l <= page.top()) continue;
      std::size_t d = page.dim({k, l});
      for (std::size_t i = 0; i < d; ++i) {
        BitVec v = BitVec::unit(d, i);
        Bidegree b{k, l};
        while (b.k < window_end && v.any()) {
          v = page.times_t(b, v);
          b.k += 1;
        }
        if (v.any()) return true;
      }
    }
  }
  return false;
}

// `E <r> <k> <l> <dim> [labels...]` for every nonzero bidegree with k <= k_max.
inline std::string dump_page(const Page& page, int k_max, bool with_labels) {
  std::ostringstream out;
  for (int k = 0; k <= k_max; ++k) {
    for (int l = 0; l <= page.top(); ++l) {
      std::size_t d = page.dim({k, l});
      if (d == 0) continue;
      out << "E " << page.r() << ' ' << k << ' ' << l << ' ' << d;
      if (with_labels)
        for (std::size_t i = 0; i < d; ++i) out << ' ' << page.label({k, l}, i);
      out << '\n';
    }
  }
  return out.str();
}

struct Violation {
  std::string what;
};

// d(s^2) = 0 for every basis class s whose square lies in the window.
inline std::vector<Violation> check_square_rule(const Page& page, const Differential& d) {
  std::vector<Violation> out;
  const Bidegree sh = shift_of(d.r());
  for (int k = 0; 2 * k <= d.k_limit(); ++k) {
    for (int l = 0; l <= page.top(); ++l) {
      Bidegree b{k, l}, b2{2 * k, 2 * l};
      std::size_t sd = page.dim(b);
      for (std::size_t i = 0; i < sd; ++i) {
        auto s = BitVec::unit(sd, i);
        auto sq = page.multiply(b, s, b, s);
        if (d.apply(b2, sq, page.dim(b2 + sh)).any())
          out.push_back({"d(s^2) != 0 for s = " + page.label(b, i)});
      }
    }
  }
  return out;
}

inline std::vector<Violation> check_t_linearity(const Page& page, const Differential& d) {
  std::vector<Violation> out;
  const Bidegree sh = shift_of(d.r());
  for (int k = 0; k + 1 <= d.k_limit(); ++k) {
    for (int l = 0; l <= page.top(); ++l) {
      Bidegree b{k, l}, bt{k + 1, l};
      std::size_t sd = page.dim(b);
      for (std::size_t i = 0; i < sd; ++i) {
        auto s = BitVec::unit(sd, i);
        auto lhs = d.apply(bt, page.times_t(b, s), page.dim(bt + sh));
        auto rhs = page.times_t(b + sh, d.apply(b, s, page.dim(b + sh)));
        if (lhs != rhs) out.push_back({"d(t*s) != t*d(s) for s = " + page.label(b, i)});
      }
    }
  }
  return out;
}

inline std::vector<Violation> check_dim_monotone(const Page& before, const Page& after) {
  std::vector<Violation> out;
  int kmax = std::min(before.k_valid(), after.k_valid());
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= after.top(); ++l)
      if (after.dim({k, l}) > before.dim({k, l}))
        out.push_back({"dimension grew at (" + std::to_string(k) + "," + std::to_string(l) + ")"});
  return out;
}

// Bottom row only loses classes to images; the left column only to kernels.
inline std::vector<Violation> check_edge_contract(const Page& page) {
  std::vector<Violation> out;
  for (int k = 0; k <= page.k_valid(); ++k) {
    const auto& sq = page.space({k, 0});
    if (sq.cycles().rank() != sq.ambient()) out.push_back({"bottom row class not a permanent cycle"});
  }
  for (int l = 0; l <= page.top(); ++l)
    if (page.space({0, l}).boundaries().rank() != 0) out.push_back({"left column hit by a differential"});
  return out;
}

}  // namespace borelss
