#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "borelss/errors.hpp"

namespace borelss {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  static BitVec unit(std::size_t n, std::size_t i) {
    BitVec v(n);
    v.set(i);
    return v;
  }

  // "0110" -> bits 1 and 2 set
  static BitVec parse(const std::string& s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] == '1') v.set(i);
    return v;
  }

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool on = true) {
    if (on)
      w_[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
      w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  bool any() const {
    return std::any_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x != 0; });
  }
  bool none() const { return !any(); }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }

  bool dot(const BitVec& o) const {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
    return std::popcount(acc) & 1;
  }

  // index of the lowest set bit, or size() when zero
  std::size_t first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return (i << 6) + static_cast<std::size_t>(std::countr_zero(w_[i]));
    return n_;
  }

  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t x = w_[i];
      while (x) {
        out.push_back((i << 6) + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
    return out;
  }

  std::string str() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  bool operator==(const BitVec&) const = default;
  // lexicographic on the bit string
  std::strong_ordering operator<=>(const BitVec& o) const { return str() <=> o.str(); }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

class BinMatrix {
 public:
  BinMatrix() = default;
  BinMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

  static BinMatrix identity(std::size_t n) {
    BinMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BinMatrix from_strings(const std::vector<std::string>& rows) {
    BinMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) m.rows_[i] = BitVec::parse(rows[i]);
    return m;
  }

  // columns given as vectors of length `rows`
  static BinMatrix from_columns(std::size_t rows, const std::vector<BitVec>& cols) {
    BinMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (auto i : cols[j].ones()) m.set(i, j);
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool on = true) { rows_[i].set(j, on); }
  const BitVec& row(std::size_t i) const { return rows_[i]; }

  BitVec apply(const BitVec& v) const {
    BitVec out(rows());
    for (std::size_t i = 0; i < rows(); ++i)
      if (rows_[i].dot(v)) out.set(i);
    return out;
  }

  BinMatrix operator*(const BinMatrix& o) const {
    BinMatrix out(rows(), o.cols());
    for (std::size_t i = 0; i < rows(); ++i)
      for (auto k : rows_[i].ones()) out.rows_[i] ^= o.rows_[k];
    return out;
  }

  BinMatrix operator+(const BinMatrix& o) const {
    BinMatrix out = *this;
    for (std::size_t i = 0; i < rows(); ++i) out.rows_[i] ^= o.rows_[i];
    return out;
  }

  BinMatrix transposed() const {
    BinMatrix out(cols(), rows());
    for (std::size_t i = 0; i < rows(); ++i)
      for (auto j : rows_[i].ones()) out.set(j, i);
    return out;
  }

  bool is_zero() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const BitVec& r) { return r.none(); });
  }

  bool operator==(const BinMatrix&) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVec> rows_;
};

// Incremental row echelon form. Each row is reduced against all earlier rows,
// so reducing a vector by walking rows in insertion order is exact. A payload
// vector rides along with every row to record linear combinations.
class Echelon {
 public:
  Echelon() = default;
  explicit Echelon(std::size_t dim, std::size_t payload_dim = 0) : dim_(dim), pdim_(payload_dim) {}

  struct Reduced {
    BitVec rest;
    BitVec payload;
  };

  Reduced reduce(BitVec v, BitVec p = {}) const {
    if (p.size() != pdim_) p = BitVec(pdim_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (v.get(pivots_[i])) {
        v ^= rows_[i];
        p ^= payloads_[i];
      }
    }
    return {std::move(v), std::move(p)};
  }

  // Returns the residual payload when v is already in the span, nullopt when inserted.
  std::optional<BitVec> insert(const BitVec& v, BitVec p = {}) {
    auto r = reduce(v, std::move(p));
    if (r.rest.none()) return std::move(r.payload);
    pivots_.push_back(r.rest.first());
    rows_.push_back(std::move(r.rest));
    payloads_.push_back(std::move(r.payload));
    return std::nullopt;
  }

  bool contains(const BitVec& v) const { return reduce(v).rest.none(); }
  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<BitVec>& rows() const { return rows_; }
  const std::vector<BitVec>& payloads() const { return payloads_; }

 private:
  std::size_t dim_ = 0;
  std::size_t pdim_ = 0;
  std::vector<BitVec> rows_;
  std::vector<BitVec> payloads_;
  std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const BinMatrix& m) {
  Echelon e(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) e.insert(m.row(i));
  return e.rank();
}

inline std::vector<BitVec> kernel_basis(const BinMatrix& m) {
  // Column operations tracked in the payload: a column that reduces to zero
  // hands back the combination of original columns summing to zero.
  std::size_t n = m.cols();
  BinMatrix t = m.transposed();
  Echelon e(m.rows(), n);
  std::vector<BitVec> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (auto residual = e.insert(t.row(j), BitVec::unit(n, j))) out.push_back(std::move(*residual));
  }
  return out;
}

inline std::vector<BitVec> image_basis(const BinMatrix& m) {
  BinMatrix t = m.transposed();
  Echelon e(m.rows());
  std::vector<BitVec> out;
  for (std::size_t j = 0; j < t.rows(); ++j)
    if (!e.insert(t.row(j))) out.push_back(t.row(j));
  return out;
}

// Z/B for B ⊆ Z ⊆ F2^ambient, with chosen representatives of a basis of Z/B.
class Subquotient {
 public:
  Subquotient() = default;

  static Subquotient make(std::size_t ambient, const std::vector<BitVec>& cycles,
                          const std::vector<BitVec>& boundaries) {
    Subquotient q;
    q.ambient_ = ambient;
    q.z_ = Echelon(ambient);
    q.b_ = Echelon(ambient);
    for (const auto& v : cycles) q.z_.insert(v);
    for (const auto& v : boundaries) {
      if (!q.z_.contains(v)) throw ImNotInKer("image vector " + v.str() + " not in kernel");
      q.b_.insert(v);
    }
    std::vector<BitVec> reps;
    Echelon combined(ambient);
    for (const auto& row : q.b_.rows()) combined.insert(row);
    for (const auto& row : q.z_.rows()) {
      auto r = combined.reduce(row);
      if (r.rest.none()) continue;
      combined.insert(r.rest);
      reps.push_back(std::move(r.rest));
    }
    q.reps_ = std::move(reps);
    q.combined_ = Echelon(ambient, q.reps_.size());
    for (const auto& row : q.b_.rows()) q.combined_.insert(row);
    for (std::size_t i = 0; i < q.reps_.size(); ++i) q.combined_.insert(q.reps_[i], BitVec::unit(q.reps_.size(), i));
    return q;
  }

  static Subquotient full(std::size_t ambient) {
    std::vector<BitVec> all;
    for (std::size_t i = 0; i < ambient; ++i) all.push_back(BitVec::unit(ambient, i));
    return make(ambient, all, {});
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return reps_.size(); }
  const BitVec& rep(std::size_t i) const { return reps_[i]; }
  const std::vector<BitVec>& reps() const { return reps_; }
  const Echelon& cycles() const { return z_; }
  const Echelon& boundaries() const { return b_; }

  BitVec lift(const BitVec& coords) const {
    BitVec v(ambient_);
    for (auto i : coords.ones()) v ^= reps_[i];
    return v;
  }

  std::optional<BitVec> coords(const BitVec& v) const {
    auto r = combined_.reduce(v);
    if (r.rest.any()) return std::nullopt;
    return std::move(r.payload);
  }

 private:
  std::size_t ambient_ = 0;
  Echelon z_;
  Echelon b_;
  Echelon combined_;
  std::vector<BitVec> reps_;
};

struct LabeledSpace {
  std::vector<std::string> labels;
  std::size_t dim() const { return labels.size(); }
};

struct LabeledSubquotient {
  LabeledSpace space;
  Subquotient data;
};

inline std::string render_combination(const LabeledSpace& ambient, const BitVec& v) {
  std::string out;
  for (auto i : v.ones()) {
    if (!out.empty()) out += '+';
    out += ambient.labels[i];
  }
  return out.empty() ? "0" : out;
}

inline LabeledSubquotient subquotient(const LabeledSpace& ambient, const std::vector<BitVec>& ker,
                                      const std::vector<BitVec>& im) {
  LabeledSubquotient out{{}, Subquotient::make(ambient.dim(), ker, im)};
  for (const auto& r : out.data.reps()) out.space.labels.push_back(render_combination(ambient, r));
  return out;
}

}  // namespace borelss
