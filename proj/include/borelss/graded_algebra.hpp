#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "borelss/errors.hpp"

namespace borelss {

using Monomial = std::vector<int>;  // exponent per generator, in declaration order

struct Generator {
  std::string name;
  int degree = 1;
};

// Graded order: total weighted degree, then lexicographic with later-declared
// generators greater.
struct MonomialOrder {
  std::vector<int> degrees;

  int degree(const Monomial& m) const {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * degrees[i];
    return d;
  }

  int compare(const Monomial& a, const Monomial& b) const {
    int da = degree(a), db = degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }

  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};

// Sum of distinct monomials, sorted by decreasing order (leading term first).
using Polynomial = std::vector<Monomial>;

inline bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline Monomial mono_div(const Monomial& a, const Monomial& b) {
  Monomial c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline Monomial mono_lcm(const Monomial& a, const Monomial& b) {
  Monomial c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::max(a[i], b[i]);
  return c;
}

inline bool coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

inline Polynomial poly_add(const MonomialOrder& ord, const Polynomial& p, const Polynomial& q) {
  Polynomial out;
  out.reserve(p.size() + q.size());
  std::size_t i = 0, j = 0;
  while (i < p.size() || j < q.size()) {
    if (j == q.size()) {
      out.push_back(p[i++]);
    } else if (i == p.size()) {
      out.push_back(q[j++]);
    } else {
      int c = ord.compare(p[i], q[j]);
      if (c > 0) {
        out.push_back(p[i++]);
      } else if (c < 0) {
        out.push_back(q[j++]);
      } else {
        ++i;
        ++j;
      }
    }
  }
  return out;
}

inline Polynomial poly_shift(const Polynomial& p, const Monomial& m) {
  Polynomial out;
  out.reserve(p.size());
  for (const auto& t : p) out.push_back(mono_mul(t, m));
  return out;
}

inline Polynomial poly_mul(const MonomialOrder& ord, const Polynomial& p, const Polynomial& q) {
  Polynomial acc;
  for (const auto& t : q) acc = poly_add(ord, acc, poly_shift(p, t));
  return acc;
}

inline Polynomial make_polynomial(const MonomialOrder& ord, std::vector<Monomial> terms) {
  std::sort(terms.begin(), terms.end(), [&](const Monomial& a, const Monomial& b) { return ord.greater(a, b); });
  Polynomial out;
  for (auto& t : terms) {
    if (!out.empty() && out.back() == t)
      out.pop_back();
    else
      out.push_back(std::move(t));
  }
  return out;
}

struct AlgebraPresentation {
  std::vector<Generator> generators;
  std::vector<Polynomial> relations;
  int degree_cap = 0;

  MonomialOrder order() const {
    MonomialOrder o;
    for (const auto& g : generators) o.degrees.push_back(g.degree);
    return o;
  }

  int generator_index(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i].name == name) return static_cast<int>(i);
    return -1;
  }

  void validate() const {
    auto ord = order();
    for (const auto& g : generators)
      if (g.degree < 1) throw InvalidPresentation("generator " + g.name + " has degree < 1");
    for (const auto& r : relations) {
      for (const auto& t : r) {
        if (t.size() != generators.size()) throw InvalidPresentation("relation arity mismatch");
        if (ord.degree(t) != ord.degree(r.front())) throw InvalidPresentation("relation not homogeneous");
      }
      if (!r.empty() && ord.degree(r.front()) > degree_cap)
        throw InvalidPresentation("degree_cap below a relation degree");
    }
  }
};

inline std::string render_monomial(const std::vector<Generator>& gens, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += gens[i].name;
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

inline std::string render_polynomial(const std::vector<Generator>& gens, const Polynomial& p) {
  if (p.empty()) return "0";
  std::string out;
  for (const auto& t : p) {
    if (!out.empty()) out += '+';
    out += render_monomial(gens, t);
  }
  return out;
}

namespace detail {

inline std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline int parse_int(const std::string& s, const std::string& ctx) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError("expected integer in '" + ctx + "'");
  return std::stoi(s);
}

}  // namespace detail

inline Monomial parse_monomial(const std::vector<Generator>& gens, const std::string& text) {
  std::string s = detail::strip_spaces(text);
  Monomial m(gens.size(), 0);
  if (s == "1") return m;
  for (const auto& factor : detail::split(s, '*')) {
    auto caret = factor.find('^');
    std::string name = factor.substr(0, caret);
    int e = caret == std::string::npos ? 1 : detail::parse_int(factor.substr(caret + 1), text);
    auto it = std::find_if(gens.begin(), gens.end(), [&](const Generator& g) { return g.name == name; });
    if (it == gens.end()) throw ParseError("unknown generator '" + name + "' in '" + text + "'");
    m[static_cast<std::size_t>(it - gens.begin())] += e;
  }
  return m;
}

inline Polynomial parse_polynomial(const std::vector<Generator>& gens, const MonomialOrder& ord,
                                   const std::string& text) {
  std::string s = detail::strip_spaces(text);
  if (s.empty()) throw ParseError("empty polynomial");
  if (s == "0") return {};
  std::vector<Monomial> terms;
  for (const auto& t : detail::split(s, '+')) {
    if (t.empty()) throw ParseError("empty term in '" + text + "'");
    terms.push_back(parse_monomial(gens, t));
  }
  return make_polynomial(ord, std::move(terms));
}

// Lines: `gen <name> <degree>`, `rel <poly>`, optional `cap <degree>`; `#` starts a comment.
inline AlgebraPresentation parse_presentation(const std::string& text) {
  AlgebraPresentation p;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> rel_lines;
  bool cap_given = false;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::string rest;
    std::getline(ls, rest);
    if (kw == "gen") {
      std::istringstream rs(rest);
      Generator g;
      std::string deg;
      if (!(rs >> g.name >> deg)) throw ParseError("bad gen line: " + line);
      g.degree = detail::parse_int(deg, line);
      p.generators.push_back(g);
    } else if (kw == "rel") {
      rel_lines.push_back(rest);
    } else if (kw == "cap") {
      p.degree_cap = detail::parse_int(detail::strip_spaces(rest), line);
      cap_given = true;
    } else {
      throw ParseError("unknown keyword '" + kw + "'");
    }
  }
  auto ord = p.order();
  for (const auto& r : rel_lines) {
    auto poly = parse_polynomial(p.generators, ord, r);
    if (!poly.empty()) p.relations.push_back(std::move(poly));
  }
  if (!cap_given)
    for (const auto& r : p.relations) p.degree_cap = std::max(p.degree_cap, ord.degree(r.front()));
  p.validate();
  return p;
}

inline std::string to_text(const AlgebraPresentation& p) {
  std::ostringstream out;
  for (const auto& g : p.generators) out << "gen " << g.name << ' ' << g.degree << '\n';
  for (const auto& r : p.relations) out << "rel " << render_polynomial(p.generators, r) << '\n';
  out << "cap " << p.degree_cap << '\n';
  return out.str();
}

inline Polynomial normal_form(const MonomialOrder& ord, const std::vector<Polynomial>& basis, Polynomial p) {
  Polynomial result;
  while (!p.empty()) {
    const Monomial lead = p.front();
    const Polynomial* hit = nullptr;
    for (const auto& g : basis)
      if (divides(g.front(), lead)) {
        hit = &g;
        break;
      }
    if (hit) {
      p = poly_add(ord, p, poly_shift(*hit, mono_div(lead, hit->front())));
    } else {
      result.push_back(lead);
      p.erase(p.begin());
    }
  }
  return result;
}

// Homogeneous Buchberger completion returning the reduced Groebner basis.
// Every S-pair is examined; one that survives reduction above degree_cap
// means the cap is too low for a confluent system.
inline std::vector<Polynomial> complete_rewrite_system(const AlgebraPresentation& p) {
  p.validate();
  auto ord = p.order();
  std::vector<Polynomial> g;
  for (const auto& r : p.relations) {
    auto nf = normal_form(ord, g, r);
    if (!nf.empty()) g.push_back(std::move(nf));
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  auto pair_degree = [&](const std::pair<std::size_t, std::size_t>& pr) {
    return ord.degree(mono_lcm(g[pr.first].front(), g[pr.second].front()));
  };
  while (!pairs.empty()) {
    auto it = std::min_element(pairs.begin(), pairs.end(),
                               [&](const auto& x, const auto& y) { return pair_degree(x) < pair_degree(y); });
    auto [i, j] = *it;
    pairs.erase(it);
    const auto& lt_i = g[i].front();
    const auto& lt_j = g[j].front();
    if (coprime(lt_i, lt_j)) continue;
    auto l = mono_lcm(lt_i, lt_j);
    auto s = poly_add(ord, poly_shift(g[i], mono_div(l, lt_i)), poly_shift(g[j], mono_div(l, lt_j)));
    auto r = normal_form(ord, g, std::move(s));
    if (r.empty()) continue;
    if (ord.degree(r.front()) > p.degree_cap)
      throw CapTooLow("completion needs a relation in degree " + std::to_string(ord.degree(r.front())) +
                      " above cap " + std::to_string(p.degree_cap));
    g.push_back(std::move(r));
    for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.emplace_back(k, g.size() - 1);
  }
  // minimize, then reduce tails
  std::vector<Polynomial> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || !divides(g[j].front(), g[i].front())) continue;
      redundant = g[j].front() != g[i].front() || j < i;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  std::vector<Polynomial> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Polynomial tail(minimal[i].begin() + 1, minimal[i].end());
    Polynomial nf = normal_form(ord, others, tail);
    nf.insert(nf.begin(), minimal[i].front());
    reduced.push_back(std::move(nf));
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Polynomial& a, const Polynomial& b) { return ord.compare(a.front(), b.front()) < 0; });
  return reduced;
}

struct PoincareSeries {
  std::vector<int> coefficients;

  void trim() {
    while (!coefficients.empty() && coefficients.back() == 0) coefficients.pop_back();
  }
  int at(int d) const {
    return d >= 0 && d < static_cast<int>(coefficients.size()) ? coefficients[static_cast<std::size_t>(d)] : 0;
  }
  int total() const { return std::accumulate(coefficients.begin(), coefficients.end(), 0); }
  bool operator==(const PoincareSeries&) const = default;
};

inline std::string render_series(const PoincareSeries& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s.coefficients[i]);
  }
  return out + ")";
}

// A presentation together with its completed rewrite system.
class GradedAlgebra {
 public:
  explicit GradedAlgebra(AlgebraPresentation p)
      : pres_(std::move(p)), ord_(pres_.order()), gb_(complete_rewrite_system(pres_)) {}

  const AlgebraPresentation& presentation() const { return pres_; }
  const std::vector<Generator>& generators() const { return pres_.generators; }
  const MonomialOrder& order() const { return ord_; }
  const std::vector<Polynomial>& rewrite_system() const { return gb_; }
  int degree_cap() const { return pres_.degree_cap; }

  std::vector<Monomial> leading_terms() const {
    std::vector<Monomial> out;
    for (const auto& g : gb_) out.push_back(g.front());
    return out;
  }

  Polynomial normal_form(Polynomial p) const { return borelss::normal_form(ord_, gb_, std::move(p)); }
  Polynomial normal_form(const Monomial& m) const { return normal_form(Polynomial{m}); }

  Polynomial multiply(const Polynomial& u, const Polynomial& v) const { return normal_form(poly_mul(ord_, u, v)); }

  Polynomial power(const Polynomial& u, int e) const {
    Polynomial acc{Monomial(pres_.generators.size(), 0)};
    for (int i = 0; i < e; ++i) acc = multiply(acc, u);
    return acc;
  }

  bool is_standard(const Monomial& m) const {
    return std::none_of(gb_.begin(), gb_.end(), [&](const Polynomial& g) { return divides(g.front(), m); });
  }

  // standard monomials of degree d, ascending in the monomial order
  std::vector<Monomial> monomial_basis(int d) const {
    if (d > pres_.degree_cap)
      throw CapTooLow("basis requested in degree " + std::to_string(d) + " above cap " + std::to_string(pres_.degree_cap));
    std::vector<Monomial> out;
    Monomial cur(pres_.generators.size(), 0);
    enumerate(0, d, cur, out);
    std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return ord_.compare(a, b) < 0; });
    return out;
  }

  // Largest degree a standard monomial can have; throws when some generator
  // has no pure power among the leading terms (the quotient is then infinite).
  int top_degree_bound() const {
    int bound = 0;
    for (std::size_t i = 0; i < pres_.generators.size(); ++i) {
      int e = -1;
      for (const auto& g : gb_) {
        const auto& lt = g.front();
        bool pure = lt[i] > 0;
        for (std::size_t j = 0; j < lt.size() && pure; ++j)
          if (j != i && lt[j]) pure = false;
        if (pure && (e < 0 || lt[i] < e)) e = lt[i];
      }
      if (e < 0)
        throw NotFiniteDimensional("no power of " + pres_.generators[i].name + " vanishes");
      bound += (e - 1) * pres_.generators[i].degree;
    }
    return bound;
  }

  PoincareSeries poincare_series() const {
    int bound = top_degree_bound();
    PoincareSeries s;
    for (int d = 0; d <= bound; ++d) s.coefficients.push_back(static_cast<int>(monomial_basis(d).size()));
    s.trim();
    return s;
  }

  std::string render(const Polynomial& p) const { return render_polynomial(pres_.generators, p); }

 private:
  void enumerate(std::size_t i, int remaining, Monomial& cur, std::vector<Monomial>& out) const {
    if (i == cur.size()) {
      if (remaining == 0 && is_standard(cur)) out.push_back(cur);
      return;
    }
    int deg = pres_.generators[i].degree;
    for (int e = 0; e * deg <= remaining; ++e) {
      cur[i] = e;
      enumerate(i + 1, remaining - e * deg, cur, out);
    }
    cur[i] = 0;
  }

  AlgebraPresentation pres_;
  MonomialOrder ord_;
  std::vector<Polynomial> gb_;
};

enum class Field { R, C, H };

inline int lambda_of(Field f) {
  switch (f) {
    case Field::R: return 1;
    case Field::C: return 2;
    case Field::H: return 4;
  }
  return 0;
}

inline char field_tag(Field f) { return "RCH"[static_cast<int>(f)]; }

inline Field parse_field(const std::string& s) {
  if (s == "R") return Field::R;
  if (s == "C") return Field::C;
  if (s == "H") return Field::H;
  throw ConfigError("field must be R, C or H, got '" + s + "'");
}

// Cohomology of FP^m x S^n: Z2[a,b]/(a^{m+1}, b^2), deg a = lambda, deg b = n.
struct FiberPresentation {
  Field field = Field::R;
  int m = 1;
  int n = 4;

  int lambda() const { return lambda_of(field); }
  int top() const { return lambda() * m + n; }
  int degree_cap() const { return std::max({top() + 6, 2 * n, lambda() * (m + 1)}); }

  AlgebraPresentation algebra() const {
    if (m < 1) throw InvalidPresentation("m must be at least 1");
    if (n < 1) throw InvalidPresentation("n must be at least 1");
    AlgebraPresentation p;
    p.generators = {{"a", lambda()}, {"b", n}};
    p.relations = {{{m + 1, 0}}, {{0, 2}}};
    p.degree_cap = degree_cap();
    return p;
  }
};

}  // namespace borelss
