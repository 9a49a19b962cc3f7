#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "borelss/graded_algebra.hpp"
#include "borelss/index_apps.hpp"

namespace borelss {

namespace detail {

// Integer expressions in m: literals, m, 2m, + - * /, parentheses.
class ExprParser {
 public:
  ExprParser(const std::string& s, int m) : s_(strip_spaces(s)), m_(m) {}

  int eval() {
    int v = sum();
    if (pos_ != s_.size()) throw ParseError("trailing input in exponent '" + s_ + "'");
    return v;
  }

 private:
  int sum() {
    int v = product();
    while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      char op = s_[pos_++];
      int w = product();
      v = op == '+' ? v + w : v - w;
    }
    return v;
  }
  int product() {
    int v = atom();
    for (;;) {
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        v *= atom();
      } else if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        int w = atom();
        if (w == 0 || v % w != 0)
          throw ConstraintViolation("exponent '" + s_ + "' not integral at m=" + std::to_string(m_));
        v /= w;
      } else if (pos_ < s_.size() && (s_[pos_] == 'm' || s_[pos_] == '(')) {
        v *= atom();  // 2m, 2(m+1)
      } else {
        return v;
      }
    }
  }
  int atom() {
    if (pos_ >= s_.size()) throw ParseError("truncated exponent '" + s_ + "'");
    if (s_[pos_] == '(') {
      ++pos_;
      int v = sum();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError("unbalanced parentheses in '" + s_ + "'");
      ++pos_;
      return v;
    }
    if (s_[pos_] == 'm') {
      ++pos_;
      return m_;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("bad exponent '" + s_ + "'");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  std::string s_;
  int m_;
  std::size_t pos_ = 0;
};

inline std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline int eval_exponent(const std::string& expr, int m) { return detail::ExprParser(expr, m).eval(); }

struct TemplateTerm {
  std::vector<std::size_t> params;        // coefficient is the product of these
  std::vector<std::string> exponents;     // one expression per generator, "0" when absent
};

struct RelationTemplate {
  std::string text;
  std::vector<TemplateTerm> terms;
};

struct Requirement {
  std::string kind;  // "odd", "even" or ">="
  int value = 0;
};

struct Forcing {
  std::vector<std::size_t> params;
  int m = 0;
};

using ParamVector = std::vector<int>;

inline std::string render_params(const ParamVector& p) {
  std::string s;
  for (int b : p) s += b ? '1' : '0';
  return s;
}

struct IdealFamily {
  std::string id;
  Field field = Field::R;
  std::vector<std::string> cases;
  std::vector<Generator> generators;
  std::vector<std::string> params;
  std::vector<Requirement> requirements;
  std::vector<Forcing> forcings;
  std::vector<RelationTemplate> relations;

  bool applicable(int m) const {
    if (m < 1) return false;
    for (const auto& r : requirements) {
      if (r.kind == "odd" && m % 2 == 0) return false;
      if (r.kind == "even" && m % 2 == 1) return false;
      if (r.kind == ">=" && m < r.value) return false;
    }
    return true;
  }

  bool matches_case(const std::string& case_id) const {
    return std::find(cases.begin(), cases.end(), case_id) != cases.end();
  }

  // Parameters pinned to zero at m: explicit provisos plus slots whose
  // monomial would need a negative exponent.
  std::vector<bool> forced_zero(int m) const {
    std::vector<bool> out(params.size(), false);
    for (const auto& f : forcings)
      if (f.m == m)
        for (auto p : f.params) out[p] = true;
    for (const auto& rel : relations)
      for (const auto& t : rel.terms) {
        bool negative = false;
        for (const auto& e : t.exponents) negative = negative || eval_exponent(e, m) < 0;
        if (negative)
          for (auto p : t.params) out[p] = true;
      }
    return out;
  }

  std::vector<ParamVector> parameter_vectors(int m) const {
    std::vector<ParamVector> out;
    if (!applicable(m)) return out;
    auto forced = forced_zero(m);
    const std::size_t n = params.size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      ParamVector v(n);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<int>((bits >> (n - 1 - i)) & 1);
        if (v[i] && forced[i]) ok = false;
      }
      if (ok) out.push_back(std::move(v));
    }
    return out;
  }
};

inline TemplateTerm parse_template_term(const IdealFamily& f, const std::string& text) {
  TemplateTerm t;
  t.exponents.assign(f.generators.size(), "0");
  std::vector<int> seen(f.generators.size(), 0);
  for (const auto& factor : detail::split_top(text, '*')) {
    if (factor.empty()) throw ParseError("empty factor in '" + text + "'");
    if (factor == "1") continue;
    auto caret = factor.find('^');
    std::string name = factor.substr(0, caret);
    auto pit = std::find(f.params.begin(), f.params.end(), name);
    if (pit != f.params.end() && caret == std::string::npos) {
      t.params.push_back(static_cast<std::size_t>(pit - f.params.begin()));
      continue;
    }
    auto git = std::find_if(f.generators.begin(), f.generators.end(),
                            [&](const Generator& g) { return g.name == name; });
    if (git == f.generators.end()) throw ParseError("unknown symbol '" + name + "' in family " + f.id);
    auto gi = static_cast<std::size_t>(git - f.generators.begin());
    if (seen[gi]++) throw ParseError("repeated generator in '" + text + "'");
    t.exponents[gi] = caret == std::string::npos ? "1" : factor.substr(caret + 1);
  }
  return t;
}

// Catalog text: a `field` line, then blocks
//   family <id> <case>...   gen <name> <deg>   param <names>...
//   require m odd|even|>= N   force <params>... when m = N   rel <template>   end
inline std::vector<IdealFamily> parse_catalog(const std::string& text) {
  std::vector<IdealFamily> out;
  std::istringstream in(text);
  std::string line;
  Field field = Field::R;
  IdealFamily* cur = nullptr;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::vector<std::string> words;
    for (std::string w; ls >> w;) words.push_back(w);
    if (kw == "field") {
      if (words.size() != 1) throw ParseError("bad field line");
      field = parse_field(words[0]);
      continue;
    }
    if (kw == "family") {
      if (cur) throw ParseError("family block not closed");
      if (words.size() < 2) throw ParseError("family needs an id and at least one case");
      out.emplace_back();
      cur = &out.back();
      cur->id = words[0];
      cur->field = field;
      cur->cases.assign(words.begin() + 1, words.end());
      continue;
    }
    if (!cur) throw ParseError("'" + kw + "' outside a family block");
    if (kw == "end") {
      cur = nullptr;
    } else if (kw == "gen") {
      if (words.size() != 2) throw ParseError("bad gen line in " + cur->id);
      cur->generators.push_back({words[0], detail::parse_int(words[1], line)});
    } else if (kw == "param") {
      cur->params.insert(cur->params.end(), words.begin(), words.end());
    } else if (kw == "require") {
      if (words.size() == 2 && words[0] == "m" && (words[1] == "odd" || words[1] == "even"))
        cur->requirements.push_back({words[1], 0});
      else if (words.size() == 3 && words[0] == "m" && words[1] == ">=")
        cur->requirements.push_back({">=", detail::parse_int(words[2], line)});
      else
        throw ParseError("bad require line in " + cur->id);
    } else if (kw == "force") {
      auto when = std::find(words.begin(), words.end(), "when");
      if (when == words.end() || words.end() - when != 4 || when[1] != "m" || when[2] != "=")
        throw ParseError("bad force line in " + cur->id);
      Forcing fo;
      fo.m = detail::parse_int(when[3], line);
      for (auto it = words.begin(); it != when; ++it) {
        auto p = std::find(cur->params.begin(), cur->params.end(), *it);
        if (p == cur->params.end()) throw ParseError("unknown parameter " + *it);
        fo.params.push_back(static_cast<std::size_t>(p - cur->params.begin()));
      }
      cur->forcings.push_back(fo);
    } else if (kw == "rel") {
      RelationTemplate rt;
      rt.text = line.substr(line.find("rel") + 3);
      for (const auto& term : detail::split_top(detail::strip_spaces(rt.text), '+'))
        rt.terms.push_back(parse_template_term(*cur, term));
      cur->relations.push_back(std::move(rt));
    } else {
      throw ParseError("unknown keyword '" + kw + "'");
    }
  }
  if (cur) throw ParseError("family block not closed at end of catalog");
  return out;
}

inline AlgebraPresentation instantiate(const IdealFamily& f, int m, const ParamVector& params) {
  if (!f.applicable(m)) throw ConstraintViolation(f.id + " does not apply at m=" + std::to_string(m));
  if (params.size() != f.params.size()) throw ConstraintViolation(f.id + ": wrong number of parameters");
  auto forced = f.forced_zero(m);
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i] && forced[i])
      throw ConstraintViolation(f.id + ": " + f.params[i] + " must vanish at m=" + std::to_string(m));
  AlgebraPresentation p;
  p.generators = f.generators;
  p.degree_cap = lambda_of(f.field) * m + 4 + 6;
  auto ord = p.order();
  for (const auto& rel : f.relations) {
    std::vector<Monomial> terms;
    for (const auto& t : rel.terms) {
      bool on = true;
      for (auto pi : t.params) on = on && params[pi];
      if (!on) continue;
      Monomial mono;
      for (const auto& e : t.exponents) {
        int v = eval_exponent(e, m);
        if (v < 0) throw ConstraintViolation(f.id + ": negative exponent in '" + rel.text + "' at m=" + std::to_string(m));
        mono.push_back(v);
      }
      terms.push_back(std::move(mono));
    }
    auto poly = make_polynomial(ord, std::move(terms));
    if (!poly.empty()) p.relations.push_back(std::move(poly));
  }
  p.validate();
  return p;
}

// Largest s with x^s nonzero in the quotient.
inline int x_nilpotency(const GradedAlgebra& alg) {
  int xi = alg.presentation().generator_index("x");
  if (xi < 0) throw ConstraintViolation("presentation has no generator x");
  Monomial x(alg.generators().size(), 0);
  x[static_cast<std::size_t>(xi)] = 1;
  Polynomial pw{Monomial(alg.generators().size(), 0)};
  int s = 0;
  for (;;) {
    pw = alg.multiply(pw, Polynomial{x});
    if (pw.empty()) return s;
    ++s;
  }
}

struct ParamResult {
  ParamVector params;
  bool series_ok = false;
  bool nilpotency_ok = false;
  bool finite = false;
  PoincareSeries series;
  int x_nilpotency = -1;
  int cap = 0;  // degree cap the instantiation finally ran at
  std::string error;
};

struct FamilyReport {
  std::string family_id;
  int m = 0;
  std::string case_id;
  PoincareSeries expected;
  int expected_nilpotency = 0;
  bool annihilators_ok = true;
  std::vector<std::string> annihilator_notes;
  int total = 0;
  int passes = 0;
  std::vector<ParamResult> failures;

  bool all_pass() const { return annihilators_ok && failures.empty() && total > 0; }
};

// Relations x^i * M with M free of x must leave E_inf empty in every
// bidegree (k, l) with k >= i and l >= deg M.
inline bool check_annihilators(const IdealFamily& f, int m, const Scenario& s, std::vector<std::string>& notes) {
  bool ok = true;
  std::size_t xi = 0;
  for (std::size_t i = 0; i < f.generators.size(); ++i)
    if (f.generators[i].name == "x") xi = i;
  for (const auto& rel : f.relations) {
    if (rel.terms.size() != 1 || !rel.terms[0].params.empty()) continue;
    const auto& t = rel.terms[0];
    int ix = eval_exponent(t.exponents[xi], m);
    int rest = 0;
    for (std::size_t g = 0; g < f.generators.size(); ++g)
      if (g != xi) rest += eval_exponent(t.exponents[g], m) * f.generators[g].degree;
    if (ix <= 0 || rest <= 0) continue;
    bool clear = true;
    const Page& page = *s.terminal_page;
    for (int k = ix; k <= s.window; ++k)
      for (int l = rest; l <= page.top(); ++l)
        if (page.dim({k, l}) > 0) clear = false;
    notes.push_back(detail::strip_spaces(rel.text) + (clear ? ": region clear" : ": region NOT clear"));
    ok = ok && clear;
  }
  return ok;
}

// Instantiates at the default cap and doubles it (up to kMaxCapDoublings
// times) while completion or the basis walk reports CapTooLow.
inline constexpr int kMaxCapDoublings = 3;

inline ParamResult verify_parameters(const IdealFamily& f, int m, const ParamVector& params,
                                     const PoincareSeries& expected, int expected_nilpotency) {
  ParamResult r;
  r.params = params;
  try {
    AlgebraPresentation pres = instantiate(f, m, params);
    for (int attempt = 0;; ++attempt) {
      try {
        GradedAlgebra alg(pres);
        r.series = alg.poincare_series();
        r.finite = true;
        r.x_nilpotency = x_nilpotency(alg);
        r.cap = pres.degree_cap;
        break;
      } catch (const CapTooLow&) {
        if (attempt == kMaxCapDoublings) throw;
        pres.degree_cap *= 2;
      }
    }
    r.series_ok = r.series == expected;
    r.nilpotency_ok = r.x_nilpotency == expected_nilpotency;
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

inline FamilyReport verify_family_against_scenario(const IdealFamily& f, int m, const Scenario& s) {
  FamilyReport rep;
  rep.family_id = f.id;
  rep.m = m;
  rep.case_id = s.case_id;
  rep.expected = s.betti;
  rep.expected_nilpotency = co_index(s);
  rep.annihilators_ok = check_annihilators(f, m, s, rep.annihilator_notes);
  for (const auto& pv : f.parameter_vectors(m)) {
    ++rep.total;
    auto r = verify_parameters(f, m, pv, rep.expected, rep.expected_nilpotency);
    if (r.finite && r.series_ok && r.nilpotency_ok)
      ++rep.passes;
    else
      rep.failures.push_back(std::move(r));
  }
  return rep;
}

inline const IdealFamily* family_for_case(const std::vector<IdealFamily>& catalog, const std::string& case_id) {
  for (const auto& f : catalog)
    if (f.matches_case(case_id)) return &f;
  return nullptr;
}

}  // namespace borelss
