#pragma once

#include <string>
#include <vector>

#include "borelss/borel_driver.hpp"

namespace borelss {

struct Statement {
  std::string kind;  // "sphere-to-X" or "X-to-sphere"
  std::string tag;
  int bound = 0;
  std::string text;
};

struct IndexReport {
  int co_ind2 = 0;
  int volovikov_i = 0;  // 0 when no differential reaches the bottom row
  int ind_upper = 0;
  std::vector<Statement> statements;
};

// Largest k with E_inf^{k,0} != 0: the top nonvanishing power of the class of t.
inline int co_index(const Scenario& s) {
  int best = 0;
  for (int k = 0; k <= s.window; ++k)
    if (s.terminal_page->dim({k, 0}) > 0) best = k;
  return best;
}

// First recorded differential with a nonzero component landing in the bottom row.
inline int volovikov_index(const Scenario& s) {
  for (const auto& step : s.history) {
    const int r = step.d.r();
    const Page& page = *step.page;
    if (r - 1 > page.top()) continue;
    for (int k = 0; k <= step.d.k_limit(); ++k) {
      Bidegree src{k, r - 1};
      std::size_t d = page.dim(src);
      std::size_t td = page.dim({k + r, 0});
      for (std::size_t i = 0; i < d; ++i)
        if (step.d.apply(src, BitVec::unit(d, i), td).any()) return r;
    }
  }
  return 0;
}

// Nonexistence statements for Z2-maps between X and spheres. A map S^n -> X
// forces n <= ind(X) <= co-ind(X). A map X -> S^n with 1 <= n and n + 1 < i(X)
// is excluded by the index criterion with target sphere S^n, whose orbit space
// has no cohomology in degree n + 1.
inline std::vector<Statement> map_statements(int co_ind2, int volovikov_i) {
  std::vector<Statement> out;
  out.push_back({"sphere-to-X", "co-index bound", co_ind2 + 1,
                 "no Z2-equivariant map S^n -> X for n >= " + std::to_string(co_ind2 + 1)});
  if (volovikov_i >= 3)
    out.push_back({"X-to-sphere", "index criterion", volovikov_i - 1,
                   "no Z2-equivariant map X -> S^n for n < " + std::to_string(volovikov_i - 1)});
  return out;
}

inline IndexReport index_report(const Scenario& s) {
  IndexReport r;
  r.co_ind2 = co_index(s);
  r.volovikov_i = volovikov_index(s);
  r.ind_upper = r.co_ind2;
  r.statements = map_statements(r.co_ind2, r.volovikov_i);
  return r;
}

inline std::vector<std::vector<Statement>> equivariant_map_report(const std::vector<Scenario>& scenarios) {
  std::vector<std::vector<Statement>> out;
  for (const auto& s : scenarios) out.push_back(index_report(s).statements);
  return out;
}

}  // namespace borelss
