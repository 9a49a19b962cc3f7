#pragma once

#include <algorithm>
#include <cstdlib>
#include <future>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "borelss/ss_engine.hpp"

namespace borelss {

struct Decision {
  int r = 0;
  std::string generator;
  Bidegree source;
  std::string target;  // rendered class, "0" for the zero choice

  bool nonzero() const { return target != "0"; }
  auto key() const { return std::tie(r, source, generator, target); }
  bool operator<(const Decision& o) const { return key() < o.key(); }
  bool operator==(const Decision& o) const { return key() == o.key(); }
};

inline std::string render_decision(const Decision& d) {
  return "d_" + std::to_string(d.r) + "(" + d.generator + ") = " + d.target;
}

// A page together with the nonzero differential applied to it.
struct Step {
  std::shared_ptr<const Page> page;
  Differential d;
};

struct Scenario {
  FiberPresentation fiber;
  std::vector<Decision> decisions;
  std::vector<Step> history;
  std::shared_ptr<const Page> terminal_page;
  PoincareSeries betti;
  std::string case_id;
  int window = 0;
};

struct PruneRecord {
  std::vector<Decision> decisions;
  std::string reason;  // NotADerivation, DSquareNonzero or Vanishing
  std::string detail;
};

struct SearchResult {
  std::vector<Scenario> scenarios;
  std::vector<PruneRecord> pruned;
  int k_big = 0;
};

struct SearchOptions {
  int extra_columns = 0;  // 0: pick 3 * r_max
  int threads = 0;        // 0: BORELSS_THREADS or hardware concurrency
};

inline int default_thread_cap() {
  if (const char* env = std::getenv("BORELSS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

class Searcher {
 public:
  Searcher(FiberPresentation fiber, int window) : fiber_(fiber), window_(window) {}

  struct Branch {
    std::shared_ptr<const Page> page;
    std::vector<Decision> decisions;
    std::vector<Step> history;
  };

  // Expands one fork into child branches (or a finished scenario / prune).
  void expand(const Branch& br, std::vector<Branch>& children, SearchResult& out) const {
    const Page& page = *br.page;
    auto gens = page.generators();
    auto fork = next_fork(page, gens);
    if (!fork) {
      auto tot = tot_series(page, window_);
      if (!tot.vanishing_ok) {
        out.pruned.push_back({br.decisions, "Vanishing", "nonzero total degree above " + std::to_string(page.top())});
        return;
      }
      Scenario s;
      s.fiber = fiber_;
      s.decisions = br.decisions;
      s.history = br.history;
      s.terminal_page = br.page;
      s.betti = tot.series;
      s.window = window_;
      out.scenarios.push_back(std::move(s));
      return;
    }
    const int r = *fork;
    auto at_r = std::make_shared<const Page>(page.relabeled(r));
    const Bidegree sh = shift_of(r);

    std::vector<std::size_t> branching;
    std::vector<BitVec> values;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      values.push_back(at_r->zero(gens[i].deg + sh));
      if (values.back().size() > 0) branching.push_back(i);
    }
    std::size_t total_bits = 0;
    for (auto i : branching) total_bits += values[i].size();
    if (total_bits > 20) throw std::runtime_error("fork too wide to enumerate");

    for (std::uint64_t combo = 0; combo < (std::uint64_t{1} << total_bits); ++combo) {
      std::uint64_t bits = combo;
      std::vector<BitVec> vals = values;
      std::vector<Decision> decs = br.decisions;
      bool any = false;
      for (auto i : branching) {
        auto& v = vals[i];
        for (std::size_t j = 0; j < v.size(); ++j, bits >>= 1)
          if (bits & 1) v.set(j);
        any = any || v.any();
        decs.push_back({r, gens[i].label, gens[i].deg, at_r->render(gens[i].deg + sh, v)});
      }
      if (!any) {
        children.push_back({std::make_shared<const Page>(page.relabeled(r + 1)), decs, br.history});
        continue;
      }
      try {
        Differential d = extend_leibniz(*at_r, gens, vals);
        auto next = std::make_shared<const Page>(turn_page(*at_r, d));
        auto hist = br.history;
        hist.push_back({at_r, std::move(d)});
        children.push_back({next, decs, std::move(hist)});
      } catch (const NotADerivation& e) {
        out.pruned.push_back({decs, "NotADerivation", e.what()});
      } catch (const DSquareNonzero& e) {
        out.pruned.push_back({decs, "DSquareNonzero", e.what()});
      }
    }
  }

  void run(Branch br, SearchResult& out) const {
    std::vector<Branch> stack{std::move(br)};
    while (!stack.empty()) {
      Branch cur = std::move(stack.back());
      stack.pop_back();
      std::vector<Branch> children;
      expand(cur, children, out);
      for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
    }
  }

 private:
  FiberPresentation fiber_;
  int window_;
};

}  // namespace detail

inline bool decisions_less(const std::vector<Decision>& a, const std::vector<Decision>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Depth-first enumeration of every admissible choice of generator
// differentials. Branches die by NotADerivation, DSquareNonzero or a terminal
// page with classes above the fiber top. The column window doubles whenever a
// branch runs out of trusted columns.
inline SearchResult search_cases(const FiberPresentation& fiber, SearchOptions opt = {}) {
  const int kw = k_window(fiber);
  int extra = opt.extra_columns > 0 ? opt.extra_columns : 3 * r_max(fiber);
  const int threads = opt.threads > 0 ? opt.threads : default_thread_cap();
  auto model = std::make_shared<const E2Model>(fiber);
  for (;;) {
    try {
      SearchResult result;
      result.k_big = kw + extra;
      detail::Searcher searcher(fiber, kw);
      detail::Searcher::Branch root{std::make_shared<const Page>(Page::e2(model, result.k_big)), {}, {}};
      std::vector<detail::Searcher::Branch> top;
      searcher.expand(root, top, result);
      std::vector<SearchResult> partial(top.size());
      for (std::size_t start = 0; start < top.size(); start += static_cast<std::size_t>(threads)) {
        std::vector<std::future<void>> jobs;
        std::size_t end = std::min(top.size(), start + static_cast<std::size_t>(threads));
        for (std::size_t i = start; i < end; ++i) {
          if (threads == 1)
            searcher.run(top[i], partial[i]);
          else
            jobs.push_back(std::async(std::launch::async, [&, i] { searcher.run(top[i], partial[i]); }));
        }
        for (auto& j : jobs) j.get();
      }
      for (auto& p : partial) {
        for (auto& s : p.scenarios) result.scenarios.push_back(std::move(s));
        for (auto& x : p.pruned) result.pruned.push_back(std::move(x));
      }
      std::sort(result.scenarios.begin(), result.scenarios.end(),
                [](const Scenario& a, const Scenario& b) { return decisions_less(a.decisions, b.decisions); });
      result.scenarios.erase(std::unique(result.scenarios.begin(), result.scenarios.end(),
                                         [](const Scenario& a, const Scenario& b) { return a.decisions == b.decisions; }),
                             result.scenarios.end());
      std::sort(result.pruned.begin(), result.pruned.end(),
                [](const PruneRecord& a, const PruneRecord& b) { return decisions_less(a.decisions, b.decisions); });
      return result;
    } catch (const WindowExhausted&) {
      extra *= 2;
      if (extra > 64 * r_max(fiber)) throw;
    }
  }
}

inline PoincareSeries betti_table(const Scenario& s) { return s.betti; }

// Case tag from the pattern of nonzero decisions. Page indices are read
// relative to m, so the same rules apply to every m.
inline std::string classify(const FiberPresentation& fiber, const std::vector<Decision>& decisions) {
  if (fiber.n != 4) return "exploratory";
  std::vector<Decision> nz;
  for (const auto& d : decisions)
    if (d.nonzero()) nz.push_back(d);
  const int m = fiber.m;
  auto rs = [&] {
    std::vector<int> v;
    for (const auto& d : nz) v.push_back(d.r);
    return v;
  }();
  auto fail = [&]() -> std::string {
    std::string msg = "no case matches";
    for (const auto& d : decisions) msg += " [" + render_decision(d) + "]";
    throw UnknownCase(msg);
  };
  if (nz.empty()) fail();
  const std::string& g0 = nz[0].generator;
  using V = std::vector<int>;
  switch (fiber.field) {
    case Field::R:
      if (g0 == "a" && rs == V{2}) return "R.i";
      if (g0 != "b") break;
      if (rs == V{5}) return "R.ii";
      if (rs == V{4, m + 5}) return "R.iii";
      if (rs == V{3, m + 3, m + 5}) return "R.iv.1";
      if (rs == V{3, m + 4}) return "R.iv.2";
      if (rs == V{2, m + 1, m + 3, m + 5}) return "R.v.1.1";
      if (rs == V{2, m + 1, m + 4}) return "R.v.1.2";
      if (rs == V{2, m + 2, m + 5}) return "R.v.2";
      if (rs == V{2, m + 3}) return "R.v.3";
      break;
    case Field::C:
      if (g0 == "a" && rs == V{3}) return "C.i";
      if (g0 == "b" && rs == V{5}) return "C.ii";
      if (g0 == "b" && rs == V{3, 2 * m + 5}) return "C.iii";
      break;
    case Field::H:
      if (rs == V{5, 5} && nz[0].generator != nz[1].generator) return "H.i";
      if (rs == V{5} && g0 == "a") return "H.ii";
      if (rs == V{5} && g0 == "b") return "H.iii";
      break;
  }
  return fail();
}

inline std::string classify(const Scenario& s) { return classify(s.fiber, s.decisions); }

// Fills case ids; scenarios that match no case keep "unknown" and are listed.
inline std::vector<std::string> classify_all(std::vector<Scenario>& scenarios) {
  std::vector<std::string> problems;
  for (auto& s : scenarios) {
    try {
      s.case_id = classify(s);
    } catch (const UnknownCase& e) {
      s.case_id = "unknown";
      problems.push_back(e.what());
    }
  }
  return problems;
}

}  // namespace borelss
