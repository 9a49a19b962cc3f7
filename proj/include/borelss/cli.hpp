#pragma once

#include <algorithm>
#include <ostream>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "borelss/borel_driver.hpp"
#include "borelss/catalog.hpp"
#include "borelss/index_apps.hpp"
#include "borelss/local_coeff.hpp"
#include "borelss/presentation_verifier.hpp"

namespace borelss {

inline constexpr int kSchemaVersion = 1;

enum class Command { Enumerate, Verify, Indices, LocalAction, DumpPage };
enum class OutputFormat { Text, Structured };

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitConfig = 2, kExitVerification = 3 };

struct RunConfig {
  Command command = Command::Enumerate;
  Field field = Field::R;
  int m = 1;
  int n = 4;
  bool assume_trivial_action = false;
  bool integral_type = false;
  OutputFormat format = OutputFormat::Text;
  int k_max = -1;  // dump window, -1 for the default column window
  std::string case_id;
  int page = 0;  // dump page index, 0 for the terminal page
  bool labels = false;
  int threads = 0;
};

inline std::string command_name(Command c) {
  switch (c) {
    case Command::Enumerate: return "enumerate";
    case Command::Verify: return "verify";
    case Command::Indices: return "indices";
    case Command::LocalAction: return "local-action";
    case Command::DumpPage: return "dump-page";
  }
  return "";
}

inline Command parse_command(const std::string& s) {
  for (auto c : {Command::Enumerate, Command::Verify, Command::Indices, Command::LocalAction, Command::DumpPage})
    if (command_name(c) == s) return c;
  throw ConfigError("unknown command '" + s + "'");
}

// E_r of a scenario for any r >= 2, rebuilt from its recorded steps.
inline Page scenario_page(const Scenario& s, int r) {
  if (r <= 0) return *s.terminal_page;
  if (s.history.empty() || r <= s.history.front().d.r()) {
    const Page& first = s.history.empty() ? *s.terminal_page : *s.history.front().page;
    return first.relabeled(std::max(r, 2));
  }
  for (std::size_t i = s.history.size(); i-- > 0;) {
    if (s.history[i].d.r() < r) {
      const Page& turned = i + 1 < s.history.size() ? *s.history[i + 1].page : *s.terminal_page;
      return turned.relabeled(r);
    }
  }
  return *s.terminal_page;
}

struct ScenarioReport {
  const Scenario* scenario = nullptr;
  IndexReport indices;
  std::vector<FamilyReport> families;
};

struct RunReport {
  FiberPresentation fiber;
  std::vector<Scenario> scenarios;
  std::vector<ScenarioReport> reports;
  std::vector<std::string> problems;
  bool exploratory = false;
};

inline void check_config(const RunConfig& cfg) {
  if (cfg.m < 1) throw ConfigError("m must be at least 1");
  if (cfg.n < 1) throw ConfigError("n must be at least 1");
  FiberPresentation fiber{cfg.field, cfg.m, cfg.n};
  if (cfg.command == Command::LocalAction) return;
  if ((exceptional_case(fiber) || needs_action_assumption(fiber)) && !cfg.assume_trivial_action && !cfg.integral_type)
    throw ConfigError(std::string("(") + field_tag(cfg.field) + ", m=" + std::to_string(cfg.m) +
                      ") admits a nontrivial action on fiber cohomology that cannot be ruled out; "
                      "pass --assume-trivial-action or --integral-type");
  if (cfg.command == Command::DumpPage && cfg.case_id.empty()) throw ConfigError("dump-page needs --case");
}

inline RunReport build_report(const RunConfig& cfg, bool with_families) {
  RunReport rep;
  rep.fiber = {cfg.field, cfg.m, cfg.n};
  rep.exploratory = cfg.n != 4;
  SearchOptions opt;
  opt.threads = cfg.threads;
  auto result = search_cases(rep.fiber, opt);
  rep.scenarios = std::move(result.scenarios);
  rep.problems = classify_all(rep.scenarios);
  std::vector<IdealFamily> catalog;
  if (with_families && !rep.exploratory) catalog = builtin_catalog(cfg.field);
  for (const auto& s : rep.scenarios) {
    ScenarioReport sr;
    sr.scenario = &s;
    sr.indices = index_report(s);
    if (const auto* f = family_for_case(catalog, s.case_id)) sr.families.push_back(verify_family_against_scenario(*f, cfg.m, s));
    rep.reports.push_back(std::move(sr));
  }
  return rep;
}

inline nlohmann::json config_json(const RunConfig& cfg) {
  return {{"command", command_name(cfg.command)},
          {"field", std::string(1, field_tag(cfg.field))},
          {"m", cfg.m},
          {"n", cfg.n},
          {"assume_trivial_action", cfg.assume_trivial_action},
          {"integral_type", cfg.integral_type}};
}

inline nlohmann::json scenario_json(const ScenarioReport& sr) {
  const Scenario& s = *sr.scenario;
  nlohmann::json decisions = nlohmann::json::array();
  for (const auto& d : s.decisions)
    decisions.push_back({{"r", d.r}, {"generator", d.generator}, {"source", {d.source.k, d.source.l}}, {"target", d.target}});
  nlohmann::json ideals = nlohmann::json::array();
  for (const auto& f : sr.families) {
    nlohmann::json fail = nlohmann::json::array();
    for (const auto& r : f.failures) fail.push_back(render_params(r.params));
    ideals.push_back({{"family_id", f.family_id},
                      {"params_total", f.total},
                      {"params_pass", f.passes},
                      {"params_fail", fail},
                      {"annihilators_ok", f.annihilators_ok}});
  }
  nlohmann::json statements = nlohmann::json::array();
  for (const auto& st : sr.indices.statements)
    statements.push_back({{"kind", st.kind}, {"tag", st.tag}, {"bound", st.bound}, {"text", st.text}});
  return {{"case_id", s.case_id},
          {"decisions", decisions},
          {"betti", s.betti.coefficients},
          {"ideals", ideals},
          {"indices", {{"co_ind2", sr.indices.co_ind2}, {"volovikov_i", sr.indices.volovikov_i}, {"ind_upper", sr.indices.ind_upper}}},
          {"statements", statements}};
}

inline std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline void print_scenario_text(std::ostream& out, std::size_t idx, const ScenarioReport& sr, bool details) {
  const Scenario& s = *sr.scenario;
  out << "[" << idx + 1 << "] case " << s.case_id << '\n';
  out << "  decisions:";
  for (const auto& d : s.decisions)
    if (d.nonzero()) out << ' ' << render_decision(d) << ';';
  out << '\n';
  out << "  betti: " << join_ints(s.betti.coefficients) << '\n';
  for (const auto& f : sr.families) {
    out << "  family " << f.family_id << ": " << f.passes << "/" << f.total << " parameter vectors pass"
        << (f.annihilators_ok ? "" : ", annihilator region not clear") << '\n';
    if (details)
      for (const auto& r : f.failures) {
        out << "    fail " << render_params(r.params) << ':';
        if (!r.error.empty()) out << ' ' << r.error;
        if (r.finite && !r.series_ok) out << " series " << join_ints(r.series.coefficients);
        if (r.finite && !r.nilpotency_ok) out << " x-nilpotency " << r.x_nilpotency;
        out << '\n';
      }
  }
  out << "  indices: co-ind2 " << sr.indices.co_ind2 << ", i " << sr.indices.volovikov_i << ", ind <= "
      << sr.indices.ind_upper << '\n';
  for (const auto& st : sr.indices.statements) out << "  statement [" << st.tag << "] " << st.text << '\n';
}

inline int run_local_action(const RunConfig& cfg, std::ostream& out) {
  FiberPresentation fiber{cfg.field, cfg.m, cfg.n};
  const int kcols = 4;
  nlohmann::json doc = {{"version", kSchemaVersion}, {"config", config_json(cfg)}};
  nlohmann::json cands = nlohmann::json::array();
  std::ostringstream text;
  text << "fiber " << field_tag(cfg.field) << "P^" << cfg.m << " x S^" << cfg.n << '\n';
  for (const auto& act : action_candidates(fiber)) {
    nlohmann::json c = {{"name", act.name()},
                        {"automorphism", act.is_automorphism()},
                        {"multiplicative", act.multiplicative()},
                        {"involutive", act.involutive()}};
    text << "candidate " << act.name() << (act.is_automorphism() ? "" : " (not an algebra automorphism)") << '\n';
    nlohmann::json cols = nlohmann::json::object();
    for (int l = 0; l <= fiber.top(); ++l) {
      if (act.matrix(l).rows() == 0) continue;
      auto col = local_e2_column(act, l, kcols);
      cols[std::to_string(l)] = col;
      text << "  row " << l << ": " << join_ints(col) << '\n';
    }
    c["columns"] = cols;
    if (!act.is_identity()) {
      try {
        auto v = nontrivial_action_obstruction(act);
        c["verdict"] = "inadmissible";
        c["witnesses"] = v.witnesses;
        text << "  verdict: inadmissible\n";
        for (const auto& w : v.witnesses) text << "    " << w << '\n';
      } catch (const SkeletonInapplicable& e) {
        c["verdict"] = "undecided";
        c["reason"] = e.what();
        text << "  verdict: undecided (" << e.what() << ")\n";
      }
    }
    cands.push_back(c);
  }
  doc["candidates"] = cands;
  doc["assumption_required"] = needs_action_assumption(fiber);
  text << "assumption required: " << (needs_action_assumption(fiber) ? "yes" : "no") << '\n';
  if (cfg.format == OutputFormat::Structured)
    out << doc.dump(2) << '\n';
  else
    out << text.str();
  return kExitOk;
}

inline int run_dump(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto rep = build_report(cfg, false);
  for (const auto& s : rep.scenarios) {
    if (s.case_id != cfg.case_id) continue;
    Page p = scenario_page(s, cfg.page);
    int kmax = cfg.k_max >= 0 ? cfg.k_max : s.window;
    out << dump_page(p, std::min(kmax, p.k_valid()), cfg.labels);
    return kExitOk;
  }
  err << "no scenario with case " << cfg.case_id << '\n';
  return kExitConfig;
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_config(cfg);
    if (cfg.command == Command::LocalAction) return run_local_action(cfg, out);
    if (cfg.command == Command::DumpPage) return run_dump(cfg, out, err);

    const bool families = cfg.command == Command::Enumerate || cfg.command == Command::Verify;
    auto rep = build_report(cfg, families);
    bool verification_failed = !rep.problems.empty();
    if (cfg.command == Command::Verify)
      for (const auto& sr : rep.reports)
        for (const auto& f : sr.families) verification_failed = verification_failed || !f.all_pass();

    if (cfg.format == OutputFormat::Structured) {
      nlohmann::json doc = {{"version", kSchemaVersion}, {"config", config_json(cfg)}};
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& sr : rep.reports) arr.push_back(scenario_json(sr));
      doc["scenarios"] = arr;
      doc["exploratory"] = rep.exploratory;
      doc["problems"] = rep.problems;
      if (cfg.command == Command::Indices) {
        std::set<int> co, vi;
        for (const auto& sr : rep.reports) {
          co.insert(sr.indices.co_ind2);
          vi.insert(sr.indices.volovikov_i);
        }
        doc["co_index_set"] = co;
        doc["volovikov_set"] = vi;
      }
      out << doc.dump(2) << '\n';
    } else {
      out << command_name(cfg.command) << ' ' << field_tag(cfg.field) << "P^" << cfg.m << " x S^" << cfg.n
          << (rep.exploratory ? " (exploratory)" : "") << '\n';
      out << "scenarios: " << rep.scenarios.size() << '\n';
      for (std::size_t i = 0; i < rep.reports.size(); ++i)
        print_scenario_text(out, i, rep.reports[i], cfg.command == Command::Verify);
      if (cfg.command == Command::Indices) {
        std::set<int> co, vi;
        for (const auto& sr : rep.reports) {
          co.insert(sr.indices.co_ind2);
          vi.insert(sr.indices.volovikov_i);
        }
        out << "co-index set: " << join_ints({co.begin(), co.end()}) << '\n';
        out << "i set: " << join_ints({vi.begin(), vi.end()}) << '\n';
      }
      for (const auto& p : rep.problems) out << "problem: " << p << '\n';
    }
    return verification_failed ? kExitVerification : kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace borelss
