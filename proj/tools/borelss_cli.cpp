// Command-line front end: flag parsing only, all work happens in borelss::run.
#include <iostream>

#include <CLI11.hpp>

#include "borelss/cli.hpp"

int main(int argc, char** argv) {
  using namespace borelss;
  CLI::App app{"Borel spectral sequence enumerator for free involutions on FP^m x S^n"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string field = "R", format = "text";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--field", field, "R, C or H")->check(CLI::IsMember({"R", "C", "H"}));
    sub->add_option("--m", cfg.m, "projective dimension m >= 1")->required();
    sub->add_option("--n", cfg.n, "sphere dimension (classification data exists only for n = 4)");
    sub->add_flag("--assume-trivial-action", cfg.assume_trivial_action,
                  "assume the involution acts trivially on mod-2 cohomology");
    sub->add_flag("--integral-type", cfg.integral_type,
                  "assume cohomology integral type, which also forces a trivial action");
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--threads", cfg.threads, "worker cap (default: BORELSS_THREADS or hardware)");
  };

  auto* en = app.add_subcommand("enumerate", "list all admissible differential scenarios");
  auto* ve = app.add_subcommand("verify", "check every scenario against its ideal family, exit 3 on mismatch");
  auto* in = app.add_subcommand("indices", "report co-index, cohomological index and map statements");
  auto* la = app.add_subcommand("local-action", "analyse candidate actions on fiber cohomology");
  auto* dp = app.add_subcommand("dump-page", "print nonzero bidegrees of one page of one scenario");
  for (auto* s : {en, ve, in, la, dp}) add_common(s);
  dp->add_option("--case", cfg.case_id, "case id, e.g. R.iv.1")->required();
  dp->add_option("--page", cfg.page, "page index r, 0 for the terminal page");
  dp->add_option("--kmax", cfg.k_max, "last column to print");
  dp->add_flag("--labels", cfg.labels, "print a basis label for each class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (auto* s : app.get_subcommands()) cfg.command = parse_command(s->get_name());
  cfg.field = parse_field(field);
  cfg.format = format == "json" ? OutputFormat::Structured : OutputFormat::Text;
  return run(cfg, std::cout, std::cerr);
}
