// eja verify ... | eja replay --witness <file>
// Exit codes: 0 pass, 1 violations, 2 usage or configuration error.

#include "eja/verifier.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string_view v = eja::detail::trim(item);
    if (v == "inf" || v == "infinity") {
      out.push_back(eja::kInf);
      continue;
    }
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(std::string(v), &used);
    } catch (const std::exception&) {
      throw eja::config_error("bad p value: " + std::string(v));
    }
    if (used != v.size()) throw eja::config_error("bad p value: " + std::string(v));
    out.push_back(p);
  }
  return out;
}

int run_verify(const eja::SuiteConfig& cfg) {
  std::ofstream out;
  if (!cfg.report_path.empty()) {
    out.open(cfg.report_path);
    if (!out) throw eja::config_error("cannot write report to " + cfg.report_path);
  }
  const eja::Report rep = eja::run_suite(cfg);
  const std::string body = eja::emit_report(rep, cfg.format);
  if (cfg.report_path.empty()) {
    std::cout << body;
  } else {
    out << body;
    if (!out.flush()) throw eja::config_error("cannot write report to " + cfg.report_path);
    long violations = 0;
    for (const auto& r : rep.checks) violations += r.violation_count;
    std::cout << (rep.pass ? "PASS" : "FAIL") << " " << rep.suite << " on " << rep.algebra << ": " << rep.checks.size()
              << " checks, " << violations << " violations\n";
  }
  return eja::exit_code(rep);
}

int run_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eja::config_error("cannot read " + path);
  const eja::json doc = eja::json::parse(in);
  // a full report replays each stored witness
  std::vector<eja::json> witnesses;
  if (doc.value("schema", "") == eja::kReportSchema) {
    for (const auto& rec : doc.at("checks"))
      if (rec.contains("witness")) witnesses.push_back(rec.at("witness"));
  } else {
    witnesses.push_back(doc);
  }
  bool any_violation = false;
  for (const auto& w : witnesses) {
    const eja::ReplayResult r = eja::replay(w);
    std::cout << r.check << " trial " << w.value("trial", -1L) << ": gap " << eja::format_number(r.gap) << " tol "
              << eja::format_number(r.tolerance) << (r.violated ? " VIOLATED" : " ok") << "\n";
    any_violation = any_violation || r.violated;
  }
  if (witnesses.empty()) std::cout << "no witnesses\n";
  return any_violation ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded verification suites for Euclidean Jordan algebras"};
  app.require_subcommand(1);

  eja::SuiteConfig cfg;
  std::string p_text = "1,1.5,2,3,inf";
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("--suite", cfg.suite, "fan-theobald, holder, duality, positive-maps, pa-majorization, "
                                           "operator-norms, interpolation, appendix or all")
      ->capture_default_str();
  verify->add_option("--algebra", cfg.algebra, "algebra spec, e.g. rn:2+sym:3")->capture_default_str();
  verify->add_option("--trials", cfg.trials, "base trial count")->capture_default_str();
  verify->add_option("--seed", cfg.seed)->capture_default_str();
  verify->add_option("--p", p_text, "comma-separated exponents in [1, inf]")->capture_default_str();
  verify->add_option("--tol", cfg.tol)->capture_default_str();
  verify->add_option("--report", cfg.report_path, "write the report here instead of stdout");
  verify->add_option("--format", cfg.format, "json or text")->capture_default_str();
  verify->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();

  std::string witness_path;
  auto* rep = app.add_subcommand("replay", "re-evaluate a stored witness");
  rep->add_option("--witness", witness_path, "witness or report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      cfg.p_list = parse_p_list(p_text);
      cfg.validate();
      return run_verify(cfg);
    }
    return run_replay(witness_path);
  } catch (const std::exception& e) {
    std::cerr << "eja: " << e.what() << "\n";
    return 2;
  }
}
