// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "eja/verifier.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace eja;

namespace {

const char* kFour[] = {"rn:5", "spin:6", "sym:4", "rn:2+spin:3+sym:3"};

struct Tally {
  long records = 0;
  long trials = 0;
  long violations = 0;
  double worst = kInf;  // most negative gap over all records
  std::string worst_check;
  std::string first_failure;

  void add(const CheckRecord& r, const std::string& algebra) {
    ++records;
    trials += r.trials;
    violations += r.violation_count;
    if (r.worst_gap < worst) {
      worst = r.worst_gap;
      worst_check = r.name + "@" + algebra;
    }
    if (r.violation_count > 0 && first_failure.empty()) first_failure = r.name + "@" + algebra;
  }
  bool ok() const { return records > 0 && violations == 0; }
};

Tally& run(Tally& t, const std::string& suite, const std::string& algebra, long trials,
           const std::vector<std::string>& only = {}) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.algebra = algebra;
  cfg.trials = trials;
  cfg.seed = 20240601;
  for (const CheckRecord& r : run_suite(cfg).checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), r.name) == only.end()) continue;
    t.add(r, algebra);
  }
  return t;
}

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << "  [" << detail << "]" << std::endl;
  if (!ok) ++failures;
}

void report(int id, const std::string& title, const Tally& t) {
  std::string detail = std::to_string(t.records) + " records, " + std::to_string(t.trials) + " trials, " +
                       std::to_string(t.violations) + " violations, worst gap " + format_number(t.worst) + " (" +
                       t.worst_check + ")";
  if (!t.first_failure.empty()) detail += ", first failure " + t.first_failure;
  report(id, title, t.ok(), detail);
}

int shell(const std::string& args) {
  const std::string cmd = std::string(EJA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();

  {
    Tally t;
    for (const char* a : kFour) run(t, "fan-theobald", a, 10000);
    report(1, "fan-theobald gap and constructed equality", t);
  }
  {
    Tally t;
    for (const char* a : kFour) run(t, "holder", a, 10000);
    report(2, "holder chain, dual witness, minkowski, sup-norm inequalities", t);
  }
  {
    Tally t;
    for (const char* a : kFour)
      run(t, "duality", a, 1000, {"duality.equality-constructed", "duality.equality-generic"});
    report(3, "equality diagnosis on constructed and generic pairs", t);
  }
  {
    Tally t;
    for (const char* a : kFour) run(t, "pa-majorization", a, 10000);
    report(4, "quadratic representation majorization and shifted norms", t);
  }
  {
    Tally t;
    for (const char* a : kFour) run(t, "operator-norms", a, 200);
    report(5, "operator norm estimates vs closed forms, sampling, duality", t);
  }
  {
    Tally t;
    run(t, "positive-maps", "sym:4", 10000);
    for (const char* a : {"rn:5", "spin:6", "rn:2+spin:3+sym:3"}) run(t, "positive-maps", a, 2000);
    report(6, "positive map bounds, schur maps, z-map inverses, norm bound", t);
  }
  {
    Tally t;
    run(t, "interpolation", "rn:4", 1000);
    run(t, "interpolation", "sym:3", 1000);
    report(7, "k-functionals, norm recovery, operator norm interpolation, pointwise bound", t);
  }
  {
    Tally t;
    run(t, "appendix", "sym:4", 1000);
    run(t, "appendix", "spin:6", 1000);
    report(8, "appendix identity, doubly stochastic inverse, gram, peirce scaling", t);
  }
  {
    const auto dir = std::filesystem::temp_directory_path() / ("eja_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string base = "verify --suite all --algebra rn:2+spin:3+sym:2 --trials 25 --seed 9 --report ";
    const int c1 = shell(base + (dir / "a.json").string());
    const int c2 = shell(base + (dir / "b.json").string());
    const int c3 = shell(base + (dir / "c.json").string() + " --jobs 3");
    bool identical = false, witness_ok = false;
    try {
      const json a = json::parse(slurp(dir / "a.json")), b = json::parse(slurp(dir / "b.json")),
                 c = json::parse(slurp(dir / "c.json"));
      identical = a.at("checks").dump() == b.at("checks").dump() && a.at("checks").dump() == c.at("checks").dump() &&
                  !a.at("checks").empty();
      // a violating witness replays to exit 1
      const Check& check = find_check("fan-theobald.monotone-image-equality");
      const CheckContext ctx{parse_algebra("sym:3"), {2.0}, 1e-9};
      Rng rng(1);
      Instance inst = check.generate(rng, ctx, 0);
      inst.put("y", random_element(ctx.algebra, rng));
      SuiteConfig cfg;
      cfg.algebra = "sym:3";
      std::ofstream(dir / "w.json") << make_witness(check, cfg, 0, check.evaluate(inst, ctx), inst.to_json(), "").dump();
      witness_ok = shell("replay --witness " + (dir / "w.json").string()) == 1;
    } catch (const std::exception& e) {
      std::cerr << "criterion 9: " << e.what() << "\n";
    }
    const int bad_spec = shell("verify --suite holder --algebra sym:x --trials 2");
    const int bad_path = shell("verify --suite holder --algebra rn:2 --trials 2 --report " + (dir / "no/such/file").string());
    const bool codes = c1 == 0 && c2 == 0 && c3 == 0 && bad_spec == 2 && bad_path == 2 && witness_ok;
    std::filesystem::remove_all(dir);
    report(9, "determinism of suite all and exit codes", identical && codes,
           std::string("records identical across runs and --jobs 3: ") + (identical ? "yes" : "no") + ", exit codes " +
               std::to_string(c1) + "/" + std::to_string(c2) + "/" + std::to_string(c3) + ", bad spec " +
               std::to_string(bad_spec) + ", bad path " + std::to_string(bad_path) + ", violating replay " +
               (witness_ok ? "1" : "unexpected"));
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << " in " << std::fixed
            << std::setprecision(1) << secs << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
