#include "borcherds/cli.hpp"

#include "borcherds/bounds.hpp"
#include "borcherds/classifier.hpp"
#include "borcherds/siegel_theta.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace borcherds::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string format = "table";
  std::string cache_path;
  std::string id;
  std::string cap;
  bool orbits = false;
  bool all = false;
  bool check = false;
  std::string theta_case;
  std::uint64_t seed = 1;
  int level = 1;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const LatticeSpec& lookup(const std::string& id) {
  for (const auto& s : catalog())
    if (s.id == id) return s;
  throw UsageError("unknown lattice id: " + id);
}

std::unique_ptr<CoefficientCache> open_cache(const RunConfig& cfg) {
  std::string path = cfg.cache_path;
  if (path.empty())
    if (const char* env = std::getenv("BORCHERDS_CACHE")) path = env;
  if (path.empty()) return nullptr;
  return std::make_unique<CoefficientCache>(path);
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& s : catalog()) {
      json gram = json::array();
      for (std::size_t i = 0; i < s.gram.rank(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.gram.rank(); ++j) row.push_back(static_cast<long long>(s.gram(i, j)));
        gram.push_back(row);
      }
      rows.push_back({{"id", s.id},
                      {"genus_symbol", s.genus_symbol},
                      {"n", s.n},
                      {"construction", s.construction},
                      {"gram", gram},
                      {"expected_d", s.expected_d},
                      {"split_N", s.split_N}});
    }
    out << rows.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "id,genus_symbol,n,construction,expected_d,split_N\n";
    for (const auto& s : catalog())
      out << s.id << ',' << csv_quote(s.genus_symbol) << ',' << s.n << ',' << csv_quote(s.construction) << ','
          << s.expected_d << ',' << s.split_N << '\n';
  } else {
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-18s %3s %-26s %6s %4s\n", "id", "genus", "n", "lattice", "d", "N");
    out << line;
    for (const auto& s : catalog()) {
      std::snprintf(line, sizeof line, "%-16s %-18s %3d %-26s %6lld %4lld\n", s.id.c_str(), s.genus_symbol.c_str(),
                    s.n, s.construction.c_str(), static_cast<long long>(s.expected_d),
                    static_cast<long long>(s.split_N));
      out << line;
    }
  }
  return kExitOk;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
  const LatticeSpec& spec = lookup(cfg.id);
  Rational cap;
  if (cfg.cap.empty()) {
    cap = search_cap(spec, Rational(spec.n, 2) * 2 - 2);
  } else {
    try {
      cap = parse_rational(cfg.cap);
    } catch (const std::exception&) {
      throw UsageError("invalid cap: " + cfg.cap);
    }
    if (cap < 0) throw UsageError("cap must be nonnegative");
  }
  auto cache = open_cache(cfg);
  EisensteinSeries E(spec);
  if (cache) E.attach_cache(cache.get());
  const auto table = expansion_table(E, cap);

  if (!cfg.orbits) {
    if (cfg.format == "json") {
      out << table_to_json(table);
    } else if (cfg.format == "csv") {
      out << table_to_csv(table);
    } else {
      for (const auto& g : table.elements) {
        std::string row;
        for (const auto& [n, a] : table.coefficients.at(g.coords))
          if (a != 0) row += " " + to_string(n) + ":" + to_string(a);
        out << to_string(g) << row << "\n";
      }
    }
    return kExitOk;
  }
  if (cfg.format == "json") {
    out << groups_to_json(table);
  } else if (cfg.format == "csv") {
    out << "size,order,representative,q_value,expansion\n";
    for (const auto& g : table.groups)
      out << g.size() << ',' << g.representative.order << ',' << csv_quote(to_string(g.representative)) << ','
          << to_string(g.representative.qval) << ',' << csv_quote(format_expansion(g.expansion)) << '\n';
  } else {
    char line[128];
    std::snprintf(line, sizeof line, "%5s %5s %-24s %s\n", "size", "order", "representative", "expansion");
    out << line;
    for (const auto& g : table.groups) {
      std::snprintf(line, sizeof line, "%5zu %5lld %-24s ", g.size(), static_cast<long long>(g.representative.order),
                    to_string(g.representative).c_str());
      out << line << format_expansion(g.expansion) << "\n";
    }
  }
  return kExitOk;
}

int cmd_bound(const RunConfig& cfg, std::ostream& out) {
  const LatticeSpec& spec = lookup(cfg.id);
  const auto C = constant_C(spec);
  const Rational T = Rational(spec.n) - 2;
  const Rational cap = search_cap(C, T);
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return std::string(buf);
  };
  if (cfg.format == "json") {
    json j = {{"id", spec.id},
              {"k", to_string(C.k)},
              {"d", to_string(C.d)},
              {"N", to_string(C.N)},
              {"C_formula", C.value_formula},
              {"C_used", C.value_used},
              {"T", to_string(T)},
              {"cap", to_string(cap)}};
    out << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "id,k,d,N,C_formula,C_used,T,cap\n"
        << spec.id << ',' << to_string(C.k) << ',' << C.d << ',' << C.N << ',' << num(C.value_formula) << ','
        << num(C.value_used) << ',' << to_string(T) << ',' << to_string(cap) << '\n';
  } else {
    out << "id         " << spec.id << "\n"
        << "k          " << to_string(C.k) << "\n"
        << "d          " << C.d << "\n"
        << "N          " << C.N << "\n"
        << "C_formula  " << num(C.value_formula) << "\n"
        << "C_used     " << num(C.value_used) << "\n"
        << "T          " << to_string(T) << "\n"
        << "cap        " << to_string(cap) << "\n";
  }
  return kExitOk;
}

// Mismatches between a report set and the built-in expectations.
std::vector<std::string> check_reports(const std::vector<ClassificationReport>& reports, bool full) {
  std::vector<std::string> problems;
  const auto& expected = expected_admitting_ids();
  std::set<std::string> seen;
  for (const auto& r : reports) {
    if (r.admits()) seen.insert(r.id);
    if (r.admits() != (expected.count(r.id) > 0))
      problems.push_back(r.id + (r.admits() ? " admits a solution" : " admits no solution"));
    if (r.id == "n3_2_7p1_4p4" && r.solutions.size() != 2)
      problems.push_back(r.id + " has " + std::to_string(r.solutions.size()) + " solution families, expected 2");
  }
  if (full && seen != expected) problems.push_back("admitting set differs from the expected nine genera");
  return problems;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.all == !cfg.id.empty()) throw UsageError("classify needs exactly one of <id> or --all");
  if (!cfg.all) lookup(cfg.id);
  auto cache = open_cache(cfg);
  std::vector<ClassificationReport> reports;
  if (cfg.all)
    reports = classify_catalog(cache.get());
  else
    reports.push_back(solve_singular_weight(lookup(cfg.id), cache.get()));

  if (cfg.format == "json")
    out << report_to_json(reports);
  else if (cfg.format == "csv") {
    out << "id,genus_symbol,n,weight,cap,good_classes,families,admits\n";
    for (const auto& r : reports)
      out << r.id << ',' << csv_quote(r.genus_symbol) << ',' << r.n << ',' << to_string(r.weight) << ','
          << to_string(r.cap) << ',' << r.classes.size() << ',' << r.solutions.size() << ','
          << (r.admits() ? "yes" : "no") << '\n';
  } else
    out << report_to_table(reports);

  if (!cfg.check) return kExitOk;
  const auto problems = check_reports(reports, cfg.all);
  if (cfg.format == "table") {
    out << "\nadmitting genera\n";
    for (const auto& r : reports)
      if (r.admits()) {
        BigInt parts = 0;
        for (const auto& s : r.solutions) parts += s.principal_parts;
        char line[160];
        std::snprintf(line, sizeof line, "  %-16s %-18s n=%-3d weight %-5s families %zu principal parts %s\n",
                      r.id.c_str(), r.genus_symbol.c_str(), r.n, to_string(r.weight).c_str(), r.solutions.size(),
                      parts.str().c_str());
        out << line;
      }
  }
  for (const auto& p : problems) err << "check: " << p << "\n";
  if (!problems.empty()) return kExitMismatch;
  err << "check: ok\n";
  return kExitOk;
}

int cmd_theta(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> slugs;
  if (cfg.theta_case == "all") {
    for (const auto& c : theta_cases()) slugs.push_back(c.slug);
  } else {
    try {
      find_theta_case(cfg.theta_case);
    } catch (const std::out_of_range&) {
      throw UsageError("unknown theta case: " + cfg.theta_case);
    }
    slugs.push_back(cfg.theta_case);
  }
  std::vector<CaseReport> reports;
  for (const auto& s : slugs) reports.push_back(verify_case(s, cfg.seed, {}, false));
  out << case_reports_to_json(reports);
  bool ok = true;
  for (const auto& r : reports)
    for (const auto& c : r.checks)
      if (!c.passed) {
        ok = false;
        err << "theta-verify: " << r.slug << " " << c.kind << " " << c.gamma << " " << c.theta << " " << c.argument
            << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
      }
  return ok ? kExitOk : kExitMismatch;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  bool ok = true;
  auto report = [&](const std::string& name, bool pass) {
    out << (pass ? "PASS " : "FAIL ") << name << "\n";
    ok = ok && pass;
  };
  auto zero = [](const LatticeSpec& spec) { return DiscriminantGroup(spec.gram).zero(); };

  {
    const auto& s26 = lookup("n26_1p1");
    const auto& s18 = lookup("n18_1p1");
    const auto& s10 = lookup("n10_1p1");
    EisensteinSeries e26(s26), e18(s18), e10(s10);
    report("unimodular a_E(0,1)", e26.coefficient(zero(s26), 1) == -24 && e18.coefficient(zero(s18), 1) == -264 &&
                                      e10.coefficient(zero(s10), 1) == -504);
  }
  const auto& d512 = lookup("n3_2_7p1_4p4");
  {
    const auto C = constant_C(d512);
    const double expected = 2.0 / 15 - std::numbers::pi * std::numbers::pi / 90;
    report("bound constant and cap", std::abs(C.value_used - expected) < 1e-9 && search_cap(d512, 1) == 13);
  }
  {
    EisensteinSeries E(d512);
    report("a_E(0,1) = -10 on A1(-1)+U(4)+U(4)", E.coefficient(zero(d512), 1) == -10);
  }
  report("theta_1111 on z2 = 0", theta_1111_on_z2_zero(cfg.seed) < 1e-12);

  if (cfg.level >= 1) {
    EisensteinSeries E(d512);
    const auto table = expansion_table(E, 12);
    std::multiset<std::size_t> sizes;
    for (const auto& g : table.groups) sizes.insert(g.size());
    report("expansion groups of A1(-1)+U(4)+U(4)", sizes == std::multiset<std::size_t>{1, 6, 10, 15, 120, 120, 120, 120});
    report("theta case a1m4_u_u", verify_case("a1m4_u_u", cfg.seed, {}, false).passed());
  }
  if (cfg.level >= 2) {
    report("classification of the catalog", check_reports(classify_catalog(), true).empty());
    bool all = true;
    for (const auto& c : theta_cases()) all = all && verify_case(c.slug, cfg.seed, {}, false).passed();
    report("all theta cases", all);
  }
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Eisenstein coefficients, singular weight classification and theta divisors", "borcherds"};
  app.require_subcommand(1);
  app.add_option("--cache", cfg.cache_path, "JSON-lines coefficient cache (default: $BORCHERDS_CACHE)");
  const std::vector<std::string> formats = {"table", "json", "csv"};

  auto* catalog_cmd = app.add_subcommand("catalog", "List the lattices");
  catalog_cmd->add_option("--format", cfg.format)->check(CLI::IsMember(formats));

  auto* coeffs_cmd = app.add_subcommand("coeffs", "Eisenstein coefficients up to a cap");
  coeffs_cmd->add_option("id", cfg.id)->required();
  coeffs_cmd->add_option("--cap", cfg.cap, "Largest floor(n) listed (rational)");
  coeffs_cmd->add_flag("--orbits", cfg.orbits, "Group elements with identical expansions");
  coeffs_cmd->add_option("--format", cfg.format)->check(CLI::IsMember(formats));

  auto* bound_cmd = app.add_subcommand("bound", "Coefficient bound and search cap");
  bound_cmd->add_option("id", cfg.id)->required();
  bound_cmd->add_option("--format", cfg.format)->check(CLI::IsMember(formats));

  auto* classify_cmd = app.add_subcommand("classify", "Singular weight principal parts");
  classify_cmd->add_option("id", cfg.id);
  classify_cmd->add_flag("--all", cfg.all);
  classify_cmd->add_flag("--check", cfg.check, "Compare with the expected admitting genera");
  classify_cmd->add_option("--format", cfg.format)->check(CLI::IsMember(formats));

  auto* theta_cmd = app.add_subcommand("theta-verify", "Theta divisor checks in signature (2,3)");
  theta_cmd->add_option("case", cfg.theta_case, "Case slug or 'all'")->required();
  theta_cmd->add_option("--seed", cfg.seed);

  auto* selftest_cmd = app.add_subcommand("selftest", "Quick consistency checks");
  selftest_cmd->add_option("--level", cfg.level)->check(CLI::Range(0, 2));
  selftest_cmd->add_option("--seed", cfg.seed);

  std::vector<const char*> argv = {"borcherds"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (catalog_cmd->parsed()) return cmd_catalog(cfg, out);
    if (coeffs_cmd->parsed()) return cmd_coeffs(cfg, out);
    if (bound_cmd->parsed()) return cmd_bound(cfg, out);
    if (classify_cmd->parsed()) return cmd_classify(cfg, out, err);
    if (theta_cmd->parsed()) return cmd_theta(cfg, out, err);
    if (selftest_cmd->parsed()) return cmd_selftest(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace borcherds::cli
