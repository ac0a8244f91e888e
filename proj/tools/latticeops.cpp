// latticeops: command-line front end for the verification suites.
//
// Every command builds a JSON report (or a CSV table where the data is
// tabular), writes it to stdout or --out, and exits with
//   0  every requested check passed
//   1  a check failed (the failing item is named on stderr)
//   2  invalid input

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "battery.hpp"
#include "json_io.hpp"
#include "latticeops/latticeops.hpp"

namespace {

using namespace latticeops;
using io::json;

struct Config {
  std::string command;  // "verify ops", "classify", ...
  std::string lattice_path, pair_path;
  std::string family, params = "[]", base;
  std::string relation = "sx_raise";
  std::string backend = "auto";
  std::string format = "json";
  std::string out_path;
  std::string emit = "ttrr";
  std::string mu0 = "1";
  std::string from_c1;
  long N = -1;
  long precision = 0;
  double eps = kDefaultEps;
  unsigned long seed = 1;
  long max_degree = -1;
  long trials = 100;
  long horizon = 10;
  long rodrigues = -1;
  long asymptotics = -1;
  bool system = false;
};

struct Outcome {
  json report;
  std::optional<std::string> csv;  // set when the command produced a table and --format csv was asked
  std::string failure;             // empty on success
};

[[noreturn]] void fail_input(const std::string& why) { throw InvalidInput(why); }

long horizon_or(const Config& cfg, long fallback) { return cfg.N >= 0 ? cfg.N : fallback; }

template <Scalar S>
Lattice<S> need_lattice(const Config& cfg) {
  if (cfg.lattice_path.empty()) fail_input("this command needs --lattice");
  return io::lattice_from_json<S>(io::read_json_file(cfg.lattice_path));
}

template <Scalar S>
PearsonPair<S> need_pair(const Config& cfg) {
  if (cfg.pair_path.empty()) fail_input("this command needs --pair");
  return io::pair_from_json<S>(io::read_json_file(cfg.pair_path));
}

template <Scalar S>
std::vector<S> parse_params(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    fail_input("--params must be a JSON array, got '" + text + "'");
  }
  if (!j.is_array()) fail_input("--params must be a JSON array");
  std::vector<S> v;
  for (const auto& e : j) v.push_back(io::scalar_from_json<S>(e));
  return v;
}

std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) return v[0].get<std::string>() + (v[1].get<std::string>()[0] == '-' ? "" : "+") +
                           v[1].get<std::string>() + "i";
  return v.dump();
}

std::string fails_at(const std::string& what, long n) { return what + " fails at n=" + std::to_string(n); }

// --- verify ---------------------------------------------------------------------

template <Scalar S>
Outcome verify_ops(const Config& cfg) {
  auto lat = need_lattice<S>(cfg);
  battery::Rng rng(cfg.seed);
  const int max_degree = static_cast<int>(cfg.max_degree >= 0 ? cfg.max_degree : 8);
  const std::vector<OperatorIdentity> ids{OperatorIdentity::product_dx, OperatorIdentity::product_sx,
                                          OperatorIdentity::swap_sx, OperatorIdentity::swap_dx,
                                          OperatorIdentity::dxn_sx};
  std::vector<double> worst(ids.size(), 0);
  std::vector<long> first_bad(ids.size(), -1);
  for (long trial = 0; trial < cfg.trials; ++trial) {
    auto f = battery::random_poly<S>(rng, max_degree), g = battery::random_poly<S>(rng, max_degree);
    long n = 1 + trial % 4;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto r = verify_operator_identity(lat, ids[i], f, g, n, cfg.eps);
      worst[i] = std::max(worst[i], r.value);
      if (!r.pass && first_bad[i] < 0) first_bad[i] = trial;
    }
  }
  Outcome out;
  json rows = json::array();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rows.push_back({{"identity", identity_name(ids[i])},
                    {"statement", identity_statement(ids[i])},
                    {"max_residual", worst[i]},
                    {"pass", first_bad[i] < 0},
                    {"first_failing_trial", first_bad[i] < 0 ? json(nullptr) : json(first_bad[i])}});
    if (first_bad[i] >= 0 && out.failure.empty())
      out.failure = std::string(identity_name(ids[i])) + " fails on trial " + std::to_string(first_bad[i]);
  }
  out.report = {{"lattice", io::lattice_to_json(lat)},
                {"trials", cfg.trials},
                {"max_degree", max_degree},
                {"seed", cfg.seed},
                {"identities", rows}};
  return out;
}

template <Scalar S>
MomentFunctional<S> functional_for(const Config& cfg, const Lattice<S>& lat, battery::Rng& rng, long horizon) {
  if (!cfg.pair_path.empty())
    return pearson_moments(lat, need_pair<S>(cfg), io::scalar_from_json<S>(json(cfg.mu0)), horizon, cfg.eps);
  return battery::random_functional<S>(rng, horizon);
}

template <Scalar S>
Outcome verify_functionals(const Config& cfg, bool leibniz) {
  auto lat = need_lattice<S>(cfg);
  battery::Rng rng(cfg.seed);
  const long n_max = horizon_or(cfg, leibniz ? 5 : 3);
  const int max_degree = static_cast<int>(cfg.max_degree >= 0 ? cfg.max_degree : 4);
  const long M = cfg.horizon;
  auto u = functional_for(cfg, lat, rng, M + max_degree + 2 * n_max + 4);
  std::vector<FunctionalIdentity> ids;
  if (leibniz) {
    ids = {FunctionalIdentity::leibniz};
    if (!lat.unit_base()) ids.push_back(FunctionalIdentity::leibniz_deg2);
  } else {
    ids = {FunctionalIdentity::dual_product_dx, FunctionalIdentity::dual_product_sx, FunctionalIdentity::dual_dxn_sx};
  }
  Outcome out;
  json rows = json::array();
  for (long trial = 0; trial < std::max(1L, cfg.trials / 10); ++trial) {
    auto f = battery::random_poly<S>(rng, max_degree);
    for (auto id : ids) {
      Polynomial<S> g = f;
      if (id == FunctionalIdentity::leibniz_deg2)
        g = Polynomial<S>({f.coeff(0), f.coeff(1), is_zero(f.coeff(2)) ? S(1) : f.coeff(2)});
      for (long n = leibniz ? 0 : 1; n <= n_max + (id == FunctionalIdentity::leibniz_deg2 ? 1 : 0); ++n) {
        auto r = verify_functional_identity(lat, id, g, u, n, M, cfg.eps);
        rows.push_back({{"identity", identity_name(id)},
                        {"statement", identity_statement(id)},
                        {"trial", trial},
                        {"n", n},
                        {"residual", r.value},
                        {"pass", r.pass}});
        if (!r.pass && out.failure.empty())
          out.failure = std::string(identity_name(id)) + " fails at n=" + std::to_string(n) + " (trial " +
                        std::to_string(trial) + ")";
      }
    }
  }
  out.report = {{"lattice", io::lattice_to_json(lat)}, {"moments_compared", M}, {"seed", cfg.seed}, {"checks", rows}};
  return out;
}

// --- moments --------------------------------------------------------------------

template <Scalar S>
Outcome moments(const Config& cfg) {
  auto lat = need_lattice<S>(cfg);
  auto pair = need_pair<S>(cfg);
  const long N = horizon_or(cfg, 20);
  auto u = pearson_moments(lat, pair, io::scalar_from_json<S>(json(cfg.mu0)), N, cfg.eps);
  Outcome out;
  std::vector<S> mu(u.moments().begin(), u.moments().begin() + N + 1);
  out.report = {{"lattice", io::lattice_to_json(lat)}, {"pair", io::pair_to_json(pair)}, {"moments", io::scalars_to_json(mu)}};
  std::ostringstream csv;
  csv << "n,mu_n\n";
  for (long n = 0; n <= N; ++n) csv << n << ',' << csv_cell(io::scalar_to_json(mu[static_cast<std::size_t>(n)])) << '\n';
  out.csv = csv.str();
  return out;
}

// --- classify -------------------------------------------------------------------

template <Scalar S>
std::string ttrr_csv(const Ttrr<S>& t) {
  std::ostringstream csv;
  csv << "n,B_n,C_{n+1}\n";
  for (long n = 0; n < t.size(); ++n)
    csv << n << ',' << csv_cell(io::scalar_to_json(t.B[static_cast<std::size_t>(n)])) << ','
        << csv_cell(io::scalar_to_json(t.C[static_cast<std::size_t>(n + 1)])) << '\n';
  return csv.str();
}

template <Scalar S>
Outcome classify(const Config& cfg) {
  auto lat = need_lattice<S>(cfg);
  auto pair = need_pair<S>(cfg);
  const long N = horizon_or(cfg, 20);
  Outcome out;
  out.report = {{"lattice", io::lattice_to_json(lat)}, {"pair", io::pair_to_json(pair)}, {"N", N}};

  auto reg = regularity(lat, pair, N, cfg.eps);
  out.report["admissibility"] = {{"d", io::scalars_to_json(reg.d)},
                                 {"pass", reg.verdict != Verdict::fails_admissibility}};
  json records = json::array();
  for (const auto& r : reg.records)
    records.push_back({{"n", r.n}, {"point", io::scalar_to_json(r.point)}, {"witness", io::scalar_to_json(r.witness)}});
  out.report["regularity"] = {{"verdict", verdict_name(reg.verdict)},
                              {"failed_at", reg.failed_at < 0 ? json(nullptr) : json(reg.failed_at)},
                              {"witnesses", records}};
  if (!reg.regular()) {
    out.failure = fails_at(verdict_name(reg.verdict), reg.failed_at);
    return out;
  }

  auto t = ttrr_from_pearson(lat, pair, N, cfg.eps);
  auto tj = io::ttrr_to_json(t);
  out.report["B"] = tj["B"];
  out.report["C"] = tj["C"];
  out.report["C_starts_at"] = 1;
  out.csv = ttrr_csv(t);

  if (cfg.rodrigues >= 0) {
    json rows = json::array();
    for (long n = 0; n <= cfg.rodrigues; ++n) {
      auto r = rodrigues_verify(lat, pair, n, cfg.horizon, cfg.eps);
      rows.push_back({{"n", n}, {"statement", r.statement}, {"residual", r.value}, {"pass", r.pass}});
      if (!r.pass && out.failure.empty()) out.failure = fails_at("Rodrigues formula", n);
    }
    out.report["rodrigues_residuals"] = rows;
  }
  if (cfg.asymptotics >= 0) {
    auto a = latticeops::asymptotics(lat, pair, cfg.asymptotics, -1, cfg.eps);
    out.report["asymptotics"] = io::asymptotics_to_json(a);
    if (!a.pass() && out.failure.empty()) out.failure = "asymptotic estimates miss their limits";
  }
  return out;
}

// --- family ---------------------------------------------------------------------

template <Scalar S>
Lattice<S> family_lattice(const Config& cfg, FamilyName name) {
  if (!cfg.lattice_path.empty()) return need_lattice<S>(cfg);
  if (name == FamilyName::meixner2) return Lattice<S>(S(1), {S(0), S(1), S(0)});
  return standard_q_lattice(parse_real<S>(cfg.base.empty() ? "1/4" : cfg.base));
}

template <Scalar S>
FamilySpec<S> family_spec(const Config& cfg) {
  FamilySpec<S> spec{parse_family(cfg.family), parse_params<S>(cfg.params), {}};
  if (!cfg.base.empty()) spec.base = parse_real<S>(cfg.base);
  return spec;
}

template <Scalar S>
Outcome family(const Config& cfg) {
  if (cfg.family.empty()) fail_input("family needs --name");
  auto spec = family_spec<S>(cfg);
  auto lat = family_lattice<S>(cfg, spec.name);
  const long N = horizon_or(cfg, 12);
  auto t = family_ttrr(lat, spec, N);
  Outcome out;
  out.report = {{"family", family_name(spec.name)}, {"params", io::scalars_to_json(spec.params)},
                {"lattice", io::lattice_to_json(lat)}};
  if (cfg.emit == "ttrr") {
    auto tj = io::ttrr_to_json(t);
    out.report["B"] = tj["B"];
    out.report["C"] = tj["C"];
    out.report["C_starts_at"] = 1;
    out.csv = ttrr_csv(t);
  } else if (cfg.emit == "polys") {
    auto ops = build_ops(lat, t, N);
    json polys = json::array();
    for (long n = 0; n <= N; ++n) polys.push_back(io::poly_to_json(ops[n]));
    out.report["polynomials"] = polys;
    out.report["coefficient_order"] = "increasing degree";
  } else {
    fail_input("--emit must be ttrr or polys");
  }
  return out;
}

// --- characterize -----------------------------------------------------------------

template <Scalar S>
Outcome characterize(const Config& cfg) {
  const Relation rel = parse_relation(cfg.relation);
  const long N = horizon_or(cfg, 12);
  Outcome out;
  Lattice<S> lat = Lattice<S>(S(1), {S(0), S(1), S(0)});
  Ttrr<S> t;
  json source;
  if (rel == Relation::counterexample4term) {
    lat = cfg.lattice_path.empty() ? standard_q_lattice(parse_real<S>(cfg.base.empty() ? "1/4" : cfg.base))
                                   : need_lattice<S>(cfg);
    t = four_term_family(lat, N + 1);
    source = "R_n(x; 1, -1, q^{1/4} | q^{1/2})";
  } else if (!cfg.from_c1.empty()) {
    lat = need_lattice<S>(cfg);
    auto sol = solve_first_characterization(lat, parse_real<S>(cfg.from_c1), N + 1, 1, cfg.eps);
    t = sol.ttrr;
    source = {{"C1", cfg.from_c1}, {"r", io::scalar_to_json(sol.r)}, {"pair", io::pair_to_json(sol.pair)}};
  } else if (!cfg.family.empty()) {
    auto spec = family_spec<S>(cfg);
    lat = family_lattice<S>(cfg, spec.name);
    t = family_ttrr(lat, spec, N + 1);
    source = {{"family", family_name(spec.name)}, {"params", io::scalars_to_json(spec.params)}};
  } else if (!cfg.pair_path.empty()) {
    lat = need_lattice<S>(cfg);
    auto pair = need_pair<S>(cfg);
    t = ttrr_from_pearson(lat, pair, N + 1, cfg.eps);
    source = {{"pair", io::pair_to_json(pair)}};
  } else {
    fail_input("characterize needs --family, --pair or --from-c1 (or --relation counterexample)");
  }
  auto rep = check_structure(OpSequence<S>(lat, t, N + 1), rel, N, cfg.eps);
  out.report = io::structure_to_json(rep);
  out.report["lattice"] = io::lattice_to_json(lat);
  out.report["source"] = source;
  if (!rep.pass()) out.failure = fails_at(relation_name(rel), rep.first_failure);
  if (cfg.system) {
    auto sys = check_system(lat, t, N, cfg.eps);
    out.report["system"] = io::system_to_json(sys);
    if (!sys.pass() && out.failure.empty()) {
      for (const char* eq : {"eq1", "eq2", "eq3", "eq4", "eq5"})
        if (long n = sys.first_failure(eq); n >= 0) {
          out.failure = fails_at(std::string("system ") + eq, n);
          break;
        }
    }
  }
  return out;
}

// --- all ------------------------------------------------------------------------

Outcome run_all() {
  Outcome out;
  json rows = json::array();
  auto criteria = battery::all_criteria();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto r = battery::run_guarded(static_cast<int>(i + 1), criteria[i]);
    std::cerr << battery::format_line(r) << '\n';
    rows.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass && out.failure.empty()) out.failure = "criterion " + std::to_string(r.id) + " fails";
  }
  out.report = {{"criteria", rows}};
  return out;
}

// --- dispatch -------------------------------------------------------------------

template <Scalar S>
Outcome run_with(const Config& cfg) {
  PrecisionScope scope(cfg.precision);
  const std::string& c = cfg.command;
  if (c == "verify ops") return verify_ops<S>(cfg);
  if (c == "verify leibniz") return verify_functionals<S>(cfg, true);
  if (c == "verify duals") return verify_functionals<S>(cfg, false);
  if (c == "moments") return moments<S>(cfg);
  if (c == "classify") return classify<S>(cfg);
  if (c == "family") return family<S>(cfg);
  if (c == "characterize") return characterize<S>(cfg);
  fail_input("unknown command '" + c + "'");
}

Outcome dispatch(const Config& cfg, std::string& backend_used) {
  if (cfg.command == "all") {
    backend_used = "mixed";
    return run_all();
  }
  if (cfg.backend == "exact") {
    backend_used = "exact";
    return run_with<ExactScalar>(cfg);
  }
  if (cfg.backend == "bigfloat") {
    backend_used = "bigfloat";
    return run_with<BigScalar>(cfg);
  }
  try {
    backend_used = "exact";
    return run_with<ExactScalar>(cfg);
  } catch (const NotRepresentable&) {
    // an irrational value (typically sqrt(q)) appeared; rerun in floating point
    backend_used = "bigfloat";
    return run_with<BigScalar>(cfg);
  }
}

long default_precision_from_env() {
  if (const char* v = std::getenv("LATTICEOPS_PRECISION")) {
    try {
      return std::stol(v);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("LATTICEOPS_PRECISION must be an integer, got '") + v + "'");
    }
  }
  return kDefaultPrecisionBits;
}

void add_common(CLI::App* app, Config& cfg) {
  app->add_option("--lattice", cfg.lattice_path, "lattice JSON file");
  app->add_option("--pair", cfg.pair_path, "Pearson pair JSON file");
  app->add_option("-N", cfg.N, "horizon");
  app->add_option("--backend", cfg.backend, "exact | bigfloat | auto")->check(CLI::IsMember({"exact", "bigfloat", "auto"}));
  app->add_option("--precision", cfg.precision, "bigfloat precision in bits");
  app->add_option("--eps", cfg.eps, "tolerance for bigfloat comparisons");
  app->add_option("--seed", cfg.seed, "random seed");
  app->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", cfg.out_path, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Operators, functionals and recurrences on nonuniform lattices"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "operator and functional identity suites");
  std::string suite;
  verify->add_option("suite", suite, "ops | leibniz | duals")->required()->check(CLI::IsMember({"ops", "leibniz", "duals"}));
  verify->add_option("--max-degree", cfg.max_degree, "largest random polynomial degree");
  verify->add_option("--trials", cfg.trials, "number of random trials");
  verify->add_option("--horizon", cfg.horizon, "moments compared (functional suites)");
  verify->add_option("--mu0", cfg.mu0, "first moment when --pair supplies the functional");
  add_common(verify, cfg);

  auto* mom = app.add_subcommand("moments", "moments of the Pearson functional");
  mom->add_option("--mu0", cfg.mu0, "first moment");
  add_common(mom, cfg);

  auto* cls = app.add_subcommand("classify", "admissibility, regularity and recurrence of a pair");
  cls->add_option("--rodrigues", cfg.rodrigues, "check the Rodrigues formula for n up to this");
  cls->add_option("--asymptotics", cfg.asymptotics, "check large-n limits at this n");
  cls->add_option("--horizon", cfg.horizon, "moments compared by the Rodrigues check");
  add_common(cls, cfg);

  auto* fam = app.add_subcommand("family", "recurrence data of a named family");
  fam->add_option("--name,--family", cfg.family, "askey_wilson | meixner2 | al_salam | cdq_hahn | q_hermite | chebyshev_u")
      ->required();
  fam->add_option("--params", cfg.params, "JSON array of parameters");
  fam->add_option("--base", cfg.base, "family base (defaults to the lattice q, or 1/4 without --lattice)");
  fam->add_option("--emit", cfg.emit, "ttrr | polys")->check(CLI::IsMember({"ttrr", "polys"}));
  add_common(fam, cfg);

  auto* chr = app.add_subcommand("characterize", "structure relations and the lowering-relation system");
  chr->add_option("--relation", cfg.relation, "sx_raise | lower | counterexample");
  chr->add_option("--family", cfg.family, "named family supplying the recurrence");
  chr->add_option("--params", cfg.params, "JSON array of family parameters");
  chr->add_option("--base", cfg.base, "family base");
  chr->add_option("--from-c1", cfg.from_c1, "build the raising-relation candidate from this C_1");
  chr->add_flag("--system", cfg.system, "also check the lowering-relation system");
  add_common(chr, cfg);

  auto* all = app.add_subcommand("all", "run the acceptance battery");
  add_common(all, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cfg.precision == 0) cfg.precision = default_precision_from_env();
    if (cfg.precision < kMinPrecisionBits)
      throw InvalidInput("precision must be at least " + std::to_string(kMinPrecisionBits) + " bits");
    if (cfg.N == 0 || cfg.N < -1) throw InvalidInput("-N must be at least 1");
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (cfg.command == "verify") cfg.command += " " + suite;

    std::string backend_used;
    Outcome out = dispatch(cfg, backend_used);

    std::string text;
    if (cfg.format == "csv") {
      if (!out.csv) throw InvalidInput("--format csv is only available for recurrence and moment tables");
      text = *out.csv;
    } else {
      json doc = {{"command", cfg.command}, {"backend", backend_used}, {"pass", out.failure.empty()}};
      if (backend_used == "bigfloat") doc["precision_bits"] = cfg.precision;
      if (!out.failure.empty()) doc["failure"] = out.failure;
      doc["report"] = out.report;
      text = doc.dump(2) + "\n";
    }
    if (cfg.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out_path);
      if (!f) throw InvalidInput("cannot write '" + cfg.out_path + "'");
      f << text;
    }
    if (!out.failure.empty()) {
      std::cerr << "latticeops: " << out.failure << '\n';
      return 1;
    }
    return 0;
  } catch (const InvalidInput& e) {
    std::cerr << "latticeops: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const NotRepresentable& e) {
    std::cerr << "latticeops: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const AdmissibilityFailure& e) {
    std::cerr << "latticeops: " << fails_at("admissibility", e.index()) << '\n';
    return 1;
  } catch (const NotRegular& e) {
    std::cerr << "latticeops: " << fails_at("regularity", e.level()) << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "latticeops: " << e.what() << '\n';
    return 1;
  }
}
