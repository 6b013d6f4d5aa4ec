// pald: command-line front end.
//
//   pald gen     --generator blobs --n 400 --out data.csv
//   pald pald    --points data.csv --out run/
//   pald pannld  --points data.csv --k 10 --out run/
//   pald verify  --check means --trials 10000
//   pald compare --points data.csv --k 15
//   pald export  --points data.csv --what rank-tables --out tables.csv
//
// Flags can also come from the environment as PALD_<FLAG> (e.g. PALD_K, PALD_SEED).
// Exit codes: 0 ok, 1 failed verification, 2 bad input, 3 degree cap, 4 axiom violation.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pald/compare.hpp"
#include "pald/errors.hpp"
#include "pald/io.hpp"
#include "pald/kernels.hpp"
#include "pald/lab.hpp"
#include "pald/pald.hpp"
#include "pald/pannld.hpp"
#include "pald/parallel.hpp"
#include "pald/random.hpp"

namespace fs = std::filesystem;
using namespace pald;
using nlohmann::json;

namespace {

struct Args {
  std::string config_file;
  std::string points, distances, rank_tables;
  std::string generator = "euclidean";
  std::size_t n = 200;
  std::size_t dim = 2;
  std::size_t clusters = 2;
  double separation = 8.0;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::size_t k = 10;
  std::string phi_mode = "exact";
  std::size_t degree_cap = 0;
  std::size_t threads = 0;
  bool force = false;
  std::string out;  // empty: "out", or the config's directory
  // verify
  std::string check = "means";
  std::size_t trials = 10000;
  double theta = 0.5;
  std::size_t m = 0;
  // gen / export
  std::string format;
  std::string what = "rank-tables";
};

void add_input_flags(CLI::App* sub, Args& a) {
  auto* g = sub->add_option_group("input");
  g->add_option("--config", a.config_file, "Run config JSON (as written next to every run)");
  g->add_option("--points", a.points, "Points CSV: id,c1,...,cd");
  g->add_option("--distances", a.distances, "Dissimilarity matrix CSV (n x n, no header)");
  g->add_option("--rank-tables", a.rank_tables, "Rank tables CSV: base,member,rank");
  g->add_option("--generator", a.generator, "euclidean | blobs | star | random-tournament")
      ->envname("PALD_GENERATOR");
  g->add_option("--n", a.n, "Points to generate (leaves for star)")->envname("PALD_N");
  g->add_option("--dim", a.dim, "Dimension for euclidean and blobs");
  g->add_option("--clusters", a.clusters, "Blob count");
  g->add_option("--separation", a.separation, "Blob center spacing");
  g->add_option("--weights", a.weights, "Star edge weights (overrides --n)");
}

void add_common_flags(CLI::App* sub, Args& a) {
  sub->add_option("--seed", a.seed, "Root seed; every random stream derives from it")
      ->envname("PALD_SEED");
  sub->add_option("--threads", a.threads, "Worker budget (0 = all cores)")->envname("PALD_THREADS");
  sub->add_option("--out", a.out, "Output directory or file")->envname("PALD_OUT");
}

void add_pannld_flags(CLI::App* sub, Args& a) {
  sub->add_option("--k", a.k, "Friends per point")->envname("PALD_K");
  sub->add_option("--phi-mode", a.phi_mode, "exact | quadrature | asymptotic")
      ->envname("PALD_PHI_MODE");
  sub->add_option("--degree-cap", a.degree_cap, "Max promoted degree (0 = max(64, 16 K))")
      ->envname("PALD_DEGREE_CAP");
}

RunConfig make_config(const Args& a, const std::string& pipeline) {
  if (!a.config_file.empty()) {
    std::ifstream in(a.config_file);
    if (!in) throw InputError("cannot open " + a.config_file);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c = config_from_json(ss.str());
    c.pipeline = pipeline;
    if (!a.out.empty()) c.out_dir = a.out;
    return c;
  }
  RunConfig c;
  c.pipeline = pipeline;
  if (!a.points.empty()) {
    c.input = InputKind::points, c.path = a.points;
  } else if (!a.distances.empty()) {
    c.input = InputKind::distances, c.path = a.distances;
  } else if (!a.rank_tables.empty()) {
    c.input = InputKind::rank_tables, c.path = a.rank_tables;
  } else {
    c.input = InputKind::generator;
    c.generator.kind = generator_kind_from_string(a.generator);
    c.generator.n = a.n;
    c.generator.dim = a.dim;
    c.generator.weights = a.weights;
    c.generator.seed = derive_seed(a.seed, "generator");
    c.clusters = a.clusters;
    c.separation = a.separation;
  }
  c.k = a.k;
  c.phi_mode = phi_mode_from_string(a.phi_mode);
  c.seed = a.seed;
  c.out_dir = a.out.empty() ? "out" : a.out;
  c.degree_cap = a.degree_cap;
  c.threads = a.threads;
  c.force = a.force;
  return c;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  out << text << "\n";
}

fs::path prepare_out_dir(const RunConfig& c) {
  fs::path dir(c.out_dir);
  fs::create_directories(dir);
  write_text(dir / "config.json", config_to_json(c));
  return dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_summary(const RunSummary& s) {
  std::cerr << s.pipeline << ": n=" << s.n;
  if (s.k) std::cerr << " K=" << *s.k;
  std::cerr << " tau=" << s.tau << " components=" << s.component_sizes.size();
  std::size_t largest = 0;
  for (auto z : s.component_sizes) largest = std::max(largest, z);
  std::cerr << " largest=" << largest << " oracle_calls=" << s.oracle_calls
            << " wall=" << s.wall_time << "s\n";
}

int cmd_pald(const Args& a) {
  const RunConfig c = make_config(a, "pald");
  const auto rs = load_input(c);
  ExactOptions o;
  o.threads = c.threads;
  o.force = c.force;
  const auto t0 = std::chrono::steady_clock::now();
  const PaldRun run = run_pald(rs, o);
  RunSummary s;
  s.pipeline = "pald";
  s.n = rs.size();
  s.tau = run.tau;
  s.tau_p = run.tau;
  s.tau_r = 0.0;
  s.component_sizes = run.clusters.component_sizes;
  s.oracle_calls = run.exact.oracle_calls;
  s.inner_steps = run.exact.inner_steps;
  s.wall_time = seconds_since(t0);
  s.isa = std::string(kernels::isa_name(kernels::active().isa));

  const fs::path dir = prepare_out_dir(c);
  write_labels_csv(dir / "labels.csv", run.clusters.labels, rs.ids());
  write_cohesion_csv(dir / "cohesion.csv", run.exact.cohesion, rs.ids());
  write_edges_csv(dir / "edges.csv", run.exact.cohesion, run.tau, rs.ids());
  const std::string text = summary_to_json(s);
  validate_summary_json(text);
  write_text(dir / "summary.json", text);
  print_summary(s);
  return 0;
}

PannldOptions pannld_options(const RunConfig& c) {
  PannldOptions o;
  o.k = c.k;
  o.phi_mode = c.phi_mode;
  o.degree_cap = c.degree_cap;
  o.threads = c.threads;
  return o;
}

int cmd_pannld(const Args& a) {
  const RunConfig c = make_config(a, "pannld");
  const auto rs = load_input(c);
  const auto t0 = std::chrono::steady_clock::now();
  const PannldRun run = run_pannld(rs, pannld_options(c));
  RunSummary s;
  s.pipeline = "pannld";
  s.n = rs.size();
  s.k = c.k;
  s.tau = run.tau.tau;
  s.tau_p = run.tau.tau_p;
  s.tau_r = run.tau.tau_r;
  s.component_sizes = run.clusters.component_sizes;
  s.oracle_calls = run.diagnostics.knn_oracle_calls + run.diagnostics.table_oracle_calls;
  s.inner_steps = run.diagnostics.total_steps();
  s.wall_time = seconds_since(t0);
  s.phi_mode = to_string(c.phi_mode);
  s.isa = std::string(kernels::isa_name(kernels::active().isa));

  const fs::path dir = prepare_out_dir(c);
  write_labels_csv(dir / "labels.csv", run.clusters.labels, rs.ids());
  write_cohesion_csv(dir / "cohesion.csv", run.cohesion, rs.ids());
  write_edges_csv(dir / "edges.csv", run.cohesion, run.tau.tau, rs.ids());
  write_promoted_csv(dir / "promoted.csv", run.graph, rs.ids());
  const std::string text = summary_to_json(s);
  validate_summary_json(text);
  write_text(dir / "summary.json", text);
  print_summary(s);
  return 0;
}

int cmd_verify(const Args& a) {
  RunConfig c = make_config(a, "verify");
  std::vector<McSuite> suites;
  const std::uint64_t seed = derive_seed(a.seed, "verify");
  if (a.check == "limit") {
    const std::size_t n = a.n, m = a.m ? a.m : a.n / 2;
    suites.push_back(mc_limit(n, m, a.trials, seed));
  } else if (a.check == "axioms") {
    const auto rs = load_input(c);
    const AxiomReport rep = verify_axioms(rs.oracle(), rs.size(), a.trials, seed);
    std::cout << "checks=" << rep.checks << " violations=" << rep.violation_count
              << (rep.exhaustive ? " (exhaustive)" : "") << "\n";
    if (!rep.ok()) {
      const auto& w = rep.witnesses.front();
      throw AxiomViolation(w.axiom, w.x, w.y, w.z);
    }
    return 0;
  } else {
    const auto rs = load_input(c);
    if (a.check == "semantics") {
      suites.push_back(mc_pald_semantics(rs, a.trials, seed));
    } else {
      const PannldRun run = run_pannld(rs, pannld_options(c));
      if (a.check == "means") {
        suites.push_back(mc_relegated_means(rs, run, a.trials, seed));
      } else if (a.check == "binomial") {
        suites.push_back(mc_binomial(rs, run, a.trials, seed));
      } else if (a.check == "concentration") {
        suites.push_back(mc_concentration(rs, run, a.trials, a.theta, seed));
      } else {
        throw InputError("unknown check '" + a.check + "'");
      }
    }
  }
  const std::string text = suite_to_json(suites);
  std::cout << text << "\n";
  fs::create_directories(c.out_dir);
  write_text(fs::path(c.out_dir) / ("verify_" + a.check + ".json"), text);
  bool ok = true;
  for (const auto& s : suites) {
    const FamilyVerdict v = family_verdict(s);
    std::cerr << s.check << ": " << s.reports.size() << " reports, " << s.failures()
              << " failures";
    if (v.tests > 1) {
      std::cerr << "; max |z| " << v.max_z << " over " << v.tests << " 3-sigma reports (family limit "
                << v.z_limit << ")";
    }
    std::cerr << "\n";
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}

int cmd_compare(const Args& a) {
  const RunConfig c = make_config(a, "compare");
  const auto rs = load_input(c);
  ExactOptions e;
  e.threads = c.threads;
  e.force = c.force;
  const CompareReport r = compare_pipelines(rs, pannld_options(c), e);
  json j = {{"n", r.n},
            {"K", c.k},
            {"ari", r.ari},
            {"pald_oracle_calls", r.pald_oracle_calls},
            {"pannld_oracle_calls", r.pannld_oracle_calls},
            {"oracle_call_ratio", static_cast<double>(r.pannld_oracle_calls) /
                                      std::max<double>(1.0, static_cast<double>(r.pald_oracle_calls))},
            {"pald_steps", r.pald_steps},
            {"pannld_steps", r.pannld_steps},
            {"pald_tau", r.pald_tau},
            {"pannld_tau", r.pannld_tau},
            {"cohesion_entries", r.entries},
            {"max_cohesion_delta", r.max_delta},
            {"mean_cohesion_delta", r.mean_delta}};
  std::cout << j.dump(2) << "\n";
  fs::create_directories(c.out_dir);
  write_text(fs::path(c.out_dir) / "compare.json", j.dump(2));
  return 0;
}

int cmd_gen(const Args& a) {
  RunConfig c = make_config(a, "gen");
  if (c.input != InputKind::generator) throw InputError("gen takes generator flags only");
  fs::path out(a.out.empty() ? "points.csv" : a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  const auto kind = c.generator.kind;
  const bool geometric = kind == GeneratorKind::euclidean || kind == GeneratorKind::blobs;
  const std::string format = a.format.empty() ? (geometric ? "points" : "rank-tables") : a.format;
  if (format == "points") {
    if (!geometric) throw InputError("only euclidean and blobs have coordinates");
    std::vector<int> truth;
    std::unique_ptr<RankingSystem> rs;
    if (kind == GeneratorKind::blobs) {
      if (c.clusters == 0 || c.generator.n % c.clusters != 0)
        throw InputError("blobs: n must be a multiple of the cluster count");
      auto lp = gen_blobs(c.clusters, c.generator.n / c.clusters, c.generator.dim,
                          c.separation, c.generator.seed);
      truth = lp.truth;
      rs = std::make_unique<RankingSystem>(std::move(lp.system));
    } else {
      rs = std::make_unique<RankingSystem>(load_input(c));
    }
    const auto& eo = dynamic_cast<const EuclideanOracle&>(rs->oracle());
    write_points_csv(out, PointTable{rs->ids(), eo.coords(), eo.dim()});
    if (!truth.empty()) {
      fs::path tp = out;
      tp.replace_extension(".truth.csv");
      write_labels_csv(tp, truth, rs->ids());
    }
  } else if (format == "rank-tables") {
    write_rank_tables_csv(out, load_input(c));
  } else {
    throw InputError("unknown format '" + format + "'");
  }
  std::cerr << "wrote " << out.string() << "\n";
  return 0;
}

int cmd_export(const Args& a) {
  RunConfig c = make_config(a, "export");
  const auto rs = load_input(c);
  fs::path out(a.out.empty() ? "export.csv" : a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  if (a.what == "rank-tables") {
    write_rank_tables_csv(out, rs);
  } else if (a.what == "digraph" || a.what == "promoted") {
    const NeighborGraph g(build_friend_sets(rs, c.k, c.threads));
    if (a.what == "digraph") write_digraph_csv(out, g, rs.ids());
    else write_promoted_csv(out, g, rs.ids());
  } else {
    throw InputError("unknown export '" + a.what + "'");
  }
  std::cerr << "wrote " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned local depth clustering"};
  app.require_subcommand(1);
  Args a;

  auto* gen = app.add_subcommand("gen", "Generate a dataset");
  add_input_flags(gen, a);
  add_common_flags(gen, a);
  gen->add_option("--format", a.format, "points | rank-tables");

  auto* pald_cmd = app.add_subcommand("pald", "Exact pipeline (cubic)");
  add_input_flags(pald_cmd, a);
  add_common_flags(pald_cmd, a);
  pald_cmd->add_flag("--force", a.force, "Allow n above 5000");

  auto* pannld_cmd = app.add_subcommand("pannld", "Nearest-neighbor pipeline");
  add_input_flags(pannld_cmd, a);
  add_common_flags(pannld_cmd, a);
  add_pannld_flags(pannld_cmd, a);

  auto* verify = app.add_subcommand("verify", "Monte Carlo checks (JSON reports)");
  add_input_flags(verify, a);
  add_common_flags(verify, a);
  add_pannld_flags(verify, a);
  verify->add_option("--check", a.check, "Suite to run")
      ->check(CLI::IsMember({"binomial", "means", "concentration", "semantics", "limit", "axioms"}));
  verify->add_option("--trials", a.trials, "Trials (samples for axioms)")->envname("PALD_TRIALS");
  verify->add_option("--theta", a.theta, "Deviation level for concentration");
  verify->add_option("--m", a.m, "m for the limit check (default n/2)");

  auto* compare = app.add_subcommand("compare", "Run both pipelines and compare");
  add_input_flags(compare, a);
  add_common_flags(compare, a);
  add_pannld_flags(compare, a);
  compare->add_flag("--force", a.force, "Allow n above 5000");

  auto* exp = app.add_subcommand("export", "Write rank tables or the neighbor graph");
  add_input_flags(exp, a);
  add_common_flags(exp, a);
  exp->add_option("--k", a.k, "Friends per point")->envname("PALD_K");
  exp->add_option("--what", a.what, "rank-tables | digraph | promoted")
      ->check(CLI::IsMember({"rank-tables", "digraph", "promoted"}));

  // verify defaults to a small instance
  verify->preparse_callback([&](std::size_t) { a.n = 20, a.k = 4; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_budget(a.threads);
    if (*gen) return cmd_gen(a);
    if (*pald_cmd) return cmd_pald(a);
    if (*pannld_cmd) return cmd_pannld(a);
    if (*verify) return cmd_verify(a);
    if (*compare) return cmd_compare(a);
    if (*exp) return cmd_export(a);
  } catch (const DegreeCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const AxiomViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return 0;
}
