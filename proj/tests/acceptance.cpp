// One PASS/FAIL line per acceptance criterion. Exit status counts failures that are not
// listed with --known-red.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pald/compare.hpp"
#include "pald/errors.hpp"
#include "pald/lab.hpp"
#include "pald/pald.hpp"
#include "pald/pannld.hpp"
#include "pald/phi.hpp"
#include "pald/stats.hpp"

using namespace pald;

namespace {

struct Check {
  bool ok = true;
  std::string note;
  std::ostringstream why;
  void require(bool cond, const std::string& msg) {
    if (!cond && ok) why << msg;
    ok = ok && cond;
  }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

PannldOptions with_k(std::size_t k) {
  PannldOptions o;
  o.k = k;
  return o;
}

// 1
void hand_values(Check& c) {
  auto run = run_pald(from_points({0.0, 1.0, 3.0}, 1));
  const auto& m = run.exact.cohesion;
  c.require(close(m.at(0, 0), 5.0 / 12, 1e-12), "C_xx");
  c.require(close(m.at(2, 2), 1.0 / 3, 1e-12), "C_zz");
  c.require(close(m.at(0, 1), 1.0 / 6, 1e-12), "C_xy");
  c.require(close(run.tau, 7.0 / 36, 1e-12), "tau");
  c.require(close(run.depth[0], 7.0 / 12, 1e-12), "depth(x)");
  c.require(close(run.depth[2], 1.0 / 3, 1e-12), "depth(z)");
}

// Runs from criteria 2 and 3 are shared.
std::vector<std::pair<RankingSystem, PannldRun>>& seeded_runs() {
  static std::vector<std::pair<RankingSystem, PannldRun>> runs = [] {
    std::vector<std::pair<RankingSystem, PannldRun>> out;
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 20; ++i) {
      const std::size_t n = 10 + rng() % 51;
      const std::size_t k = 3 + rng() % 6;
      const std::uint64_t seed = rng();
      auto rs = (i % 4 == 3) ? gen_random_tournament(n, seed)
                             : gen_euclidean(n, 2 + i % 3, seed);
      auto run = run_pannld(rs, with_k(k));
      out.emplace_back(std::move(rs), std::move(run));
    }
    return out;
  }();
  return runs;
}

// 2
void promoted_vs_brute(Check& c) {
  for (auto& [rs, run] : seeded_runs()) {
    const auto& g = run.graph;
    const auto& foci = run.promoted.foci;
    const auto& r = rs.ranks();
    const std::size_t n = rs.size();
    for (PointId x = 0; x < n; ++x)
      for (PointId y : g.neighbors(x)) {
        auto got = foci.left(g.slot(x, y));
        c.require(std::vector<PointId>(got.begin(), got.end()) == oracle::promoted_left(r, g, x, y),
                  "promoted left focus");
      }
    std::size_t connectors = 0;
    for (PointId a = 0; a < n; ++a)
      for (PointId b = a + 1; b < n; ++b) {
        if (g.is_promoted(a, b)) continue;
        auto lo = oracle::connector(r, g, a, b), hi = oracle::connector(r, g, b, a);
        const auto* d = foci.find_connector(a, b);
        if (lo.empty() && hi.empty()) {
          c.require(d == nullptr, "spurious connector");
          continue;
        }
        ++connectors;
        c.require(d != nullptr && d->lo_first == lo && d->hi_first == hi, "connector sets");
      }
    c.require(connectors == foci.connectors().size(), "connector count");
    for (const auto& [key, v] : oracle::promoted_cohesion(rs, g))
      c.require(close(run.promoted.matrix.at(key.first, key.second), v, 1e-14), "C^P entry");
  }
}

// 3
void budgets(Check& c) {
  auto check = [&](const PannldRun& run) {
    const auto& d = run.diagnostics;
    double calls = 0.0, steps = 0.0;
    for (PointId x = 0; x < run.graph.size(); ++x) {
      const double dx = static_cast<double>(run.graph.degree(x));
      calls += (dx > 1 ? dx * std::log2(dx) : 0.0) + 3.0 * dx * (dx - 1) / 2;
      steps += 1.5 * dx * dx;
    }
    c.require(static_cast<double>(d.table_oracle_calls) <= calls, "oracle calls over budget");
    c.require(static_cast<double>(d.algorithm_steps) <= steps, "inner steps over budget");
  };
  for (auto& [rs, run] : seeded_runs()) check(run);
  for (std::size_t n : {500u, 2000u}) check(run_pannld(gen_euclidean(n, 3, n), with_k(10)));
  check(run_pannld(gen_blobs(2, 200, 2, 8.0, 5).system, with_k(15)));
}

// 4
void phi_anchors(Check& c) {
  for (std::size_t n : {2u, 7u, 200u, 2000u}) c.require(phi(n, n) == 1.0 / n, "phi_n(n)");
  c.require(close(phi(5, 4), 13.0 / 60, 1e-12), "phi_5(4)");
  c.require(close(phi(4, 2), 29.0 / 90, 1e-12), "phi_4(2)");
  double worst = 0.0;
  for (std::size_t n = 2; n <= 500; n += (n < 40 ? 1 : 23))
    for (std::size_t m = 2; m <= n; ++m)
      worst = std::max(worst, std::abs(phi(n, m) - phi(n, m, PhiMode::quadrature)));
  c.require(worst <= 1e-10, "exact vs quadrature");
  const double scaled = 1000.0 * phi(2000, 1000);
  c.require(std::abs(scaled / 0.623225 - 1.0) <= 0.01, "c = 2 limit");
  c.require(close(phi_limit(2.0), 0.623225, 5e-7), "limit constant");
}

std::string failing_reports(const McSuite& s) {
  std::ostringstream os;
  int shown = 0;
  for (const auto& r : s.reports) {
    if (!r.asserted || r.pass || shown++ >= 3) continue;
    os << " " << r.name << " est=" << r.estimate << " target=" << r.target << " tol=" << r.tolerance;
  }
  return os.str();
}

// 5
void relegated_means(Check& c) {
  auto rs = gen_euclidean(20, 2, 5);
  auto run = run_pannld(rs, with_k(4));
  auto suite = mc_relegated_means(rs, run, 10000, 1);
  const auto v = family_verdict(suite);
  std::ostringstream os;
  os << v.beyond_three_sigma << "/" << v.tests << " beyond 3 sigma, max |z| " << v.max_z
     << " vs family limit " << v.z_limit;
  c.note = os.str();
  c.require(v.pass, os.str() + ":" + failing_reports(suite));
}

// 6
void binomial(Check& c) {
  auto rs = gen_euclidean(30, 2, 6);
  auto run = run_pannld(rs, with_k(4));
  auto suite = mc_binomial(rs, run, 10000, 1);
  c.require(suite.pass(), "chi-square p = " + std::to_string(suite.reports[0].standard_error));
}

// 7
void concentration(Check& c) {
  auto rs = gen_euclidean(30, 2, 7);
  auto run = run_pannld(rs, with_k(5));
  c.require(std::abs(2.0 * std::exp(-6.25) - 3.86e-3) < 1e-5, "bound constant");
  auto suite = mc_concentration(rs, run, 10000, 0.5, 1);
  c.require(suite.pass(), "bound exceeded:" + failing_reports(suite));
  auto trace = mc_concentration(rs, run, 10000, 1.5, 2);
  c.require(trace.reports[1].estimate == 0.0, "trace deviation at theta = 1.5");
}

// 8
void star(Check& c) {
  auto rs = gen_star(200);
  auto run = run_pald(rs);
  const std::size_t n = rs.size();
  const std::size_t largest = run.clusters.largest_component();
  std::size_t singletons = 0;
  for (auto s : run.clusters.component_sizes) singletons += s == 1 ? 1 : 0;
  const double share = static_cast<double>(largest) / static_cast<double>(n);
  bool capped = false;
  try {
    run_pannld(rs, with_k(2));
  } catch (const DegreeCapExceeded& e) {
    capped = e.vertices() == std::vector<std::uint32_t>{0, 1};
  }
  c.require(capped, "degree cap not triggered on the hub vertices; ");
  c.require(singletons + largest == n, "non-singleton remainder; ");
  c.require(std::abs(share - 0.62) <= 0.05,
            "largest cluster holds " + std::to_string(largest) + "/" + std::to_string(n) + " = " +
                std::to_string(100 * share) + "% (target 62% +- 5)");
}

// 9
void scaling(Check& c) {
  std::vector<double> ns, steps;
  for (std::size_t n : {50u, 100u, 200u}) {
    ns.push_back(static_cast<double>(n));
    steps.push_back(static_cast<double>(cohesion_matrix_exact(gen_euclidean(n, 2, n)).inner_steps));
  }
  const double exact_slope = log_log_slope(ns, steps);
  c.require(std::abs(exact_slope - 3.0) <= 0.3, "exact slope " + std::to_string(exact_slope));
  std::vector<double> ms, fsteps;
  for (std::size_t n : {1000u, 10000u}) {
    ms.push_back(static_cast<double>(n));
    fsteps.push_back(static_cast<double>(run_pannld(gen_euclidean(n, 2, n), with_k(10)).diagnostics.total_steps()));
  }
  const double f_slope = log_log_slope(ms, fsteps);
  c.require(std::abs(f_slope - 1.0) <= 0.2, "restricted slope " + std::to_string(f_slope));
}

// 10
void no_relegated(Check& c) {
  for (std::uint64_t seed = 0; seed < 5000; ++seed) {
    auto rs = gen_random_tournament(12, seed);
    auto run = run_pannld(rs, with_k(10));
    if (run.graph.relegated_count() != 0) continue;
    auto ex = cohesion_matrix_exact(rs);
    double worst = 0.0;
    for (PointId x = 0; x < 12; ++x)
      for (PointId v = 0; v < 12; ++v)
        worst = std::max(worst, std::abs(run.cohesion.at(x, v) - ex.cohesion.at(x, v)));
    c.require(worst <= 1e-12, "cohesion gap " + std::to_string(worst));
    c.require(run.tau.tau_r == 0.0, "tau_R nonzero");
    auto rep = compare_pipelines(rs, with_k(10));
    c.require(rep.ari == 1.0, "ARI " + std::to_string(rep.ari));
    c.require(rep.max_delta <= 1e-12, "compare delta");
    return;
  }
  c.require(false, "no instance without relegated pairs found");
}

// 11
void discrepancies(Check& c) {
  auto rs = from_points({0.0, 1.0, 3.0}, 1);
  auto d = semantics_diagnostics(rs);
  c.require(close(d.depth_ratio, 6.0 / 7.0, 1e-12), "depth ratio " + std::to_string(d.depth_ratio));
  c.require(close(d.display_ratio, 0.5, 1e-12), "display ratio " + std::to_string(d.display_ratio));
  auto suite = mc_pald_semantics(rs, 10000, 11);
  int recorded = 0;
  for (const auto& r : suite.reports) {
    if (r.asserted) continue;
    if (r.name == "mean_depth_over_n_tau" && close(r.estimate, 6.0 / 7.0, 1e-12)) ++recorded;
    if (r.name == "tau_over_mean_inverse_focus" && close(r.estimate, 0.5, 1e-12)) ++recorded;
  }
  c.require(recorded == 2, "ratios not recorded in the semantics suite");
  c.require(suite.pass(), "semantics sampling:" + failing_reports(suite));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-red") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) known_red.insert(std::stoi(tok));
    }
  }

  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
      {"exact pipeline hand values", hand_values},
      {"promoted traversal matches brute force", promoted_vs_brute},
      {"oracle-call and step budgets", budgets},
      {"phi anchors and limit", phi_anchors},
      {"relegated means by Monte Carlo", relegated_means},
      {"binomial focus distribution", binomial},
      {"concentration bounds", concentration},
      {"star graph", star},
      {"step-count scaling", scaling},
      {"no relegated pairs equals PaLD", no_relegated},
      {"documented ratios", discrepancies},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s (%.2fs)", c.ok ? "PASS" : "FAIL", id, criteria[i].first, secs);
    if (!c.ok) std::printf(": %s", c.why.str().c_str());
    else if (!c.note.empty()) std::printf(": %s", c.note.c_str());
    if (!c.ok && known_red.count(id)) std::printf(" [known]");
    std::printf("\n");
    std::fflush(stdout);
    if (!c.ok && !known_red.count(id)) ++unexpected;
  }
  return unexpected;
}
