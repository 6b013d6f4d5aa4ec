#include "pald/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include "pald/errors.hpp"
#include "pald/pald.hpp"
#include "pald/phi.hpp"
#include "pald/random.hpp"

namespace pald {

double EtaSample::operator()(PointId a, PointId b) const noexcept {
  const std::uint64_t key = pair_key(a, b);
  if (pinned_key_ && *pinned_key_ == key) return pinned_value_;
  return unit_open(derive_seed(seed_, key));
}

void EtaSample::pin(PointId a, PointId b, double value) {
  if (a == b) throw InputError("eta is defined on pairs of distinct points");
  if (!(value > 0.0 && value < 1.0)) throw InputError("pinned eta must lie in (0, 1)");
  pinned_key_ = pair_key(a, b);
  pinned_value_ = value;
}

int randomized_compare(const RankingSystem& rs, const NeighborGraph& g, const EtaSample& eta,
                       PointId x, PointId y, PointId z) {
  const std::size_t n = rs.size();
  if (x >= n || y >= n || z >= n) throw InputError("randomized_compare: id out of range");
  if (y == z) return 0;
  if (y == x) return -1;
  if (z == x) return 1;
  const bool py = g.is_promoted(x, y), pz = g.is_promoted(x, z);
  if (py && pz) return rs.oracle().compare(x, y, z);
  if (py) return -1;
  if (pz) return 1;
  return eta(x, y) < eta(x, z) ? -1 : 1;
}

namespace {

// Dense helpers for repeated sampling on small instances.
class Sampler {
 public:
  Sampler(const RankingSystem& rs, const NeighborGraph& g)
      : n_(rs.size()), g_(g), ranks_(rs.ranks()), promoted_(n_ * n_, 0), eta_(n_ * n_, 0.0) {
    for (PointId x = 0; x < n_; ++x) {
      for (PointId y : g.neighbors(x)) promoted_[x * n_ + y] = 1;
    }
  }

  std::size_t n() const { return n_; }
  bool promoted(PointId a, PointId b) const { return promoted_[a * n_ + b] != 0; }

  void load(const EtaSample& eta) {
    for (PointId a = 0; a < n_; ++a) {
      for (PointId b = a + 1; b < n_; ++b) {
        const double v = promoted(a, b) ? 0.0 : eta(a, b);
        eta_[a * n_ + b] = eta_[b * n_ + a] = v;
      }
    }
  }
  double eta(PointId a, PointId b) const { return eta_[a * n_ + b]; }

  void left_focus(PointId x, PointId y, std::vector<PointId>& out) const {
    out.clear();
    for (PointId z = 0; z < n_; ++z) {
      if (z == x) {
        out.push_back(z);
        continue;
      }
      if (z == y) continue;
      const bool px = promoted(x, z), py = promoted(y, z);
      bool in;
      if (px && !py) {
        in = true;
      } else if (px && py) {
        in = ranks_.rank(z, x) < ranks_.rank(z, y);
      } else if (py) {
        in = false;
      } else {
        in = eta(x, z) < std::min(eta(x, y), eta(y, z));
      }
      if (in) out.push_back(z);
    }
  }

  /// Fills C^R(eta) (unscaled sums, slot-aligned) and optionally 1/|U| per relegated pair.
  void relegated_cohesion(std::vector<double>& diag, std::vector<double>& slots,
                          std::vector<double>* inverse_sizes) {
    std::fill(diag.begin(), diag.end(), 0.0);
    std::fill(slots.begin(), slots.end(), 0.0);
    if (inverse_sizes) inverse_sizes->clear();
    for (PointId x = 0; x < n_; ++x) {
      for (PointId y = x + 1; y < n_; ++y) {
        if (promoted(x, y)) continue;
        left_focus(x, y, lx_);
        left_focus(y, x, ly_);
        const double w = 1.0 / static_cast<double>(lx_.size() + ly_.size());
        if (inverse_sizes) inverse_sizes->push_back(w);
        credit(x, lx_, w, diag, slots);
        credit(y, ly_, w, diag, slots);
      }
    }
    const double scale = 1.0 / static_cast<double>(n_ - 1);
    for (auto& v : diag) v *= scale;
    for (auto& v : slots) v *= scale;
  }

 private:
  void credit(PointId x, const std::vector<PointId>& members, double w, std::vector<double>& diag,
              std::vector<double>& slots) const {
    for (PointId v : members) {
      if (v == x) {
        diag[x] += w;
      } else if (promoted(x, v)) {
        slots[g_.slot(x, v)] += w;
      }
    }
  }

  std::size_t n_;
  const NeighborGraph& g_;
  const FullRanks& ranks_;
  std::vector<char> promoted_;
  std::vector<double> eta_;
  std::vector<PointId> lx_, ly_;
};

void require_relegated(const NeighborGraph& g, PointId x, PointId y) {
  if (x == y) throw InputError("relegated focus needs two distinct points");
  if (g.is_promoted(x, y)) {
    std::ostringstream os;
    os << "pair {" << x << ", " << y << "} is promoted; the relegated focus is undefined";
    throw InputError(os.str());
  }
}

}  // namespace

std::vector<PointId> relegated_left_focus_direct(const RankingSystem& rs, const NeighborGraph& g,
                                                 const EtaSample& eta, PointId x, PointId y) {
  require_relegated(g, x, y);
  Sampler s(rs, g);
  s.load(eta);
  std::vector<PointId> out;
  s.left_focus(x, y, out);
  return out;
}

std::vector<PointId> relegated_focus_direct(const RankingSystem& rs, const NeighborGraph& g,
                                            const EtaSample& eta, PointId x, PointId y) {
  require_relegated(g, x, y);
  const std::size_t n = rs.size();
  std::vector<PointId> out;
  const double exy = eta(x, y);
  for (PointId z = 0; z < n; ++z) {
    if (z == x || z == y || g.is_promoted(x, z) || g.is_promoted(y, z)) {
      out.push_back(z);
      continue;
    }
    if (exy > std::min(eta(x, z), eta(y, z))) out.push_back(z);
  }
  return out;
}

CohesionMatrix random_cohesion_direct(const RankingSystem& rs, const NeighborGraph& g,
                                      const EtaSample& eta) {
  Sampler s(rs, g);
  s.load(eta);
  std::vector<double> diag(rs.size()), slots(g.adjacency().size());
  s.relegated_cohesion(diag, slots, nullptr);
  return CohesionMatrix::sparse(rs.size(), std::move(diag),
                                std::vector<std::size_t>(g.offsets().begin(), g.offsets().end()),
                                std::vector<PointId>(g.adjacency().begin(), g.adjacency().end()),
                                std::move(slots));
}

RankingSystem randomized_system(const RankingSystem& rs, const NeighborGraph& g,
                                const EtaSample& eta) {
  const std::size_t n = rs.size();
  const FullRanks& r = rs.ranks();
  std::vector<std::int32_t> at(n * n, 0);
  for (PointId x = 0; x < n; ++x) {
    std::vector<PointId> order;
    for (PointId z = 0; z < n; ++z) {
      if (z != x) order.push_back(z);
    }
    std::sort(order.begin(), order.end(), [&](PointId a, PointId b) {
      const bool pa = g.is_promoted(x, a), pb = g.is_promoted(x, b);
      if (pa != pb) return pa;
      if (pa) return r.rank(x, a) < r.rank(x, b);
      return eta(x, a) < eta(x, b);
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      at[x * n + order[i]] = static_cast<std::int32_t>(i + 1);
    }
  }
  DatasetSpec spec = rs.provenance();
  spec.source = "stranger randomization";
  return RankingSystem::from_rank_matrix(std::move(at), n, spec, rs.ids());
}

// ---------------------------------------------------------------------------

bool McSuite::pass() const noexcept { return failures() == 0; }

std::size_t McSuite::failures() const noexcept {
  std::size_t f = 0;
  for (const auto& r : reports) f += (r.asserted && !r.pass) ? 1 : 0;
  return f;
}

McReport three_sigma(std::string name, const RunningStats& s, double target) {
  McReport r;
  r.name = std::move(name);
  r.criterion = "3-sigma";
  r.estimate = s.mean();
  r.target = target;
  r.standard_error = s.standard_error();
  r.trials = s.count();
  r.tolerance = r.standard_error > 0 ? 3.0 * r.standard_error : 1e-12;
  r.pass = std::abs(r.estimate - r.target) <= r.tolerance;
  return r;
}

double family_sigma(std::size_t tests) {
  boost::math::normal_distribution<double> z;
  const double alpha = 2.0 * boost::math::cdf(boost::math::complement(z, 3.0));
  if (tests <= 1) return 3.0;
  return boost::math::quantile(boost::math::complement(z, alpha / (2.0 * static_cast<double>(tests))));
}

FamilyVerdict family_verdict(const McSuite& suite) {
  FamilyVerdict v;
  bool others = true;
  for (const auto& r : suite.reports) {
    if (!r.asserted) continue;
    if (r.criterion != "3-sigma") {
      others = others && r.pass;
      continue;
    }
    ++v.tests;
    if (!r.pass) ++v.beyond_three_sigma;
    const double d = std::abs(r.estimate - r.target);
    const double zz = r.standard_error > 0 ? d / r.standard_error
                                           : (d <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity());
    v.max_z = std::max(v.max_z, zz);
  }
  v.z_limit = family_sigma(v.tests);
  v.pass = others && v.max_z <= v.z_limit;
  return v;
}

namespace {

std::string pair_name(const char* what, PointId a, PointId b) {
  std::ostringstream os;
  os << what << "(" << a << "," << b << ")";
  return os.str();
}

void require_trials(std::size_t trials, std::size_t minimum) {
  if (trials < minimum) {
    std::ostringstream os;
    os << "at least " << minimum << " trials are required";
    throw InputError(os.str());
  }
}

}  // namespace

McSuite mc_relegated_means(const RankingSystem& rs, const PannldRun& run, std::size_t trials,
                           std::uint64_t seed) {
  require_trials(trials, 2);
  const NeighborGraph& g = run.graph;
  const std::size_t n = rs.size();
  Sampler s(rs, g);
  std::vector<std::pair<PointId, PointId>> pairs;
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x + 1; y < n; ++y) {
      if (!s.promoted(x, y)) pairs.emplace_back(x, y);
    }
  }
  std::vector<RunningStats> inv(pairs.size()), diag(n), slot(g.adjacency().size());
  std::vector<double> d(n), v(g.adjacency().size()), sizes;
  const std::uint64_t base = derive_seed(seed, "means");
  for (std::size_t t = 0; t < trials; ++t) {
    s.load(EtaSample(derive_seed(base, t)));
    s.relegated_cohesion(d, v, &sizes);
    for (std::size_t i = 0; i < pairs.size(); ++i) inv[i].add(sizes[i]);
    for (PointId x = 0; x < n; ++x) diag[x].add(d[x]);
    for (std::size_t k = 0; k < v.size(); ++k) slot[k].add(v[k]);
  }

  McSuite suite{"means", {}};
  PhiTable phi(n, PhiMode::exact);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [x, y] = pairs[i];
    const std::size_t m = range_of_influence(g, run.promoted.foci, x, y);
    suite.reports.push_back(three_sigma(pair_name("inverse_focus", x, y), inv[i], phi(m)));
  }
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (PointId x = 0; x < n; ++x) {
    suite.reports.push_back(three_sigma(pair_name("relegated_cohesion", x, x), diag[x],
                                        run.g_x[x] * scale));
  }
  for (PointId x = 0; x < n; ++x) {
    auto row = g.neighbors(x);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::size_t k = g.offsets()[x] + i;
      suite.reports.push_back(
          three_sigma(pair_name("relegated_cohesion", x, row[i]), slot[k], run.g_pair[k] * scale));
    }
  }
  return suite;
}

McSuite mc_binomial(const RankingSystem& rs, const PannldRun& run, std::size_t trials,
                    std::uint64_t seed, double t) {
  require_trials(trials, 100);
  if (!(t > 0.0 && t < 1.0)) throw InputError("t must lie in (0, 1)");
  const NeighborGraph& g = run.graph;
  const std::size_t n = rs.size();
  PointId bx = 0, by = 0;
  std::size_t best_m = n + 1;
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x + 1; y < n; ++y) {
      if (g.is_promoted(x, y)) continue;
      const std::size_t m = range_of_influence(g, run.promoted.foci, x, y);
      if (m < best_m) best_m = m, bx = x, by = y;
    }
  }
  if (best_m >= n) throw InputError("no relegated pair with n - m >= 1; the binomial is degenerate");
  const std::size_t big_n = n - best_m;
  const double p = 1.0 - t * t;

  Sampler s(rs, g);
  std::vector<double> observed(big_n + 1, 0.0);
  std::vector<PointId> lx, ly;
  RunningStats excess;
  const std::uint64_t base = derive_seed(seed, "binomial");
  for (std::size_t k = 0; k < trials; ++k) {
    EtaSample eta(derive_seed(base, k));
    eta.pin(bx, by, 1.0 - t);
    s.load(eta);
    s.left_focus(bx, by, lx);
    s.left_focus(by, bx, ly);
    const std::size_t extra = lx.size() + ly.size() - best_m;
    observed.at(extra) += 1.0;
    excess.add(static_cast<double>(extra));
  }
  boost::math::binomial_distribution<double> dist(static_cast<double>(big_n), p);
  std::vector<double> expected(big_n + 1);
  for (std::size_t k = 0; k <= big_n; ++k) {
    expected[k] = static_cast<double>(trials) * boost::math::pdf(dist, static_cast<double>(k));
  }
  const ChiSquareResult chi = chi_square_gof(observed, expected);

  McSuite suite{"binomial", {}};
  McReport r;
  std::ostringstream name;
  name << "chi_square(" << bx << "," << by << ";N=" << big_n << ",t=" << t << ")";
  r.name = name.str();
  r.criterion = "chi-square p >= 0.01";
  r.estimate = chi.statistic;
  r.target = static_cast<double>(chi.dof);
  r.standard_error = chi.p_value;  // p-value carried here for the report
  r.tolerance = 0.01;
  r.trials = trials;
  r.pass = chi.p_value >= 0.01;
  suite.reports.push_back(r);
  McReport mean = three_sigma("excess_mean", excess, static_cast<double>(big_n) * p);
  mean.asserted = false;
  suite.reports.push_back(mean);
  return suite;
}

McSuite mc_concentration(const RankingSystem& rs, const PannldRun& run, std::size_t trials,
                         double theta, std::uint64_t seed) {
  require_trials(trials, 1000);
  if (!(theta > 0.0)) throw InputError("theta must be positive");
  const NeighborGraph& g = run.graph;
  const std::size_t n = rs.size();
  const double nn = static_cast<double>(n);
  const double scale = 1.0 / (nn - 1.0);
  const double k = static_cast<double>(g.k_min());
  Sampler s(rs, g);
  std::vector<double> d(n), v(g.adjacency().size());
  std::vector<std::uint64_t> diag_hits(n, 0), slot_hits(v.size(), 0);
  std::uint64_t trace_hits = 0;
  const std::uint64_t base = derive_seed(seed, "concentration");
  for (std::size_t t = 0; t < trials; ++t) {
    s.load(EtaSample(derive_seed(base, t)));
    s.relegated_cohesion(d, v, nullptr);
    double trace = 0.0;
    for (PointId x = 0; x < n; ++x) {
      trace += d[x];
      if (std::abs(d[x] - run.g_x[x] * scale) >= theta) ++diag_hits[x];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::abs(v[i] - run.g_pair[i] * scale) >= theta) ++slot_hits[i];
    }
    if (std::abs(trace / (2.0 * nn) - run.tau.tau_r) >= theta / nn) ++trace_hits;
  }
  std::uint64_t worst = 0;
  for (auto h : diag_hits) worst = std::max(worst, h);
  for (auto h : slot_hits) worst = std::max(worst, h);

  McSuite suite{"concentration", {}};
  McReport entry;
  entry.name = "entry_deviation";
  entry.criterion = "upper bound 2exp(-theta^2 K^2)";
  entry.estimate = static_cast<double>(worst) / static_cast<double>(trials);
  entry.target = 2.0 * std::exp(-theta * theta * k * k);
  entry.tolerance = entry.target;
  entry.trials = trials;
  entry.pass = entry.estimate <= entry.target;
  suite.reports.push_back(entry);
  McReport trace;
  trace.name = "trace_deviation";
  trace.criterion = "upper bound 2exp(-(2 theta K/3)^2)";
  trace.estimate = static_cast<double>(trace_hits) / static_cast<double>(trials);
  const double a = 2.0 * theta * k / 3.0;
  trace.target = 2.0 * std::exp(-a * a);
  trace.tolerance = trace.target;
  trace.trials = trials;
  trace.pass = trace.estimate <= trace.target;
  suite.reports.push_back(trace);
  return suite;
}

// ---------------------------------------------------------------------------

namespace {

// Two-sided focus {z : z <_x y} cup {z : z <_y x}, used by the sampling definitions.
std::vector<PointId> sphere_focus(const FullRanks& r, PointId x, PointId y) {
  std::vector<PointId> out;
  for (PointId z = 0; z < r.n; ++z) {
    if (r.precedes(x, z, y) || r.precedes(y, z, x)) out.push_back(z);
  }
  return out;
}

}  // namespace

SemanticsDiagnostics semantics_diagnostics(const RankingSystem& rs) {
  const std::size_t n = rs.size();
  if (n < 3) throw InputError("semantics needs n >= 3");
  const FullRanks& r = rs.ranks();
  SemanticsDiagnostics out;
  out.sampling_cohesion.assign(n * n, 0.0);
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      if (y == x) continue;
      const auto u = sphere_focus(r, x, y);
      const double w = 1.0 / static_cast<double>(u.size());
      for (PointId v : u) {
        if (r.precedes(v, x, y)) out.sampling_cohesion[x * n + v] += w * scale;
      }
    }
  }
  out.depth.assign(n, 0.0);
  for (PointId x = 0; x < n; ++x) {
    for (PointId v = 0; v < n; ++v) out.depth[x] += out.sampling_cohesion[x * n + v];
  }

  ExactOptions opts;
  opts.force = true;
  const ExactCohesion exact = cohesion_matrix_exact(rs, opts);
  const auto values = exact.cohesion.dense_values();
  out.explicit_cohesion.assign(values.begin(), values.end());
  for (std::size_t i = 0; i < n * n; ++i) {
    out.max_form_gap = std::max(out.max_form_gap,
                                std::abs(out.explicit_cohesion[i] - out.sampling_cohesion[i]));
  }
  const auto depth = local_depth(exact.foci);
  for (double l : depth) out.mean_depth += l;
  out.mean_depth /= static_cast<double>(n);
  out.tau = cluster_threshold(exact.cohesion);
  out.depth_ratio = out.mean_depth / (static_cast<double>(n) * out.tau);
  double s = 0.0;
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x + 1; y < n; ++y) s += 1.0 / static_cast<double>(exact.foci.size(x, y));
  }
  out.mean_inverse_focus = s / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
  out.display_ratio = out.tau / out.mean_inverse_focus;
  return out;
}

McSuite mc_pald_semantics(const RankingSystem& rs, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = rs.size();
  if (n > 40) throw InputError("semantics sampling is limited to n <= 40");
  require_trials(trials, 2);
  const FullRanks& r = rs.ranks();
  const SemanticsDiagnostics diag = semantics_diagnostics(rs);

  std::vector<std::vector<PointId>> foci(n * n);
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      if (x != y) foci[x * n + y] = sphere_focus(r, x, y);
    }
  }
  McSuite suite{"semantics", {}};
  const double tt = static_cast<double>(trials);
  auto bernoulli = [&](std::string name, std::uint64_t hits, double target) {
    McReport rep;
    rep.name = std::move(name);
    rep.criterion = "3-sigma";
    const double p = static_cast<double>(hits) / tt;
    rep.estimate = p;
    rep.target = target;
    rep.standard_error = std::sqrt(p * (1.0 - p) / tt);
    rep.tolerance = rep.standard_error > 0 ? 3.0 * rep.standard_error : 1e-12;
    rep.trials = trials;
    rep.pass = std::abs(p - target) <= rep.tolerance;
    return rep;
  };

  std::mt19937_64 rng(derive_seed(seed, "semantics"));
  std::uniform_int_distribution<PointId> pick_y(0, static_cast<PointId>(n - 2));
  double depth_sum = 0.0, depth_var = 0.0;
  for (PointId x = 0; x < n; ++x) {
    std::vector<std::uint64_t> hits(n, 0);
    std::uint64_t wins = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      PointId y = pick_y(rng);
      if (y >= x) ++y;
      const auto& u = foci[x * n + y];
      std::uniform_int_distribution<std::size_t> pick_z(0, u.size() - 1);
      const PointId z = u[pick_z(rng)];
      if (r.precedes(z, x, y)) {
        ++wins;
        ++hits[z];
      }
    }
    suite.reports.push_back(bernoulli("depth(" + std::to_string(x) + ")", wins, diag.depth[x]));
    const double p = static_cast<double>(wins) / tt;
    depth_sum += p;
    depth_var += p * (1.0 - p) / tt;
    for (PointId v = 0; v < n; ++v) {
      suite.reports.push_back(bernoulli(pair_name("cohesion", x, v), hits[v],
                                        diag.sampling_cohesion[x * n + v]));
    }
  }

  McReport forms;
  forms.name = "explicit_vs_sampling_form_gap";
  forms.criterion = "diagnostic";
  forms.estimate = diag.max_form_gap;
  forms.target = 0.0;
  forms.asserted = false;
  forms.pass = diag.max_form_gap <= 1e-12;
  suite.reports.push_back(forms);

  McReport total;
  total.name = "depth_sum_vs_half_n";
  total.criterion = "diagnostic 3-sigma";
  total.estimate = depth_sum;
  total.target = static_cast<double>(n) / 2.0;
  total.standard_error = std::sqrt(depth_var);
  total.tolerance = total.standard_error > 0 ? 3.0 * total.standard_error : 1e-12;
  total.trials = trials;
  total.asserted = false;
  total.pass = std::abs(total.estimate - total.target) <= total.tolerance;
  suite.reports.push_back(total);

  McReport ratio;
  ratio.name = "mean_depth_over_n_tau";
  ratio.criterion = "diagnostic";
  ratio.estimate = diag.depth_ratio;
  ratio.target = 1.0;
  ratio.asserted = false;
  ratio.pass = std::abs(diag.depth_ratio - 1.0) <= 1e-12;
  suite.reports.push_back(ratio);

  McReport display;
  display.name = "tau_over_mean_inverse_focus";
  display.criterion = "diagnostic";
  display.estimate = diag.display_ratio;
  display.target = 1.0;
  display.asserted = false;
  display.pass = std::abs(diag.display_ratio - 1.0) <= 1e-12;
  suite.reports.push_back(display);
  return suite;
}

double limit_variance(double c) {
  if (!(c > 1.0)) throw InputError("limit_variance needs c > 1");
  const double a = phi_limit(c);
  const double second = 1.0 / (2.0 * c * (c - 1.0)) + a / (2.0 * c);
  return second - a * a;
}

McSuite mc_limit(std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed) {
  require_trials(trials, 2);
  if (m < 2 || m >= n) throw InputError("mc_limit needs 2 <= m < n");
  const std::size_t big_n = n - m;
  const double c = static_cast<double>(n) / static_cast<double>(big_n);
  std::mt19937_64 rng(derive_seed(seed, "limit"));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RunningStats s;
  for (std::size_t k = 0; k < trials; ++k) {
    const double t = unif(rng);
    std::binomial_distribution<std::size_t> bin(big_n, 1.0 - t * t);
    const std::size_t y = bin(rng);
    s.add(static_cast<double>(big_n) / static_cast<double>(m + y));
  }
  McSuite suite{"limit", {}};
  suite.reports.push_back(three_sigma("scaled_mean_vs_exact", s,
                                      static_cast<double>(big_n) * phi(n, m, PhiMode::exact)));

  McReport lim;
  lim.name = "exact_vs_limit";
  lim.criterion = "relative 1%";
  lim.estimate = static_cast<double>(big_n) * phi(n, m, PhiMode::exact);
  lim.target = phi_limit(c);
  lim.tolerance = 0.01;
  lim.pass = std::abs(lim.estimate / lim.target - 1.0) <= lim.tolerance;
  suite.reports.push_back(lim);

  McReport var;
  var.name = "variance_vs_limit";
  var.criterion = "relative 5%";
  var.estimate = s.variance();
  var.target = limit_variance(c);
  var.tolerance = 0.05;
  var.trials = trials;
  var.pass = std::abs(var.estimate / var.target - 1.0) <= var.tolerance;
  suite.reports.push_back(var);
  return suite;
}

}  // namespace pald
