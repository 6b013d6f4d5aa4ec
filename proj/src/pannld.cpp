#include "pald/pannld.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pald/errors.hpp"
#include "pald/parallel.hpp"

namespace pald {

std::int32_t RestrictedTables::rank(const NeighborGraph& g, PointId x, PointId y) const {
  const std::size_t s = g.slot(x, y);
  if (s == NeighborGraph::npos) {
    std::ostringstream os;
    os << "rank table of " << x << " has no entry for " << y << " (not a promoted neighbor)";
    throw ConsistencyError(os.str());
  }
  return ranks_[s];
}

RestrictedTables build_restricted_tables(const TripletOracle& oracle, const NeighborGraph& g,
                                         std::size_t threads) {
  const std::size_t n = g.size();
  std::vector<std::int32_t> ranks(g.adjacency().size(), 0);
  std::vector<std::uint64_t> calls(chunk_count(n, threads), 0);
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        TripletOracle::Session session(oracle);
        for (std::size_t x = begin; x < end; ++x) {
          const PointId px = static_cast<PointId>(x);
          auto row = g.neighbors(px);
          if (row.empty()) continue;
          RankTable t = build_rank_table(session, px, row);
          for (std::size_t i = 0; i < row.size(); ++i) ranks[g.offsets()[x] + i] = t.rank(row[i]);
        }
        session.flush();
        calls[chunk] = session.merged_calls();
      },
      threads);
  std::uint64_t total = 0;
  for (auto c : calls) total += c;
  return RestrictedTables(std::move(ranks), total);
}

RestrictedTables restricted_from_tables(const NeighborGraph& g, std::span<const RankTable> tables) {
  const std::size_t n = g.size();
  if (tables.size() != n) throw ConsistencyError("one restricted rank table per point required");
  std::vector<std::int32_t> ranks(g.adjacency().size(), 0);
  for (PointId x = 0; x < n; ++x) {
    const RankTable& t = tables[x];
    auto row = g.neighbors(x);
    if (t.base() != x || t.size() != row.size()) {
      std::ostringstream os;
      os << "rank table of " << x << " does not cover exactly its " << row.size()
         << " promoted neighbors";
      throw ConsistencyError(os.str());
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      auto r = t.find_rank(row[i]);
      if (!r) {
        std::ostringstream os;
        os << "rank table of " << x << " is missing promoted neighbor " << row[i];
        throw ConsistencyError(os.str());
      }
      ranks[g.offsets()[x] + i] = *r;
    }
  }
  return RestrictedTables(std::move(ranks), 0);
}

// ---------------------------------------------------------------------------

namespace {

struct LeftEvent {
  std::size_t slot;
  PointId member;
};

struct ConnectorEvent {
  std::uint64_t key;  // ordered (first, second): base prefers first
  PointId base;
};

}  // namespace

struct PromotedBuilder {
  static PromotedFoci traverse(const NeighborGraph& g, const RestrictedTables& t,
                               std::size_t threads) {
    const std::size_t n = g.size();
    const auto offsets = g.offsets();
    const std::size_t slots = g.adjacency().size();
    const std::size_t chunks = chunk_count(n, threads);
    std::vector<std::vector<LeftEvent>> left(chunks);
    std::vector<std::vector<ConnectorEvent>> conn(chunks);
    std::vector<std::uint64_t> steps(chunks, 0);

    parallel_for(
        n,
        [&](std::size_t begin, std::size_t end, std::size_t chunk) {
          auto& le = left[chunk];
          auto& ce = conn[chunk];
          for (std::size_t xi = begin; xi < end; ++xi) {
            const PointId x = static_cast<PointId>(xi);
            auto row = g.neighbors(x);
            const std::size_t base = offsets[x];
            for (std::size_t i = 0; i < row.size(); ++i) {
              for (std::size_t j = i + 1; j < row.size(); ++j) {
                const PointId y = row[i], z = row[j];
                const bool y_first = t.rank_at_slot(base + i) < t.rank_at_slot(base + j);
                const std::size_t yz = g.slot(y, z);
                if (yz == NeighborGraph::npos) {
                  steps[chunk] += 1;
                  if (y_first) {
                    ce.push_back({ordered_key(y, z), x});
                    le.push_back({base + j, y});
                  } else {
                    ce.push_back({ordered_key(z, y), x});
                    le.push_back({base + i, z});
                  }
                  continue;
                }
                steps[chunk] += 3;
                const std::size_t yx = g.slot(y, x), zx = g.slot(z, x);
                const std::size_t zy = g.slot(z, y);
                // x <_y z and y <_x z: x joins U^P_{y||z}.
                if (y_first && t.rank_at_slot(yx) < t.rank_at_slot(yz)) le.push_back({yz, x});
                // x <_z y and z <_x y: x joins U^P_{z||y}.
                if (!y_first && t.rank_at_slot(zx) < t.rank_at_slot(zy)) le.push_back({zy, x});
              }
            }
          }
        },
        threads);

    PromotedFoci f;
    for (auto s : steps) f.inner_steps_ += s;

    // Left foci: owner first, then merged events, sorted per slot.
    std::vector<std::size_t> count(slots, 1);
    for (const auto& v : left) {
      for (const auto& e : v) ++count[e.slot];
    }
    f.offsets_.assign(slots + 1, 0);
    for (std::size_t s = 0; s < slots; ++s) f.offsets_[s + 1] = f.offsets_[s] + count[s];
    f.members_.assign(f.offsets_[slots], 0);
    std::vector<std::size_t> fill(f.offsets_.begin(), f.offsets_.end() - 1);
    for (PointId x = 0; x < n; ++x) {
      for (std::size_t s = offsets[x]; s < offsets[x + 1]; ++s) f.members_[fill[s]++] = x;
    }
    for (const auto& v : left) {
      for (const auto& e : v) f.members_[fill[e.slot]++] = e.member;
    }
    for (std::size_t s = 0; s < slots; ++s) {
      std::sort(f.members_.begin() + static_cast<std::ptrdiff_t>(f.offsets_[s]),
                f.members_.begin() + static_cast<std::ptrdiff_t>(f.offsets_[s + 1]));
    }

    f.mirror_.assign(slots, 0);
    for (PointId x = 0; x < n; ++x) {
      auto row = g.neighbors(x);
      for (std::size_t i = 0; i < row.size(); ++i) f.mirror_[offsets[x] + i] = g.slot(row[i], x);
    }

    // Connector sets grouped by unordered pair.
    std::vector<ConnectorEvent> all;
    for (auto& v : conn) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end(), [](const ConnectorEvent& a, const ConnectorEvent& b) {
      const auto ka = pair_key(key_first(a.key), key_second(a.key));
      const auto kb = pair_key(key_first(b.key), key_second(b.key));
      if (ka != kb) return ka < kb;
      return a.base < b.base;
    });
    for (std::size_t i = 0; i < all.size();) {
      const PointId a = key_first(all[i].key), b = key_second(all[i].key);
      const std::uint64_t k = pair_key(a, b);
      Connector c;
      c.lo = std::min(a, b);
      c.hi = std::max(a, b);
      for (; i < all.size() && pair_key(key_first(all[i].key), key_second(all[i].key)) == k; ++i) {
        if (key_first(all[i].key) == c.lo) {
          c.lo_first.push_back(all[i].base);
        } else {
          c.hi_first.push_back(all[i].base);
        }
      }
      f.connectors_.push_back(std::move(c));
    }
    return f;
  }
};

const Connector* PromotedFoci::find_connector(PointId a, PointId b) const {
  const PointId lo = std::min(a, b), hi = std::max(a, b);
  auto it = std::lower_bound(connectors_.begin(), connectors_.end(), std::make_pair(lo, hi),
                             [](const Connector& c, const std::pair<PointId, PointId>& k) {
                               return std::make_pair(c.lo, c.hi) < k;
                             });
  if (it == connectors_.end() || it->lo != lo || it->hi != hi) return nullptr;
  return &*it;
}

std::size_t PromotedFoci::common_neighbors(PointId a, PointId b) const {
  const Connector* c = find_connector(a, b);
  return c ? c->common() : 0;
}

PromotedCohesion promoted_cohesion(const NeighborGraph& g, const RestrictedTables& tables,
                                   std::size_t threads) {
  const std::size_t n = g.size();
  if (tables.ranks().size() != g.adjacency().size()) {
    throw ConsistencyError("restricted tables do not match the promoted graph");
  }
  PromotedCohesion out;
  out.foci = PromotedBuilder::traverse(g, tables, threads);
  const auto offsets = g.offsets();
  const auto adj = g.adjacency();

  std::vector<double> diag(n, 0.0), values(adj.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(n - 1);
  std::vector<std::uint64_t> steps(chunk_count(n, threads), 0);
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t x = begin; x < end; ++x) {
          auto row = adj.subspan(offsets[x], offsets[x + 1] - offsets[x]);
          for (std::size_t s = offsets[x]; s < offsets[x + 1]; ++s) {
            const double w = 1.0 / static_cast<double>(out.foci.focus_size(s));
            for (PointId v : out.foci.left(s)) {
              ++steps[chunk];
              if (v == x) {
                diag[x] += w;
                continue;
              }
              auto it = std::lower_bound(row.begin(), row.end(), v);
              values[offsets[x] + static_cast<std::size_t>(it - row.begin())] += w;
            }
          }
          diag[x] *= scale;
          for (std::size_t s = offsets[x]; s < offsets[x + 1]; ++s) values[s] *= scale;
        }
      },
      threads);
  for (auto s : steps) out.assembly_steps += s;
  out.matrix = CohesionMatrix::sparse(n, std::move(diag),
                                      std::vector<std::size_t>(offsets.begin(), offsets.end()),
                                      std::vector<PointId>(adj.begin(), adj.end()),
                                      std::move(values));
  return out;
}

std::size_t range_of_influence(const NeighborGraph& g, const PromotedFoci& foci, PointId x,
                               PointId y) {
  if (x == y || g.is_promoted(x, y)) {
    throw InputError("range of influence is defined for relegated pairs only");
  }
  return 2 + g.degree(x) + g.degree(y) - foci.common_neighbors(x, y);
}

// ---------------------------------------------------------------------------

PartialSums partial_sums(const NeighborGraph& g, PhiTable& phi) {
  const std::size_t n = g.size();
  const DegreeGroups groups = degree_groups(g);
  PartialSums out;
  out.lambda1 = groups.lambda1;
  out.g_alpha.assign(out.lambda1.size(), 0.0);
  for (std::size_t a = 0; a < out.lambda1.size(); ++a) {
    const std::size_t alpha = out.lambda1[a];
    double s = 0.0;
    for (const auto& [beta, count] : groups.count_by_beta) {
      ++out.steps;
      if (alpha + beta > n) continue;  // no relegated pair reaches beyond n
      s += phi(alpha + beta) * static_cast<double>(count);
    }
    out.g_alpha[a] = s;
  }
  out.h.assign(n, 0.0);
  for (PointId x = 0; x < n; ++x) {
    const std::size_t dx = g.degree(x);
    const auto a = static_cast<std::size_t>(
        std::lower_bound(out.lambda1.begin(), out.lambda1.end(), dx + 1) - out.lambda1.begin());
    double h = out.g_alpha[a];
    if (2 * dx <= n - 2) h -= phi(2 * dx + 2);  // y = x
    ++out.steps;
    for (PointId y : g.neighbors(x)) {
      ++out.steps;
      const std::size_t dy = g.degree(y);
      if (dx + dy <= n - 2) h -= phi(dx + dy + 2);
    }
    out.h[x] = h;
  }
  return out;
}

IntersectionResult intersection_correction(const NeighborGraph& g, const PromotedFoci& foci,
                                           std::span<const double> h, PhiTable& phi) {
  const std::size_t n = g.size();
  IntersectionResult out;
  out.g.assign(h.begin(), h.end());
  for (const Connector& c : foci.connectors()) {
    ++out.steps;
    const std::size_t alpha = g.degree(c.lo) + 1, beta = g.degree(c.hi) + 1;
    const std::size_t gamma = c.common();
    const std::size_t m = alpha + beta - gamma;
    const std::size_t floor = 2 + std::max(g.k_of(c.lo), g.k_of(c.hi));
    if (gamma > alpha + beta || m < floor || m > n) {
      std::ostringstream os;
      os << "relegated pair {" << c.lo << ", " << c.hi << "} has range of influence " << m
         << ", below the floor " << floor;
      throw ConsistencyError(os.str());
    }
    const double delta = phi(m) - (alpha + beta <= n ? phi(alpha + beta) : 0.0);
    out.g[c.lo] += delta;
    out.g[c.hi] += delta;
  }
  for (PointId x = 0; x < n; ++x) {
    if (g.degree(x) + 1 == n) out.g[x] = 0.0;  // no relegated partners
  }
  return out;
}

OffDiagonalResult relegated_offdiagonal(const NeighborGraph& g, const RestrictedTables& tables,
                                        const PromotedFoci& foci, std::span<const double> g_x,
                                        PhiTable& phi) {
  const std::size_t n = g.size();
  const auto offsets = g.offsets();
  OffDiagonalResult out;
  out.g_pair.assign(g.adjacency().size(), 0.0);
  for (PointId x = 0; x < n; ++x) {
    for (std::size_t s = offsets[x]; s < offsets[x + 1]; ++s) out.g_pair[s] = g_x[x];
  }
  auto m_of = [&](PointId a, PointId b) {
    return 2 + g.degree(a) + g.degree(b) - foci.common_neighbors(a, b);
  };
  for (PointId x = 0; x < n; ++x) {
    auto px = g.neighbors(x);
    for (std::size_t i = 0; i < px.size(); ++i) {
      const PointId v = px[i];
      if (v < x) continue;
      const std::size_t xv = offsets[x] + i;
      const std::size_t vx = foci.mirror(xv);
      const std::int32_t x_at_v = tables.rank_at_slot(vx);
      const std::int32_t v_at_x = tables.rank_at_slot(xv);
      auto pv = g.neighbors(v);
      std::size_t a = 0, b = 0;
      while (a < px.size() || b < pv.size()) {
        ++out.steps;
        if (b == pv.size() || (a < px.size() && px[a] < pv[b])) {
          // (B) y in P_x \ P_v, y != v, y <_x v.
          const PointId y = px[a];
          if (y != v && tables.rank_at_slot(offsets[x] + a) < v_at_x) {
            out.g_pair[vx] -= phi(m_of(v, y));
          }
          ++a;
        } else if (a == px.size() || pv[b] < px[a]) {
          // (A) y in P_v \ P_x, y != x, y <_v x.
          const PointId y = pv[b];
          if (y != x && tables.rank_at_slot(offsets[v] + b) < x_at_v) {
            out.g_pair[xv] -= phi(m_of(x, y));
          }
          ++b;
        } else {
          ++a, ++b;
        }
      }
    }
  }
  return out;
}

CohesionMatrix assemble(const NeighborGraph& g, const CohesionMatrix& promoted,
                        std::span<const double> g_x, std::span<const double> g_pair) {
  const std::size_t n = g.size();
  const double scale = 1.0 / static_cast<double>(n - 1);
  std::vector<double> diag(n), values(g.adjacency().size());
  for (PointId x = 0; x < n; ++x) diag[x] = promoted.diagonal(x) + g_x[x] * scale;
  const auto pv = promoted.sparse_values();
  for (std::size_t s = 0; s < values.size(); ++s) values[s] = pv[s] + g_pair[s] * scale;
  return CohesionMatrix::sparse(
      n, std::move(diag), std::vector<std::size_t>(g.offsets().begin(), g.offsets().end()),
      std::vector<PointId>(g.adjacency().begin(), g.adjacency().end()), std::move(values));
}

ThresholdParts pannld_threshold(const NeighborGraph& g, const PromotedFoci& foci,
                                std::span<const double> g_x) {
  const double n = static_cast<double>(g.size());
  ThresholdParts t;
  double sp = 0.0;
  for (PointId x = 0; x < g.size(); ++x) {
    auto row = g.neighbors(x);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] < x) continue;
      sp += 1.0 / static_cast<double>(foci.focus_size(g.offsets()[x] + i));
    }
  }
  double sr = 0.0;
  for (double v : g_x) sr += v;
  t.tau_p = sp / (n * (n - 1.0));
  t.tau_r = sr / (2.0 * n * (n - 1.0));
  t.tau = t.tau_p + t.tau_r;
  return t;
}

ClusterResult pannld_cluster(const CohesionMatrix& c, double tau) { return cluster_graph(c, tau); }

std::size_t default_degree_cap(std::size_t k_max) noexcept {
  return std::max<std::size_t>(64, 16 * k_max);
}

void check_degree_cap(const NeighborGraph& g, std::size_t cap) {
  std::vector<std::uint32_t> bad;
  std::vector<std::size_t> degrees;
  for (PointId x = 0; x < g.size(); ++x) {
    if (g.degree(x) > cap) {
      bad.push_back(x);
      degrees.push_back(g.degree(x));
    }
  }
  if (!bad.empty()) throw DegreeCapExceeded(cap, std::move(bad), std::move(degrees));
}

PannldRun run_pannld(const RankingSystem& rs, const PannldOptions& options) {
  const std::size_t n = rs.size();
  if (n < 4) throw InputError("the neighbor pipeline needs n >= 4");
  PannldRun run;
  PannldDiagnostics& d = run.diagnostics;

  FriendSets friends = options.friends
                           ? *options.friends
                           : (options.k_per_point.empty()
                                  ? build_friend_sets(rs, options.k, options.threads)
                                  : build_friend_sets(rs, options.k_per_point, options.threads));
  d.knn_oracle_calls = friends.oracle_calls;
  d.knn_evaluations = friends.evaluations;
  run.graph = NeighborGraph(friends);
  const NeighborGraph& g = run.graph;

  d.degree_cap = options.degree_cap ? options.degree_cap : default_degree_cap(g.k_max());
  check_degree_cap(g, d.degree_cap);

  run.tables = build_restricted_tables(rs.oracle(), g, options.threads);
  run.promoted = promoted_cohesion(g, run.tables, options.threads);

  for (PointId x = 0; x < n; ++x) {
    const double dx = static_cast<double>(g.degree(x));
    d.sum_degree_squares += g.degree(x) * g.degree(x);
    d.call_budget += (dx > 1 ? dx * std::log2(dx) : 0.0) + 3.0 * dx * (dx - 1.0) / 2.0;
  }
  d.step_budget = 1.5 * static_cast<double>(d.sum_degree_squares);
  d.table_oracle_calls = run.tables.oracle_calls();
  d.algorithm_steps = run.promoted.foci.inner_steps();
  d.assembly_steps = run.promoted.assembly_steps;
  if (static_cast<double>(d.table_oracle_calls) > d.call_budget) {
    std::ostringstream os;
    os << "oracle calls " << d.table_oracle_calls << " exceed the budget " << d.call_budget;
    throw BudgetExceeded(os.str());
  }
  if (static_cast<double>(d.algorithm_steps) > d.step_budget) {
    std::ostringstream os;
    os << "inner steps " << d.algorithm_steps << " exceed the budget " << d.step_budget;
    throw BudgetExceeded(os.str());
  }

  PhiTable phi(n, options.phi_mode);
  run.partial = partial_sums(g, phi);
  d.partial_sum_steps = run.partial.steps;
  auto inter = intersection_correction(g, run.promoted.foci, run.partial.h, phi);
  run.g_x = std::move(inter.g);
  d.intersection_steps = inter.steps;
  auto off = relegated_offdiagonal(g, run.tables, run.promoted.foci, run.g_x, phi);
  run.g_pair = std::move(off.g_pair);
  d.offdiagonal_steps = off.steps;
  d.phi_evaluations = phi.evaluated();

  run.cohesion = assemble(g, run.promoted.matrix, run.g_x, run.g_pair);
  run.tau = pannld_threshold(g, run.promoted.foci, run.g_x);
  const double direct = cluster_threshold(run.cohesion);
  if (std::abs(direct - run.tau.tau) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "threshold decomposition " << run.tau.tau << " disagrees with the trace form " << direct;
    throw ConsistencyError(os.str());
  }
  run.clusters = pannld_cluster(run.cohesion, run.tau.tau);
  run.clusters.diagnostics.oracle_calls = d.knn_oracle_calls + d.table_oracle_calls;
  run.clusters.diagnostics.inner_steps = d.total_steps();
  return run;
}

}  // namespace pald
