#include "pald/compare.hpp"

#include <algorithm>
#include <cmath>

#include "pald/errors.hpp"
#include "pald/stats.hpp"

namespace pald {

CompareReport compare_pipelines(const RankingSystem& rs, const PannldOptions& pannld,
                                const ExactOptions& exact) {
  const std::size_t n = rs.size();
  if (n > exact.max_n && !exact.force) {
    throw InputError("compare runs the cubic pipeline; n = " + std::to_string(n) +
                     " exceeds its cap of " + std::to_string(exact.max_n) +
                     " (raise the cap or use --force)");
  }
  // PaNNLD first so its call counts are not hidden by materialized full tables
  const PannldRun f = run_pannld(rs, pannld);
  const PaldRun p = run_pald(rs, exact);

  CompareReport r;
  r.n = n;
  r.ari = adjusted_rand_index(p.clusters.labels, f.clusters.labels);
  r.pald_oracle_calls = p.exact.oracle_calls;
  r.pannld_oracle_calls = f.diagnostics.knn_oracle_calls + f.diagnostics.table_oracle_calls;
  r.pald_steps = p.exact.inner_steps;
  r.pannld_steps = f.diagnostics.total_steps();
  r.pald_tau = p.tau;
  r.pannld_tau = f.tau.tau;

  double sum = 0.0;
  auto visit = [&](PointId x, PointId v) {
    const double d = std::abs(f.cohesion.at(x, v) - p.exact.cohesion.at(x, v));
    r.max_delta = std::max(r.max_delta, d);
    sum += d;
    ++r.entries;
  };
  for (PointId x = 0; x < n; ++x) {
    visit(x, x);
    for (PointId v : f.graph.neighbors(x)) visit(x, v);
  }
  r.mean_delta = sum / static_cast<double>(r.entries);
  return r;
}

}  // namespace pald
