#include "pald/pald.hpp"

#include <sstream>

#include "pald/errors.hpp"
#include "pald/kernels.hpp"
#include "pald/parallel.hpp"

namespace pald {

namespace {

void require_pipeline_size(std::size_t n, const ExactOptions& options) {
  if (n < 3) throw InputError("the exact pipeline needs n >= 3");
  if (n > options.max_n && !options.force) {
    std::ostringstream os;
    os << "n = " << n << " exceeds the exact-pipeline cap of " << options.max_n
       << " (cubic cost); use the neighbor pipeline or force the run";
    throw InputError(os.str());
  }
}

}  // namespace

ConflictFocus conflict_focus(const RankingSystem& rs, PointId x, PointId y) {
  const std::size_t n = rs.size();
  if (x >= n || y >= n) throw InputError("conflict_focus: id out of range");
  if (x == y) throw InputError("conflict_focus needs two distinct points");
  const FullRanks& r = rs.ranks();
  ConflictFocus focus;
  for (PointId z = 0; z < n; ++z) {
    if (r.precedes(x, z, y) && r.precedes(z, x, y)) focus.left.push_back(z);
    if (r.precedes(y, z, x) && r.precedes(z, y, x)) focus.right.push_back(z);
  }
  return focus;
}

ConflictFociStore::ConflictFociStore(std::size_t n, std::vector<std::uint32_t> left)
    : n_(n), left_(std::move(left)) {
  if (left_.size() != n_ * n_) throw InputError("focus store must be n x n");
}

ExactCohesion cohesion_matrix_exact(const RankingSystem& rs, const ExactOptions& options) {
  const std::size_t n = rs.size();
  require_pipeline_size(n, options);
  const FullRanks& r = rs.ranks(options.threads);
  const auto& k = kernels::active();

  std::vector<std::uint32_t> left(n * n, 0);
  std::vector<std::uint64_t> steps(chunk_count(n, options.threads), 0);
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t x = begin; x < end; ++x) {
          const PointId px = static_cast<PointId>(x);
          for (std::size_t y = 0; y < n; ++y) {
            if (y == x) continue;
            left[x * n + y] = static_cast<std::uint32_t>(
                k.count_left_focus(r.row(px), r.rank(px, static_cast<PointId>(y)), r.column(px),
                                   r.column(static_cast<PointId>(y)), n));
            steps[chunk] += n;
          }
        }
      },
      options.threads);

  std::vector<double> values(n * n, 0.0);
  const double scale = 1.0 / static_cast<double>(n - 1);
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t x = begin; x < end; ++x) {
          const PointId px = static_cast<PointId>(x);
          double* row = values.data() + x * n;
          for (std::size_t y = 0; y < n; ++y) {
            if (y == x) continue;
            const double w = 1.0 / static_cast<double>(left[x * n + y] + left[y * n + x]);
            k.add_left_focus(r.row(px), r.rank(px, static_cast<PointId>(y)), r.column(px),
                             r.column(static_cast<PointId>(y)), w, row, n);
            steps[chunk] += n;
          }
          for (std::size_t v = 0; v < n; ++v) row[v] *= scale;
        }
      },
      options.threads);

  ExactCohesion out;
  out.cohesion = CohesionMatrix::dense(n, std::move(values));
  out.foci = ConflictFociStore(n, std::move(left));
  for (auto s : steps) out.inner_steps += s;
  out.oracle_calls = r.oracle_calls;
  return out;
}

std::vector<double> local_depth(const ConflictFociStore& foci) {
  const std::size_t n = foci.n();
  if (n < 3) throw InputError("local_depth needs n >= 3");
  std::vector<double> depth(n, 0.0);
  for (PointId x = 0; x < n; ++x) {
    double sum = 0.0;
    for (PointId y = 0; y < n; ++y) {
      if (y == x) continue;
      sum += static_cast<double>(foci.left(x, y)) / static_cast<double>(foci.size(x, y));
    }
    depth[x] = sum / static_cast<double>(n - 1);
  }
  return depth;
}

std::vector<double> local_depth(const RankingSystem& rs, const ExactOptions& options) {
  return local_depth(cohesion_matrix_exact(rs, options).foci);
}

PaldRun run_pald(const RankingSystem& rs, const ExactOptions& options) {
  PaldRun run;
  run.exact = cohesion_matrix_exact(rs, options);
  run.tau = cluster_threshold(run.exact.cohesion);
  run.depth = local_depth(run.exact.foci);
  run.clusters = cluster_graph(run.exact.cohesion, run.tau);
  run.clusters.diagnostics.oracle_calls = run.exact.oracle_calls;
  run.clusters.diagnostics.inner_steps = run.exact.inner_steps;
  return run;
}

}  // namespace pald
