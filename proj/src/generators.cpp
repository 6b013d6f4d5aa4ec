#include <random>
#include <sstream>

#include "pald/errors.hpp"
#include "pald/random.hpp"
#include "pald/ranking.hpp"

namespace pald {

RankingSystem from_points(std::vector<double> coords, std::size_t dim, std::vector<std::string> ids,
                          DatasetSpec provenance) {
  auto oracle = std::make_shared<EuclideanOracle>(std::move(coords), dim);
  provenance.dim = dim;
  return RankingSystem(std::move(oracle), std::move(provenance), std::move(ids));
}

RankingSystem gen_euclidean(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n < 3) throw InputError("gen_euclidean needs n >= 3");
  if (dim < 1) throw InputError("gen_euclidean needs dim >= 1");
  std::mt19937_64 rng(derive_seed(seed, "euclidean"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(n * dim);
  for (auto& c : coords) c = unit(rng);
  DatasetSpec spec;
  spec.kind = GeneratorKind::euclidean;
  spec.seed = seed;
  return from_points(std::move(coords), dim, {}, spec);
}

RankingSystem gen_star(std::size_t n_leaves, std::span<const double> weights) {
  if (n_leaves < 2) throw InputError("gen_star needs at least two leaves");
  if (weights.size() != n_leaves) throw InputError("gen_star needs one weight per leaf");
  for (std::size_t j = 0; j < n_leaves; ++j) {
    if (!(weights[j] > 0.0) || (j > 0 && !(weights[j] > weights[j - 1]))) {
      std::ostringstream os;
      os << "star weights must be positive and strictly increasing (index " << j << ")";
      throw InputError(os.str());
    }
  }
  const std::size_t n = n_leaves + 1;
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    dist[j] = weights[j - 1];
    dist[j * n] = weights[j - 1];
    for (std::size_t i = 1; i < n; ++i) {
      if (i != j) dist[i * n + j] = weights[i - 1] + weights[j - 1];
    }
  }
  DatasetSpec spec;
  spec.kind = GeneratorKind::star;
  spec.weights.assign(weights.begin(), weights.end());
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("x" + std::to_string(i));
  return RankingSystem(std::make_shared<DistanceMatrixOracle>(std::move(dist), n), std::move(spec),
                       std::move(ids));
}

RankingSystem gen_star(std::size_t n_leaves) {
  std::vector<double> w(n_leaves);
  for (std::size_t j = 0; j < n_leaves; ++j) w[j] = static_cast<double>(j + 1);
  return gen_star(n_leaves, w);
}

RankingSystem gen_random_tournament(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw InputError("gen_random_tournament needs n >= 3");
  std::vector<std::int32_t> at(n * n, 0);
  std::vector<std::int32_t> ranks(n - 1);
  for (std::size_t x = 0; x < n; ++x) {
    std::mt19937_64 rng(derive_seed(derive_seed(seed, "tournament"), x));
    for (std::size_t r = 0; r < n - 1; ++r) ranks[r] = static_cast<std::int32_t>(r + 1);
    std::shuffle(ranks.begin(), ranks.end(), rng);
    std::size_t k = 0;
    for (std::size_t z = 0; z < n; ++z) {
      if (z != x) at[x * n + z] = ranks[k++];
    }
  }
  DatasetSpec spec;
  spec.kind = GeneratorKind::random_tournament;
  spec.seed = seed;
  return RankingSystem::from_rank_matrix(std::move(at), n, std::move(spec));
}

LabeledPoints gen_blobs(std::size_t clusters, std::size_t per_cluster, std::size_t dim,
                        double separation, std::uint64_t seed) {
  if (clusters < 1 || per_cluster < 1 || dim < 1) throw InputError("gen_blobs: empty shape");
  if (clusters * per_cluster < 3) throw InputError("gen_blobs needs at least 3 points");
  std::mt19937_64 rng(derive_seed(seed, "blobs"));
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> coords;
  coords.reserve(clusters * per_cluster * dim);
  std::vector<int> truth;
  for (std::size_t c = 0; c < clusters; ++c) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        const double center = d == 0 ? separation * static_cast<double>(c) : 0.0;
        coords.push_back(center + noise(rng));
      }
      truth.push_back(static_cast<int>(c));
    }
  }
  DatasetSpec spec;
  spec.kind = GeneratorKind::blobs;
  spec.seed = seed;
  spec.weights = {static_cast<double>(clusters), separation};
  return {from_points(std::move(coords), dim, {}, spec), std::move(truth)};
}

}  // namespace pald
