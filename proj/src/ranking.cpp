#include "pald/ranking.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <sstream>

#include "pald/errors.hpp"
#include "pald/parallel.hpp"

namespace pald {

RankTable::RankTable(PointId base, std::vector<PointId> order)
    : base_(base), order_(std::move(order)) {
  by_id_.reserve(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    by_id_.emplace_back(order_[i], static_cast<std::int32_t>(i + 1));
  }
  std::sort(by_id_.begin(), by_id_.end());
}

std::optional<std::int32_t> RankTable::find_rank(PointId y) const {
  auto it = std::lower_bound(by_id_.begin(), by_id_.end(), std::make_pair(y, std::int32_t{0}));
  if (it == by_id_.end() || it->first != y) return std::nullopt;
  return it->second;
}

std::int32_t RankTable::rank(PointId y) const {
  if (auto r = find_rank(y)) return *r;
  std::ostringstream os;
  os << "point " << y << " is not ranked in the table of " << base_;
  throw InputError(os.str());
}

std::uint64_t rank_table_call_budget(std::size_t m) noexcept {
  if (m < 2) return 0;
  const std::uint64_t mm = m;
  const std::uint64_t ceil_pow = std::bit_ceil(mm);
  const std::uint64_t ceil_log = static_cast<std::uint64_t>(std::countr_zero(ceil_pow));
  return mm * ceil_log - ceil_pow + 1 + 2 * (mm - 1);
}

namespace {

class MergeSorter {
 public:
  MergeSorter(TripletOracle::Session& session, PointId base) : session_(session), base_(base) {}

  void sort(std::vector<PointId>& items) {
    buffer_.resize(items.size());
    sort(items, 0, items.size());
  }

 private:
  void sort(std::vector<PointId>& a, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return;
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    sort(a, lo, mid);
    sort(a, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
      const int c = session_.compare(base_, a[i], a[j]);
      if (c == 0) throw AxiomViolation("totality", base_, a[i], a[j]);
      buffer_[k++] = c < 0 ? a[i++] : a[j++];
    }
    while (i < mid) buffer_[k++] = a[i++];
    while (j < hi) buffer_[k++] = a[j++];
    std::copy(buffer_.begin() + static_cast<std::ptrdiff_t>(lo),
              buffer_.begin() + static_cast<std::ptrdiff_t>(hi),
              a.begin() + static_cast<std::ptrdiff_t>(lo));
  }

  TripletOracle::Session& session_;
  PointId base_;
  std::vector<PointId> buffer_;
};

}  // namespace

RankTable build_rank_table(TripletOracle::Session& session, PointId x,
                           std::span<const PointId> candidates) {
  if (candidates.empty()) throw InputError("rank table needs at least one candidate");
  std::vector<PointId> items(candidates.begin(), candidates.end());
  {
    std::vector<PointId> check = items;
    std::sort(check.begin(), check.end());
    if (std::adjacent_find(check.begin(), check.end()) != check.end()) {
      throw InputError("rank table candidates must be distinct");
    }
    if (std::binary_search(check.begin(), check.end(), x)) {
      std::ostringstream os;
      os << "base point " << x << " cannot rank itself";
      throw InputError(os.str());
    }
  }
  MergeSorter(session, x).sort(items);
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    const int forward = session.compare(x, items[i], items[i + 1]);
    const int reverse = session.compare(x, items[i + 1], items[i]);
    if (forward == -1 && reverse == 1) continue;
    if (forward == 0 || reverse == 0) throw AxiomViolation("totality", x, items[i], items[i + 1]);
    if (forward == reverse) throw AxiomViolation("antisymmetry", x, items[i], items[i + 1]);
    throw AxiomViolation("transitivity", x, items[i], items[i + 1]);
  }
  return RankTable(x, std::move(items));
}

RankTable build_rank_table(const TripletOracle& oracle, PointId x,
                           std::span<const PointId> candidates) {
  TripletOracle::Session session(oracle);
  return build_rank_table(session, x, candidates);
}

// ---------------------------------------------------------------------------

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::euclidean:
      return "euclidean";
    case GeneratorKind::blobs:
      return "blobs";
    case GeneratorKind::star:
      return "star";
    case GeneratorKind::random_tournament:
      return "random-tournament";
    case GeneratorKind::external:
      return "external";
  }
  return "external";
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  if (s == "euclidean") return GeneratorKind::euclidean;
  if (s == "blobs") return GeneratorKind::blobs;
  if (s == "star") return GeneratorKind::star;
  if (s == "random-tournament" || s == "tournament") return GeneratorKind::random_tournament;
  if (s == "external") return GeneratorKind::external;
  throw InputError("unknown generator kind '" + s + "'");
}

// ---------------------------------------------------------------------------

RankingSystem::RankingSystem(std::shared_ptr<const TripletOracle> oracle, DatasetSpec provenance,
                             std::vector<std::string> ids)
    : oracle_(std::move(oracle)),
      provenance_(std::move(provenance)),
      ids_(std::move(ids)),
      lazy_(std::make_shared<Lazy>()) {
  if (!oracle_) throw InputError("ranking system needs an oracle");
  const std::size_t n = oracle_->size();
  if (ids_.empty()) {
    ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids_.push_back(std::to_string(i));
  } else if (ids_.size() != n) {
    throw InputError("id list length does not match the point count");
  }
  provenance_.n = n;
}

bool RankingSystem::materialized() const { return lazy_->ranks != nullptr; }

const FullRanks& RankingSystem::ranks(std::size_t threads) const {
  std::call_once(lazy_->once, [&] {
    const std::size_t n = size();
    auto full = std::make_unique<FullRanks>();
    full->n = n;
    full->at.assign(n * n, 0);
    full->at_transposed.assign(n * n, 0);
    std::vector<std::uint64_t> calls(chunk_count(n, threads), 0);
    parallel_for(
        n,
        [&](std::size_t begin, std::size_t end, std::size_t chunk) {
          TripletOracle::Session session(*oracle_);
          std::vector<PointId> others;
          others.reserve(n);
          for (std::size_t x = begin; x < end; ++x) {
            others.clear();
            for (std::size_t z = 0; z < n; ++z) {
              if (z != x) others.push_back(static_cast<PointId>(z));
            }
            RankTable t = build_rank_table(session, static_cast<PointId>(x), others);
            const auto& order = t.order();
            for (std::size_t r = 0; r < order.size(); ++r) {
              full->at[x * n + order[r]] = static_cast<std::int32_t>(r + 1);
            }
          }
          session.flush();
          calls[chunk] = session.merged_calls();
        },
        threads);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t z = 0; z < n; ++z) full->at_transposed[z * n + x] = full->at[x * n + z];
    }
    for (auto c : calls) full->oracle_calls += c;
    lazy_->ranks = std::move(full);
  });
  return *lazy_->ranks;
}

RankTable RankingSystem::table(PointId x) const {
  const FullRanks& r = ranks();
  if (x >= r.n) throw InputError("table(): id out of range");
  std::vector<PointId> order(r.n - 1);
  for (std::size_t z = 0; z < r.n; ++z) {
    if (z == x) continue;
    order[static_cast<std::size_t>(r.rank(x, static_cast<PointId>(z)) - 1)] =
        static_cast<PointId>(z);
  }
  return RankTable(x, std::move(order));
}

void validate_rank_matrix(std::span<const std::int32_t> at, std::size_t n) {
  if (at.size() != n * n) throw InputError("rank matrix must be n x n");
  std::vector<char> seen(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t z = 0; z < n; ++z) {
      const std::int32_t r = at[x * n + z];
      if (z == x) {
        if (r != 0) throw InputError("rank of a point in its own table must be 0");
        continue;
      }
      if (r < 1 || static_cast<std::size_t>(r) >= n || seen[static_cast<std::size_t>(r)]) {
        std::ostringstream os;
        os << "table of " << x << " is not a permutation of 1.." << n - 1 << " (member " << z
           << ", rank " << r << ")";
        throw InputError(os.str());
      }
      seen[static_cast<std::size_t>(r)] = 1;
    }
  }
}

RankingSystem RankingSystem::from_rank_matrix(std::vector<std::int32_t> at, std::size_t n,
                                              DatasetSpec provenance,
                                              std::vector<std::string> ids) {
  validate_rank_matrix(at, n);
  return RankingSystem(std::make_shared<RankMatrixOracle>(std::move(at), n), std::move(provenance),
                       std::move(ids));
}

// ---------------------------------------------------------------------------

namespace {

class AxiomChecker {
 public:
  AxiomChecker(const TripletOracle& oracle, AxiomReport& report)
      : session_(oracle), report_(report) {}

  void triple(PointId x, PointId y, PointId z) {
    if (session_.compare(x, y, y) != 0) fail("totality", x, y, y);
    if (y == z) return;
    const int a = session_.compare(x, y, z);
    const int b = session_.compare(x, z, y);
    report_.checks += 2;
    if (a == 0 || b == 0) fail("totality", x, y, z);
    if (a != -b) fail("antisymmetry", x, y, z);
    if (y != x && session_.compare(x, x, y) != -1) fail("autosimilarity", x, x, y);
  }

  void chain(PointId x, PointId y, PointId z, PointId w) {
    if (y == z || z == w || y == w) return;
    const int a = session_.compare(x, y, z);
    const int b = session_.compare(x, z, w);
    if (a != b || a == 0) return;
    ++report_.checks;
    if (session_.compare(x, y, w) != a) fail("transitivity", x, y, z, w);
  }

 private:
  void fail(const char* axiom, PointId x, PointId y, PointId z, PointId w = 0) {
    ++report_.violation_count;
    if (report_.witnesses.size() < 16) report_.witnesses.push_back({axiom, x, y, z, w});
  }

  TripletOracle::Session session_;
  AxiomReport& report_;
};

}  // namespace

AxiomReport verify_axioms(const TripletOracle& oracle, std::size_t n, std::size_t samples,
                          std::uint64_t seed) {
  if (samples == 0) throw InputError("verify_axioms needs at least one sample");
  if (n != oracle.size()) throw InputError("verify_axioms: n does not match the oracle");
  AxiomReport report;
  report.samples = samples;
  if (n == 0) return report;
  AxiomChecker check(oracle, report);
  if (n <= 30) {
    report.exhaustive = true;
    for (PointId x = 0; x < n; ++x) {
      for (PointId y = 0; y < n; ++y) {
        for (PointId z = 0; z < n; ++z) {
          check.triple(x, y, z);
          for (PointId w = 0; w < n; ++w) check.chain(x, y, z, w);
        }
      }
    }
    return report;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, static_cast<PointId>(n - 1));
  for (std::size_t s = 0; s < samples; ++s) {
    const PointId x = pick(rng), y = pick(rng), z = pick(rng), w = pick(rng);
    check.triple(x, y, z);
    check.chain(x, y, z, w);
  }
  return report;
}

}  // namespace pald
