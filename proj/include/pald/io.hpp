#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pald/cohesion.hpp"
#include "pald/errors.hpp"
#include "pald/lab.hpp"
#include "pald/neighbors.hpp"
#include "pald/phi.hpp"
#include "pald/ranking.hpp"

namespace pald {

/// Malformed CSV; carries the 1-based row and column of the offending cell.
class CsvError : public InputError {
 public:
  CsvError(const std::string& file, std::size_t row, std::size_t column, const std::string& what);
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_, column_;
};

struct PointTable {
  std::vector<std::string> ids;
  std::vector<double> coords;  // row-major
  std::size_t dim = 0;
};

/// Header `id,c1,...,cd`; unique non-empty ids; finite coordinates.
PointTable read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::filesystem::path& path, const PointTable& points);

/// n rows of n non-negative decimals, zero diagonal, no header.
std::vector<double> read_distance_matrix_csv(const std::filesystem::path& path, std::size_t& n);

/// Rows `base,member,rank` for every full table (ids as labels).
void write_rank_tables_csv(const std::filesystem::path& path, const RankingSystem& rs);
RankingSystem read_rank_tables_csv(const std::filesystem::path& path);

void write_cohesion_csv(const std::filesystem::path& path, const CohesionMatrix& c,
                        const std::vector<std::string>& ids);
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels,
                      const std::vector<std::string>& ids);
/// Every mutual weight w = min(C[x][y], C[y][x]) with a kept flag.
void write_edges_csv(const std::filesystem::path& path, const CohesionMatrix& c, double tau,
                     const std::vector<std::string>& ids);
void write_digraph_csv(const std::filesystem::path& path, const NeighborGraph& g,
                       const std::vector<std::string>& ids);
void write_promoted_csv(const std::filesystem::path& path, const NeighborGraph& g,
                        const std::vector<std::string>& ids);

// --- JSON -------------------------------------------------------------------

struct RunSummary {
  std::string pipeline;
  std::size_t n = 0;
  std::optional<std::size_t> k;
  double tau = 0.0;
  double tau_p = 0.0;
  double tau_r = 0.0;
  std::vector<std::size_t> component_sizes;
  std::uint64_t oracle_calls = 0;
  std::uint64_t inner_steps = 0;
  double wall_time = 0.0;  // seconds
  std::string phi_mode;
  std::string isa;
};

/// Serializes and checks against the summary schema (required keys and types).
std::string summary_to_json(const RunSummary& s);
/// Throws ConsistencyError naming the first schema violation.
void validate_summary_json(const std::string& text);

std::string suite_to_json(const std::vector<McSuite>& suites);

enum class InputKind { generator, points, distances, rank_tables };

struct RunConfig {
  InputKind input = InputKind::generator;
  std::string path;
  DatasetSpec generator;     // used when input == generator
  std::size_t clusters = 2;  // blobs only
  double separation = 8.0;   // blobs only
  std::string pipeline = "pannld";
  std::size_t k = 10;
  PhiMode phi_mode = PhiMode::exact;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::size_t degree_cap = 0;
  std::size_t threads = 0;
  bool force = false;
};

std::string config_to_json(const RunConfig& c);
RunConfig config_from_json(const std::string& text);

/// Loads the ranking system a config describes.
RankingSystem load_input(const RunConfig& c);

}  // namespace pald
