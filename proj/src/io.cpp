#include "pald/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "pald/errors.hpp"

namespace pald {

using nlohmann::json;

CsvError::CsvError(const std::string& file, std::size_t row, std::size_t column,
                   const std::string& what)
    : InputError(file + ": row " + std::to_string(row) + ", column " + std::to_string(column) +
                 ": " + what),
      row_(row),
      column_(column) {}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& cell, const std::string& file, std::size_t row,
                    std::size_t col) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  auto r = std::from_chars(b, e, v);
  if (cell.empty() || r.ec != std::errc() || r.ptr != e || !std::isfinite(v)) {
    throw CsvError(file, row, col, "expected a finite number, got '" + cell + "'");
  }
  return v;
}

long long parse_int(const std::string& cell, const std::string& file, std::size_t row,
                    std::size_t col) {
  long long v = 0;
  auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || r.ec != std::errc() || r.ptr != cell.data() + cell.size()) {
    throw CsvError(file, row, col, "expected an integer, got '" + cell + "'");
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

PointTable read_points_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string file = path.string();
  std::string line;
  if (!std::getline(in, line)) throw CsvError(file, 1, 1, "empty file");
  const auto header = split_row(line);
  if (header.size() < 2 || header[0] != "id") {
    throw CsvError(file, 1, 1, "header must be id,c1,...,cd");
  }
  PointTable t;
  t.dim = header.size() - 1;
  std::unordered_set<std::string> seen;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line)) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw CsvError(file, row, std::min(cells.size(), header.size()) + 1,
                     "expected " + std::to_string(header.size()) + " cells, got " +
                         std::to_string(cells.size()));
    }
    if (cells[0].empty()) throw CsvError(file, row, 1, "empty id");
    if (!seen.insert(cells[0]).second) throw CsvError(file, row, 1, "duplicate id '" + cells[0] + "'");
    t.ids.push_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      t.coords.push_back(parse_double(cells[c], file, row, c + 1));
    }
  }
  if (t.ids.size() < 3) throw InputError(file + ": at least 3 points are required");
  return t;
}

void write_points_csv(const std::filesystem::path& path, const PointTable& t) {
  auto out = open_out(path);
  out << "id";
  for (std::size_t d = 0; d < t.dim; ++d) out << ",c" << d + 1;
  out << "\n";
  for (std::size_t i = 0; i < t.ids.size(); ++i) {
    out << quote(t.ids[i]);
    for (std::size_t d = 0; d < t.dim; ++d) out << "," << fmt(t.coords[i * t.dim + d]);
    out << "\n";
  }
}

std::vector<double> read_distance_matrix_csv(const std::filesystem::path& path, std::size_t& n) {
  auto in = open_in(path);
  const std::string file = path.string();
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line)) continue;
    const auto cells = split_row(line);
    std::vector<double> r;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_double(cells[c], file, row, c + 1);
      if (v < 0) throw CsvError(file, row, c + 1, "dissimilarities must be non-negative");
      r.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  n = rows.size();
  if (n < 3) throw InputError(file + ": at least 3 rows are required");
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw CsvError(file, i + 1, std::min(rows[i].size(), n) + 1,
                     "expected " + std::to_string(n) + " columns");
    }
    if (rows[i][i] != 0.0) throw CsvError(file, i + 1, i + 1, "diagonal entries must be 0");
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return values;
}

void write_rank_tables_csv(const std::filesystem::path& path, const RankingSystem& rs) {
  auto out = open_out(path);
  const FullRanks& r = rs.ranks();
  const auto& ids = rs.ids();
  out << "base,member,rank\n";
  for (PointId x = 0; x < r.n; ++x) {
    RankTable t = rs.table(x);
    for (std::size_t i = 0; i < t.order().size(); ++i) {
      out << quote(ids[x]) << "," << quote(ids[t.order()[i]]) << "," << i + 1 << "\n";
    }
  }
}

RankingSystem read_rank_tables_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string file = path.string();
  std::string line;
  if (!std::getline(in, line) || split_row(line) != std::vector<std::string>{"base", "member", "rank"}) {
    throw CsvError(file, 1, 1, "header must be base,member,rank");
  }
  struct Entry {
    std::string base, member;
    long long rank;
    std::size_t row;
  };
  std::vector<Entry> entries;
  std::vector<std::string> ids;
  std::unordered_map<std::string, PointId> index;
  auto intern = [&](const std::string& s) {
    auto [it, fresh] = index.emplace(s, static_cast<PointId>(ids.size()));
    if (fresh) ids.push_back(s);
    return it->second;
  };
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line)) continue;
    const auto cells = split_row(line);
    if (cells.size() != 3) throw CsvError(file, row, std::min<std::size_t>(cells.size(), 3) + 1, "expected 3 cells");
    if (cells[0].empty() || cells[1].empty()) throw CsvError(file, row, cells[0].empty() ? 1 : 2, "empty id");
    entries.push_back({cells[0], cells[1], parse_int(cells[2], file, row, 3), row});
    intern(cells[0]);
  }
  for (const auto& e : entries) {
    if (!index.count(e.member)) throw CsvError(file, e.row, 2, "member '" + e.member + "' has no table");
  }
  const std::size_t n = ids.size();
  if (n < 3) throw InputError(file + ": at least 3 tables are required");
  std::vector<std::int32_t> at(n * n, 0);
  std::vector<char> set(n * n, 0);
  for (const auto& e : entries) {
    const PointId b = index.at(e.base), m = index.at(e.member);
    if (b == m) throw CsvError(file, e.row, 2, "a point cannot rank itself");
    if (set[b * n + m]) throw CsvError(file, e.row, 2, "duplicate entry");
    if (e.rank < 1 || static_cast<std::size_t>(e.rank) >= n) throw CsvError(file, e.row, 3, "rank out of range");
    set[b * n + m] = 1;
    at[b * n + m] = static_cast<std::int32_t>(e.rank);
  }
  DatasetSpec spec;
  spec.kind = GeneratorKind::external;
  spec.source = file;
  return RankingSystem::from_rank_matrix(std::move(at), n, spec, ids);
}

void write_cohesion_csv(const std::filesystem::path& path, const CohesionMatrix& c,
                        const std::vector<std::string>& ids) {
  auto out = open_out(path);
  out << "x,v,value\n";
  for (PointId x = 0; x < c.size(); ++x) {
    out << quote(ids[x]) << "," << quote(ids[x]) << "," << fmt(c.diagonal(x)) << "\n";
    for (std::size_t k = 0; k < c.row_size(x); ++k) {
      out << quote(ids[x]) << "," << quote(ids[c.column(x, k)]) << "," << fmt(c.value(x, k)) << "\n";
    }
  }
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels,
                      const std::vector<std::string>& ids) {
  auto out = open_out(path);
  out << "id,component\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << quote(ids[i]) << "," << labels[i] << "\n";
}

void write_edges_csv(const std::filesystem::path& path, const CohesionMatrix& c, double tau,
                     const std::vector<std::string>& ids) {
  auto out = open_out(path);
  out << "x,y,weight,kept\n";
  for (const auto& e : mutual_weights(c)) {
    out << quote(ids[e.x]) << "," << quote(ids[e.y]) << "," << fmt(e.weight) << ","
        << (e.weight >= tau ? 1 : 0) << "\n";
  }
}

void write_digraph_csv(const std::filesystem::path& path, const NeighborGraph& g,
                       const std::vector<std::string>& ids) {
  auto out = open_out(path);
  out << "source,target\n";
  for (PointId x = 0; x < g.size(); ++x) {
    for (PointId y : g.friends(x)) out << quote(ids[x]) << "," << quote(ids[y]) << "\n";
  }
}

void write_promoted_csv(const std::filesystem::path& path, const NeighborGraph& g,
                        const std::vector<std::string>& ids) {
  auto out = open_out(path);
  out << "x,y\n";
  for (PointId x = 0; x < g.size(); ++x) {
    for (PointId y : g.neighbors(x)) {
      if (x < y) out << quote(ids[x]) << "," << quote(ids[y]) << "\n";
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

enum class Kind { string, unsigned_int, number, array_of_unsigned };

struct Field {
  const char* name;
  Kind kind;
  bool nullable;
};

// The summary schema: stable key set and types.
constexpr Field kSummarySchema[] = {
    {"pipeline", Kind::string, false},     {"n", Kind::unsigned_int, false},
    {"K", Kind::unsigned_int, true},       {"tau", Kind::number, false},
    {"tau_P", Kind::number, false},        {"tau_R", Kind::number, false},
    {"component_sizes", Kind::array_of_unsigned, false},
    {"oracle_calls", Kind::unsigned_int, false},
    {"inner_steps", Kind::unsigned_int, false},
    {"wall_time", Kind::number, false},    {"phi_mode", Kind::string, true},
    {"isa", Kind::string, false},
};

void check_field(const json& j, const Field& f) {
  auto fail = [&](const std::string& why) {
    throw ConsistencyError(std::string("summary field '") + f.name + "' " + why);
  };
  if (!j.contains(f.name)) fail("is missing");
  const json& v = j.at(f.name);
  if (v.is_null()) {
    if (!f.nullable) fail("must not be null");
    return;
  }
  switch (f.kind) {
    case Kind::string:
      if (!v.is_string()) fail("must be a string");
      break;
    case Kind::unsigned_int:
      if (!v.is_number_unsigned()) fail("must be a non-negative integer");
      break;
    case Kind::number:
      if (!v.is_number()) fail("must be a number");
      break;
    case Kind::array_of_unsigned:
      if (!v.is_array()) fail("must be an array");
      for (const auto& e : v) {
        if (!e.is_number_unsigned()) fail("must hold non-negative integers");
      }
      break;
  }
}

}  // namespace

void validate_summary_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConsistencyError(std::string("summary is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConsistencyError("summary must be a JSON object");
  for (const auto& f : kSummarySchema) check_field(j, f);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& f : kSummarySchema) known = known || key == f.name;
    if (!known) throw ConsistencyError("summary has unexpected field '" + key + "'");
  }
}

std::string summary_to_json(const RunSummary& s) {
  json j;
  j["pipeline"] = s.pipeline;
  j["n"] = s.n;
  j["K"] = s.k ? json(*s.k) : json(nullptr);
  j["tau"] = s.tau;
  j["tau_P"] = s.tau_p;
  j["tau_R"] = s.tau_r;
  j["component_sizes"] = s.component_sizes;
  j["oracle_calls"] = s.oracle_calls;
  j["inner_steps"] = s.inner_steps;
  j["wall_time"] = s.wall_time;
  j["phi_mode"] = s.phi_mode.empty() ? json(nullptr) : json(s.phi_mode);
  j["isa"] = s.isa;
  std::string text = j.dump(2);
  validate_summary_json(text);
  return text;
}

std::string suite_to_json(const std::vector<McSuite>& suites) {
  json arr = json::array();
  for (const auto& s : suites) {
    json reports = json::array();
    for (const auto& r : s.reports) {
      reports.push_back({{"name", r.name},
                         {"criterion", r.criterion},
                         {"estimate", r.estimate},
                         {"target", r.target},
                         {"standard_error", r.standard_error},
                         {"tolerance", r.tolerance},
                         {"trials", r.trials},
                         {"asserted", r.asserted},
                         {"pass", r.pass}});
    }
    arr.push_back({{"check", s.check},
                   {"pass", s.pass()},
                   {"failures", s.failures()},
                   {"reports", reports}});
  }
  return arr.dump(2);
}

namespace {

std::string to_string(InputKind k) {
  switch (k) {
    case InputKind::generator:
      return "generator";
    case InputKind::points:
      return "points";
    case InputKind::distances:
      return "distances";
    case InputKind::rank_tables:
      return "rank-tables";
  }
  return "generator";
}

InputKind input_kind_from_string(const std::string& s) {
  if (s == "generator") return InputKind::generator;
  if (s == "points") return InputKind::points;
  if (s == "distances") return InputKind::distances;
  if (s == "rank-tables") return InputKind::rank_tables;
  throw InputError("unknown input kind '" + s + "'");
}

}  // namespace

std::string config_to_json(const RunConfig& c) {
  json j;
  j["input"] = to_string(c.input);
  j["path"] = c.path;
  j["generator"] = {{"kind", to_string(c.generator.kind)},
                    {"n", c.generator.n},
                    {"dim", c.generator.dim},
                    {"weights", c.generator.weights},
                    {"seed", c.generator.seed},
                    {"tie_break", c.generator.tie_break},
                    {"clusters", c.clusters},
                    {"separation", c.separation}};
  j["pipeline"] = c.pipeline;
  j["k"] = c.k;
  j["phi_mode"] = to_string(c.phi_mode);
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["degree_cap"] = c.degree_cap;
  j["threads"] = c.threads;
  j["force"] = c.force;
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    c.input = input_kind_from_string(j.at("input").get<std::string>());
    c.path = j.value("path", "");
    if (j.contains("generator")) {
      const json& g = j.at("generator");
      c.generator.kind = generator_kind_from_string(g.at("kind").get<std::string>());
      c.generator.n = g.value("n", std::size_t{0});
      c.generator.dim = g.value("dim", std::size_t{0});
      c.generator.weights = g.value("weights", std::vector<double>{});
      c.generator.seed = g.value("seed", std::uint64_t{0});
      c.generator.tie_break = g.value("tie_break", std::string("ascending-index"));
      c.clusters = g.value("clusters", std::size_t{2});
      c.separation = g.value("separation", 8.0);
    }
    c.pipeline = j.value("pipeline", std::string("pannld"));
    c.k = j.value("k", std::size_t{10});
    c.phi_mode = phi_mode_from_string(j.value("phi_mode", std::string("exact")));
    c.seed = j.value("seed", std::uint64_t{0});
    c.out_dir = j.value("out_dir", std::string("out"));
    c.degree_cap = j.value("degree_cap", std::size_t{0});
    c.threads = j.value("threads", std::size_t{0});
    c.force = j.value("force", false);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad run config: ") + e.what());
  }
  return c;
}

RankingSystem load_input(const RunConfig& c) {
  switch (c.input) {
    case InputKind::points: {
      PointTable t = read_points_csv(c.path);
      DatasetSpec spec;
      spec.kind = GeneratorKind::external;
      spec.dim = t.dim;
      spec.source = c.path;
      return from_points(std::move(t.coords), t.dim, std::move(t.ids), spec);
    }
    case InputKind::distances: {
      std::size_t n = 0;
      auto values = read_distance_matrix_csv(c.path, n);
      DatasetSpec spec;
      spec.kind = GeneratorKind::external;
      spec.source = c.path;
      return RankingSystem(std::make_shared<DistanceMatrixOracle>(std::move(values), n), spec);
    }
    case InputKind::rank_tables:
      return read_rank_tables_csv(c.path);
    case InputKind::generator:
      break;
  }
  const DatasetSpec& g = c.generator;
  switch (g.kind) {
    case GeneratorKind::euclidean:
      return gen_euclidean(g.n, g.dim ? g.dim : 2, g.seed);
    case GeneratorKind::star:
      if (!g.weights.empty()) return gen_star(g.weights.size(), g.weights);
      return gen_star(g.n);
    case GeneratorKind::random_tournament:
      return gen_random_tournament(g.n, g.seed);
    case GeneratorKind::blobs: {
      if (c.clusters == 0 || g.n % c.clusters != 0) {
        throw InputError("blobs: n must be a multiple of the cluster count");
      }
      return gen_blobs(c.clusters, g.n / c.clusters, g.dim ? g.dim : 2, c.separation, g.seed).system;
    }
    case GeneratorKind::external:
      break;
  }
  throw InputError("generator input needs a concrete generator kind");
}

}  // namespace pald
