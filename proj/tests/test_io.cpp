#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pald/errors.hpp"
#include "pald/io.hpp"
#include "pald/pannld.hpp"
#include "pald/pald.hpp"

using namespace pald;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "pald_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("points round trip") {
  PointTable t{{"a", "b,c", "d"}, {0.0, 1.5, 2.0, -3.25, 0.1, 1e-7}, 2};
  auto p = scratch("points.csv");
  write_points_csv(p, t);
  auto u = read_points_csv(p);
  CHECK(u.ids == t.ids);
  CHECK(u.coords == t.coords);
  CHECK(u.dim == 2);
}

TEST_CASE("malformed CSV reports row and column") {
  auto p = scratch("bad.csv");
  write(p, "id,c1,c2\na,0,1\nb,2,oops\nc,1,1\n");
  try {
    read_points_csv(p);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == 3);
  }
  write(p, "id,c1\na,0\na,1\nc,2\n");
  CHECK_THROWS_AS(read_points_csv(p), CsvError);
  write(p, "id,c1\na,0\nb\nc,2\n");
  CHECK_THROWS_AS(read_points_csv(p), CsvError);
}

TEST_CASE("distance matrix") {
  auto p = scratch("dist.csv");
  write(p, "0,1,3\n1,0,2\n3,2,0\n");
  std::size_t n = 0;
  auto d = read_distance_matrix_csv(p, n);
  CHECK(n == 3);
  CHECK(d[2] == 3.0);
  write(p, "0,1,3\n1,5,2\n3,2,0\n");
  CHECK_THROWS_AS(read_distance_matrix_csv(p, n), CsvError);
}

TEST_CASE("rank tables round trip gives identical runs") {
  auto rs = gen_euclidean(40, 2, 12);
  auto p = scratch("tables.csv");
  write_rank_tables_csv(p, rs);
  auto back = read_rank_tables_csv(p);
  CHECK(back.ranks().at == rs.ranks().at);

  PannldOptions o;
  o.k = 5;
  auto a = run_pannld(rs, o), b = run_pannld(back, o);
  auto va = a.cohesion.sparse_values(), vb = b.cohesion.sparse_values();
  CHECK(std::equal(va.begin(), va.end(), vb.begin(), vb.end()));
  CHECK(a.tau.tau == b.tau.tau);
  auto ea = run_pald(rs), eb = run_pald(back);
  auto ca = ea.exact.cohesion.dense_values(), cb = eb.exact.cohesion.dense_values();
  CHECK(std::equal(ca.begin(), ca.end(), cb.begin(), cb.end()));

  auto c1 = scratch("c1.csv"), c2 = scratch("c2.csv");
  write_cohesion_csv(c1, a.cohesion, rs.ids());
  write_cohesion_csv(c2, b.cohesion, back.ids());
  CHECK(slurp(c1) == slurp(c2));
}

TEST_CASE("rank tables reject broken permutations") {
  auto p = scratch("bad_tables.csv");
  write(p, "base,member,rank\na,b,1\na,c,1\nb,a,1\nb,c,2\nc,a,1\nc,b,2\n");
  CHECK_THROWS_AS(read_rank_tables_csv(p), InputError);
}

TEST_CASE("summary schema") {
  RunSummary s;
  s.pipeline = "pannld";
  s.n = 10;
  s.k = 3;
  s.component_sizes = {7, 3};
  s.isa = "scalar";
  s.phi_mode = "exact";
  const auto text = summary_to_json(s);
  CHECK_NOTHROW(validate_summary_json(text));
  CHECK(text.find("\"tau_R\"") != std::string::npos);
  CHECK_THROWS_AS(validate_summary_json("{\"n\": 3}"), ConsistencyError);
  auto extra = text;
  extra.insert(1, "\"bogus\": 1,");
  CHECK_THROWS_AS(validate_summary_json(extra), ConsistencyError);
  CHECK_THROWS_AS(validate_summary_json("not json"), ConsistencyError);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.input = InputKind::generator;
  c.generator.kind = GeneratorKind::blobs;
  c.generator.n = 50;
  c.generator.dim = 3;
  c.generator.seed = 99;
  c.pipeline = "pald";
  c.k = 7;
  c.phi_mode = PhiMode::quadrature;
  c.seed = 4;
  c.degree_cap = 80;
  auto d = config_from_json(config_to_json(c));
  CHECK(config_to_json(d) == config_to_json(c));
  auto a = load_input(c), b = load_input(d);
  CHECK(a.ranks().at == b.ranks().at);
  CHECK_THROWS_AS(config_from_json("{\"input\": \"nowhere\"}"), InputError);
}

}
