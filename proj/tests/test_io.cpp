#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "qwishart/io.hpp"
#include "qwishart/state.hpp"

using namespace qwishart;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("qwio-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("bloch CSV round trip") {
  TempDir t;
  std::vector<BlochVector> in = {{0.1, -0.2, 0.3}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0},
                                 {-0.123456789012345, 0.5, -0.75}};
  std::string p = t.path("s.csv");
  write_bloch_csv(p, in);
  CHECK_FALSE(fs::exists(p + ".tmp"));  // atomic rename completed
  auto out = read_bloch_csv(p);
  REQUIRE(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(out[i].x == in[i].x);
    CHECK(out[i].y == in[i].y);
    CHECK(out[i].z == in[i].z);
  }
}

TEST_CASE("states JSONL round trip for d = 3") {
  TempDir t;
  Matrix m(3, 3);
  m.setZero();
  m(0, 0) = Cplx(0.5, 0.0);
  m(1, 1) = Cplx(0.3, 0.0);
  m(2, 2) = Cplx(0.2, 0.0);
  m(0, 1) = Cplx(0.05, -0.1);
  m(1, 0) = Cplx(0.05, 0.1);
  std::vector<DensityMatrix> in = {DensityMatrix(m)};
  std::string p = t.path("s.jsonl");
  write_states_jsonl(p, in);
  auto out = read_states_jsonl(p);
  REQUIRE(out.size() == 1);
  CHECK((out[0].rho - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("BLR CSV round trip") {
  TempDir t;
  BlrCurve in;
  in.lambdas = {0.0, 0.5, 1.0};
  in.size = {1.0, 0.25, 0.0};
  in.credibility_empirical = {1.0, 0.9, 0.0};
  in.credibility_theoretical = {1.0, 0.88, 0.0};
  std::string p = t.path("c.csv");
  write_blr_csv(p, in);
  BlrCurve out = read_blr_csv(p);
  REQUIRE(out.lambdas.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out.lambdas[i] == in.lambdas[i]);
    CHECK(out.size[i] == in.size[i]);
    CHECK(out.credibility_empirical[i] == in.credibility_empirical[i]);
    CHECK(out.credibility_theoretical[i] == in.credibility_theoretical[i]);
  }
}

TEST_CASE("readers reject malformed input") {
  TempDir t;
  std::string p = t.path("bad.csv");
  {
    std::ofstream f(p);
    f << "a,b,c\n1,2,3\n";
  }
  CHECK_THROWS_AS(read_bloch_csv(p), Error);  // wrong header
  {
    std::ofstream f(p);
    f << "x,y,z\n1,2\n";
  }
  CHECK_THROWS_AS(read_bloch_csv(p), Error);  // wrong arity
  {
    std::ofstream f(p);
    f << "x,y,z\n1,two,3\n";
  }
  CHECK_THROWS_AS(read_bloch_csv(p), Error);  // non-numeric
  CHECK_THROWS_AS(read_bloch_csv(t.path("missing.csv")), Error);

  std::string j = t.path("bad.jsonl");
  {
    std::ofstream f(j);
    f << "{not json\n";
  }
  CHECK_THROWS_AS(read_states_jsonl(j), Error);
  {
    std::ofstream f(j);
    f << "[[1,0],[0,0],[0,0]]\n";  // 3 entries: not square
  }
  CHECK_THROWS_AS(read_states_jsonl(j), Error);
}

TEST_CASE("atomic text write replaces content completely") {
  TempDir t;
  std::string p = t.path("doc.txt");
  write_text_atomic(p, "first version\n");
  write_text_atomic(p, "second\n");
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  CHECK(line == "second");
  CHECK_FALSE(fs::exists(p + ".tmp"));
}
