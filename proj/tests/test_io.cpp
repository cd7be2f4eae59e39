#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "glrr/io.hpp"
#include "test_support.hpp"

using namespace glrr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "glrr_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("GMAT byte layout") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, -0.5;
  std::ostringstream os;
  io::write_gmat(os, m);
  const std::string bytes = os.str();
  REQUIRE(bytes.size() == 16 + 6 * 8);
  CHECK(bytes.substr(0, 4) == "GMAT");
  CHECK(bytes.substr(4, 4) == std::string("\x01\x00\x00\x00", 4));
  CHECK(bytes.substr(8, 4) == std::string("\x02\x00\x00\x00", 4));
  CHECK(bytes.substr(12, 4) == std::string("\x03\x00\x00\x00", 4));
  // Row-major: the second value is m(0, 1) = 2.0 = 0x4000000000000000.
  CHECK(bytes.substr(24, 8) == std::string("\x00\x00\x00\x00\x00\x00\x00\x40", 8));
  // Last value -0.5 = 0xBFE0000000000000.
  CHECK(bytes.substr(56, 8) == std::string("\x00\x00\x00\x00\x00\x00\xE0\xBF", 8));
}

TEST_CASE("GMAT and CSV roundtrip random matrices") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(0, 9);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix m = glrr::testing::gaussian(dim(rng), dim(rng), rng) * 1e3;
    std::stringstream bin;
    io::write_gmat(bin, m);
    const Matrix back = io::read_gmat(bin);
    CHECK(back.rows() == m.rows());
    CHECK(back.cols() == m.cols());
    CHECK(back == m);

    if (m.size() == 0) continue;
    std::stringstream csv;
    io::write_csv_matrix(csv, m);
    const Matrix text = io::read_csv_matrix(csv);
    CHECK((text - m).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("GMAT stack, Gram tensor and file helpers") {
  std::mt19937_64 rng(78);
  GramTensor b;
  for (int i = 0; i < 3; ++i) b.slices.push_back(glrr::testing::gaussian(3, 3, rng));
  const auto path = scratch("gram.gmsk");
  io::save_gram(path, b);
  const auto back = io::load_gram(path);
  REQUIRE(back.n_points() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == b[i]);

  const auto mpath = scratch("m.gmat");
  io::save_gmat(mpath, b[0]);
  CHECK(io::load_gmat(mpath) == b[0]);

  io::save_gmat_stack(scratch("bad_gram.gmsk"), {Matrix::Zero(2, 2)});
  CHECK_THROWS_AS(io::load_gram(scratch("bad_gram.gmsk")), Error);
}

TEST_CASE("format errors") {
  std::stringstream bad("GMAX\x01\x00\x00\x00");
  try {
    io::read_gmat(bad);
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }
  std::stringstream truncated;
  io::write_gmat(truncated, Matrix::Ones(4, 4));
  std::string bytes = truncated.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(io::read_gmat(cut), Error);

  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(io::read_csv_matrix(ragged), Error);

  try {
    io::load_gmat(scratch("does_not_exist.gmat"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(exit_code_for(e.kind()) == 4);
  }
}

TEST_CASE("labels CSV") {
  const auto path = scratch("labels.csv");
  io::save_labels(path, {2, 0, 1});
  CHECK(io::load_text(path) == "index,label\n0,2\n1,0\n2,1\n");
  CHECK(io::load_labels(path) == std::vector<int>{2, 0, 1});

  // Index column decides placement.
  io::save_text(path, "index,label\n2,5\n0,3\n1,4\n");
  CHECK(io::load_labels(path) == std::vector<int>{3, 4, 5});
  // Group-keyed files are read in row order.
  io::save_text(path, "group_id,label\ng1,1\ng0,0\n");
  CHECK(io::load_labels(path) == std::vector<int>{1, 0});
  io::save_text(path, "index,label\n0,1\n0,2\n");
  CHECK_THROWS_AS(io::load_labels(path), Error);
}
