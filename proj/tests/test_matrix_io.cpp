#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "pqnorm/errors.hpp"
#include "pqnorm/matrix_io.hpp"
#include "pqnorm/relaxation.hpp"

using namespace pqnorm;

TEST_CASE("CSV parsing") {
  std::istringstream in("1, 2.5,-3\n4,5e-1,6\n\n");
  const Eigen::MatrixXd A = parse_csv_matrix(in);
  REQUIRE(A.rows() == 2);
  REQUIRE(A.cols() == 3);
  CHECK(A(0, 1) == 2.5);
  CHECK(A(1, 1) == 0.5);
  CHECK(A(0, 2) == -3.0);
}

TEST_CASE("CSV errors") {
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(parse_csv_matrix(ragged), InputError);
  std::istringstream bad("1,x\n");
  CHECK_THROWS_AS(parse_csv_matrix(bad), InputError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_csv_matrix(empty), InputError);
}

TEST_CASE("JSON parsing and errors") {
  std::istringstream in(R"({"rows": 2, "cols": 2, "data": [1, 2, 3, 4]})");
  const Eigen::MatrixXd A = parse_json_matrix(in);
  CHECK(A(0, 1) == 2.0);
  CHECK(A(1, 0) == 3.0);
  std::istringstream short_data(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})");
  CHECK_THROWS_AS(parse_json_matrix(short_data), InputError);
  std::istringstream broken("{\"rows\": 2");
  CHECK_THROWS_AS(parse_json_matrix(broken), InputError);
}

TEST_CASE("file round trips") {
  const Eigen::MatrixXd A = gaussian_matrix(4, 3, 5);
  const auto dir = std::filesystem::temp_directory_path();
  for (const char* name : {"pqnorm_io_test.csv", "pqnorm_io_test.json"}) {
    const std::string path = (dir / name).string();
    write_matrix(path, A);
    const Eigen::MatrixXd B = read_matrix(path);
    REQUIRE(B.rows() == 4);
    REQUIRE(B.cols() == 3);
    CHECK((A - B).cwiseAbs().maxCoeff() <= 1e-11 * A.cwiseAbs().maxCoeff());
    std::remove(path.c_str());
  }
  CHECK_THROWS_AS(read_matrix((dir / "pqnorm_missing.csv").string()), InputError);
}

TEST_CASE("format_number") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}
