#include "pqnorm/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "pqnorm/errors.hpp"

namespace pqnorm {

namespace {

double parse_cell(const std::string& raw, std::size_t line, std::size_t col) {
  const auto b = raw.find_first_not_of(" \t\r");
  const auto e = raw.find_last_not_of(" \t\r");
  const std::string cell = b == std::string::npos ? "" : raw.substr(b, e - b + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (cell.empty() || used != cell.size())
    throw InputError("matrix CSV: bad number '" + cell + "' at line " + std::to_string(line) + ", column " +
                     std::to_string(col));
  return v;
}

}  // namespace

Eigen::MatrixXd parse_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_cell(cell, lineno, row.size() + 1));
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError("matrix CSV: line " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("matrix CSV: no rows");
  Eigen::MatrixXd A(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) A(i, j) = rows[i][j];
  return A;
}

Eigen::MatrixXd parse_json_matrix(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw InputError("matrix JSON: expected an object with rows, cols and data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer() || !j["data"].is_array())
    throw InputError("matrix JSON: rows and cols must be integers and data an array");
  const long m = j["rows"].get<long>(), n = j["cols"].get<long>();
  if (m < 1 || n < 1) throw InputError("matrix JSON: rows and cols must be positive");
  const auto& data = j["data"];
  if (static_cast<long>(data.size()) != m * n)
    throw InputError("matrix JSON: data has " + std::to_string(data.size()) + " entries, expected " +
                     std::to_string(m * n));
  Eigen::MatrixXd A(m, n);
  for (long k = 0; k < m * n; ++k) {
    if (!data[k].is_number()) throw InputError("matrix JSON: entry " + std::to_string(k) + " is not a number");
    A(k / n, k % n) = data[k].get<double>();
  }
  return A;
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path + "'");
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  try {
    return json ? parse_json_matrix(in) : parse_csv_matrix(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) out << (j ? "," : "") << format_number(A(i, j));
    out << '\n';
  }
}

void write_json_matrix(std::ostream& out, const Eigen::MatrixXd& A) {
  nlohmann::json j;
  j["rows"] = A.rows();
  j["cols"] = A.cols();
  auto& data = j["data"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index k = 0; k < A.cols(); ++k) data.push_back(A(i, k));
  out << j.dump() << '\n';
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& A) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  json ? write_json_matrix(out, A) : write_csv_matrix(out, A);
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace pqnorm
