#ifndef PQNORM_MATRIX_IO_HPP
#define PQNORM_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace pqnorm {

// CSV: one row per line, comma-separated decimals.
Eigen::MatrixXd parse_csv_matrix(std::istream& in);
// JSON: {"rows": m, "cols": n, "data": [...]} in row-major order.
Eigen::MatrixXd parse_json_matrix(std::istream& in);
// Dispatches on the file extension (.json, otherwise CSV).
Eigen::MatrixXd read_matrix(const std::string& path);

void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& A);
void write_json_matrix(std::ostream& out, const Eigen::MatrixXd& A);
void write_matrix(const std::string& path, const Eigen::MatrixXd& A);

// Decimal with 12 significant digits.
std::string format_number(double v);

}  // namespace pqnorm

#endif  // PQNORM_MATRIX_IO_HPP
