#include "gapmm/matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gapmm {

namespace {

// All numeric tokens, with comments stripped and commas treated as spaces.
std::vector<double> tokenize(std::istream& in, int& dim_plus, int& dim_minus) {
  std::vector<double> values;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream ss(line);
    if (!have_header) {
      if (ss >> dim_plus >> dim_minus) {
        have_header = true;
        double extra = 0.0;
        while (ss >> extra) values.push_back(extra);
      }
      continue;
    }
    double v = 0.0;
    while (ss >> v) values.push_back(v);
  }
  if (!have_header) throw std::runtime_error("split-operator file: missing header 'dim_plus dim_minus'");
  return values;
}

Eigen::MatrixXd take_matrix(const std::vector<double>& values, std::size_t offset, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = values[offset + std::size_t(i) * n + j];
  }
  return m;
}

}  // namespace

SplitOperator read_split_operator(std::istream& in) {
  int dim_plus = 0, dim_minus = 0;
  const std::vector<double> values = tokenize(in, dim_plus, dim_minus);
  if (dim_plus < 1 || dim_minus < 1) {
    throw std::runtime_error("split-operator file: block dimensions must be positive");
  }
  const std::size_t n = std::size_t(dim_plus) + std::size_t(dim_minus);
  const std::size_t block = n * n;
  if (values.size() != block && values.size() != 2 * block) {
    throw std::runtime_error("split-operator file: expected " + std::to_string(block) + " or " +
                             std::to_string(2 * block) + " entries, got " +
                             std::to_string(values.size()));
  }
  const Eigen::MatrixXd a = take_matrix(values, 0, static_cast<int>(n));
  if (values.size() == block) {
    return SplitOperator::from_full(a, dim_plus);
  }
  const Eigen::MatrixXd s = take_matrix(values, block, static_cast<int>(n));
  return SplitOperator::from_full(a, s, dim_plus);
}

SplitOperator load_split_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open split-operator file: " + path);
  return read_split_operator(in);
}

void write_split_operator(std::ostream& out, const SplitOperator& op, bool comma_separated,
                          bool include_gram) {
  const char* sep = comma_separated ? "," : " ";
  out << op.dim_plus() << sep << op.dim_minus() << "\n";
  const auto emit = [&](const Eigen::MatrixXd& m) {
    out << std::setprecision(17);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (j) out << sep;
        out << m(i, j);
      }
      out << "\n";
    }
  };
  out << "# full matrix A, row-major\n";
  emit(op.full_a());
  if (include_gram) {
    out << "# Gram matrix S, row-major\n";
    emit(op.full_s());
  }
}

void save_split_operator(const std::string& path, const SplitOperator& op, bool comma_separated,
                         bool include_gram) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write split-operator file: " + path);
  write_split_operator(out, op, comma_separated, include_gram);
}

}  // namespace gapmm
