#include "qsc/datasets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qsc/format.hpp"
#include "qsc/noise.hpp"

namespace qsc {

DataMatrix DataMatrix::from_points(Eigen::MatrixXd points,
                                   std::optional<std::vector<int>> labels) {
  if (points.rows() < 2 || points.cols() < 1)
    throw std::invalid_argument("data matrix needs n >= 2 rows and d >= 1 columns");
  DataMatrix out;
  out.row_norms = points.rowwise().norm();
  for (Eigen::Index i = 0; i < out.row_norms.size(); ++i) {
    if (!std::isfinite(out.row_norms[i]) || out.row_norms[i] <= 0.0)
      throw std::invalid_argument("row " + std::to_string(i) +
                                  " has zero or non-finite norm");
  }
  if (labels) {
    if (static_cast<Eigen::Index>(labels->size()) != points.rows())
      throw std::invalid_argument("label count does not match row count");
    for (int l : *labels)
      if (l < 0) throw std::invalid_argument("labels must be nonnegative");
  }
  out.points = std::move(points);
  out.ground_truth = std::move(labels);
  return out;
}

DataMatrix make_circles(const CirclesParams& params) {
  if (params.n < 4) throw std::invalid_argument("make_circles: n must be >= 4");
  if (params.n % 2 != 0) throw std::invalid_argument("make_circles: n must be even");
  if (!(params.radius_inner > 0.0) || !(params.radius_inner < params.radius_outer))
    throw std::invalid_argument("make_circles: need 0 < radius_inner < radius_outer");
  if (!(params.noise_sd >= 0.0))
    throw std::invalid_argument("make_circles: noise_sd must be >= 0");

  const int half = params.n / 2;
  Eigen::MatrixXd points(params.n, 2);
  std::vector<int> labels(params.n);
  for (int i = 0; i < params.n; ++i) {
    RngStream rng = keyed_rng(params.seed, "circles", {static_cast<std::uint64_t>(i)});
    const bool outer = i >= half;
    const double radius = outer ? params.radius_outer : params.radius_inner;
    const double theta = 2.0 * std::numbers::pi * rng.uniform01();
    double x = radius * std::cos(theta);
    double y = radius * std::sin(theta);
    if (params.noise_sd > 0.0) {
      x += params.noise_sd * rng.standard_normal();
      y += params.noise_sd * rng.standard_normal();
    }
    points(i, 0) = x;
    points(i, 1) = y;
    labels[i] = outer ? 1 : 0;
  }
  return DataMatrix::from_points(std::move(points), std::move(labels));
}

DataMatrix rescale_min_norm(const DataMatrix& data) {
  const double min_norm = data.row_norms.minCoeff();
  if (!(min_norm > 0.0)) throw std::invalid_argument("rescale_min_norm: zero-norm row");
  if (min_norm == 1.0) return data;
  DataMatrix out = DataMatrix::from_points(data.points / min_norm, data.ground_truth);
  return out;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return pos == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

DataMatrix read_csv(const std::filesystem::path& path, bool has_labels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size() && numeric; ++c)
      numeric = parse_double(fields[c], values[c]);
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": non-numeric field");
    }
    if (width == 0) width = values.size();
    if (values.size() != width)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": inconsistent column count");
    if (has_labels) {
      const double l = values.back();
      if (l != std::floor(l))
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": label is not an integer");
      labels.push_back(static_cast<int>(l));
      values.pop_back();
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no data rows");
  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  if (has_labels) return DataMatrix::from_points(std::move(points), std::move(labels));
  return DataMatrix::from_points(std::move(points));
}

void write_csv(const std::filesystem::path& path, const DataMatrix& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      if (j) out << ',';
      out << format_double(data.points(i, j));
    }
    if (data.ground_truth) out << ',' << (*data.ground_truth)[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qsc
