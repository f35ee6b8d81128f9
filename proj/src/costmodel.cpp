#include "qsc/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qsc {

namespace {

double pow_abs(double x, double r) {
  const double a = std::abs(x);
  if (a == 0.0) return 0.0;
  return r == 0.0 ? 1.0 : std::pow(a, r);
}

/// Minimizes f over [0, 1]. f is log-convex for the mu objective (a max of
/// log-convex power sums), so local refinement around the grid minimum finds
/// the global one.
std::pair<double, double> minimize_unit_interval(const std::function<double(double)>& f) {
  constexpr int kGrid = 20;
  double best_p = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= kGrid; ++g) {
    const double p = static_cast<double>(g) / kGrid;
    const double v = f(p);
    if (v < best) best = v, best_p = p;
  }
  double step = 1.0 / kGrid;
  for (int round = 0; round < 60; ++round) {
    const double lo = std::max(0.0, best_p - step);
    const double hi = std::min(1.0, best_p + step);
    const double previous = best;
    for (int g = 0; g <= kGrid; ++g) {
      const double p = lo + (hi - lo) * g / kGrid;
      const double v = f(p);
      if (v < best) best = v, best_p = p;
    }
    step = (hi - lo) / kGrid;
    if (previous - best < 1e-6 && step < 1e-3) break;
  }
  return {best_p, best};
}

}  // namespace

MuResult mu_detail(const Eigen::MatrixXd& m) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("mu: matrix is all zero");
  auto s = [](const Eigen::MatrixXd& a, double r) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < a.cols(); ++j) sum += pow_abs(a(i, j), r);
      best = std::max(best, sum);
    }
    return best;
  };
  const Eigen::MatrixXd mt = m.transpose();
  auto mixed = [&](double p) { return std::sqrt(s(m, 2.0 * p) * s(mt, 2.0 * (1.0 - p))); };

  MuResult out;
  out.frobenius = m.norm();
  std::tie(out.best_p, out.best_mixed) = minimize_unit_interval(mixed);
  out.value = std::min(out.frobenius, out.best_mixed);
  return out;
}

double mu(const Eigen::MatrixXd& m) { return mu_detail(m).value; }

MuResult mu_detail(const IncidenceView& view) {
  const SimilarityGraph& g = *view.graph;
  const Eigen::Index n = g.n;
  const double total = static_cast<double>(view.cols());
  const double eps = view.eps_B;
  const Eigen::VectorXd deg = g.degrees().cast<double>();
  const Eigen::VectorXd norms = view.row_sq_norms().cwiseSqrt();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(norms[i] > 0.0)) throw std::invalid_argument("mu: incidence row is all zero");
  const bool has_non_edge = static_cast<double>(g.edge_count()) < total;

  auto rows = [&](double r) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = deg[i] * pow_abs(1.0 / norms[i], r) +
                       (total - deg[i]) * pow_abs(eps / norms[i], r);
      best = std::max(best, v);
    }
    return best;
  };
  auto cols = [&](double r) {
    Eigen::VectorXd filler(n), endpoint(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      filler[i] = pow_abs(eps / norms[i], r);
      endpoint[i] = pow_abs(1.0 / norms[i], r) - filler[i];
    }
    const double base = filler.sum();
    double best = has_non_edge ? base : -std::numeric_limits<double>::infinity();
    for (const auto& [p, q] : g.edges) best = std::max(best, base + endpoint[p] + endpoint[q]);
    return best;
  };
  auto mixed = [&](double p) { return std::sqrt(rows(2.0 * p) * cols(2.0 * (1.0 - p))); };

  MuResult out;
  out.frobenius = std::sqrt(static_cast<double>(n));
  std::tie(out.best_p, out.best_mixed) = minimize_unit_interval(mixed);
  out.value = std::min(out.frobenius, out.best_mixed);
  return out;
}

double mu(const IncidenceView& view) { return mu_detail(view).value; }

double eta_from_norms(const Eigen::VectorXd& row_norms) {
  if (row_norms.size() == 0) throw std::invalid_argument("eta: empty matrix");
  const double lo = row_norms.cwiseAbs().minCoeff();
  const double hi = row_norms.cwiseAbs().maxCoeff();
  if (!(lo > 0.0)) throw std::invalid_argument("eta: matrix has a zero row");
  return (hi * hi) / (lo * lo);
}

double eta(const Eigen::MatrixXd& m) { return eta_from_norms(m.rowwise().norm()); }

double kappa_from_values(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw std::invalid_argument("kappa: empty spectrum");
  const Eigen::VectorXd mags = values.cwiseAbs();
  const double hi = mags.maxCoeff();
  if (!(hi > 0.0)) throw std::invalid_argument("kappa: all-zero spectrum");
  double lo = hi;
  for (Eigen::Index i = 0; i < mags.size(); ++i)
    if (mags[i] > 1e-10 * hi) lo = std::min(lo, mags[i]);
  return hi / lo;
}

double kappa(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return kappa_from_values(svd.singularValues());
}

double qram_time(std::int64_t n, std::int64_t d, double c_qram) {
  if (n < 1 || d < 1) throw std::invalid_argument("qram_time: n and d must be positive");
  return c_qram * std::log2(static_cast<double>(n) * static_cast<double>(d));
}

namespace {

void require_positive(const QuantumCostInputs& in) {
  for (double v : {in.eps_dist, in.eps_B, in.eps_lambda, in.delta})
    if (!(v > 0.0)) throw std::invalid_argument("quantum_cost: precision parameters must be > 0");
  for (double v : {in.t_s, in.eta_S, in.mu_B, in.kappa_Lk, in.eta_Lk, in.mu_Lk})
    if (!(v > 0.0)) throw std::invalid_argument("quantum_cost: data parameters must be > 0");
  if (in.k < 1 || in.iterations < 1)
    throw std::invalid_argument("quantum_cost: k and iterations must be >= 1");
}

}  // namespace

double projected_laplacian_cost(const QuantumCostInputs& in) {
  require_positive(in);
  return in.t_s * (in.eta_S / (in.eps_dist * in.eps_B)) * (in.mu_B * in.kappa_Lk / in.eps_lambda);
}

double qmeans_factor_well_clusterable(const QuantumCostInputs& in) {
  require_positive(in);
  const double k = in.k;
  return k * k * k * std::pow(in.eta_Lk, 2.5) / (in.delta * in.delta * in.delta);
}

double qmeans_factor_general(const QuantumCostInputs& in) {
  require_positive(in);
  const double k = in.k;
  const double d2 = in.delta * in.delta;
  return k * k * (in.eta_Lk / d2) * in.kappa_Lk * (in.mu_Lk + k * in.eta_Lk / in.delta) +
         k * k * std::pow(in.eta_Lk, 1.5) / d2 * in.kappa_Lk * in.mu_Lk;
}

double quantum_cost(const QuantumCostInputs& in) {
  return projected_laplacian_cost(in) * qmeans_factor_well_clusterable(in) * in.iterations;
}

double quantum_cost_general(const QuantumCostInputs& in) {
  return projected_laplacian_cost(in) * qmeans_factor_general(in) * in.iterations;
}

double classical_cost(double n, double d, double m, double k, double iters,
                      const ClassicalCostConstants& c) {
  return c.distances * d * n * n + c.laplacian * n * m + c.eigensolve * n * n * n +
         c.kmeans * n * k * k * iters;
}

double PowerLawFit::predict(double x) const { return std::exp(intercept + slope * std::log(x)); }

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_power_law: need >= 2 paired samples");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_power_law: samples must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: x has no spread");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double power_law_crossover(const PowerLawFit& a, const PowerLawFit& b) {
  if (a.slope == b.slope) return std::numeric_limits<double>::quiet_NaN();
  return std::exp((b.intercept - a.intercept) / (a.slope - b.slope));
}

}  // namespace qsc
