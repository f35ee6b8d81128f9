#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "qsc/graph.hpp"

namespace qsc {

/// Value of the mu(.) norm parameter with the minimizing exponent.
struct MuResult {
  double value = 0.0;
  double frobenius = 0.0;
  double best_p = 0.5;
  double best_mixed = 0.0;  // min_p sqrt(s_2p(M) s_2(1-p)(M^T))
};

/// mu(M) = min(||M||_F, min_{p in [0,1]} sqrt(s_2p(M) s_2(1-p)(M^T))) with
/// s_r(M) = max_i sum_j |M_ij|^r and 0^0 taken as 0 (zero entries do not
/// count). The exponent is searched on a 21-point grid that is refined
/// around the best point until the value changes by less than 1e-6.
MuResult mu_detail(const Eigen::MatrixXd& m);
double mu(const Eigen::MatrixXd& m);

/// mu of the row-normalized incidence matrix, from degrees and eps_B only.
/// Every row has deg(i) entries of magnitude 1 and N - deg(i) entries equal
/// to eps_B before normalization; every column holds eps_B in all rows except
/// for the two endpoints of an edge.
MuResult mu_detail(const IncidenceView& view);
double mu(const IncidenceView& view);

/// max_i ||M_i||^2 / min_i ||M_i||^2.
double eta(const Eigen::MatrixXd& m);
double eta_from_norms(const Eigen::VectorXd& row_norms);

/// Largest over smallest nonzero magnitude; "nonzero" means > 1e-10 * max.
double kappa_from_values(const Eigen::VectorXd& values);
/// Condition number from the singular values of m.
double kappa(const Eigen::MatrixXd& m);

/// Inputs to the quantum running-time expressions. T_S is in the same
/// abstract step units as the classical count.
struct QuantumCostInputs {
  double t_s = 1.0;
  double eta_S = 1.0;
  double mu_B = 1.0;
  double kappa_Lk = 1.0;
  double eta_Lk = 1.0;
  double mu_Lk = 1.0;  // only used by the general q-means branch
  int k = 1;
  double eps_dist = 1.0;
  double eps_B = 1.0;
  double eps_lambda = 1.0;
  double delta = 1.0;
  int iterations = 1;
};

/// T_S = c_qram log2(n d).
double qram_time(std::int64_t n, std::int64_t d, double c_qram = 1.0);

/// Cost of quantum access to the projected Laplacian:
/// T_S eta(S)/(eps_dist eps_B) * mu(B) kappa(L_k)/eps_lambda.
double projected_laplacian_cost(const QuantumCostInputs& in);

/// q-means factor for well-clusterable data: k^3 eta(L_k)^2.5 / delta^3.
double qmeans_factor_well_clusterable(const QuantumCostInputs& in);
/// General q-means factor with input dimension k:
/// k^2 eta/delta^2 kappa (mu + k eta/delta) + k^2 eta^1.5/delta^2 kappa mu.
double qmeans_factor_general(const QuantumCostInputs& in);

/// Full running time, well-clusterable branch, times iterations.
double quantum_cost(const QuantumCostInputs& in);
double quantum_cost_general(const QuantumCostInputs& in);

struct ClassicalCostConstants {
  double distances = 1.0;   // d n^2
  double laplacian = 1.0;   // n m
  double eigensolve = 1.0;  // n^3
  double kmeans = 1.0;      // n k^2 iters
};

double classical_cost(double n, double d, double m, double k, double iters,
                      const ClassicalCostConstants& c = {});

/// Ordinary least squares of log(y) on log(x).
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural log of the prefactor
  double r_squared = 0.0;
  double predict(double x) const;
};

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// x where two fitted power laws meet; NaN if the slopes are equal.
double power_law_crossover(const PowerLawFit& a, const PowerLawFit& b);

}  // namespace qsc
