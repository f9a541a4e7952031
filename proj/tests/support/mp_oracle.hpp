#pragma once

// 50-digit re-evaluation of the closed-form thresholds, written directly from
// the formulas (no log-space rearrangement) as an independent reference.

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace mp_oracle {

using Real = boost::multiprecision::cpp_dec_float_50;

inline Real R(double x) { return Real(x); }

inline Real hamming_term(const Real& size, const Real& lambda) {
  return log(size) / (lambda * tanh(lambda));
}

inline Real path_factor(const Real& lambda, int l) {
  const Real u = pow(tanh(lambda), l);
  return (1 + u) / (1 - u);
}

inline Real thm_path_restricted_conn(int p, int eta, double lambda_d) {
  const Real lambda = R(lambda_d);
  return (1 + pow(cosh(2 * lambda), eta - 1)) / (2 * lambda) * log(Real(p) / (2 * Real(eta + 1)));
}

inline Real thm_path_length_conn(int p, int eta, int gamma, double nu_d, double lambda_d) {
  const Real lambda = R(lambda_d), nu = R(nu_d);
  const Real t_nu = (pow(Real(p), 1 - nu) - (eta + 1)) / gamma;
  const Real inner = pow(cosh(2 * lambda), eta - 1) * pow(path_factor(lambda, gamma + 1), t_nu);
  return (1 + inner) / (2 * lambda) * nu * log(Real(p));
}

inline Real thm_girth_conn(int p, int g, int d, double nu_d, double lambda_d) {
  const Real lambda = R(lambda_d), nu = R(nu_d);
  Real d_nu = pow(Real(p), 1 - nu) / g;
  if (Real(d) < d_nu) d_nu = Real(d);
  return (1 + pow(path_factor(lambda, g - 1), d_nu)) / (2 * lambda) * nu * log(Real(p));
}

inline Real thm_dregular_conn(int p, int d, double lambda_d) {
  const Real lambda = R(lambda_d);
  return exp(lambda * d) / (2 * lambda * d * exp(lambda)) * log(Real(p) * d / 4);
}

inline Real thm_edge_bounded_conn(int k, double lambda_d) {
  const Real lambda = R(lambda_d);
  const Real s = sqrt(Real(2 * k));
  return exp(lambda * (s - 1)) / (2 * lambda * exp(lambda) * (s + 1)) * log(Real(k) / 2);
}

}  // namespace mp_oracle
