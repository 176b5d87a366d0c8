#pragma once

#include <utility>

#include "gwleaf/offspring.hpp"

namespace gwleaf {

// Density of X_1 where E[exp(-l X_1)] = exp(l^theta); closed form at theta = 2.
double stable_density(double theta, double x);

// Same density through the Fourier inversion used for theta < 2, valid on (1, 2].
double stable_density_by_inversion(double theta, double x);

// P[X_1 <= x].
double stable_cdf(double theta, double x);

// Median of X_1.
double stable_median(double theta);

// stable_density_at(x) = s^{-1/theta} p_1(x s^{-1/theta}).
double stable_density_at(double theta, double s, double x);

// first_passage_density(x) = (x/s) stable_density_at(-x), for s > 0 and x >= 0.
double first_passage_density(double theta, double s, double x);

// Integral of first_passage_density(x) over s in [1-a, inf).
double first_passage_tail(double theta, double a, double x);

// excursion_reweighting(x) = theta q_{1-a}(x) / first_passage_tail(a, x); its limit 1/(1-a) at x = 0.
double excursion_reweighting(double theta, double a, double x);

// Cramer rate of Bernoulli(mu0) at x.
double bernoulli_rate(double mu0, double x);

// Predicted P[lambda = n]. Throws LatticeViolation if leaf_gcd does not divide n-1.
double predicted_leaf_probability(const OffspringLaw& law, long n);

// Predicted (P[zeta = n], P[zeta >= n]).
std::pair<double, double> predicted_size_probability(const OffspringLaw& law, long n);

}  // namespace gwleaf
