#pragma once

#include <span>

namespace gwleaf {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test; asymptotic p-value from the Kolmogorov
// distribution with Stephens' small-sample correction.
TestResult ks_two_sample(std::span<const double> xs, std::span<const double> ys);

// P[K > x] for the Kolmogorov distribution.
double kolmogorov_survival(double x);

struct Chi2Result {
    double statistic = 0.0;
    double p_value = 1.0;
    long cells = 0;  // after pooling
    long dof = 0;
};

// Pearson goodness of fit. `expected` holds expected counts (same total as
// observed); cells with expected count below `min_expected` are pooled.
Chi2Result chi2_gof(std::span<const double> observed, std::span<const double> expected, double min_expected = 5.0);

// Half the L1 distance between two probability vectors of equal length.
double tv_distance(std::span<const double> p, std::span<const double> q);

// E[TV] between a multinomial(n, p) frequency vector and p, normal approximation.
double expected_tv_noise(std::span<const double> p, long n);

}  // namespace gwleaf
