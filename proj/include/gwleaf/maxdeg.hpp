#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwleaf/offspring.hpp"
#include "gwleaf/sampler.hpp"

namespace gwleaf {

// max{k >= 1 : mu([k, inf)) >= 1/n}; DomainError when the set is empty.
long degree_scale(const OffspringLaw& law, long n);

struct HypothesisCheck {
    bool consistent = false;
    bool finite_support = false;
    double radius = 0.0;        // from the ratio mu(k+1)/mu(k) at the end of the range
    double root_radius = 0.0;   // from mu(k)^{1/k} at the end of the range
    long range_lo = 0;
    long range_hi = 0;
    std::string diagnostics;
};

HypothesisCheck check_decay_regularity(const OffspringLaw& law);

enum class Normalization { by_D, by_B };

struct MaxDegreeStudy {
    std::string law_spec;
    long n = 0;
    long reps = 0;
    std::uint64_t seed = 0;
    Normalization mode = Normalization::by_D;
    double eps = 0.0;
    long D = 0;         // D(n), finite-variance mode only
    double B_n = 0.0;
    std::vector<long> delta;
    std::vector<long> zeta;
    std::vector<long> lambda;
    std::vector<double> normalized;
    double coverage = 0.0;  // P[(1-eps) D <= delta <= (1+eps) D], finite-variance mode
    double median_normalized = 0.0;
};

// Leaf-conditioned trees, replica r drawn from stream (config.seed, r).
MaxDegreeStudy max_degree_study(const OffspringLaw& law, long n, long reps, const SamplerConfig& config, double eps,
                            unsigned workers = 0);

// Fraction of recorded degrees within log_b n -+ c log_b log_b n.
double log_window_coverage(const MaxDegreeStudy& study, double base, double c);

struct TailBounds {
    long D = 0;
    double lower_tail = 0.0;   // mu([(1-eps) D, inf))
    double lower_bound = 0.0;  // n^{-1/(1+eps/3)}
    double upper_tail = 0.0;   // mu([(1+eps) D, inf))
    double upper_bound = 0.0;  // n^{-1-eps/3}
    bool lower_holds = false;
    bool upper_holds = false;
    double lower_slack = 0.0;  // lower_tail / lower_bound
    double upper_slack = 0.0;  // upper_bound / upper_tail
};

TailBounds degree_tail_bounds(const OffspringLaw& law, long n, double eps);

double median(std::vector<double> values);

}  // namespace gwleaf
