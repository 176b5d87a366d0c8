#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwleaf/degree_set.hpp"
#include "gwleaf/offspring.hpp"
#include "gwleaf/report.hpp"
#include "gwleaf/sampler.hpp"

namespace gwleaf {

struct ConcentrationParams {
    std::vector<long> n_list{50, 100, 200};
    long reps = 10'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: worker_count()
};

// Leaf-conditioned trees: rate of |zeta - n/mu0| > zeta^{3/4} and rate of the
// leaf-profile deviation sup_{eta <= t <= 1} |Lambda(zeta t)/(zeta t) - mu0| >= delta n^{-1/4}.
VerificationReport suite_concentration(const OffspringLaw& law, const ConcentrationParams& params);

struct ExactnessParams {
    Mode mode = Mode::leaves;
    DegreeSet set = DegreeSet::leaves();
    long n = 2;
    long reps = 100'000;
    std::uint64_t seed = 1;
    // Run even when trees of size <= 18 carry too little of the conditional
    // mass; the shapes above the cell limit are then one exact overflow cell.
    bool allow_low_coverage = false;
    unsigned workers = 0;
};

// Empirical tree-shape frequencies against the exact conditional law.
VerificationReport suite_sampler_exactness(const OffspringLaw& law, const ExactnessParams& params);

enum class Quantity { leaves, size };

Quantity parse_quantity(const std::string& text);
const char* quantity_name(Quantity q) noexcept;

struct AsymptoticRow {
    long n = 0;
    double exact = 0.0;
    double predicted = 0.0;  // 0 off the lattice
    double ratio = 0.0;      // exact / predicted, NaN off the lattice
};

std::vector<AsymptoticRow> asymptotic_rows(const OffspringLaw& law, Quantity quantity, const std::vector<long>& n_list);

VerificationReport suite_asymptotics(const OffspringLaw& law, Quantity quantity, const std::vector<long>& n_list);

struct FunctionalSample {
    double max_contour = 0.0;      // sup (B_zeta / zeta) C
    double area = 0.0;             // integral of the rescaled height process
    double max_lukasiewicz = 0.0;  // sup W / B_zeta
    double max_jump = 0.0;         // (max degree - 1) / B_zeta
};

inline constexpr const char* kFunctionalNames[] = {"max_contour", "area", "max_lukasiewicz", "max_jump"};

// Rescaled by the tree's own size, or by `scale_size` when it is positive.
FunctionalSample functional_sample(const PlaneTree& tree, const OffspringLaw& law, long scale_size = 0);
double functional_value(const FunctionalSample& s, const std::string& name);

struct ScalingParams {
    long n = 300;
    long reps = 5'000;  // per arm
    std::uint64_t seed = 1;
    std::vector<std::string> functionals{std::begin(kFunctionalNames), std::end(kFunctionalNames)};
    // Compare leaf conditioning against itself (second arm on other streams).
    bool same_arm = false;
    unsigned workers = 0;
};

struct ScalingSamples {
    std::vector<FunctionalSample> leaves;  // conditioned on lambda = n
    std::vector<FunctionalSample> other;   // conditioned on zeta = round(n / mu0), or lambda = n again
    // Both arms rescaled with the size round(n / mu0) instead of their own size.
    std::vector<FunctionalSample> leaves_fixed;
    std::vector<FunctionalSample> other_fixed;
};

ScalingSamples scaling_samples(const OffspringLaw& law, const ScalingParams& params);

// Two-sample KS on each functional between the two arms. The same test with
// the fixed rescaling is reported as a diagnostic only.
VerificationReport suite_scaling_limit(const OffspringLaw& law, const ScalingParams& params);

}  // namespace gwleaf
