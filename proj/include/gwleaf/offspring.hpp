#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwleaf/degree_set.hpp"
#include "gwleaf/pmf.hpp"
#include "gwleaf/rng.hpp"

namespace gwleaf {

enum class Family { explicit_pmf, geometric_critical, zeta_stable, dissection };

const char* family_name(Family family) noexcept;

struct SupportArithmetic {
    long span = 1;
    long offset = 1;
    long gcd = 1;
};

// Validated critical offspring distribution. Immutable; cheap to copy.
class OffspringLaw {
public:
    Family family() const noexcept;
    std::string spec() const;

    double pmf(long k) const noexcept;
    // mu([k, inf)).
    double tail(long k) const noexcept;
    double mass(const DegreeSet& set) const;

    double mean() const noexcept;
    // +inf when the variance is infinite.
    double variance() const noexcept;
    bool finite_variance() const noexcept;
    double stability_index() const noexcept;
    double leaf_probability() const noexcept;
    long span() const noexcept;
    long offset() const noexcept;
    long leaf_gcd() const noexcept;
    double truncation_mass() const noexcept;

    // Largest k with mu(k) > 0, or nullopt for infinite support.
    std::optional<long> support_max() const noexcept;
    bool in_support(long k) const noexcept { return pmf(k) > 0.0; }
    // Support points up to `limit` (inclusive).
    std::vector<long> support_upto(long limit) const;

    // Zeta family normalising constant c in mu(k) = c k^{-theta-1}.
    double tail_constant() const noexcept;
    // Dissection family ratio q in mu(i) = q^{i-1}, i >= 2.
    double geometric_ratio() const noexcept;

    struct Model;
    explicit OffspringLaw(std::shared_ptr<const Model> model) : model_(std::move(model)) {}
    const Model& model() const noexcept { return *model_; }

private:
    std::shared_ptr<const Model> model_;
};

// Validation of a raw pmf given as masses mu(0), mu(1), ...
OffspringLaw validate_law(const std::vector<double>& masses);
// Re-validation of an existing law; returns an equivalent law.
OffspringLaw validate_law(const OffspringLaw& law);

OffspringLaw geometric_critical();
OffspringLaw zeta_stable_law(double theta);
OffspringLaw dissection_law();

// Grammar: geometric | zeta:<theta> | dissection | pmf:<k>=<p>,<k>=<p>,...
OffspringLaw parse_law(std::string_view spec);

SupportArithmetic support_arithmetic(const OffspringLaw& law, const DegreeSet& set);
// Same, from an explicit list of support points (no aperiodicity requirement).
SupportArithmetic support_arithmetic(const std::vector<long>& support, const DegreeSet& set);

// Scaling sequence B_n of the walk with nu-increments.
double walk_scale(const OffspringLaw& law, long n);

// B_n for a law in the theta = 2, infinite variance regime, from the
// truncated second moment K(x) = E[W_1^2 1{|W_1| <= x}]. Exposed for testing
// on any law with computable pmf.
double walk_scale_from_truncated_moment(const OffspringLaw& law, long n);

struct DerivedLaws {
    Pmf jump;              // law of child count - 1
    Pmf nonnegative_jump;  // jump given it is >= 0
    Pmf counted_jump;      // jump given child count in the set
    Pmf uncounted_jump;    // jump given child count outside the set
};

// Companion laws truncated to jumps <= max_jump (truncated mass in `deficit`).
// counted_jump / uncounted_jump are empty when mu(A) is 0 or 1 respectively.
DerivedLaws derived_laws(const OffspringLaw& law, const DegreeSet& set, long max_jump);

Pmf jump_law(const OffspringLaw& law, long max_jump);

// Hurwitz zeta sum_{k>=0} (k+q)^{-s} for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

// Exact child-count sampler: inverse CDF for parametric families, alias table
// for explicit pmfs.
class OffspringSampler {
public:
    explicit OffspringSampler(const OffspringLaw& law);

    long operator()(Rng& rng) const;

private:
    long sample_table(Rng& rng) const;
    long sample_tail(double v) const;

    OffspringLaw law_;
    Family family_;
    // inverse-CDF table: cdf_[k] = mu([0, k])
    std::vector<double> cdf_;
    std::vector<std::uint32_t> guide_;
    // alias table
    std::vector<double> alias_prob_;
    std::vector<std::uint32_t> alias_index_;
};

}  // namespace gwleaf
