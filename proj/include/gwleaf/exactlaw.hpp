#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gwleaf/degree_set.hpp"
#include "gwleaf/offspring.hpp"
#include "gwleaf/pmf.hpp"
#include "gwleaf/treecode.hpp"

namespace gwleaf {

// P[total progeny of a j-tree forest = p] = (j/p) P[W_p = -j].
double forest_size_probability(const OffspringLaw& law, long j, long p);

// P_j[zeta(f) = p, zeta_A(f) = n] for a forest of j independent trees.
double size_count_probability(const OffspringLaw& law, const DegreeSet& set, long j, long p, long n);

// The same probabilities for every p in [p_lo, p_hi] at fixed (j, n); entry i
// corresponds to p = p_lo + i. Entries with p < n are zero.
std::vector<double> size_count_probabilities(const OffspringLaw& law, const DegreeSet& set, long j, long n,
                                         long p_lo, long p_hi);

struct JointLawEntry {
    long p = 0;
    long n = 0;
    double probability = 0.0;
};

struct JointLawTable {
    long j = 1;
    DegreeSet set = DegreeSet::leaves();
    std::vector<JointLawEntry> entries;
};

// All entries with 1 <= n <= p <= p_max.
JointLawTable joint_law_table(const OffspringLaw& law, const DegreeSet& set, long j, long p_max);
void write_joint_law_csv(std::ostream& out, const JointLawTable& table);

struct EnumerationOptions {
    std::optional<long> max_leaves;
    bool skip_zero_weight = false;
};

using TreeVisitor = std::function<void(std::span<const int> child_counts, double weight)>;

inline constexpr long kMaxEnumerationSize = 18;

// Every plane tree with at most max_zeta vertices, in lexicographic order of
// child-count sequences, with weight prod_u mu(k_u). Throws TooLarge above 18.
void enumerate_trees(const OffspringLaw& law, long max_zeta, const TreeVisitor& visit,
                     const EnumerationOptions& options = {});

struct WeightedTree {
    PlaneTree tree;
    double weight = 0.0;
};

std::vector<WeightedTree> list_trees(const OffspringLaw& law, long max_zeta, const EnumerationOptions& options = {});

struct CountProbability {
    double probability = 0.0;
    double remainder_bound = 0.0;  // bound on the mass of sizes outside [p_lo, p_hi]
    long p_lo = 0;
    long p_hi = 0;
};

// P_j[zeta_A(f) = n], summed over sizes p in a window (default: the
// concentration window around n/mu(A), widened until the remainder bound is
// below 1e-16).
CountProbability forest_count_probability(const OffspringLaw& law, const DegreeSet& set, long j, long n,
                                          std::optional<std::pair<long, long>> p_range = std::nullopt);

// P[zeta_A(tau) = n] for a single tree.
CountProbability count_probability(const OffspringLaw& law, const DegreeSet& set, long n,
                                std::optional<std::pair<long, long>> p_range = std::nullopt);

// Chernoff bound on sum_{p in [from, to]} P[Bin(p, mass) = n]; `to` < 0 means infinity.
double size_remainder_bound(long n, double mass, long from, long to);

struct LeafCountTail {
    double exactly = 0.0;   // P_j[lambda(f) = p]
    double at_least = 0.0;  // P_j[lambda(f) >= p]
};

LeafCountTail forest_leaf_probabilities(const OffspringLaw& law, long p, long j);

// out[k] = x[(i + k) mod size]
std::vector<long> cyclic_shift(std::span<const long> x, long i);

// First index i in 1..size at which the partial sum w_i attains its minimum.
long vervaat_index(std::span<const long> x);

// Strict prefix sums > -j and total sum -j.
bool is_forest_excursion(std::span<const long> x, long j);

// Number of cyclic shifts of x that are forest excursions for j trees.
long count_excursion_shifts(std::span<const long> x, long j);

}  // namespace gwleaf
