#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwleaf/degree_set.hpp"

namespace gwleaf {

// Rooted ordered tree stored as the preorder sequence of child counts.
class PlaneTree {
public:
    PlaneTree() : child_counts_{0} {}

    // Throws NotAnExcursion unless the counts describe exactly one tree.
    static PlaneTree from_child_counts(std::vector<int> child_counts);

    std::span<const int> child_counts() const noexcept { return child_counts_; }
    long size() const noexcept { return static_cast<long>(child_counts_.size()); }

    bool operator==(const PlaneTree&) const = default;
    auto operator<=>(const PlaneTree& other) const { return child_counts_ <=> other.child_counts_; }

private:
    explicit PlaneTree(std::vector<int> counts) : child_counts_(std::move(counts)) {}
    std::vector<int> child_counts_;
};

struct CodingTriple {
    std::vector<long> lukasiewicz;  // W_0 .. W_zeta
    std::vector<long> height;       // H_0 .. H_zeta, H_zeta = 0
    std::vector<long> contour;      // C_0 .. C_{2 zeta}
};

CodingTriple encode(const PlaneTree& tree);

// Increments in {-1, 0, 1, ...} forming an excursion; throws NotAnExcursion.
PlaneTree decode(std::span<const int> increments);
PlaneTree decode(std::span<const long> increments);

// Lukasiewicz increments (child count - 1).
std::vector<int> increments_of(const PlaneTree& tree);

// Throws NotAnExcursion unless the increments form one excursion to -1.
void check_excursion(std::span<const long> increments);

// Heights H_0 .. H_{zeta-1} from a Lukasiewicz path W_0 .. W_zeta, via an
// ancestor stack in linear time.
std::vector<long> height_from_lukasiewicz(std::span<const long> path);

// Same quantity by direct counting of
// #{0 <= j < n : W_j = min_{j <= k <= n} W_k}; quadratic time.
std::vector<long> height_by_infimum_count(std::span<const long> path);

struct TreeStatistics {
    long zeta = 0;
    long lambda = 0;
    long zeta_A = 0;
    long max_degree = 0;
    std::vector<long> leaf_profile;  // Lambda(s) for s = 0 .. zeta, with Lambda(zeta) = lambda
};

TreeStatistics statistics(const PlaneTree& tree, const DegreeSet& set = DegreeSet::leaves());

// Reverses the order of the children of every vertex.
PlaneTree mirror(const PlaneTree& tree);

// One tree per line, child counts comma-separated.
std::string to_line(const PlaneTree& tree);
PlaneTree parse_tree_line(std::string_view line);

// CSV with columns t, W, H, C (W and H are empty past t = zeta).
void write_coding_csv(std::ostream& out, const CodingTriple& coding);

}  // namespace gwleaf
