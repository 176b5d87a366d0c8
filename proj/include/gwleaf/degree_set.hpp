#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gwleaf {

// A set A of out-degrees: either finite, or the naturals minus a finite set.
class DegreeSet {
public:
    static DegreeSet finite(std::vector<long> elements);
    static DegreeSet cofinite(std::vector<long> excluded);
    static DegreeSet naturals() { return cofinite({}); }
    static DegreeSet leaves() { return finite({0}); }

    // Accepts "0,2", "N" (all of the naturals) and "N-1,3" (naturals minus {1,3}).
    static DegreeSet parse(std::string_view text);

    bool contains(long k) const noexcept;
    bool is_finite() const noexcept { return finite_; }
    bool is_naturals() const noexcept { return !finite_ && listed_.empty(); }
    bool empty() const noexcept { return finite_ && listed_.empty(); }

    // Elements of a finite set, or the excluded values of a cofinite set (sorted).
    const std::vector<long>& listed() const noexcept { return listed_; }
    long min_element() const;

    std::string to_string() const;

    bool operator==(const DegreeSet&) const = default;

private:
    DegreeSet(bool finite, std::vector<long> listed);

    bool finite_ = true;
    std::vector<long> listed_;
};

}  // namespace gwleaf
