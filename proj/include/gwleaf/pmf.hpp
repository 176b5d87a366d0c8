#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace gwleaf {

// Finite pmf on the integer interval [offset, offset + mass.size()).
// Mass lost to truncation is tracked in `deficit`.
struct Pmf {
    long offset = 0;
    std::vector<double> mass;
    double deficit = 0.0;

    static Pmf point_mass(long value);
    static Pmf bernoulli(double p);

    double operator()(long value) const noexcept {
        const long i = value - offset;
        if (i < 0 || i >= static_cast<long>(mass.size())) return 0.0;
        return mass[static_cast<std::size_t>(i)];
    }
    long lo() const noexcept { return offset; }
    long hi() const noexcept { return offset + static_cast<long>(mass.size()) - 1; }
    bool empty() const noexcept { return mass.empty(); }
    double total() const noexcept;
    double mean() const noexcept;

    // Drops zero mass at both ends.
    void trim();
};

inline constexpr std::size_t kDefaultMaxSupport = std::size_t{1} << 24;

// Law of the sum of independent copies. Values above `cap` are dropped and
// counted in the deficit.
Pmf convolve(const Pmf& a, const Pmf& b, std::optional<long> cap = std::nullopt,
             std::size_t max_support = kDefaultMaxSupport);

struct PowerOptions {
    std::optional<long> cap;
    std::size_t max_support = kDefaultMaxSupport;
};

// Law of the sum of p independent copies by binary powering.
Pmf convolve_power(const Pmf& base, long p, const PowerOptions& options = {});

}  // namespace gwleaf
