#include "gwleaf/pmf.hpp"

#include <algorithm>
#include <numeric>

#include "gwleaf/error.hpp"

namespace gwleaf {

Pmf Pmf::point_mass(long value) { return Pmf{value, {1.0}, 0.0}; }

Pmf Pmf::bernoulli(double p) { return Pmf{0, {1.0 - p, p}, 0.0}; }

double Pmf::total() const noexcept { return std::accumulate(mass.begin(), mass.end(), 0.0); }

double Pmf::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) m += static_cast<double>(offset + static_cast<long>(i)) * mass[i];
    return m;
}

void Pmf::trim() {
    std::size_t first = 0;
    while (first < mass.size() && mass[first] == 0.0) ++first;
    std::size_t last = mass.size();
    while (last > first && mass[last - 1] == 0.0) --last;
    if (first == last) {
        mass.clear();
        return;
    }
    mass.erase(mass.begin() + static_cast<long>(last), mass.end());
    mass.erase(mass.begin(), mass.begin() + static_cast<long>(first));
    offset += static_cast<long>(first);
}

Pmf convolve(const Pmf& a, const Pmf& b, std::optional<long> cap, std::size_t max_support) {
    Pmf out;
    const double kept_a = a.total();
    const double kept_b = b.total();
    out.deficit = 1.0 - (1.0 - a.deficit) * (1.0 - b.deficit);
    if (a.empty() || b.empty()) {
        out.deficit = 1.0;
        return out;
    }
    out.offset = a.offset + b.offset;
    long hi = a.hi() + b.hi();
    if (cap && *cap < hi) hi = *cap;
    if (hi < out.offset) {
        out.deficit += kept_a * kept_b;
        return out;
    }
    const auto size = static_cast<std::size_t>(hi - out.offset + 1);
    if (size > max_support) throw Error(Errc::SupportOverflow, "convolution support exceeds configured bound");
    out.mass.assign(size, 0.0);
    const long nb = static_cast<long>(b.mass.size());
    for (std::size_t i = 0; i < a.mass.size(); ++i) {
        const double ai = a.mass[i];
        if (ai == 0.0) continue;
        const long room = static_cast<long>(size) - static_cast<long>(i);
        if (room <= 0) break;
        const long upto = std::min(nb, room);
        double* dst = out.mass.data() + i;
        const double* src = b.mass.data();
        for (long j = 0; j < upto; ++j) dst[j] += ai * src[j];
    }
    const double dropped = kept_a * kept_b - out.total();
    if (dropped > 0.0) out.deficit += dropped;
    return out;
}

Pmf convolve_power(const Pmf& base, long p, const PowerOptions& options) {
    if (p < 0) throw Error(Errc::DomainError, "convolution power must be nonnegative");
    Pmf result = Pmf::point_mass(0);
    if (p == 0) return result;
    Pmf square = base;
    bool first = true;
    while (true) {
        if (p & 1) {
            if (first) {
                result = square;
                if (options.cap && result.hi() > *options.cap) result = convolve(result, Pmf::point_mass(0), options.cap, options.max_support);
                first = false;
            } else {
                result = convolve(result, square, options.cap, options.max_support);
            }
        }
        p >>= 1;
        if (!p) break;
        square = convolve(square, square, options.cap, options.max_support);
    }
    return result;
}

}  // namespace gwleaf
