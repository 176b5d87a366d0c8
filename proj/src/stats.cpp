#include "gwleaf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "gwleaf/error.hpp"

namespace gwleaf {

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.18) {
        // Jacobi-transformed series converges fast for small x.
        const double pi = std::numbers::pi;
        double sum = 0.0;
        for (int k = 1; k <= 8; ++k) {
            const double m = 2.0 * k - 1.0;
            sum += std::exp(-m * m * pi * pi / (8.0 * x * x));
        }
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / x * sum, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw Error(Errc::EmptySample, "KS test needs two nonempty samples");
    std::vector<double> a(xs.begin(), xs.end());
    std::vector<double> b(ys.begin(), ys.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    TestResult out;
    out.statistic = d;
    out.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
    return out;
}

Chi2Result chi2_gof(std::span<const double> observed, std::span<const double> expected, double min_expected) {
    if (observed.size() != expected.size()) throw Error(Errc::DomainError, "chi2 needs matching cell vectors");
    const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    if (observed.empty() || total <= 0.0) throw Error(Errc::EmptySample, "chi2 needs observations");
    // Pool the small cells (smallest expected first) until each pool reaches the minimum.
    std::vector<std::size_t> order(expected.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return expected[x] < expected[y]; });
    std::vector<std::pair<double, double>> cells;  // (observed, expected)
    double po = 0.0;
    double pe = 0.0;
    for (std::size_t idx : order) {
        if (expected[idx] >= min_expected && pe == 0.0) {
            cells.emplace_back(observed[idx], expected[idx]);
            continue;
        }
        po += observed[idx];
        pe += expected[idx];
        if (pe >= min_expected) {
            cells.emplace_back(po, pe);
            po = pe = 0.0;
        }
    }
    if (pe > 0.0 || po > 0.0) {
        if (cells.empty()) throw Error(Errc::CellTooSmall, "total expected count below the pooling minimum");
        auto smallest = std::min_element(cells.begin(), cells.end(),
                                         [](const auto& x, const auto& y) { return x.second < y.second; });
        smallest->first += po;
        smallest->second += pe;
    }
    if (cells.size() < 2) throw Error(Errc::CellTooSmall, "fewer than two cells after pooling");
    Chi2Result out;
    for (const auto& [o, e] : cells) {
        if (e <= 0.0) {
            if (o > 0.0) out.statistic = std::numeric_limits<double>::infinity();
            continue;
        }
        out.statistic += (o - e) * (o - e) / e;
    }
    out.cells = static_cast<long>(cells.size());
    out.dof = out.cells - 1;
    out.p_value = std::isfinite(out.statistic)
                      ? boost::math::gamma_q(static_cast<double>(out.dof) / 2.0, out.statistic / 2.0)
                      : 0.0;
    return out;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw Error(Errc::DomainError, "tv_distance needs vectors of equal length");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

double expected_tv_noise(std::span<const double> p, long n) {
    double s = 0.0;
    for (double x : p) s += std::sqrt(2.0 * x * (1.0 - x) / (std::numbers::pi * static_cast<double>(n)));
    return 0.5 * s;
}

}  // namespace gwleaf
