#pragma once

// Independent reference implementations used only by the tests. They are
// deliberately naive and share no code with the library.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using Counts = std::vector<int>;

// All plane trees with exactly n vertices, built recursively from ordered
// forests: a tree is a root followed by a forest on n - 1 vertices.
inline std::vector<std::vector<Counts>> trees_by_size(int n) {
    // forests[m]: every ordered forest on m vertices, as a list of trees
    std::vector<std::vector<std::vector<Counts>>> forests(static_cast<std::size_t>(n + 1));
    std::vector<std::vector<Counts>> trees(static_cast<std::size_t>(n + 1));
    forests[0] = {{}};
    for (int m = 1; m <= n; ++m) {
        for (const auto& forest : forests[static_cast<std::size_t>(m - 1)]) {
            Counts t{static_cast<int>(forest.size())};
            for (const auto& sub : forest) t.insert(t.end(), sub.begin(), sub.end());
            trees[static_cast<std::size_t>(m)].push_back(t);
        }
        for (int k = 1; k <= m; ++k)
            for (const auto& first : trees[static_cast<std::size_t>(k)])
                for (const auto& rest : forests[static_cast<std::size_t>(m - k)]) {
                    std::vector<Counts> f{first};
                    f.insert(f.end(), rest.begin(), rest.end());
                    forests[static_cast<std::size_t>(m)].push_back(f);
                }
    }
    return trees;
}

inline long catalan(int k) {
    long c = 1;
    for (int i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

// Explicit tree with parent pointers, built from preorder counts by recursive descent.
struct Node {
    std::vector<int> children;
    int depth = 0;
};

inline std::vector<Node> build(const Counts& counts) {
    std::vector<Node> nodes(counts.size());
    std::size_t next = 0;
    std::function<int(int)> grow = [&](int depth) -> int {
        const int me = static_cast<int>(next++);
        nodes[static_cast<std::size_t>(me)].depth = depth;
        for (int c = 0; c < counts[static_cast<std::size_t>(me)]; ++c)
            nodes[static_cast<std::size_t>(me)].children.push_back(grow(depth + 1));
        return me;
    };
    grow(0);
    return nodes;
}

inline std::vector<long> depths(const Counts& counts) {
    auto nodes = build(counts);
    std::vector<long> h;
    for (const auto& n : nodes) h.push_back(n.depth);
    return h;
}

// Depth-first boundary walk at integer times: 2(zeta - 1) steps.
inline std::vector<long> contour_walk(const Counts& counts) {
    auto nodes = build(counts);
    std::vector<long> c{0};
    std::function<void(int)> visit = [&](int u) {
        for (int v : nodes[static_cast<std::size_t>(u)].children) {
            c.push_back(c.back() + 1);
            visit(v);
            c.push_back(c.back() - 1);
        }
    };
    visit(0);
    return c;
}

// Preorder counts of the tree with every child list reversed.
inline Counts mirrored(const Counts& counts) {
    auto nodes = build(counts);
    Counts out;
    std::function<void(int)> visit = [&](int u) {
        const auto& ch = nodes[static_cast<std::size_t>(u)].children;
        out.push_back(static_cast<int>(ch.size()));
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) visit(*it);
    };
    visit(0);
    return out;
}

// Law of a sum of independent variables by direct summation over a map.
inline std::map<long, double> convolve(const std::map<long, double>& a, const std::map<long, double>& b) {
    std::map<long, double> out;
    for (const auto& [x, p] : a)
        for (const auto& [y, q] : b) out[x + y] += p * q;
    return out;
}

inline std::map<long, double> power(const std::map<long, double>& a, int p) {
    std::map<long, double> out{{0, 1.0}};
    for (int i = 0; i < p; ++i) out = convolve(out, a);
    return out;
}

inline double binomial_pmf(int n, int k, double p) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

// Taylor series of the density of X_1 with E[exp(-l X_1)] = exp(l^theta) at 0.
inline double stable_density_series(double theta, double x, int terms = 400) {
    double sum = 0.0;
    for (int m = 0; m < terms; ++m) {
        const double a = (m + 1) / theta;
        const double sn = std::sin(std::numbers::pi * a);
        if (sn == 0.0 || (x == 0.0 && m > 0)) continue;
        const double log_mag = std::lgamma(a) - std::lgamma(m + 1.0) + (m > 0 ? m * std::log(std::abs(x)) : 0.0);
        const double sign = (x < 0.0 && m % 2 == 1) ? -1.0 : 1.0;
        sum += sign * sn * std::exp(log_mag);
    }
    return sum / (std::numbers::pi * theta);
}

// Asymptotic expansion of P[X_1 > x] for large x.
inline double stable_survival_tail(double theta, double x, int terms = 6) {
    double sum = 0.0;
    double fact = 1.0;
    for (int k = 1; k <= terms; ++k) {
        fact *= k;
        sum += boost::math::tgamma(k * theta) * std::sin(k * std::numbers::pi * theta) / fact * std::pow(x, -k * theta);
    }
    return -sum / std::numbers::pi;
}

}  // namespace oracle
