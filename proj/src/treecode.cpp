#include "gwleaf/treecode.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>

#include "gwleaf/error.hpp"

namespace gwleaf {

namespace {

template <class Int>
void check_excursion_impl(std::span<const Int> increments) {
    if (increments.empty()) throw Error(Errc::NotAnExcursion, "empty increment sequence");
    long sum = 0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        const long x = static_cast<long>(increments[i]);
        if (x < -1) throw Error(Errc::NotAnExcursion, "increment below -1 at position " + std::to_string(i));
        sum += x;
        const bool last = i + 1 == increments.size();
        if (!last && sum <= -1) throw Error(Errc::NotAnExcursion, "path reaches -1 before the end");
        if (last && sum != -1) throw Error(Errc::NotAnExcursion, "increments sum to " + std::to_string(sum));
    }
}

template <class Int>
PlaneTree decode_impl(std::span<const Int> increments) {
    check_excursion_impl(increments);
    std::vector<int> counts(increments.size());
    for (std::size_t i = 0; i < increments.size(); ++i) counts[i] = static_cast<int>(increments[i]) + 1;
    return PlaneTree::from_child_counts(std::move(counts));
}

// For every vertex, one past the last vertex of its subtree.
std::vector<long> subtree_ends(std::span<const int> k) {
    const long n = static_cast<long>(k.size());
    std::vector<long> end(static_cast<std::size_t>(n));
    std::vector<std::pair<long, long>> stack;  // (vertex, children still to close)
    for (long i = 0; i < n; ++i) {
        if (k[static_cast<std::size_t>(i)] > 0) {
            stack.emplace_back(i, k[static_cast<std::size_t>(i)]);
            continue;
        }
        end[static_cast<std::size_t>(i)] = i + 1;
        while (!stack.empty()) {
            if (--stack.back().second > 0) break;
            end[static_cast<std::size_t>(stack.back().first)] = i + 1;
            stack.pop_back();
        }
    }
    return end;
}

}  // namespace

PlaneTree PlaneTree::from_child_counts(std::vector<int> child_counts) {
    std::vector<long> inc(child_counts.size());
    for (std::size_t i = 0; i < child_counts.size(); ++i) {
        if (child_counts[i] < 0) throw Error(Errc::NotAnExcursion, "negative child count");
        inc[i] = static_cast<long>(child_counts[i]) - 1;
    }
    check_excursion_impl(std::span<const long>(inc));
    return PlaneTree(std::move(child_counts));
}

void check_excursion(std::span<const long> increments) { check_excursion_impl(increments); }

PlaneTree decode(std::span<const int> increments) { return decode_impl(increments); }
PlaneTree decode(std::span<const long> increments) { return decode_impl(increments); }

std::vector<int> increments_of(const PlaneTree& tree) {
    std::vector<int> out(tree.child_counts().begin(), tree.child_counts().end());
    for (int& x : out) --x;
    return out;
}

CodingTriple encode(const PlaneTree& tree) {
    const auto k = tree.child_counts();
    const std::size_t n = k.size();
    CodingTriple c;
    c.lukasiewicz.resize(n + 1);
    c.lukasiewicz[0] = 0;
    for (std::size_t i = 0; i < n; ++i) c.lukasiewicz[i + 1] = c.lukasiewicz[i] + k[i] - 1;

    c.height.resize(n + 1);
    std::vector<long> pending;  // unvisited children of each ancestor on the current branch
    for (std::size_t i = 0; i < n; ++i) {
        c.height[i] = static_cast<long>(pending.size());
        if (k[i] > 0) {
            pending.push_back(k[i]);
        } else {
            while (!pending.empty()) {
                if (--pending.back() > 0) break;
                pending.pop_back();
            }
        }
    }
    c.height[n] = 0;

    c.contour.reserve(2 * n + 1);
    c.contour.push_back(0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        long h = c.height[i];
        while (h > c.height[i + 1] - 1) c.contour.push_back(--h);
        c.contour.push_back(c.height[i + 1]);
    }
    for (long h = c.height[n - 1]; h > 0;) c.contour.push_back(--h);
    while (c.contour.size() < 2 * n + 1) c.contour.push_back(0);
    return c;
}

std::vector<long> height_from_lukasiewicz(std::span<const long> path) {
    if (path.size() < 2 || path.front() != 0) throw Error(Errc::NotAnExcursion, "path must start at 0");
    std::vector<long> inc(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) inc[i] = path[i + 1] - path[i];
    const CodingTriple c = encode(decode(std::span<const long>(inc)));
    return std::vector<long>(c.height.begin(), c.height.end() - 1);
}

std::vector<long> height_by_infimum_count(std::span<const long> path) {
    if (path.size() < 2 || path.front() != 0) throw Error(Errc::NotAnExcursion, "path must start at 0");
    std::vector<long> inc(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) inc[i] = path[i + 1] - path[i];
    check_excursion(inc);
    const std::size_t zeta = path.size() - 1;
    std::vector<long> h(zeta);
    for (std::size_t n = 0; n < zeta; ++n) {
        long running_min = path[n];
        long count = 0;
        for (std::size_t j = n; j-- > 0;) {
            running_min = std::min(running_min, path[j]);
            if (path[j] == running_min) ++count;
        }
        h[n] = count;
    }
    return h;
}

TreeStatistics statistics(const PlaneTree& tree, const DegreeSet& set) {
    const auto k = tree.child_counts();
    TreeStatistics s;
    s.zeta = tree.size();
    s.leaf_profile.resize(k.size() + 1);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0) ++s.lambda;
        if (set.contains(k[i])) ++s.zeta_A;
        s.max_degree = std::max<long>(s.max_degree, k[i]);
        s.leaf_profile[i] = s.lambda;
    }
    s.leaf_profile[k.size()] = s.lambda;
    return s;
}

PlaneTree mirror(const PlaneTree& tree) {
    const auto k = tree.child_counts();
    const std::vector<long> end = subtree_ends(k);
    std::vector<int> out;
    out.reserve(k.size());
    // Emit a vertex, then its children from last to first.
    std::vector<long> todo{0};
    std::vector<long> kids;
    while (!todo.empty()) {
        const long v = todo.back();
        todo.pop_back();
        out.push_back(k[static_cast<std::size_t>(v)]);
        kids.clear();
        for (long c = v + 1, left = k[static_cast<std::size_t>(v)]; left > 0; --left) {
            kids.push_back(c);
            c = end[static_cast<std::size_t>(c)];
        }
        // Stack order: the original first child must be emitted last.
        for (long c : kids) todo.push_back(c);
    }
    return PlaneTree::from_child_counts(std::move(out));
}

std::string to_line(const PlaneTree& tree) {
    std::string out;
    for (std::size_t i = 0; i < tree.child_counts().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(tree.child_counts()[i]);
    }
    return out;
}

PlaneTree parse_tree_line(std::string_view line) {
    std::vector<int> counts;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty()) {
        const auto comma = line.find(',');
        const std::string_view item = line.substr(0, comma);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw Error(Errc::NotAnExcursion, "bad child count '" + std::string(item) + "'");
        }
        counts.push_back(value);
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return PlaneTree::from_child_counts(std::move(counts));
}

void write_coding_csv(std::ostream& out, const CodingTriple& coding) {
    out << "t,W,H,C\n";
    for (std::size_t t = 0; t < coding.contour.size(); ++t) {
        out << t << ',';
        if (t < coding.lukasiewicz.size()) out << coding.lukasiewicz[t];
        out << ',';
        if (t < coding.height.size()) out << coding.height[t];
        out << ',' << coding.contour[t] << '\n';
    }
}

}  // namespace gwleaf
