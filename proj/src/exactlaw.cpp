#include "gwleaf/exactlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/distributions/binomial.hpp>

#include "gwleaf/error.hpp"
#include "gwleaf/format.hpp"
#include "gwleaf/limits.hpp"

namespace gwleaf {

namespace {

double binomial_pmf(long p, double mass, long n) {
    if (n < 0 || n > p) return 0.0;
    if (mass >= 1.0) return n == p ? 1.0 : 0.0;
    if (mass <= 0.0) return n == 0 ? 1.0 : 0.0;
    return boost::math::pdf(boost::math::binomial_distribution<double>(static_cast<double>(p), mass),
                            static_cast<double>(n));
}

// True when every support point of the law lies in the set.
bool covers_support(const OffspringLaw& law, const DegreeSet& set) {
    if (auto top = law.support_max()) {
        for (long k : law.support_upto(*top)) {
            if (!set.contains(k)) return false;
        }
        return true;
    }
    if (set.is_finite()) return false;
    for (long k : set.listed()) {
        if (law.pmf(k) > 0.0) return false;
    }
    return true;
}

// Smallest support point inside (or outside) the set.
long smallest_support_point(const OffspringLaw& law, const DegreeSet& set, bool inside) {
    const long limit = 8 + (set.listed().empty() ? 0 : set.listed().back());
    for (long k = 0; k <= limit; ++k) {
        if (law.pmf(k) > 0.0 && set.contains(k) == inside) return k;
    }
    if (inside && set.is_finite()) throw Error(Errc::DomainError, "set does not meet the support");
    return limit + 1;
}

}  // namespace

double forest_size_probability(const OffspringLaw& law, long j, long p) {
    if (j < 1) throw Error(Errc::InvalidCount, "forest needs j >= 1 trees");
    if (j > p) throw Error(Errc::ArgumentOrder, "forest_size_probability needs j <= p");
    const long cap = p - j;
    const Pmf nu = jump_law(law, cap + 1);
    const Pmf walk = convolve_power(nu, p, PowerOptions{cap});
    return static_cast<double>(j) / static_cast<double>(p) * walk(-j);
}

std::vector<double> size_count_probabilities(const OffspringLaw& law, const DegreeSet& set, long j, long n,
                                         long p_lo, long p_hi) {
    if (j < 1 || n < 1) throw Error(Errc::InvalidCount, "need j >= 1 and n >= 1");
    std::vector<double> out(static_cast<std::size_t>(std::max<long>(p_hi - p_lo + 1, 0)), 0.0);
    const long first = std::max(p_lo, n);
    if (first > p_hi) return out;

    if (covers_support(law, set)) {
        if (n >= p_lo && n <= p_hi && n >= j) out[static_cast<std::size_t>(n - p_lo)] = forest_size_probability(law, j, n);
        return out;
    }
    const double mass_A = law.mass(set);
    if (mass_A <= 0.0) return out;

    const long min_rho = smallest_support_point(law, set, true) - 1;
    const long min_mu = smallest_support_point(law, set, false) - 1;
    const long steps = p_hi - n;
    // W'_m + U_n = -j with W'_m >= m min_mu and U_n >= n min_rho; jumps are >= -1,
    // so pmfs truncated above cap + (remaining -1 steps) stay exact at the caps.
    const long cap_w = -j - n * min_rho;
    const long cap_u = -j + (min_mu < 0 ? steps : 0);
    const long cap_w_int = cap_w + (min_mu < 0 ? steps : 0);
    const long cap_u_int = cap_u + (min_rho < 0 ? n : 0);
    if (cap_w_int < 0 && min_mu >= 0) return out;

    const long max_jump = std::max<long>({cap_w_int, cap_u_int, 0}) + 1;
    const DerivedLaws derived = derived_laws(law, set, max_jump);

    Pmf u_law;
    if (derived.counted_jump.lo() == -1 && derived.counted_jump.hi() == -1) {
        u_law = Pmf::point_mass(-n);
        const double base = derived.counted_jump(-1);
        if (base != 1.0) {
            u_law.mass[0] = std::pow(base, static_cast<double>(n));
            u_law.deficit = 1.0 - u_law.mass[0];
        }
    } else {
        u_law = convolve_power(derived.counted_jump, n, PowerOptions{cap_u_int});
    }

    Pmf walk = Pmf::point_mass(0);
    for (long m = 0; m <= steps; ++m) {
        const long p = n + m;
        if (p >= first && p >= j) {
            double inner = 0.0;
            for (long u = u_law.lo(); u <= std::min(u_law.hi(), cap_u); ++u) {
                const double pu = u_law(u);
                if (pu != 0.0) inner += pu * walk(-u - j);
            }
            if (inner != 0.0) {
                out[static_cast<std::size_t>(p - p_lo)] =
                    static_cast<double>(j) / static_cast<double>(p) * binomial_pmf(p, mass_A, n) * inner;
            }
        }
        if (m < steps) walk = convolve(walk, derived.uncounted_jump, cap_w_int);
    }
    return out;
}

double size_count_probability(const OffspringLaw& law, const DegreeSet& set, long j, long p, long n) {
    if (n > p) throw Error(Errc::InvalidCount, "n > p");
    return size_count_probabilities(law, set, j, n, p, p).front();
}

JointLawTable joint_law_table(const OffspringLaw& law, const DegreeSet& set, long j, long p_max) {
    JointLawTable table;
    table.j = j;
    table.set = set;
    for (long n = 1; n <= p_max; ++n) {
        const auto row = size_count_probabilities(law, set, j, n, n, p_max);
        for (long p = n; p <= p_max; ++p) table.entries.push_back({p, n, row[static_cast<std::size_t>(p - n)]});
    }
    std::sort(table.entries.begin(), table.entries.end(),
              [](const JointLawEntry& a, const JointLawEntry& b) { return a.p != b.p ? a.p < b.p : a.n < b.n; });
    return table;
}

void write_joint_law_csv(std::ostream& out, const JointLawTable& table) {
    out << "p,n,probability\n";
    for (const auto& e : table.entries) out << e.p << ',' << e.n << ',' << format_double(e.probability) << '\n';
}

void enumerate_trees(const OffspringLaw& law, long max_zeta, const TreeVisitor& visit,
                     const EnumerationOptions& options) {
    if (max_zeta > kMaxEnumerationSize) throw Error(Errc::TooLarge, "enumeration is limited to 18 vertices");
    if (max_zeta < 1) return;
    std::vector<double> weight(static_cast<std::size_t>(max_zeta) + 1);
    for (long k = 0; k <= max_zeta; ++k) weight[static_cast<std::size_t>(k)] = law.pmf(k);
    std::vector<int> counts;
    counts.reserve(static_cast<std::size_t>(max_zeta));
    const long max_leaves = options.max_leaves.value_or(std::numeric_limits<long>::max());

    // `open`: subtrees announced but not yet started.
    auto rec = [&](auto&& self, long open, double w, long leaves) -> void {
        if (open == 0) {
            visit(counts, w);
            return;
        }
        const long used = static_cast<long>(counts.size());
        const long limit = max_zeta - used - open;
        for (long k = 0; k <= limit; ++k) {
            const double pk = weight[static_cast<std::size_t>(k)];
            if (options.skip_zero_weight && pk == 0.0) continue;
            const long next_open = open - 1 + k;
            const long next_leaves = leaves + (k == 0 ? 1 : 0);
            if (next_leaves + next_open > max_leaves) continue;
            counts.push_back(static_cast<int>(k));
            self(self, next_open, w * pk, next_leaves);
            counts.pop_back();
        }
    };
    rec(rec, 1, 1.0, 0);
}

std::vector<WeightedTree> list_trees(const OffspringLaw& law, long max_zeta, const EnumerationOptions& options) {
    std::vector<WeightedTree> out;
    enumerate_trees(
        law, max_zeta,
        [&](std::span<const int> counts, double w) {
            out.push_back({PlaneTree::from_child_counts(std::vector<int>(counts.begin(), counts.end())), w});
        },
        options);
    return out;
}

double size_remainder_bound(long n, double mass, long from, long to) {
    if (mass >= 1.0) return 0.0;
    from = std::max(from, n);
    double sum = 0.0;
    if (to >= 0) {
        for (long p = from; p <= to; ++p) {
            sum += std::exp(-static_cast<double>(p) * bernoulli_rate(mass, static_cast<double>(n) / static_cast<double>(p)));
        }
        return std::min(sum, 1.0);
    }
    // Infinite range: the summand decays geometrically once n/p is below mass.
    double prev = 0.0;
    for (long p = from;; ++p) {
        const double term =
            std::exp(-static_cast<double>(p) * bernoulli_rate(mass, static_cast<double>(n) / static_cast<double>(p)));
        sum += term;
        const bool decaying = static_cast<double>(n) < mass * static_cast<double>(p) && prev > 0.0 && term < prev;
        if (decaying && term < 1e-6 * sum) {
            const double ratio = term / prev;
            sum += term * ratio / (1.0 - ratio);
            break;
        }
        if (term == 0.0 && decaying) break;
        prev = term;
    }
    return std::min(sum, 1.0);
}

CountProbability forest_count_probability(const OffspringLaw& law, const DegreeSet& set, long j, long n,
                                          std::optional<std::pair<long, long>> p_range) {
    if (j < 1 || n < 1) throw Error(Errc::InvalidCount, "need j >= 1 and n >= 1");
    CountProbability out;
    const double mass_A = law.mass(set);
    if (mass_A <= 0.0) return out;
    long lo = 0;
    long hi = 0;
    constexpr double kTarget = 1e-16;
    if (p_range) {
        lo = p_range->first;
        hi = p_range->second;
    } else if (mass_A >= 1.0) {
        lo = hi = n;
    } else {
        const double centre = static_cast<double>(n) / mass_A;
        const double width = 4.0 * (1.0 / mass_A + 1.0) * std::pow(static_cast<double>(n), 0.75);
        lo = std::max<long>(n, static_cast<long>(std::ceil(centre - width)));
        hi = std::max<long>(lo, static_cast<long>(std::floor(centre + width)));
        if (size_remainder_bound(n, mass_A, n, lo - 1) > kTarget) lo = n;
        while (size_remainder_bound(n, mass_A, hi + 1, -1) > kTarget) hi += std::max<long>(8, hi / 8);
    }
    out.p_lo = lo;
    out.p_hi = hi;
    const auto terms = size_count_probabilities(law, set, j, n, lo, hi);
    for (double t : terms) out.probability += t;
    if (mass_A < 1.0) {
        out.remainder_bound = size_remainder_bound(n, mass_A, n, lo - 1) + size_remainder_bound(n, mass_A, hi + 1, -1);
    }
    return out;
}

CountProbability count_probability(const OffspringLaw& law, const DegreeSet& set, long n,
                                std::optional<std::pair<long, long>> p_range) {
    return forest_count_probability(law, set, 1, n, p_range);
}

LeafCountTail forest_leaf_probabilities(const OffspringLaw& law, long p, long j) {
    if (p < 1 || j < 1) throw Error(Errc::InvalidCount, "leaf counts need p >= 1 and j >= 1");
    const DegreeSet leaves = DegreeSet::leaves();
    LeafCountTail out;
    out.exactly = p < j ? 0.0 : forest_count_probability(law, leaves, j, p).probability;
    double below = 0.0;
    for (long m = j; m < p; ++m) below += forest_count_probability(law, leaves, j, m).probability;
    out.at_least = 1.0 - below;
    return out;
}

std::vector<long> cyclic_shift(std::span<const long> x, long i) {
    const long p = static_cast<long>(x.size());
    std::vector<long> out(x.size());
    if (p == 0) return out;
    const long s = ((i % p) + p) % p;
    for (long k = 0; k < p; ++k) out[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>((s + k) % p)];
    return out;
}

long vervaat_index(std::span<const long> x) {
    long best = 0;
    long best_value = std::numeric_limits<long>::max();
    long w = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w += x[i];
        if (w < best_value) {
            best_value = w;
            best = static_cast<long>(i) + 1;
        }
    }
    return best;
}

bool is_forest_excursion(std::span<const long> x, long j) {
    long w = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w += x[i];
        if (i + 1 < x.size() && w <= -j) return false;
    }
    return !x.empty() && w == -j;
}

long count_excursion_shifts(std::span<const long> x, long j) {
    long count = 0;
    for (long i = 0; i < static_cast<long>(x.size()); ++i) {
        const auto shifted = cyclic_shift(x, i);
        if (is_forest_excursion(shifted, j)) ++count;
    }
    return count;
}

}  // namespace gwleaf
