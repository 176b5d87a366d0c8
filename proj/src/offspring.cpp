#include "gwleaf/offspring.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "gwleaf/error.hpp"
#include "gwleaf/format.hpp"

namespace gwleaf {

struct OffspringLaw::Model {
    Family family = Family::explicit_pmf;
    std::vector<double> masses;  // explicit only
    std::vector<double> suffix;  // suffix[k] = sum_{i>=k} masses[i]
    double theta = 2.0;
    double c = 0.0;  // zeta constant
    double q = 0.0;  // dissection ratio
    double mu0 = 0.0;
    double mean = 1.0;
    double variance = 0.0;
    long span_d = 1;
    long offset_b = 1;
    long leaf_gcd = 1;
    double truncation = 0.0;
};

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kMeanTol = 1e-9;
constexpr double kTruncTail = 1e-15;

using Model = OffspringLaw::Model;

void fill_arithmetic(Model& m, const OffspringLaw& law) {
    const SupportArithmetic sa = support_arithmetic(law, DegreeSet::leaves());
    m.span_d = sa.span;
    m.offset_b = sa.offset;
    m.leaf_gcd = sa.gcd;
}

OffspringLaw finish(std::shared_ptr<Model> m) {
    OffspringLaw provisional(m);
    fill_arithmetic(*m, provisional);
    return OffspringLaw(std::move(m));
}

}  // namespace

const char* family_name(Family family) noexcept {
    switch (family) {
        case Family::explicit_pmf: return "explicit";
        case Family::geometric_critical: return "geometric-critical";
        case Family::zeta_stable: return "zeta-stable";
        case Family::dissection: return "dissection";
    }
    return "unknown";
}

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw Error(Errc::DomainError, "hurwitz_zeta needs s > 1 and q > 0");
    // Direct summation until q + N >= 16, then Euler-Maclaurin.
    double sum = 0.0;
    double x = q;
    while (x < 16.0) {
        sum += std::pow(x, -s);
        x += 1.0;
    }
    static constexpr double kB2j[] = {1.0 / 6.0,    -1.0 / 30.0,      1.0 / 42.0, -1.0 / 30.0,
                                      5.0 / 66.0,   -691.0 / 2730.0,  7.0 / 6.0,  -3617.0 / 510.0};
    double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
    double rising = s;  // s(s+1)...(s+2j-2)
    double factorial = 2.0;
    double power = std::pow(x, -s - 1.0);
    for (int j = 1; j <= 8; ++j) {
        tail += kB2j[j - 1] / factorial * rising * power;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        power /= x * x;
    }
    return sum + tail;
}

Family OffspringLaw::family() const noexcept { return model_->family; }

std::string OffspringLaw::spec() const {
    switch (model_->family) {
        case Family::geometric_critical: return "geometric";
        case Family::dissection: return "dissection";
        case Family::zeta_stable: return "zeta:" + format_double(model_->theta);
        case Family::explicit_pmf: {
            std::string out = "pmf:";
            bool first = true;
            for (std::size_t k = 0; k < model_->masses.size(); ++k) {
                if (model_->masses[k] == 0.0) continue;
                if (!first) out += ',';
                first = false;
                out += std::to_string(k) + "=" + format_double(model_->masses[k]);
            }
            return out;
        }
    }
    return "";
}

double OffspringLaw::pmf(long k) const noexcept {
    const Model& m = *model_;
    if (k < 0) return 0.0;
    switch (m.family) {
        case Family::geometric_critical: return k > 1070 ? 0.0 : std::ldexp(1.0, static_cast<int>(-(k + 1)));
        case Family::dissection:
            if (k == 0) return m.mu0;
            if (k == 1) return 0.0;
            return std::pow(m.q, static_cast<double>(k - 1));
        case Family::zeta_stable:
            if (k == 0) return m.mu0;
            return m.c * std::pow(static_cast<double>(k), -m.theta - 1.0);
        case Family::explicit_pmf:
            return static_cast<std::size_t>(k) < m.masses.size() ? m.masses[static_cast<std::size_t>(k)] : 0.0;
    }
    return 0.0;
}

double OffspringLaw::tail(long k) const noexcept {
    const Model& m = *model_;
    if (k <= 0) return 1.0;
    switch (m.family) {
        case Family::geometric_critical: return k > 1070 ? 0.0 : std::ldexp(1.0, static_cast<int>(-k));
        case Family::dissection: {
            const long j = std::max<long>(k, 2);
            return std::pow(m.q, static_cast<double>(j - 1)) / (1.0 - m.q);
        }
        case Family::zeta_stable: return m.c * hurwitz_zeta(m.theta + 1.0, static_cast<double>(k));
        case Family::explicit_pmf:
            return static_cast<std::size_t>(k) < m.suffix.size() ? m.suffix[static_cast<std::size_t>(k)] : 0.0;
    }
    return 0.0;
}

double OffspringLaw::mass(const DegreeSet& set) const {
    double listed = 0.0;
    for (long k : set.listed()) listed += pmf(k);
    return set.is_finite() ? listed : std::max(0.0, 1.0 - listed);
}

double OffspringLaw::mean() const noexcept { return model_->mean; }
double OffspringLaw::variance() const noexcept { return model_->variance; }
bool OffspringLaw::finite_variance() const noexcept { return std::isfinite(model_->variance); }
double OffspringLaw::stability_index() const noexcept { return model_->theta; }
double OffspringLaw::leaf_probability() const noexcept { return model_->mu0; }
long OffspringLaw::span() const noexcept { return model_->span_d; }
long OffspringLaw::offset() const noexcept { return model_->offset_b; }
long OffspringLaw::leaf_gcd() const noexcept { return model_->leaf_gcd; }
double OffspringLaw::truncation_mass() const noexcept { return model_->truncation; }
double OffspringLaw::tail_constant() const noexcept { return model_->c; }
double OffspringLaw::geometric_ratio() const noexcept { return model_->q; }

std::optional<long> OffspringLaw::support_max() const noexcept {
    if (model_->family != Family::explicit_pmf) return std::nullopt;
    return static_cast<long>(model_->masses.size()) - 1;
}

std::vector<long> OffspringLaw::support_upto(long limit) const {
    std::vector<long> out;
    long top = limit;
    if (auto sm = support_max()) top = std::min(top, *sm);
    for (long k = 0; k <= top; ++k) {
        if (pmf(k) > 0.0) out.push_back(k);
    }
    return out;
}

OffspringLaw validate_law(const std::vector<double>& raw) {
    auto m = std::make_shared<Model>();
    m->family = Family::explicit_pmf;
    double total = 0.0;
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double p = raw[k];
        if (!std::isfinite(p) || p < 0.0) throw Error(Errc::NotNormalized, "pmf entries must be finite and nonnegative");
        total += p;
        mean += static_cast<double>(k) * p;
        second += static_cast<double>(k) * static_cast<double>(k) * p;
    }
    if (std::abs(total - 1.0) > kNormTol) {
        throw Error(Errc::NotNormalized, "pmf sums to " + format_double(total));
    }
    if (std::abs(mean - 1.0) > kMeanTol) throw Error(Errc::NotCritical, "mean is " + format_double(mean));

    // Drop the far tail once its cumulative mass is below the truncation threshold.
    std::vector<double> masses = raw;
    double dropped = 0.0;
    while (!masses.empty() && dropped + masses.back() < kTruncTail && masses.size() > 2) {
        dropped += masses.back();
        masses.pop_back();
    }
    while (!masses.empty() && masses.back() == 0.0) masses.pop_back();
    m->truncation = dropped;
    const double mu0 = masses.empty() ? 0.0 : masses[0];
    const double mu1 = masses.size() > 1 ? masses[1] : 0.0;
    if (mu1 >= 1.0 - kNormTol) throw Error(Errc::DegenerateMu1, "mu(1) = 1");
    if (mu0 <= 0.0) throw Error(Errc::ZeroLeafMass, "mu(0) = 0");
    long g = 0;
    for (std::size_t k = 1; k < masses.size(); ++k) {
        if (masses[k] > 0.0) g = std::gcd(g, static_cast<long>(k));
    }
    if (g != 1) throw Error(Errc::Periodic, "support has span " + std::to_string(g));

    m->masses = std::move(masses);
    m->suffix.assign(m->masses.size() + 1, 0.0);
    for (std::size_t k = m->masses.size(); k-- > 0;) m->suffix[k] = m->suffix[k + 1] + m->masses[k];
    m->mu0 = mu0;
    m->mean = mean;
    m->variance = second - mean * mean;
    m->theta = 2.0;
    return finish(std::move(m));
}

OffspringLaw validate_law(const OffspringLaw& law) {
    switch (law.family()) {
        case Family::geometric_critical: return geometric_critical();
        case Family::dissection: return dissection_law();
        case Family::zeta_stable: return zeta_stable_law(law.stability_index());
        case Family::explicit_pmf: break;
    }
    return validate_law(law.model().masses);
}

OffspringLaw geometric_critical() {
    auto m = std::make_shared<Model>();
    m->family = Family::geometric_critical;
    m->mu0 = 0.5;
    m->variance = 2.0;
    return finish(std::move(m));
}

OffspringLaw dissection_law() {
    auto m = std::make_shared<Model>();
    m->family = Family::dissection;
    const double r2 = std::sqrt(2.0);
    m->mu0 = 2.0 - r2;
    m->q = (2.0 - r2) / 2.0;
    // sum_{i>=2} i^2 q^{i-1} = (1+q)/(1-q)^3 - 1
    const double q = m->q;
    m->variance = (1.0 + q) / ((1.0 - q) * (1.0 - q) * (1.0 - q)) - 1.0 - 1.0;
    return finish(std::move(m));
}

OffspringLaw zeta_stable_law(double theta) {
    if (!(theta > 1.0 && theta < 2.0)) throw Error(Errc::ThetaOutOfRange, "zeta-stable law needs theta in (1,2)");
    auto m = std::make_shared<Model>();
    m->family = Family::zeta_stable;
    m->theta = theta;
    m->c = 1.0 / boost::math::zeta(theta);
    m->mu0 = 1.0 - m->c * boost::math::zeta(theta + 1.0);
    m->variance = std::numeric_limits<double>::infinity();
    return finish(std::move(m));
}

OffspringLaw parse_law(std::string_view spec) {
    if (spec == "geometric") return geometric_critical();
    if (spec == "dissection") return dissection_law();
    auto parse_double = [&](std::string_view text) {
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw Error(Errc::BadLawSpec, "cannot parse number '" + std::string(text) + "'");
        }
        return value;
    };
    if (spec.substr(0, 5) == "zeta:") return zeta_stable_law(parse_double(spec.substr(5)));
    if (spec.substr(0, 4) == "pmf:") {
        std::string_view body = spec.substr(4);
        std::vector<double> masses;
        while (!body.empty()) {
            const auto comma = body.find(',');
            const std::string_view item = body.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw Error(Errc::BadLawSpec, "expected k=p in '" + std::string(item) + "'");
            long k = 0;
            const std::string_view key = item.substr(0, eq);
            const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), k);
            if (ec != std::errc{} || ptr != key.data() + key.size() || k < 0) {
                throw Error(Errc::BadLawSpec, "bad child count '" + std::string(key) + "'");
            }
            if (static_cast<std::size_t>(k) >= masses.size()) masses.resize(static_cast<std::size_t>(k) + 1, 0.0);
            masses[static_cast<std::size_t>(k)] += parse_double(item.substr(eq + 1));
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
        return validate_law(masses);
    }
    throw Error(Errc::BadLawSpec, "unknown law '" + std::string(spec) + "'");
}

SupportArithmetic support_arithmetic(const std::vector<long>& support, const DegreeSet& set) {
    long first = -1;
    long d = 0;
    for (long k : support) {
        if (set.contains(k)) continue;
        if (first < 0) {
            first = k;
        } else {
            d = std::gcd(d, k - first);
        }
    }
    if (first < 0) throw Error(Errc::EmptyComplement, "support is contained in the conditioning set");
    SupportArithmetic out;
    // A single point e lies in e + dZ for every d; d = |e - 1| gives the same
    // lattice gcd as any multiple of it.
    if (d == 0) d = std::max(1L, std::abs(first - 1));
    out.span = d;
    // d = 1 admits every offset; report b = 1 so that gcd(|b-1|, d) reads naturally.
    out.offset = out.span == 1 ? 1 : first % out.span;
    out.gcd = std::gcd(std::abs(out.offset - 1), out.span);
    return out;
}

SupportArithmetic support_arithmetic(const OffspringLaw& law, const DegreeSet& set) {
    if (auto top = law.support_max()) return support_arithmetic(law.support_upto(*top), set);
    long limit = 4;
    if (!set.listed().empty()) limit += set.listed().back();
    // Infinite-support families contain every integer beyond a small threshold,
    // so a short prefix plus two consecutive points determines the span.
    return support_arithmetic(law.support_upto(limit), set);
}

double walk_scale_from_truncated_moment(const OffspringLaw& law, long n) {
    if (n < 1) throw Error(Errc::DomainError, "n must be >= 1");
    // Plateaus of K over |W_1| = |k - 1|: values 0 (k=1), 1 (k=0 or 2), 2, ...
    long top = 0;
    if (auto sm = law.support_max()) {
        top = *sm;
    } else {
        top = 2;
        while (law.tail(top) > 1e-18 && top < (1L << 40)) top *= 2;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    double best = 0.0;
    double K = 0.0;
    for (long v = 0; v <= top; ++v) {
        // |W_1| = v comes from k = 1 + v and, for v = 1, also k = 0.
        double add = law.pmf(1 + v) * static_cast<double>(v) * static_cast<double>(v);
        if (v == 1) add += law.pmf(0);
        K += add;
        if (K <= 0.0) continue;
        const double next = v == top ? std::numeric_limits<double>::infinity() : static_cast<double>(v + 1);
        const double reach = std::sqrt(K / inv_n);
        if (reach >= static_cast<double>(v)) best = std::max(best, std::min(reach, next));
    }
    // K evaluated at the supremum
    double K_at = 0.0;
    for (long v = 0; v <= top && static_cast<double>(v) <= best; ++v) {
        K_at += law.pmf(1 + v) * static_cast<double>(v) * static_cast<double>(v);
        if (v == 1) K_at += law.pmf(0);
    }
    return std::sqrt(static_cast<double>(n) * K_at);
}

double walk_scale(const OffspringLaw& law, long n) {
    if (n < 1) throw Error(Errc::DomainError, "n must be >= 1");
    if (law.finite_variance()) return std::sqrt(law.variance() * static_cast<double>(n) / 2.0);
    if (law.stability_index() >= 2.0) return walk_scale_from_truncated_moment(law, n);
    // inf{x >= 0 : P[W_1 > x] <= 1/n}; for x in [m, m+1), P[W_1 > x] = mu([m+2, inf)).
    const double target = 1.0 / static_cast<double>(n);
    auto ok = [&](long m) { return law.tail(m + 2) <= target; };
    long lo = 0;
    if (!ok(lo)) {
        long hi = 1;
        while (!ok(hi)) {
            lo = hi;
            hi *= 2;
        }
        while (hi - lo > 1) {
            const long mid = lo + (hi - lo) / 2;
            (ok(mid) ? hi : lo) = mid;
        }
        lo = hi;
    }
    const double theta = law.stability_index();
    const double g = std::abs(boost::math::tgamma(1.0 - theta));
    return std::pow(g, 1.0 / theta) * static_cast<double>(lo);
}

Pmf jump_law(const OffspringLaw& law, long max_jump) {
    Pmf nu;
    nu.offset = -1;
    long top = max_jump;
    if (auto sm = law.support_max()) top = std::min(top, *sm - 1);
    nu.mass.resize(static_cast<std::size_t>(top + 2));
    for (long i = -1; i <= top; ++i) nu.mass[static_cast<std::size_t>(i + 1)] = law.pmf(i + 1);
    nu.deficit = law.tail(top + 2);
    return nu;
}

DerivedLaws derived_laws(const OffspringLaw& law, const DegreeSet& set, long max_jump) {
    DerivedLaws out;
    out.jump = jump_law(law, max_jump);
    long top = max_jump;
    if (auto sm = law.support_max()) top = std::min(top, *sm - 1);
    const double mu0 = law.leaf_probability();
    out.nonnegative_jump.offset = 0;
    out.nonnegative_jump.mass.resize(static_cast<std::size_t>(std::max<long>(top + 1, 1)), 0.0);
    for (long i = 0; i <= top; ++i) out.nonnegative_jump.mass[static_cast<std::size_t>(i)] = law.pmf(i + 1) / (1.0 - mu0);
    out.nonnegative_jump.deficit = law.tail(top + 2) / (1.0 - mu0);
    out.nonnegative_jump.trim();

    const double mA = law.mass(set);
    // Mass of A (and of its complement) beyond the truncation point.
    double beyond_A = 0.0;
    if (set.is_finite()) {
        for (long k : set.listed()) {
            if (k > top + 1) beyond_A += law.pmf(k);
        }
    } else {
        beyond_A = law.tail(top + 2);
        for (long k : set.listed()) {
            if (k > top + 1) beyond_A -= law.pmf(k);
        }
    }
    const double beyond_all = law.tail(top + 2);
    if (mA > 0.0) {
        Pmf& rho = out.counted_jump;
        rho.offset = -1;
        rho.mass.assign(static_cast<std::size_t>(top + 2), 0.0);
        for (long i = -1; i <= top; ++i) {
            if (set.contains(i + 1)) rho.mass[static_cast<std::size_t>(i + 1)] = law.pmf(i + 1) / mA;
        }
        rho.deficit = std::max(0.0, beyond_A) / mA;
        rho.trim();
    }
    if (mA < 1.0) {
        Pmf& mp = out.uncounted_jump;
        mp.offset = -1;
        mp.mass.assign(static_cast<std::size_t>(top + 2), 0.0);
        for (long i = -1; i <= top; ++i) {
            if (!set.contains(i + 1)) mp.mass[static_cast<std::size_t>(i + 1)] = law.pmf(i + 1) / (1.0 - mA);
        }
        mp.deficit = std::max(0.0, beyond_all - beyond_A) / (1.0 - mA);
        mp.trim();
    }
    return out;
}

// ---------------------------------------------------------------------------

OffspringSampler::OffspringSampler(const OffspringLaw& law) : law_(law), family_(law.family()) {
    if (family_ == Family::geometric_critical) return;
    if (family_ == Family::explicit_pmf) {
        // Vose alias method.
        const long n = *law.support_max() + 1;
        alias_prob_.assign(static_cast<std::size_t>(n), 0.0);
        alias_index_.assign(static_cast<std::size_t>(n), 0);
        std::vector<double> scaled(static_cast<std::size_t>(n));
        double total = 0.0;
        for (long k = 0; k < n; ++k) total += law.pmf(k);
        std::vector<std::uint32_t> small, large;
        for (long k = 0; k < n; ++k) {
            scaled[static_cast<std::size_t>(k)] = law.pmf(k) / total * static_cast<double>(n);
            (scaled[static_cast<std::size_t>(k)] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(k));
        }
        while (!small.empty() && !large.empty()) {
            const auto s = small.back();
            small.pop_back();
            const auto l = large.back();
            alias_prob_[s] = scaled[s];
            alias_index_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (auto l : large) alias_prob_[l] = 1.0;
        for (auto s : small) alias_prob_[s] = 1.0;
        return;
    }
    const std::size_t table = family_ == Family::zeta_stable ? 65536 : 4096;
    cdf_.resize(table);
    for (std::size_t k = 0; k < table; ++k) cdf_[k] = 1.0 - law.tail(static_cast<long>(k) + 1);
    const std::size_t guide = table;
    guide_.resize(guide);
    std::size_t k = 0;
    for (std::size_t g = 0; g < guide; ++g) {
        const double u = static_cast<double>(g) / static_cast<double>(guide);
        while (k < table && cdf_[k] <= u) ++k;
        guide_[g] = static_cast<std::uint32_t>(std::min(k, table - 1));
    }
}

long OffspringSampler::sample_tail(double v) const {
    // Smallest k >= table size with mu([k+1, inf)) < v.
    const long table = static_cast<long>(cdf_.size());
    const double q = law_.geometric_ratio();
    double guess = 0.0;
    if (family_ == Family::dissection) {
        guess = std::floor(std::log(v * (1.0 - q)) / std::log(q)) + 1.0;
    } else {
        const double th = law_.stability_index();
        guess = std::ceil(std::pow(law_.tail_constant() / (th * v), 1.0 / th) - 0.5);
    }
    if (!(guess < 4e18)) return std::numeric_limits<long>::max();
    long k = std::max(table, static_cast<long>(guess));
    while (k > table && law_.tail(k) < v) --k;
    while (law_.tail(k + 1) >= v) ++k;
    return k;
}

long OffspringSampler::sample_table(Rng& rng) const {
    const std::uint64_t bits = rng() >> 11;
    const double u = static_cast<double>(bits) * 0x1.0p-53;
    const std::size_t table = cdf_.size();
    std::size_t k = guide_[static_cast<std::size_t>(u * static_cast<double>(guide_.size()))];
    while (k < table && cdf_[k] <= u) ++k;
    if (k < table) return static_cast<long>(k);
    const double v = static_cast<double>((std::uint64_t{1} << 53) - bits) * 0x1.0p-53;
    return sample_tail(v);
}

long OffspringSampler::operator()(Rng& rng) const {
    switch (family_) {
        case Family::geometric_critical: {
            long k = 0;
            while (true) {
                const std::uint64_t r = rng();
                if (r != 0) return k + std::countr_zero(r);
                k += 64;
            }
        }
        case Family::explicit_pmf: {
            const auto i = static_cast<std::size_t>(rng.below(alias_prob_.size()));
            return rng.uniform() < alias_prob_[i] ? static_cast<long>(i) : static_cast<long>(alias_index_[i]);
        }
        case Family::dissection:
        case Family::zeta_stable: return sample_table(rng);
    }
    return 0;
}

}  // namespace gwleaf
