#include "gwleaf/maxdeg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gwleaf/error.hpp"
#include "gwleaf/format.hpp"
#include "gwleaf/parallel.hpp"
#include "gwleaf/treecode.hpp"

namespace gwleaf {

long degree_scale(const OffspringLaw& law, long n) {
    if (n < 1) throw Error(Errc::DomainError, "n must be >= 1");
    const double target = 1.0 / static_cast<double>(n);
    auto ok = [&](long k) { return law.tail(k) >= target; };
    if (!ok(1)) throw Error(Errc::DomainError, "mu([1, inf)) < 1/n: no admissible degree");
    long lo = 1;
    long hi = 2;
    while (ok(hi)) {
        lo = hi;
        if (hi > (1L << 60)) return hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

HypothesisCheck check_decay_regularity(const OffspringLaw& law) {
    if (!law.finite_variance()) throw Error(Errc::DomainError, "decay regularity check needs finite variance");
    HypothesisCheck out;
    if (auto top = law.support_max()) {
        out.consistent = true;
        out.finite_support = true;
        out.radius = std::numeric_limits<double>::infinity();
        out.root_radius = out.radius;
        out.range_lo = 0;
        out.range_hi = *top;
        out.diagnostics = "finite support: mu(k) = 0 beyond k = " + std::to_string(*top);
        return out;
    }
    long mode = 0;
    for (long k = 1; k <= 64; ++k) {
        if (law.pmf(k) > law.pmf(mode)) mode = k;
    }
    out.range_lo = mode + 1;
    out.range_hi = mode + 200;
    long nonzero = 0;
    for (long k = out.range_lo; k <= out.range_hi; ++k) {
        if (law.pmf(k) > 0.0) ++nonzero;
    }
    if (nonzero < 10) throw Error(Errc::InsufficientSupport, "fewer than 10 nonzero terms beyond the mode");
    const long K = out.range_hi;
    const double ratio = law.pmf(K + 1) / law.pmf(K);
    const double root = std::exp(std::log(law.pmf(K)) / static_cast<double>(K));
    out.radius = 1.0 / ratio;
    out.root_radius = 1.0 / root;
    // The root sequence must approach 1/R monotonically over the second half of the range.
    bool monotone = true;
    double previous = std::numeric_limits<double>::infinity();
    for (long k = (out.range_lo + K) / 2; k <= K; ++k) {
        const double gap = std::abs(std::exp(std::log(law.pmf(k)) / static_cast<double>(k)) - ratio);
        if (gap > previous * (1.0 + 1e-12)) monotone = false;
        previous = gap;
    }
    const bool radius_ok = out.radius > 1.0 + 1e-9;
    const bool agree = std::abs(out.root_radius / out.radius - 1.0) < 0.05;
    out.consistent = radius_ok && agree && monotone;
    out.diagnostics = "R(ratio)=" + format_double(out.radius) + " R(root)=" + format_double(out.root_radius) +
                      (monotone ? " root gap monotone" : " root gap not monotone");
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error(Errc::EmptySample, "median of an empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
    return 0.5 * (lower + upper);
}

MaxDegreeStudy max_degree_study(const OffspringLaw& law, long n, long reps, const SamplerConfig& config, double eps,
                                unsigned workers) {
    if (reps < 1) throw Error(Errc::InvalidCount, "reps must be >= 1");
    MaxDegreeStudy s;
    s.law_spec = law.spec();
    s.n = n;
    s.reps = reps;
    s.seed = config.seed;
    s.eps = eps;
    s.mode = law.finite_variance() ? Normalization::by_D : Normalization::by_B;
    s.B_n = walk_scale(law, n);
    if (s.mode == Normalization::by_D) s.D = degree_scale(law, n);
    s.delta.resize(static_cast<std::size_t>(reps));
    s.zeta.resize(static_cast<std::size_t>(reps));
    s.lambda.resize(static_cast<std::size_t>(reps));
    s.normalized.resize(static_cast<std::size_t>(reps));

    if (workers == 0) workers = worker_count();
    const auto children = std::make_shared<const OffspringSampler>(law);
    std::vector<std::unique_ptr<TreeSampler>> samplers;
    for (unsigned w = 0; w < workers; ++w) samplers.push_back(std::make_unique<TreeSampler>(law, config, children));
    const double weight = std::pow(law.leaf_probability(), 1.0 / law.stability_index());
    parallel_for(reps, workers, [&](long r, unsigned w) {
        Rng rng(config.seed, static_cast<std::uint64_t>(r));
        const PlaneTree tree = samplers[w]->conditioned_leaves(n, rng);
        const TreeStatistics st = statistics(tree);
        const auto i = static_cast<std::size_t>(r);
        s.delta[i] = st.max_degree;
        s.zeta[i] = st.zeta;
        s.lambda[i] = st.lambda;
        s.normalized[i] = s.mode == Normalization::by_D ? static_cast<double>(st.max_degree) / static_cast<double>(s.D)
                                                        : weight * static_cast<double>(st.max_degree) / s.B_n;
    });
    if (s.mode == Normalization::by_D) {
        long inside = 0;
        const double lo = (1.0 - eps) * static_cast<double>(s.D);
        const double hi = (1.0 + eps) * static_cast<double>(s.D);
        for (long d : s.delta) {
            if (static_cast<double>(d) >= lo && static_cast<double>(d) <= hi) ++inside;
        }
        s.coverage = static_cast<double>(inside) / static_cast<double>(reps);
    }
    s.median_normalized = median(s.normalized);
    return s;
}

double log_window_coverage(const MaxDegreeStudy& study, double base, double c) {
    if (study.delta.empty()) throw Error(Errc::EmptySample, "study has no samples");
    const double lb = std::log(static_cast<double>(study.n)) / std::log(base);
    const double llb = std::log(lb) / std::log(base);
    const double lo = lb - c * llb;
    const double hi = lb + c * llb;
    long inside = 0;
    for (long d : study.delta) {
        if (static_cast<double>(d) >= lo && static_cast<double>(d) <= hi) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(study.delta.size());
}

TailBounds degree_tail_bounds(const OffspringLaw& law, long n, double eps) {
    if (eps < 0.0) throw Error(Errc::DomainError, "eps must be >= 0");
    TailBounds b;
    b.D = degree_scale(law, n);
    const double nn = static_cast<double>(n);
    const double D = static_cast<double>(b.D);
    // mu([x, inf)) for real x is the tail at ceil(x).
    b.lower_tail = law.tail(static_cast<long>(std::ceil((1.0 - eps) * D)));
    b.upper_tail = law.tail(static_cast<long>(std::ceil((1.0 + eps) * D)));
    b.lower_bound = std::pow(nn, -1.0 / (1.0 + eps / 3.0));
    b.upper_bound = std::pow(nn, -1.0 - eps / 3.0);
    b.lower_holds = b.lower_tail >= b.lower_bound;
    b.upper_holds = b.upper_tail <= b.upper_bound;
    b.lower_slack = b.lower_tail / b.lower_bound;
    b.upper_slack = b.upper_tail > 0.0 ? b.upper_bound / b.upper_tail : std::numeric_limits<double>::infinity();
    return b;
}

}  // namespace gwleaf
