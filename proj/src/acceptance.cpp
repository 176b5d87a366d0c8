#include "gwleaf/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "gwleaf/error.hpp"
#include "gwleaf/exactlaw.hpp"
#include "gwleaf/maxdeg.hpp"
#include "gwleaf/offspring.hpp"
#include "gwleaf/parallel.hpp"
#include "gwleaf/sampler.hpp"
#include "gwleaf/suites.hpp"
#include "gwleaf/thresholds.hpp"
#include "gwleaf/treecode.hpp"

namespace gwleaf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

VerificationReport start_report(const char* suite, const std::string& law, std::uint64_t seed) {
    VerificationReport r;
    r.suite = suite;
    r.law = law;
    r.seed = seed;
    return r;
}

void finish(VerificationReport& r, Clock::time_point start, double budget_seconds) {
    r.wall_seconds = seconds_since(start);
    r.checks.push_back(Check::make("wall_seconds", r.wall_seconds, Relation::less, budget_seconds));
    r.finalize();
}

// Appends the checks of a sub-report under a label.
void absorb(VerificationReport& into, const VerificationReport& part, const std::string& label) {
    for (Check c : part.checks) {
        c.name = label + ":" + c.name;
        into.checks.push_back(std::move(c));
    }
    into.samples += part.samples;
    for (const auto& note : part.notes) into.notes.push_back(label + ": " + note);
    into.data[label] = to_json(part);
}

bool round_trips(const PlaneTree& tree) {
    const CodingTriple c = encode(tree);
    std::vector<long> inc(c.lukasiewicz.size() - 1);
    for (std::size_t i = 0; i + 1 < c.lukasiewicz.size(); ++i) inc[i] = c.lukasiewicz[i + 1] - c.lukasiewicz[i];
    if (decode(std::span<const long>(inc)) != tree) return false;
    const auto h = height_from_lukasiewicz(c.lukasiewicz);
    return std::equal(h.begin(), h.end(), c.height.begin());
}

// ---------------------------------------------------------------------------

VerificationReport coding_bijection(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    const OffspringLaw law = geometric_critical();
    auto r = start_report("coding-bijection", law.spec(), opt.seed + 1);
    // Every plane tree with at most 10 edges.
    const long max_vertices = 11;
    long enumerated = 0;
    long failures = 0;
    EnumerationOptions all;
    enumerate_trees(law, max_vertices, [&](std::span<const int> counts, double) {
        ++enumerated;
        if (!round_trips(PlaneTree::from_child_counts(std::vector<int>(counts.begin(), counts.end())))) ++failures;
    }, all);
    long catalan_sum = 0;
    long catalan = 1;  // C_0
    for (long k = 0; k < max_vertices; ++k) {
        catalan_sum += catalan;
        catalan = catalan * 2 * (2 * k + 1) / (k + 2);
    }
    // Random trees of size 1..200.
    const long random_trees = 100'000;
    std::vector<char> bad(static_cast<std::size_t>(random_trees));
    SamplerConfig config;
    config.seed = r.seed;
    parallel_for(random_trees, opt.workers ? opt.workers : worker_count(), [&](long i, unsigned) {
        const PlaneTree t = sample_conditioned_size(law, 1 + i % 200, config, static_cast<std::uint64_t>(i));
        bad[static_cast<std::size_t>(i)] = !round_trips(t);
    });
    const long random_failures = std::count(bad.begin(), bad.end(), 1);
    r.samples = enumerated + random_trees;
    r.parameters = {{"max_vertices", max_vertices}, {"random_trees", random_trees}};
    r.checks.push_back(Check::make("enumerated_trees", static_cast<double>(enumerated), Relation::within,
                                   static_cast<double>(catalan_sum), static_cast<double>(catalan_sum)));
    r.checks.push_back(Check::make("enumerated_failures", static_cast<double>(failures), Relation::less_equal, 0.0));
    r.checks.push_back(Check::make("random_failures", static_cast<double>(random_failures), Relation::less_equal, 0.0));
    finish(r, start, 10.0);
    return r;
}

VerificationReport cyclic_lemma(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    auto r = start_report("cyclic-lemma", "alphabet {-1,0,1,2}", opt.seed + 2);
    long words = 0;
    long failures = 0;
    for (long p = 1; p <= 8; ++p) {
        std::vector<long> x(static_cast<std::size_t>(p), -1);
        while (true) {
            long sum = 0;
            for (long v : x) sum += v;
            if (sum >= -3 && sum <= -1) {
                ++words;
                if (count_excursion_shifts(x, -sum) != -sum) ++failures;
            }
            std::size_t k = 0;
            while (k < x.size() && x[k] == 2) x[k++] = -1;
            if (k == x.size()) break;
            ++x[k];
        }
    }
    r.samples = words;
    r.parameters = {{"max_length", 8}, {"max_j", 3}};
    r.checks.push_back(Check::make("words_checked", static_cast<double>(words), Relation::greater, 0.0));
    r.checks.push_back(Check::make("failures", static_cast<double>(failures), Relation::less_equal, 0.0));
    finish(r, start, 60.0);
    return r;
}

// Exact P[zeta = p, zeta_A = n] for p <= max_size by summing enumerated weights.
std::map<std::pair<long, long>, double> enumerated_joint(const OffspringLaw& law, const DegreeSet& set, long max_size) {
    std::map<std::pair<long, long>, double> out;
    enumerate_trees(law, max_size, [&](std::span<const int> counts, double weight) {
        long hits = 0;
        for (int k : counts) hits += set.contains(k);
        out[{static_cast<long>(counts.size()), hits}] += weight;
    });
    return out;
}

VerificationReport joint_law_oracle(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    auto r = start_report("joint-law-oracle", "geometric, dissection", opt.seed + 3);
    const long max_size = 12;
    for (const OffspringLaw& law : {geometric_critical(), dissection_law()}) {
        for (const DegreeSet& set : {DegreeSet::leaves(), DegreeSet::finite({2}), DegreeSet::cofinite({1})}) {
            const auto oracle = enumerated_joint(law, set, max_size);
            double worst = 0.0;
            long compared = 0;
            for (long n = 1; n <= max_size; ++n) {
                const auto row = size_count_probabilities(law, set, 1, n, n, max_size);
                for (long p = n; p <= max_size; ++p) {
                    auto it = oracle.find({p, n});
                    const double want = it == oracle.end() ? 0.0 : it->second;
                    worst = std::max(worst, std::abs(row[static_cast<std::size_t>(p - n)] - want));
                    ++compared;
                }
            }
            r.samples += compared;
            r.checks.push_back(Check::make("max_abs_error[" + law.spec() + ", A=" + set.to_string() + "]", worst,
                                           Relation::less, 1e-12));
        }
    }
    r.parameters = {{"max_size", max_size}};
    finish(r, start, 120.0);
    return r;
}

VerificationReport forest_size_identity(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    auto r = start_report("size-law-oracle", "geometric, dissection", opt.seed + 4);
    const long max_size = 12;
    for (const OffspringLaw& law : {geometric_critical(), dissection_law()}) {
        std::vector<double> by_size(static_cast<std::size_t>(max_size + 1), 0.0);
        enumerate_trees(law, max_size, [&](std::span<const int> counts, double w) { by_size[counts.size()] += w; });
        double worst = 0.0;
        for (long p = 1; p <= max_size; ++p)
            worst = std::max(worst, std::abs(forest_size_probability(law, 1, p) - by_size[static_cast<std::size_t>(p)]));
        r.samples += max_size;
        r.checks.push_back(Check::make("max_abs_error[" + law.spec() + "]", worst, Relation::less, 1e-12));
    }
    r.parameters = {{"max_size", max_size}};
    r.wall_seconds = seconds_since(start);
    r.finalize();
    return r;
}

VerificationReport sampler_exactness(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    const OffspringLaw law = geometric_critical();
    auto r = start_report("sampler-exactness", law.spec(), opt.seed + 5);
    struct Case {
        const char* label;
        Mode mode;
        DegreeSet set;
        long n;
    };
    const Case cases[] = {{"size n=3", Mode::size, DegreeSet::naturals(), 3},
                          {"leaves n=2", Mode::leaves, DegreeSet::leaves(), 2},
                          {"leaves n=3", Mode::leaves, DegreeSet::leaves(), 3},
                          {"set A={2} n=1", Mode::set_count, DegreeSet::finite({2}), 1}};
    for (const auto& c : cases) {
        ExactnessParams p;
        p.mode = c.mode;
        p.set = c.set;
        p.n = c.n;
        p.reps = 100'000;
        p.seed = r.seed;
        p.allow_low_coverage = true;
        p.workers = opt.workers;
        absorb(r, suite_sampler_exactness(law, p), c.label);
    }
    r.parameters = {{"reps", 100'000}};
    finish(r, start, 300.0);
    return r;
}

VerificationReport leaf_prefactor(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    auto r = suite_asymptotics(geometric_critical(), Quantity::leaves, {50, 100, 200});
    r.seed = opt.seed + 6;
    finish(r, start, 180.0);
    return r;
}

VerificationReport size_asymptotics(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    auto r = suite_asymptotics(geometric_critical(), Quantity::size, {100, 200, 400});
    r.seed = opt.seed + 7;
    finish(r, start, 60.0);
    return r;
}

VerificationReport concentration(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    ConcentrationParams p;
    p.seed = opt.seed + 8;
    p.workers = opt.workers;
    auto r = suite_concentration(geometric_critical(), p);
    finish(r, start, 300.0);
    return r;
}

VerificationReport dissection_max_degree(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    const OffspringLaw law = dissection_law();
    auto r = start_report("max-degree-log-window", law.spec(), opt.seed + 9);
    const long n = 10'000;
    const long reps = 2000;
    SamplerConfig config;
    config.seed = r.seed;
    const auto study = max_degree_study(law, n, reps, config, thresholds::kCoverageEps, opt.workers);
    const double base = 2.0 + std::numbers::sqrt2;
    const double coverage = log_window_coverage(study, base, thresholds::kLogWindowC);
    r.samples = reps;
    r.parameters = {{"n", n}, {"reps", reps}, {"base", base}, {"c", thresholds::kLogWindowC}};
    r.data["median_delta"] = median(std::vector<double>(study.delta.begin(), study.delta.end()));
    r.checks.push_back(Check::make("log_window_coverage", coverage, Relation::greater_equal, thresholds::kCoverage));
    finish(r, start, 600.0);
    return r;
}

VerificationReport scaling_two_sample(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    ScalingParams p;
    p.n = 300;
    p.reps = 5000;
    p.seed = opt.seed + 10;
    p.functionals = {"max_contour", "max_lukasiewicz", "max_jump"};
    p.workers = opt.workers;
    auto r = suite_scaling_limit(geometric_critical(), p);
    finish(r, start, 600.0);
    return r;
}

VerificationReport stable_max_degree(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    const OffspringLaw law = zeta_stable_law(1.5);
    auto r = start_report("max-degree-stable", law.spec(), opt.seed + 11);
    const long reps = 2000;
    SamplerConfig config;
    config.seed = r.seed;
    const auto small = max_degree_study(law, 2000, reps, config, 0.0, opt.workers);
    const auto large = max_degree_study(law, 4000, reps, config, 0.0, opt.workers);
    r.samples = 2 * reps;
    r.parameters = {{"n", {2000, 4000}}, {"reps", reps}};
    r.data["medians"] = {small.median_normalized, large.median_normalized};
    r.checks.push_back(Check::make("median[n=2000]", small.median_normalized, Relation::greater, 0.0));
    r.checks.push_back(Check::make("median[n=4000]", large.median_normalized, Relation::greater, 0.0));
    r.checks.push_back(Check::make("median_relative_change", std::abs(large.median_normalized / small.median_normalized - 1.0),
                                   Relation::less, thresholds::kMedianStability));
    finish(r, start, 600.0);
    return r;
}

VerificationReport vervaat_identities(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    auto r = start_report("vervaat", "all words", opt.seed + 12);
    long failures = 0;
    auto expect = [&](bool ok) { failures += !ok; };
    // Unit identities.
    expect(vervaat(std::vector<long>{-1, 2, -1, -1}) == std::vector<long>{2, -1, -1, -1});
    expect(vervaat(std::vector<long>{-1}) == std::vector<long>{-1});
    expect(vervaat(std::vector<long>{1, -1, -1}) == std::vector<long>{1, -1, -1});
    expect(cyclic_shift(std::vector<long>{-1, 2, -1, -1}, 1) == std::vector<long>{2, -1, -1, -1});
    try {
        vervaat(std::vector<long>{0, -1, -1});
        expect(false);
    } catch (const Error& e) {
        expect(e.code() == Errc::NotSummingToMinusOne);
    }
    // All words of length k <= 6 over {-1, ..., k-2} summing to -1 (every word
    // with increments >= -1 and sum -1 has entries <= k-2).
    long words = 0;
    long uniformity_failures = 0;
    long independence_failures = 0;
    long last_step_failures = 0;
    for (long k = 1; k <= 6; ++k) {
        std::vector<long> by_index(static_cast<std::size_t>(k + 1), 0);
        std::map<std::vector<long>, std::vector<long>> by_image;     // V(x) -> counts per i*
        std::map<std::vector<long>, long> ending_in_down_step;       // V(x) -> #{x : x_k = -1}
        std::vector<long> x(static_cast<std::size_t>(k), -1);
        const long top = std::max(-1L, k - 2);
        while (true) {
            long sum = 0;
            for (long v : x) sum += v;
            if (sum == -1) {
                ++words;
                const long i = vervaat_index(x);
                const auto v = vervaat(x);
                const bool excursion = is_forest_excursion(v, 1);
                auto sorted_x = x;
                auto sorted_v = v;
                std::sort(sorted_x.begin(), sorted_x.end());
                std::sort(sorted_v.begin(), sorted_v.end());
                expect(excursion && sorted_x == sorted_v && v == cyclic_shift(x, i % k) && vervaat(v) == v);
                ++by_index[static_cast<std::size_t>(i)];
                auto& slot = by_image[v];
                slot.resize(static_cast<std::size_t>(k + 1), 0);
                ++slot[static_cast<std::size_t>(i)];
                if (x.back() == -1) ++ending_in_down_step[v];
            }
            std::size_t pos = 0;
            while (pos < x.size() && x[pos] == top) x[pos++] = -1;
            if (pos == x.size()) break;
            ++x[pos];
        }
        // i* is uniform on {1..k}.
        for (long i = 2; i <= k; ++i) uniformity_failures += by_index[static_cast<std::size_t>(i)] != by_index[1];
        // Given V(x) = v, i* takes every value exactly once: independence.
        for (const auto& [v, counts] : by_image) {
            for (long i = 1; i <= k; ++i) independence_failures += counts[static_cast<std::size_t>(i)] != 1;
            // Among the k preimages of v, the number ending with a -1 step is the number of -1 steps of v.
            const long downs = std::count(v.begin(), v.end(), -1L);
            auto it = ending_in_down_step.find(v);
            last_step_failures += (it == ending_in_down_step.end() ? 0 : it->second) != downs;
        }
    }
    r.samples = words;
    r.parameters = {{"max_length", 6}};
    r.checks.push_back(Check::make("identity_failures", static_cast<double>(failures), Relation::less_equal, 0.0));
    r.checks.push_back(Check::make("uniformity_failures", static_cast<double>(uniformity_failures), Relation::less_equal, 0.0));
    r.checks.push_back(Check::make("independence_failures", static_cast<double>(independence_failures), Relation::less_equal, 0.0));
    r.checks.push_back(Check::make("last_step_failures", static_cast<double>(last_step_failures), Relation::less_equal, 0.0));
    r.wall_seconds = seconds_since(start);
    r.finalize();
    return r;
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
    static const std::vector<Criterion> list = {
        {1, "coding bijection on all trees with <= 10 edges and 1e5 random trees", coding_bijection},
        {2, "cyclic lemma on every word over {-1,0,1,2} of length <= 8", cyclic_lemma},
        {3, "joint size/count law against enumeration, sizes <= 12", joint_law_oracle},
        {4, "forest size law against enumeration, sizes <= 12", forest_size_identity},
        {5, "sampler exactness: TV < 0.01 and chi-square at 1e5 samples", sampler_exactness},
        {6, "leaf-count local limit prefactor, n in {50,100,200}", leaf_prefactor},
        {7, "size local limit ratio at n = 400", size_asymptotics},
        {8, "leaf-conditioned size concentration, n in {50,100,200}", concentration},
        {9, "dissection max degree within log_b n -+ 3 log_b log_b n", dissection_max_degree},
        {10, "two-sample KS: leaf vs size conditioning, n = 300", scaling_two_sample},
        {11, "stable max degree median, n = 2000 vs 4000", stable_max_degree},
        {12, "Vervaat identities and uniform rotation index, k <= 6", vervaat_identities},
    };
    return list;
}

std::vector<VerificationReport> run_acceptance_battery(const AcceptanceOptions& options, const std::vector<int>& ids,
                                                       const std::function<void(const Criterion&, const VerificationReport&)>& done) {
    std::vector<VerificationReport> out;
    for (const auto& c : acceptance_criteria()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
        VerificationReport r;
        try {
            r = c.run(options);
        } catch (const std::exception& e) {
            r.suite = "criterion-" + std::to_string(c.id);
            r.notes.push_back(std::string("execution error: ") + e.what());
            r.pass = false;
        }
        r.parameters["criterion"] = c.id;
        if (done) done(c, r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace gwleaf
