#include "gwleaf/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include "gwleaf/error.hpp"
#include "gwleaf/exactlaw.hpp"
#include "gwleaf/limits.hpp"
#include "gwleaf/parallel.hpp"
#include "gwleaf/stats.hpp"
#include "gwleaf/thresholds.hpp"

namespace gwleaf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Draws `reps` trees, tree r from stream (seed, stream_base + r), and hands
// each to `record(r, tree)`.
template <class Record>
void draw_trees(const OffspringLaw& law, Mode mode, long n, const DegreeSet& set, long reps, std::uint64_t seed,
                std::uint64_t stream_base, unsigned workers, Record&& record) {
    if (workers == 0) workers = worker_count();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<long>(reps, 1))));
    SamplerConfig config;
    config.seed = seed;
    const auto children = std::make_shared<const OffspringSampler>(law);
    std::vector<std::unique_ptr<TreeSampler>> samplers;
    for (unsigned w = 0; w < workers; ++w) samplers.push_back(std::make_unique<TreeSampler>(law, config, children));
    parallel_for(reps, workers, [&](long r, unsigned w) {
        Rng rng(seed, stream_base + static_cast<std::uint64_t>(r));
        record(r, samplers[w]->sample(mode, n, set, rng));
    });
}

}  // namespace

// ---------------------------------------------------------------------------

VerificationReport suite_concentration(const OffspringLaw& law, const ConcentrationParams& params) {
    namespace th = thresholds;
    const auto start = Clock::now();
    VerificationReport rep;
    rep.suite = "concentration";
    rep.law = law.spec();
    rep.seed = params.seed;
    rep.parameters = {{"n_list", params.n_list},
                      {"reps", params.reps},
                      {"eta", th::kProfileEta},
                      {"delta", th::kProfileDelta},
                      {"thresholds_version", th::kVersion}};
    const double mu0 = law.leaf_probability();
    std::vector<long> tested;
    std::vector<double> window_rates;
    std::vector<double> profile_rates;
    nlohmann::json rows = nlohmann::json::array();
    for (long n : params.n_list) {
        if (n < th::kSmallNExempt) {
            rep.notes.push_back("n=" + std::to_string(n) + ": small-n exempt");
            rows.push_back({{"n", n}, {"exempt", true}});
            continue;
        }
        std::vector<char> window(static_cast<std::size_t>(params.reps));
        std::vector<char> profile(static_cast<std::size_t>(params.reps));
        const double cut = th::kProfileDelta * std::pow(static_cast<double>(n), -0.25);
        draw_trees(law, Mode::leaves, n, DegreeSet::leaves(), params.reps, params.seed,
                   static_cast<std::uint64_t>(n) << 32, params.workers, [&](long r, const PlaneTree& tree) {
                       const TreeStatistics st = statistics(tree);
                       const double z = static_cast<double>(st.zeta);
                       window[static_cast<std::size_t>(r)] =
                           std::abs(z - static_cast<double>(n) / mu0) > std::pow(z, 0.75);
                       double worst = 0.0;
                       const long s0 = std::max(1L, static_cast<long>(std::ceil(th::kProfileEta * z)));
                       for (long s = s0; s <= st.zeta; ++s) {
                           const double dev = std::abs(static_cast<double>(st.leaf_profile[static_cast<std::size_t>(s)]) /
                                                           static_cast<double>(s) -
                                                       mu0);
                           worst = std::max(worst, dev);
                       }
                       profile[static_cast<std::size_t>(r)] = worst >= cut;
                   });
        const double reps = static_cast<double>(params.reps);
        const double wr = static_cast<double>(std::count(window.begin(), window.end(), 1)) / reps;
        const double pr = static_cast<double>(std::count(profile.begin(), profile.end(), 1)) / reps;
        tested.push_back(n);
        window_rates.push_back(wr);
        profile_rates.push_back(pr);
        rows.push_back({{"n", n}, {"window_rate", wr}, {"profile_rate", pr}, {"profile_cut", cut}});
        rep.samples += params.reps;
        // Thresholds shrink like n^{-1/2} around their value at n = 100.
        const double scale = std::sqrt(100.0 / static_cast<double>(n));
        rep.checks.push_back(
            Check::make("window_rate[n=" + std::to_string(n) + "]", wr, Relation::less, th::kWindowRate * scale));
        rep.checks.push_back(
            Check::make("profile_rate[n=" + std::to_string(n) + "]", pr, Relation::less, th::kProfileRate * scale));
    }
    rep.data["rows"] = rows;
    if (tested.empty()) {
        rep.exempt = true;
        rep.notes.push_back("every n is small-n exempt");
    } else {
        double window_rise = -std::numeric_limits<double>::infinity();
        double profile_rise = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < tested.size(); ++i) {
            window_rise = std::max(window_rise, window_rates[i] - window_rates[i - 1]);
            profile_rise = std::max(profile_rise, profile_rates[i] - profile_rates[i - 1]);
        }
        if (tested.size() > 1) {
            rep.checks.push_back(Check::make("window_rate_max_increase", window_rise, Relation::less_equal, 0.0));
            rep.checks.push_back(Check::make("profile_rate_max_increase", profile_rise, Relation::less_equal, 0.0));
        }
    }
    rep.wall_seconds = seconds_since(start);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------

VerificationReport suite_sampler_exactness(const OffspringLaw& law, const ExactnessParams& params) {
    namespace th = thresholds;
    const auto start = Clock::now();
    VerificationReport rep;
    rep.suite = "exactness";
    rep.law = law.spec();
    rep.seed = params.seed;
    rep.samples = params.reps;

    DegreeSet set = params.set;
    if (params.mode == Mode::leaves) set = DegreeSet::leaves();
    if (params.mode == Mode::size) set = DegreeSet::naturals();
    if (params.mode != Mode::size && params.mode != Mode::leaves && params.mode != Mode::set_count)
        throw Error(Errc::DomainError, "exactness suite supports the size, leaves and set-count modes");
    rep.parameters = {{"mode", mode_name(params.mode)},
                      {"set", set.to_string()},
                      {"n", params.n},
                      {"reps", params.reps},
                      {"cell_max_size", th::kShapeCellMaxSize},
                      {"thresholds_version", th::kVersion}};

    // Normalizer and enumeration coverage.
    const long n = params.n;
    double total = 0.0;
    double covered = 0.0;
    if (params.mode == Mode::size) {
        total = forest_size_probability(law, 1, n);
        covered = n <= kMaxEnumerationSize ? total : 0.0;
    } else {
        total = count_probability(law, set, n).probability;
        if (n <= kMaxEnumerationSize) {
            const auto by_size = size_count_probabilities(law, set, 1, n, n, kMaxEnumerationSize);
            for (double v : by_size) covered += v;
        }
    }
    if (!(total > 0.0)) throw Error(Errc::ImpossibleCount, "conditioning event has probability zero");
    const double coverage = covered / total;
    rep.data["coverage"] = coverage;
    if (coverage < th::kEnumerationCoverage) {
        if (!params.allow_low_coverage)
            throw Error(Errc::EnumerationCoverageTooLow,
                        "trees of size <= 18 carry only " + std::to_string(coverage) + " of the conditional mass");
        rep.notes.push_back("enumeration coverage " + std::to_string(coverage) +
                            " below the precondition; larger shapes form one exact overflow cell");
    }

    // Exact cells: admissible shapes up to the cell limit, then overflow.
    std::map<std::vector<int>, std::size_t> index;
    std::vector<double> exact;
    EnumerationOptions opts;
    opts.skip_zero_weight = true;
    if (params.mode == Mode::leaves) opts.max_leaves = n;
    const long cell_max = params.mode == Mode::size ? std::min(n, th::kShapeCellMaxSize) : th::kShapeCellMaxSize;
    enumerate_trees(law, cell_max, [&](std::span<const int> counts, double weight) {
        long hits = 0;
        for (int k : counts) hits += set.contains(k);
        if (hits != n || weight <= 0.0) return;
        index.emplace(std::vector<int>(counts.begin(), counts.end()), exact.size());
        exact.push_back(weight / total);
    }, opts);
    double listed = 0.0;
    for (double p : exact) listed += p;
    const double overflow = std::max(0.0, 1.0 - listed);
    const std::size_t overflow_cell = exact.size();
    exact.push_back(overflow);
    rep.data["cells"] = exact.size();
    rep.data["overflow_probability"] = overflow;

    // Empirical cells.
    std::vector<long> cell_of(static_cast<std::size_t>(params.reps));
    draw_trees(law, params.mode, n, set, params.reps, params.seed, 0, params.workers,
               [&](long r, const PlaneTree& tree) {
                   long cell = static_cast<long>(overflow_cell);
                   if (tree.size() <= cell_max) {
                       auto counts = tree.child_counts();
                       auto it = index.find(std::vector<int>(counts.begin(), counts.end()));
                       cell = it == index.end() ? -1 : static_cast<long>(it->second);
                   }
                   cell_of[static_cast<std::size_t>(r)] = cell;
               });
    std::vector<double> observed(exact.size(), 0.0);
    long unexpected = 0;
    for (long c : cell_of) {
        if (c < 0) ++unexpected;
        else observed[static_cast<std::size_t>(c)] += 1.0;
    }
    const double reps = static_cast<double>(params.reps);
    std::vector<double> freq(observed.size());
    std::vector<double> expected(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        freq[i] = observed[i] / reps;
        expected[i] = exact[i] * reps;
    }
    const double tv = tv_distance(freq, exact);
    const Chi2Result chi2 = chi2_gof(observed, expected, th::kMinExpectedCount);
    rep.data["expected_tv_noise"] = expected_tv_noise(exact, params.reps);
    rep.data["chi2_statistic"] = chi2.statistic;
    rep.data["chi2_cells"] = chi2.cells;
    rep.checks.push_back(Check::make("tv", tv, Relation::less, th::kTvMax));
    rep.checks.push_back(Check::make("chi2_p_value", chi2.p_value, Relation::greater, th::kChi2Alpha));
    rep.checks.push_back(Check::make("inadmissible_shapes", static_cast<double>(unexpected), Relation::less_equal, 0.0));
    rep.wall_seconds = seconds_since(start);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------

Quantity parse_quantity(const std::string& text) {
    if (text == "leaves") return Quantity::leaves;
    if (text == "size") return Quantity::size;
    throw Error(Errc::DomainError, "unknown quantity: " + text);
}

const char* quantity_name(Quantity q) noexcept { return q == Quantity::leaves ? "leaves" : "size"; }

std::vector<AsymptoticRow> asymptotic_rows(const OffspringLaw& law, Quantity quantity, const std::vector<long>& n_list) {
    std::vector<AsymptoticRow> rows;
    for (long n : n_list) {
        AsymptoticRow row;
        row.n = n;
        if (quantity == Quantity::leaves) {
            row.exact = count_probability(law, DegreeSet::leaves(), n).probability;
            try {
                row.predicted = predicted_leaf_probability(law, n);
            } catch (const Error& e) {
                if (e.code() != Errc::LatticeViolation) throw;
                row.predicted = 0.0;
            }
        } else {
            row.exact = forest_size_probability(law, 1, n);
            row.predicted = predicted_size_probability(law, n).first;
        }
        row.ratio = row.predicted > 0.0 ? row.exact / row.predicted : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

VerificationReport suite_asymptotics(const OffspringLaw& law, Quantity quantity, const std::vector<long>& n_list) {
    namespace th = thresholds;
    const auto start = Clock::now();
    VerificationReport rep;
    rep.suite = "asymptotics";
    rep.law = law.spec();
    rep.parameters = {{"quantity", quantity_name(quantity)}, {"n_list", n_list}, {"thresholds_version", th::kVersion}};
    const auto rows = asymptotic_rows(law, quantity, n_list);
    nlohmann::json jrows = nlohmann::json::array();
    std::vector<double> gaps;
    double off_lattice_max = 0.0;
    bool any_off_lattice = false;
    for (const auto& r : rows) {
        jrows.push_back({{"n", r.n},
                         {"exact", r.exact},
                         {"predicted", r.predicted},
                         {"ratio", std::isnan(r.ratio) ? nlohmann::json("nan") : nlohmann::json(r.ratio)}});
        if (r.predicted > 0.0) {
            gaps.push_back(std::abs(r.ratio - 1.0));
        } else {
            any_off_lattice = true;
            off_lattice_max = std::max(off_lattice_max, r.exact);
        }
    }
    rep.data["rows"] = jrows;
    const double band = quantity == Quantity::leaves ? th::kLeafRatioBand : th::kSizeRatioBand;
    if (!gaps.empty()) {
        double final_ratio = 0.0;
        for (const auto& r : rows)
            if (r.predicted > 0.0) final_ratio = r.ratio;
        rep.checks.push_back(Check::make("final_ratio", final_ratio, Relation::within, 1.0 - band, 1.0 + band));
        if (gaps.size() > 1) {
            double rise = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < gaps.size(); ++i) rise = std::max(rise, gaps[i] - gaps[i - 1]);
            rep.checks.push_back(Check::make("ratio_gap_max_increase", rise, Relation::less_equal, 0.0));
        }
    }
    if (any_off_lattice) rep.checks.push_back(Check::make("off_lattice_exact_max", off_lattice_max, Relation::less_equal, 0.0));
    rep.wall_seconds = seconds_since(start);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------

FunctionalSample functional_sample(const PlaneTree& tree, const OffspringLaw& law, long scale_size) {
    const CodingTriple c = encode(tree);
    const long zeta = tree.size();
    const double z = static_cast<double>(scale_size > 0 ? scale_size : zeta);
    const double b = walk_scale(law, scale_size > 0 ? scale_size : zeta);
    FunctionalSample s;
    long max_h = 0;
    long sum_h = 0;
    for (long i = 0; i < zeta; ++i) {
        max_h = std::max(max_h, c.height[static_cast<std::size_t>(i)]);
        sum_h += c.height[static_cast<std::size_t>(i)];
    }
    long max_w = 0;
    for (long w : c.lukasiewicz) max_w = std::max(max_w, w);
    long max_deg = 0;
    for (int k : tree.child_counts()) max_deg = std::max<long>(max_deg, k);
    s.max_contour = b / z * static_cast<double>(max_h);
    s.area = b / (z * static_cast<double>(zeta)) * static_cast<double>(sum_h);
    s.max_lukasiewicz = static_cast<double>(max_w) / b;
    s.max_jump = static_cast<double>(std::max(0L, max_deg - 1)) / b;
    return s;
}

double functional_value(const FunctionalSample& s, const std::string& name) {
    if (name == "max_contour") return s.max_contour;
    if (name == "area") return s.area;
    if (name == "max_lukasiewicz") return s.max_lukasiewicz;
    if (name == "max_jump") return s.max_jump;
    throw Error(Errc::DomainError, "unknown functional: " + name);
}

ScalingSamples scaling_samples(const OffspringLaw& law, const ScalingParams& params) {
    ScalingSamples out;
    const auto reps = static_cast<std::size_t>(params.reps);
    out.leaves.resize(reps);
    out.other.resize(reps);
    out.leaves_fixed.resize(reps);
    out.other_fixed.resize(reps);
    const long size = std::lround(static_cast<double>(params.n) / law.leaf_probability());
    auto into = [&](std::vector<FunctionalSample>& own, std::vector<FunctionalSample>& fixed) {
        return [&](long r, const PlaneTree& t) {
            own[static_cast<std::size_t>(r)] = functional_sample(t, law);
            fixed[static_cast<std::size_t>(r)] = functional_sample(t, law, size);
        };
    };
    draw_trees(law, Mode::leaves, params.n, DegreeSet::leaves(), params.reps, params.seed, 0, params.workers,
               into(out.leaves, out.leaves_fixed));
    const std::uint64_t other_base = std::uint64_t{1} << 40;
    if (params.same_arm) {
        draw_trees(law, Mode::leaves, params.n, DegreeSet::leaves(), params.reps, params.seed, other_base,
                   params.workers, into(out.other, out.other_fixed));
    } else {
        draw_trees(law, Mode::size, size, DegreeSet::naturals(), params.reps, params.seed, other_base, params.workers,
                   into(out.other, out.other_fixed));
    }
    return out;
}

VerificationReport suite_scaling_limit(const OffspringLaw& law, const ScalingParams& params) {
    namespace th = thresholds;
    if (!law.finite_variance()) throw Error(Errc::DomainError, "scaling suite needs a finite-variance law");
    const auto start = Clock::now();
    VerificationReport rep;
    rep.suite = "scaling";
    rep.law = law.spec();
    rep.seed = params.seed;
    rep.samples = 2 * params.reps;
    const long size = std::lround(static_cast<double>(params.n) / law.leaf_probability());
    rep.parameters = {{"n", params.n},
                      {"size_arm", params.same_arm ? nlohmann::json("leaves") : nlohmann::json(size)},
                      {"reps_per_arm", params.reps},
                      {"functionals", params.functionals},
                      {"thresholds_version", th::kVersion}};
    rep.notes.push_back("KS pass level is a finite-n calibration; no convergence rate is claimed");
    rep.notes.push_back("fixed_scale_* entries rescale both arms by the size round(n/mu0); diagnostic only");
    const ScalingSamples s = scaling_samples(law, params);
    nlohmann::json stats = nlohmann::json::object();
    auto values = [](const std::vector<FunctionalSample>& xs, const std::string& name) {
        std::vector<double> v;
        for (const auto& x : xs) v.push_back(functional_value(x, name));
        return v;
    };
    for (const auto& name : params.functionals) {
        const std::vector<double> a = values(s.leaves, name);
        const std::vector<double> b = values(s.other, name);
        const TestResult ks = ks_two_sample(a, b);
        const TestResult fixed = ks_two_sample(values(s.leaves_fixed, name), values(s.other_fixed, name));
        double mean_a = 0.0;
        double mean_b = 0.0;
        for (double v : a) mean_a += v;
        for (double v : b) mean_b += v;
        mean_a /= static_cast<double>(a.size());
        mean_b /= static_cast<double>(b.size());
        stats[name] = {{"ks_statistic", ks.statistic}, {"p_value", ks.p_value}, {"mean_leaves", mean_a}, {"mean_other", mean_b},
                       {"fixed_scale_ks_statistic", fixed.statistic}, {"fixed_scale_p_value", fixed.p_value}};
        rep.checks.push_back(Check::make("ks_p_value[" + name + "]", ks.p_value, Relation::greater, th::kKsAlpha));
    }
    rep.data["functionals"] = stats;
    rep.wall_seconds = seconds_since(start);
    rep.finalize();
    return rep;
}

}  // namespace gwleaf
