#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gwleaf/acceptance.hpp"
#include "gwleaf/error.hpp"
#include "gwleaf/exactlaw.hpp"
#include "gwleaf/format.hpp"
#include "gwleaf/maxdeg.hpp"
#include "gwleaf/offspring.hpp"
#include "gwleaf/parallel.hpp"
#include "gwleaf/sampler.hpp"
#include "gwleaf/suites.hpp"
#include "gwleaf/treecode.hpp"

using namespace gwleaf;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

// Output sink: a file, or stdout for "-" / empty.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open " + path);
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<long> parse_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const long v = std::stol(item, &used);
        if (used != item.size()) throw Error(Errc::DomainError, "bad integer list: " + text);
        out.push_back(v);
    }
    if (out.empty()) throw Error(Errc::DomainError, "empty integer list");
    return out;
}

struct SampleArgs {
    std::string law = "geometric";
    std::string mode = "leaves";
    long n = 1;
    std::string set = "0";
    long reps = 1;
    std::uint64_t seed = 0;
    std::string emit = "trees";
    std::string format = "csv";
    long max_attempts = SamplerConfig{}.max_attempts;
    long max_steps = SamplerConfig{}.max_steps;
    std::string out;
};

int run_sample(const SampleArgs& a) {
    const OffspringLaw law = parse_law(a.law);
    const Mode mode = parse_mode(a.mode);
    const DegreeSet set = DegreeSet::parse(a.set);
    SamplerConfig config;
    config.seed = a.seed;
    config.max_attempts = a.max_attempts;
    config.max_steps = a.max_steps;
    std::vector<PlaneTree> trees(static_cast<std::size_t>(a.reps));
    const auto children = std::make_shared<const OffspringSampler>(law);
    const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(1L, a.reps))));
    std::vector<std::unique_ptr<TreeSampler>> samplers;
    for (unsigned w = 0; w < workers; ++w) samplers.push_back(std::make_unique<TreeSampler>(law, config, children));
    parallel_for(a.reps, workers, [&](long r, unsigned w) {
        Rng rng(config.seed, static_cast<std::uint64_t>(r));
        trees[static_cast<std::size_t>(r)] = samplers[w]->sample(mode, a.n, set, rng);
    });

    Sink sink(a.out);
    auto& os = sink.out();
    const bool jsonl = a.format == "jsonl";
    if (a.format != "csv" && a.format != "jsonl") throw Error(Errc::DomainError, "unknown format: " + a.format);
    if (a.emit == "trees") {
        for (std::size_t r = 0; r < trees.size(); ++r) {
            if (jsonl) {
                auto counts = trees[r].child_counts();
                os << nlohmann::json{{"replicate", r}, {"child_counts", std::vector<int>(counts.begin(), counts.end())}}.dump()
                   << '\n';
            } else {
                os << to_line(trees[r]) << '\n';
            }
        }
    } else if (a.emit == "stats") {
        if (!jsonl) os << "replicate,zeta,lambda,zeta_A,max_degree\n";
        for (std::size_t r = 0; r < trees.size(); ++r) {
            const TreeStatistics st = statistics(trees[r], set);
            if (jsonl) {
                os << nlohmann::json{{"replicate", r}, {"zeta", st.zeta}, {"lambda", st.lambda}, {"zeta_A", st.zeta_A},
                                     {"max_degree", st.max_degree}}.dump()
                   << '\n';
            } else {
                os << r << ',' << st.zeta << ',' << st.lambda << ',' << st.zeta_A << ',' << st.max_degree << '\n';
            }
        }
    } else if (a.emit == "lukasiewicz" || a.emit == "height" || a.emit == "contour") {
        if (!jsonl) os << "replicate,t," << a.emit << '\n';
        for (std::size_t r = 0; r < trees.size(); ++r) {
            const CodingTriple c = encode(trees[r]);
            const std::vector<long>& values =
                a.emit == "lukasiewicz" ? c.lukasiewicz : (a.emit == "height" ? c.height : c.contour);
            if (jsonl) {
                os << nlohmann::json{{"replicate", r}, {a.emit, values}}.dump() << '\n';
            } else {
                for (std::size_t t = 0; t < values.size(); ++t) os << r << ',' << t << ',' << values[t] << '\n';
            }
        }
    } else {
        throw Error(Errc::DomainError, "unknown --emit value: " + a.emit);
    }
    return kExitPass;
}

int run_asymptotics(const std::string& law_spec, const std::string& quantity, const std::string& n_list,
                    const std::string& out) {
    const OffspringLaw law = parse_law(law_spec);
    const auto rows = asymptotic_rows(law, parse_quantity(quantity), parse_list(n_list));
    Sink sink(out);
    auto& os = sink.out();
    os << "n,exact,predicted,ratio\n";
    for (const auto& r : rows)
        os << r.n << ',' << format_double(r.exact) << ',' << format_double(r.predicted) << ','
           << (std::isnan(r.ratio) ? std::string("nan") : format_double(r.ratio)) << '\n';
    return kExitPass;
}

int run_maxdeg(const std::string& law_spec, long n, long reps, double eps, std::uint64_t seed, const std::string& out) {
    const OffspringLaw law = parse_law(law_spec);
    SamplerConfig config;
    config.seed = seed;
    const auto study = max_degree_study(law, n, reps, config, eps);
    Sink sink(out);
    auto& os = sink.out();
    os << "replicate,zeta,lambda,delta,normalized_delta\n";
    for (long r = 0; r < reps; ++r) {
        const auto i = static_cast<std::size_t>(r);
        os << r << ',' << study.zeta[i] << ',' << study.lambda[i] << ',' << study.delta[i] << ','
           << format_double(study.normalized[i]) << '\n';
    }
    std::cerr << "median normalized delta " << format_double(study.median_normalized);
    if (study.mode == Normalization::by_D)
        std::cerr << ", D(n) " << study.D << ", coverage " << format_double(study.coverage);
    std::cerr << '\n';
    return kExitPass;
}

struct VerifyArgs {
    std::string suite;
    bool all = false;
    std::string law = "geometric";
    std::string set = "0";
    std::string mode = "leaves";
    long n = 0;
    std::string n_list;
    std::string quantity = "leaves";
    long reps = 0;
    std::uint64_t seed = 1;
    bool allow_low_coverage = false;
    bool same_arm = false;
    std::vector<int> criteria;
    std::string out;
};

int run_verify(VerifyArgs a) {
    if (a.all) a.suite = "all";
    if (a.suite.empty()) throw CLI::ValidationError("--suite", "give --suite or --all");
    std::vector<VerificationReport> reports;
    if (a.suite == "all") {
        AcceptanceOptions opt;
        opt.seed = a.seed;
        reports = run_acceptance_battery(opt, a.criteria, [](const Criterion& c, const VerificationReport& r) {
            std::cerr << "criterion " << c.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << c.title << '\n';
        });
    } else {
        const OffspringLaw law = parse_law(a.law);
        if (a.suite == "concentration") {
            ConcentrationParams p;
            if (!a.n_list.empty()) p.n_list = parse_list(a.n_list);
            if (a.n > 0) p.n_list = {a.n};
            if (a.reps > 0) p.reps = a.reps;
            p.seed = a.seed;
            reports.push_back(suite_concentration(law, p));
        } else if (a.suite == "exactness") {
            ExactnessParams p;
            p.mode = parse_mode(a.mode);
            p.set = DegreeSet::parse(a.set);
            if (a.n > 0) p.n = a.n;
            if (a.reps > 0) p.reps = a.reps;
            p.seed = a.seed;
            p.allow_low_coverage = a.allow_low_coverage;
            reports.push_back(suite_sampler_exactness(law, p));
        } else if (a.suite == "asymptotics") {
            std::vector<long> n_list = a.n_list.empty() ? std::vector<long>{50, 100, 200} : parse_list(a.n_list);
            reports.push_back(suite_asymptotics(law, parse_quantity(a.quantity), n_list));
        } else if (a.suite == "scaling") {
            ScalingParams p;
            if (a.n > 0) p.n = a.n;
            if (a.reps > 0) p.reps = a.reps;
            p.seed = a.seed;
            p.same_arm = a.same_arm;
            reports.push_back(suite_scaling_limit(law, p));
        } else {
            throw CLI::ValidationError("--suite", "unknown suite " + a.suite);
        }
    }
    nlohmann::json j;
    if (reports.size() == 1 && a.suite != "all") {
        j = to_json(reports.front());
    } else {
        j = nlohmann::json::array();
        for (const auto& r : reports) j.push_back(to_json(r));
    }
    Sink sink(a.out);
    sink.out() << j.dump(2) << '\n';
    bool pass = !reports.empty();
    for (const auto& r : reports) pass = pass && r.pass;
    return pass ? kExitPass : kExitFail;
}

int run_enumerate(const std::string& law_spec, long max_size, const std::string& out) {
    const OffspringLaw law = parse_law(law_spec);
    Sink sink(out);
    auto& os = sink.out();
    os << "zeta,lambda,weight,tree\n";
    EnumerationOptions opts;
    opts.skip_zero_weight = true;
    enumerate_trees(law, max_size, [&](std::span<const int> counts, double weight) {
        long leaves = 0;
        for (int k : counts) leaves += k == 0;
        os << counts.size() << ',' << leaves << ',' << format_double(weight) << ",\"" << join(counts) << "\"\n";
    }, opts);
    return kExitPass;
}

int run_joint_law(const std::string& law_spec, const std::string& set, long j, long p_max, const std::string& out) {
    const OffspringLaw law = parse_law(law_spec);
    const auto table = joint_law_table(law, DegreeSet::parse(set), j, p_max);
    Sink sink(out);
    write_joint_law_csv(sink.out(), table);
    return kExitPass;
}

int run_encode(const std::string& tree_line, const std::string& out) {
    const PlaneTree tree = parse_tree_line(tree_line);
    Sink sink(out);
    write_coding_csv(sink.out(), encode(tree));
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galton-Watson trees conditioned on their number of leaves: exact laws, samplers, checks"};
    app.require_subcommand(1);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "draw conditioned trees");
    sample->add_option("--law", sa.law, "offspring law spec")->required();
    sample->add_option("--mode", sa.mode, "leaves|size|leaves-ge|set-count|gw");
    sample->add_option("--n", sa.n, "conditioning value");
    sample->add_option("--set", sa.set, "degree set for set-count, e.g. 0,2 or N-1");
    sample->add_option("--reps", sa.reps, "number of trees");
    sample->add_option("--seed", sa.seed, "RNG seed");
    sample->add_option("--emit", sa.emit, "trees|lukasiewicz|height|contour|stats");
    sample->add_option("--format", sa.format, "csv|jsonl");
    sample->add_option("--max-attempts", sa.max_attempts, "rejection attempts per tree");
    sample->add_option("--max-steps", sa.max_steps, "walk steps per attempt");
    sample->add_option("--out", sa.out, "output path (default stdout)");

    std::string law_spec = "geometric";
    std::string quantity = "leaves";
    std::string n_list = "50,100,200";
    std::string out;
    auto* asym = app.add_subcommand("asymptotics", "exact vs predicted local probabilities");
    asym->add_option("--law", law_spec, "offspring law spec")->required();
    asym->add_option("--quantity", quantity, "leaves|size");
    asym->add_option("--n-list", n_list, "comma-separated n values");
    asym->add_option("--out", out, "CSV path (default stdout)");

    long md_n = 1000;
    long md_reps = 100;
    double md_eps = 0.4;
    std::uint64_t md_seed = 0;
    auto* maxdeg = app.add_subcommand("maxdeg", "maximum degree of leaf-conditioned trees");
    maxdeg->add_option("--law", law_spec, "offspring law spec")->required();
    maxdeg->add_option("--n", md_n, "number of leaves");
    maxdeg->add_option("--reps", md_reps, "number of trees");
    maxdeg->add_option("--eps", md_eps, "relative window around D(n) for the coverage");
    maxdeg->add_option("--seed", md_seed, "RNG seed");
    maxdeg->add_option("--out", out, "CSV path (default stdout)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run verification suites or the acceptance battery");
    verify->add_option("--suite", va.suite, "concentration|exactness|asymptotics|scaling|all");
    verify->add_flag("--all", va.all, "run the acceptance battery");
    verify->add_option("--criteria", va.criteria, "subset of acceptance criteria (with --all)")->delimiter(',');
    verify->add_option("--law", va.law, "offspring law spec");
    verify->add_option("--set", va.set, "degree set, e.g. 0,2 or N-1");
    verify->add_option("--mode", va.mode, "exactness: size|leaves|set-count");
    verify->add_option("--n", va.n, "conditioning value");
    verify->add_option("--n-list", va.n_list, "comma-separated n values");
    verify->add_option("--quantity", va.quantity, "asymptotics: leaves|size");
    verify->add_option("--reps", va.reps, "replicates (per arm for scaling)");
    verify->add_option("--seed", va.seed, "RNG seed");
    verify->add_flag("--allow-low-coverage", va.allow_low_coverage, "exactness: run below the enumeration coverage");
    verify->add_flag("--same-arm", va.same_arm, "scaling: compare leaf conditioning with itself");
    verify->add_option("--out", va.out, "JSON report path (default stdout)");

    long max_size = 8;
    auto* enumerate = app.add_subcommand("enumerate", "list every tree up to a size with its GW weight");
    enumerate->add_option("--law", law_spec, "offspring law spec")->required();
    enumerate->add_option("--max-size", max_size, "largest tree size, at most 18");
    enumerate->add_option("--out", out, "CSV path (default stdout)");

    std::string set = "0";
    long j = 1;
    long p_max = 12;
    auto* joint = app.add_subcommand("joint-law", "table of P_j[zeta = p, zeta_A = n]");
    joint->add_option("--law", law_spec, "offspring law spec")->required();
    joint->add_option("--set", set, "degree set, e.g. 0 or 0,2");
    joint->add_option("--j", j, "number of trees in the forest");
    joint->add_option("--p-max", p_max, "largest total size");
    joint->add_option("--out", out, "CSV path (default stdout)");

    std::string tree_line;
    auto* enc = app.add_subcommand("encode", "Lukasiewicz, height and contour of one tree");
    enc->add_option("--tree", tree_line, "child counts in preorder, e.g. 2,0,0")->required();
    enc->add_option("--out", out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        if (*sample) return run_sample(sa);
        if (*asym) return run_asymptotics(law_spec, quantity, n_list, out);
        if (*maxdeg) return run_maxdeg(law_spec, md_n, md_reps, md_eps, md_seed, out);
        if (*verify) return run_verify(va);
        if (*enumerate) return run_enumerate(law_spec, max_size, out);
        if (*joint) return run_joint_law(law_spec, set, j, p_max, out);
        if (*enc) return run_encode(tree_line, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
