#include "gwleaf/sampler.hpp"

#include <algorithm>
#include <climits>
#include <limits>

#include "gwleaf/error.hpp"

namespace gwleaf {

namespace {

template <class Int>
std::size_t first_minimum_end(std::span<const Int> x) {
    long w = 0;
    long best = std::numeric_limits<long>::max();
    std::size_t at = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w += static_cast<long>(x[i]);
        if (w < best) {
            best = w;
            at = i + 1;
        }
    }
    return at;
}

// Can `target` be written as a sum of values (with repetition)?
bool representable(long target, const std::vector<long>& values) {
    if (target < 0) return false;
    std::vector<char> ok(static_cast<std::size_t>(target) + 1, 0);
    ok[0] = 1;
    for (long s = 1; s <= target; ++s) {
        for (long v : values) {
            if (v <= s && ok[static_cast<std::size_t>(s - v)]) {
                ok[static_cast<std::size_t>(s)] = 1;
                break;
            }
        }
    }
    return ok[static_cast<std::size_t>(target)] != 0;
}

}  // namespace

Mode parse_mode(std::string_view text) {
    if (text == "size") return Mode::size;
    if (text == "leaves") return Mode::leaves;
    if (text == "leaves-ge") return Mode::leaves_ge;
    if (text == "set-count") return Mode::set_count;
    if (text == "gw" || text == "unconditioned") return Mode::unconditioned;
    throw Error(Errc::DomainError, "unknown sampling mode '" + std::string(text) + "'");
}

const char* mode_name(Mode mode) noexcept {
    switch (mode) {
        case Mode::unconditioned: return "gw";
        case Mode::size: return "size";
        case Mode::leaves: return "leaves";
        case Mode::leaves_ge: return "leaves-ge";
        case Mode::set_count: return "set-count";
    }
    return "unknown";
}

std::vector<long> vervaat(std::span<const long> increments) {
    long sum = 0;
    for (long x : increments) sum += x;
    if (increments.empty() || sum != -1) throw Error(Errc::NotSummingToMinusOne, "vervaat needs a word summing to -1");
    std::vector<long> out(increments.begin(), increments.end());
    std::rotate(out.begin(), out.begin() + static_cast<long>(first_minimum_end(increments) % out.size()), out.end());
    return out;
}

bool count_is_possible(const OffspringLaw& law, Mode mode, long n, const DegreeSet& set) {
    if (n < 1) return false;
    switch (mode) {
        case Mode::unconditioned:
        case Mode::leaves_ge: return true;
        case Mode::size: {
            if (law.pmf(1) > 0.0 || n == 1) return true;
            // n - 1 = sum of the nonzero child counts, using at most n vertices.
            std::vector<long> degrees;
            for (long k : law.support_upto(n - 1)) {
                if (k > 0) degrees.push_back(k);
            }
            const long target = n - 1;
            std::vector<long> fewest(static_cast<std::size_t>(target) + 1, LONG_MAX);
            fewest[0] = 0;
            for (long s = 1; s <= target; ++s) {
                for (long k : degrees) {
                    if (k <= s && fewest[static_cast<std::size_t>(s - k)] != LONG_MAX) {
                        fewest[static_cast<std::size_t>(s)] =
                            std::min(fewest[static_cast<std::size_t>(s)], fewest[static_cast<std::size_t>(s - k)] + 1);
                    }
                }
            }
            return fewest[static_cast<std::size_t>(target)] <= n;
        }
        case Mode::leaves: {
            // Internal vertices contribute k - 1 each and must total n - 1.
            if (law.pmf(2) > 0.0 || n == 1) return true;
            std::vector<long> values;
            for (long k : law.support_upto(n)) {
                if (k >= 2) values.push_back(k - 1);
            }
            return representable(n - 1, values);
        }
        case Mode::set_count: {
            if (law.mass(set) <= 0.0) return false;
            if (n > 200) return true;
            // Reachable (count in set, excess) over multisets of vertices; a
            // multiset with excess -1 can always be arranged into one tree.
            const long width = 4 * (n + 8);
            const long kmax = n + 8;
            const auto degrees = law.support_upto(kmax);
            const long cols = 2 * width + 1;
            std::vector<char> seen(static_cast<std::size_t>((n + 1) * cols), 0);
            std::vector<std::pair<long, long>> frontier{{0, 0}};
            seen[static_cast<std::size_t>(width)] = 1;
            while (!frontier.empty()) {
                const auto [c, s] = frontier.back();
                frontier.pop_back();
                for (long k : degrees) {
                    const long c2 = c + (set.contains(k) ? 1 : 0);
                    const long s2 = s + k - 1;
                    if (c2 > n || s2 < -width || s2 > width) continue;
                    auto& cell = seen[static_cast<std::size_t>(c2 * cols + s2 + width)];
                    if (cell) continue;
                    cell = 1;
                    frontier.emplace_back(c2, s2);
                }
            }
            return seen[static_cast<std::size_t>(n * cols - 1 + width)] != 0;
        }
    }
    return true;
}

TreeSampler::TreeSampler(const OffspringLaw& law, SamplerConfig config)
    : TreeSampler(law, config, std::make_shared<const OffspringSampler>(law)) {}

TreeSampler::TreeSampler(const OffspringLaw& law, SamplerConfig config,
                         std::shared_ptr<const OffspringSampler> children)
    : law_(law), config_(config), children_(std::move(children)) {
    if (config_.max_attempts < 1 || config_.max_steps < 1) {
        throw Error(Errc::DomainError, "sampler budgets must be >= 1");
    }
    if (!children_) children_ = std::make_shared<const OffspringSampler>(law_);
}

long TreeSampler::draw_children(Rng& rng) {
    const long k = (*children_)(rng);
    if (k > INT_MAX - 1) throw Error(Errc::StepBudgetExceeded, "child count beyond representable tree size");
    return k;
}

void TreeSampler::require_possible(Mode mode, long n, const DegreeSet& set) {
    if (n < 1) throw Error(Errc::InvalidCount, "conditioning count must be >= 1");
    if (mode == checked_mode_ && n == checked_n_ && (mode != Mode::set_count || set == checked_set_)) return;
    if (!count_is_possible(law_, mode, n, set)) {
        throw Error(Errc::ImpossibleCount, std::string("no tree with ") + mode_name(mode) + " = " + std::to_string(n));
    }
    checked_mode_ = mode;
    checked_n_ = n;
    checked_set_ = set;
}

PlaneTree TreeSampler::finish_bridge() {
    const std::span<const int> view(buffer_);
    std::rotate(buffer_.begin(), buffer_.begin() + static_cast<long>(first_minimum_end(view) % buffer_.size()),
                buffer_.end());
    std::vector<int> counts(buffer_.size());
    for (std::size_t i = 0; i < buffer_.size(); ++i) counts[i] = buffer_[i] + 1;
    ++stats_.accepted;
    return PlaneTree::from_child_counts(std::move(counts));
}

long TreeSampler::run_gw(Rng& rng) {
    buffer_.clear();
    long w = 0;
    long leaves = 0;
    while (w != -1) {
        if (static_cast<long>(buffer_.size()) >= config_.max_steps) return -1;
        const long k = draw_children(rng);
        buffer_.push_back(static_cast<int>(k - 1));
        w += k - 1;
        if (k == 0) ++leaves;
    }
    stats_.steps += static_cast<long>(buffer_.size());
    return leaves;
}

PlaneTree TreeSampler::gw(Rng& rng) {
    ++stats_.attempts;
    if (run_gw(rng) < 0) throw Error(Errc::StepBudgetExceeded, "tree exceeds max_steps");
    return finish_bridge();
}

PlaneTree TreeSampler::conditioned_size(long n, Rng& rng) {
    require_possible(Mode::size, n, DegreeSet::naturals());
    if (n > config_.max_steps) throw Error(Errc::StepBudgetExceeded, "n exceeds max_steps");
    for (long attempt = 0; attempt < config_.max_attempts; ++attempt) {
        ++stats_.attempts;
        buffer_.clear();
        long w = 0;
        bool alive = true;
        for (long i = 0; i < n; ++i) {
            const long k = draw_children(rng);
            buffer_.push_back(static_cast<int>(k - 1));
            w += k - 1;
            // The walk descends by at most one per remaining step.
            if (w - (n - i - 1) > -1) {
                alive = false;
                break;
            }
        }
        stats_.steps += static_cast<long>(buffer_.size());
        if (alive && w == -1) return finish_bridge();
    }
    throw Error(Errc::AttemptBudgetExceeded, "no accepted sample within max_attempts");
}

PlaneTree TreeSampler::conditioned_leaves(long n, Rng& rng) {
    require_possible(Mode::leaves, n, DegreeSet::leaves());
    for (long attempt = 0; attempt < config_.max_attempts; ++attempt) {
        ++stats_.attempts;
        buffer_.clear();
        long w = 0;
        long leaves = 0;
        bool alive = true;
        while (leaves < n) {
            if (static_cast<long>(buffer_.size()) >= config_.max_steps) {
                throw Error(Errc::StepBudgetExceeded, "attempt exceeds max_steps");
            }
            const long k = draw_children(rng);
            buffer_.push_back(static_cast<int>(k - 1));
            w += k - 1;
            if (k == 0) ++leaves;
            // Only the remaining n - leaves leaf steps can bring the walk down.
            if (w > n - leaves - 1) {
                alive = false;
                break;
            }
        }
        stats_.steps += static_cast<long>(buffer_.size());
        if (alive && w == -1) return finish_bridge();
    }
    throw Error(Errc::AttemptBudgetExceeded, "no accepted sample within max_attempts");
}

PlaneTree TreeSampler::conditioned_leaves_ge(long n, Rng& rng) {
    if (n < 1) throw Error(Errc::InvalidCount, "conditioning count must be >= 1");
    for (long attempt = 0; attempt < config_.max_attempts; ++attempt) {
        ++stats_.attempts;
        const long leaves = run_gw(rng);
        if (leaves < 0) throw Error(Errc::StepBudgetExceeded, "tree exceeds max_steps");
        if (leaves >= n) return finish_bridge();
    }
    throw Error(Errc::AttemptBudgetExceeded, "no accepted sample within max_attempts");
}

PlaneTree TreeSampler::conditioned_count_in_set(const DegreeSet& set, long n, Rng& rng) {
    if (set == DegreeSet::leaves()) return conditioned_leaves(n, rng);
    require_possible(Mode::set_count, n, set);
    // With 0 in the set, every downward step is counted, which bounds the descent.
    const bool bounded_descent = set.contains(0);
    for (long attempt = 0; attempt < config_.max_attempts; ++attempt) {
        ++stats_.attempts;
        buffer_.clear();
        long w = 0;
        long count = 0;
        bool alive = true;
        while (count < n) {
            if (static_cast<long>(buffer_.size()) >= config_.max_steps) {
                throw Error(Errc::StepBudgetExceeded, "attempt exceeds max_steps");
            }
            const long k = draw_children(rng);
            buffer_.push_back(static_cast<int>(k - 1));
            w += k - 1;
            if (set.contains(k)) ++count;
            if (bounded_descent && w > n - count - 1) {
                alive = false;
                break;
            }
        }
        stats_.steps += static_cast<long>(buffer_.size());
        if (alive && w == -1) return finish_bridge();
    }
    throw Error(Errc::AttemptBudgetExceeded, "no accepted sample within max_attempts");
}

PlaneTree TreeSampler::sample(Mode mode, long n, const DegreeSet& set, Rng& rng) {
    switch (mode) {
        case Mode::unconditioned: return gw(rng);
        case Mode::size: return conditioned_size(n, rng);
        case Mode::leaves: return conditioned_leaves(n, rng);
        case Mode::leaves_ge: return conditioned_leaves_ge(n, rng);
        case Mode::set_count: return conditioned_count_in_set(set, n, rng);
    }
    throw Error(Errc::DomainError, "unknown mode");
}

PlaneTree sample_gw(const OffspringLaw& law, const SamplerConfig& config, std::uint64_t stream) {
    Rng rng(config.seed, stream);
    return TreeSampler(law, config).gw(rng);
}

PlaneTree sample_conditioned_size(const OffspringLaw& law, long n, const SamplerConfig& config, std::uint64_t stream) {
    Rng rng(config.seed, stream);
    return TreeSampler(law, config).conditioned_size(n, rng);
}

PlaneTree sample_conditioned_leaves(const OffspringLaw& law, long n, const SamplerConfig& config,
                                    std::uint64_t stream) {
    Rng rng(config.seed, stream);
    return TreeSampler(law, config).conditioned_leaves(n, rng);
}

PlaneTree sample_conditioned_leaves_ge(const OffspringLaw& law, long n, const SamplerConfig& config,
                                       std::uint64_t stream) {
    Rng rng(config.seed, stream);
    return TreeSampler(law, config).conditioned_leaves_ge(n, rng);
}

PlaneTree sample_conditioned_count_in_set(const OffspringLaw& law, const DegreeSet& set, long n,
                                          const SamplerConfig& config, std::uint64_t stream) {
    Rng rng(config.seed, stream);
    return TreeSampler(law, config).conditioned_count_in_set(set, n, rng);
}

}  // namespace gwleaf
