#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "gwleaf/degree_set.hpp"
#include "gwleaf/offspring.hpp"
#include "gwleaf/rng.hpp"
#include "gwleaf/treecode.hpp"

namespace gwleaf {

enum class Mode { unconditioned, size, leaves, leaves_ge, set_count };

Mode parse_mode(std::string_view text);
const char* mode_name(Mode mode) noexcept;

struct SamplerConfig {
    std::uint64_t seed = 0;
    long max_attempts = 1'000'000;
    long max_steps = 100'000'000;  // per attempt
};

struct SamplerStats {
    long attempts = 0;
    long accepted = 0;
    long steps = 0;
};

// Rotation of a word summing to -1 at its first running minimum.
std::vector<long> vervaat(std::span<const long> increments);

// Whether some tree has exactly n vertices (Mode::size), n leaves
// (Mode::leaves) or n vertices with out-degree in the set (Mode::set_count).
bool count_is_possible(const OffspringLaw& law, Mode mode, long n, const DegreeSet& set = DegreeSet::leaves());

// Samples trees from one RNG stream. Not thread-safe; create one per worker.
class TreeSampler {
public:
    explicit TreeSampler(const OffspringLaw& law, SamplerConfig config = {});
    TreeSampler(const OffspringLaw& law, SamplerConfig config, std::shared_ptr<const OffspringSampler> children);

    PlaneTree gw(Rng& rng);
    PlaneTree conditioned_size(long n, Rng& rng);
    PlaneTree conditioned_leaves(long n, Rng& rng);
    PlaneTree conditioned_leaves_ge(long n, Rng& rng);
    PlaneTree conditioned_count_in_set(const DegreeSet& set, long n, Rng& rng);

    PlaneTree sample(Mode mode, long n, const DegreeSet& set, Rng& rng);

    const SamplerStats& stats() const noexcept { return stats_; }
    const OffspringLaw& law() const noexcept { return law_; }
    const SamplerConfig& config() const noexcept { return config_; }

private:
    long draw_children(Rng& rng);
    PlaneTree finish_bridge();
    // Walk until the first hit of -1; returns the leaf count, or -1 when the
    // step budget is exhausted.
    long run_gw(Rng& rng);
    void require_possible(Mode mode, long n, const DegreeSet& set);

    OffspringLaw law_;
    SamplerConfig config_;
    std::shared_ptr<const OffspringSampler> children_;
    std::vector<int> buffer_;
    SamplerStats stats_;
    // memo of the last successful possibility check
    Mode checked_mode_ = Mode::unconditioned;
    long checked_n_ = -1;
    DegreeSet checked_set_ = DegreeSet::leaves();
};

// One-shot samplers: replica `stream` of the configured seed.
PlaneTree sample_gw(const OffspringLaw& law, const SamplerConfig& config, std::uint64_t stream = 0);
PlaneTree sample_conditioned_size(const OffspringLaw& law, long n, const SamplerConfig& config,
                                  std::uint64_t stream = 0);
PlaneTree sample_conditioned_leaves(const OffspringLaw& law, long n, const SamplerConfig& config,
                                    std::uint64_t stream = 0);
PlaneTree sample_conditioned_leaves_ge(const OffspringLaw& law, long n, const SamplerConfig& config,
                                       std::uint64_t stream = 0);
PlaneTree sample_conditioned_count_in_set(const OffspringLaw& law, const DegreeSet& set, long n,
                                          const SamplerConfig& config, std::uint64_t stream = 0);

}  // namespace gwleaf
