#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gwleaf/report.hpp"

namespace gwleaf {

struct AcceptanceOptions {
    std::uint64_t seed = 20240601;
    unsigned workers = 0;  // 0: worker_count()
};

struct Criterion {
    int id = 0;
    const char* title = "";
    VerificationReport (*run)(const AcceptanceOptions&) = nullptr;
};

const std::vector<Criterion>& acceptance_criteria();

// Runs the selected criteria (all when `ids` is empty) in order; `done` sees
// each report as soon as it is finished. Execution errors become failing
// reports with the error in the notes.
std::vector<VerificationReport> run_acceptance_battery(const AcceptanceOptions& options, const std::vector<int>& ids = {},
                                                       const std::function<void(const Criterion&, const VerificationReport&)>& done = {});

}  // namespace gwleaf
