#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace gwleaf {

enum class Relation { less, less_equal, greater, greater_equal, within };

const char* relation_symbol(Relation relation) noexcept;

// One statistic compared against its threshold.
struct Check {
    std::string name;
    double statistic = 0.0;
    Relation relation = Relation::less;
    double threshold = 0.0;
    double threshold_hi = 0.0;  // upper end for Relation::within
    bool pass = false;

    static Check make(std::string name, double statistic, Relation relation, double threshold,
                      double threshold_hi = 0.0);
    bool evaluate() const noexcept;
};

struct VerificationReport {
    std::string suite;
    std::string law;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<Check> checks;
    // Extra per-row output (tables, diagnostics); never affects the verdict.
    nlohmann::json data = nlohmann::json::object();
    bool exempt = false;
    bool pass = false;
    long samples = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> notes;

    // pass := exempt or (checks nonempty and every check passes).
    void finalize();
};

nlohmann::json to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& j);

}  // namespace gwleaf
