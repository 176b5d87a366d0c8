#include "gwleaf/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwleaf/error.hpp"

namespace gwleaf {

namespace {

// JSON has no infinities or NaN; encode them as strings.
nlohmann::json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number_from(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error(Errc::DomainError, "bad number in report: " + s);
    }
    return j.get<double>();
}

Relation relation_from(const std::string& s) {
    for (Relation r : {Relation::less, Relation::less_equal, Relation::greater, Relation::greater_equal,
                       Relation::within})
        if (s == relation_symbol(r)) return r;
    throw Error(Errc::DomainError, "bad relation in report: " + s);
}

}  // namespace

const char* relation_symbol(Relation relation) noexcept {
    switch (relation) {
        case Relation::less: return "<";
        case Relation::less_equal: return "<=";
        case Relation::greater: return ">";
        case Relation::greater_equal: return ">=";
        case Relation::within: return "in";
    }
    return "?";
}

Check Check::make(std::string name, double statistic, Relation relation, double threshold, double threshold_hi) {
    Check c;
    c.name = std::move(name);
    c.statistic = statistic;
    c.relation = relation;
    c.threshold = threshold;
    c.threshold_hi = threshold_hi;
    c.pass = c.evaluate();
    return c;
}

bool Check::evaluate() const noexcept {
    switch (relation) {
        case Relation::less: return statistic < threshold;
        case Relation::less_equal: return statistic <= threshold;
        case Relation::greater: return statistic > threshold;
        case Relation::greater_equal: return statistic >= threshold;
        case Relation::within: return statistic >= threshold && statistic <= threshold_hi;
    }
    return false;
}

void VerificationReport::finalize() {
    for (auto& c : checks) c.pass = c.evaluate();
    pass = exempt || (!checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }));
}

nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json jc = {{"name", c.name},
                             {"statistic", number(c.statistic)},
                             {"relation", relation_symbol(c.relation)},
                             {"threshold", number(c.threshold)},
                             {"pass", c.pass}};
        if (c.relation == Relation::within) jc["threshold_hi"] = number(c.threshold_hi);
        checks.push_back(std::move(jc));
    }
    return {{"suite", r.suite},   {"law", r.law},         {"parameters", r.parameters},
            {"checks", checks},   {"data", r.data},       {"exempt", r.exempt},
            {"pass", r.pass},     {"samples", r.samples}, {"seed", r.seed},
            {"wall_seconds", r.wall_seconds},             {"notes", r.notes}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
    VerificationReport r;
    r.suite = j.at("suite").get<std::string>();
    r.law = j.at("law").get<std::string>();
    r.parameters = j.at("parameters");
    for (const auto& jc : j.at("checks")) {
        Check c;
        c.name = jc.at("name").get<std::string>();
        c.statistic = number_from(jc.at("statistic"));
        c.relation = relation_from(jc.at("relation").get<std::string>());
        c.threshold = number_from(jc.at("threshold"));
        if (jc.contains("threshold_hi")) c.threshold_hi = number_from(jc.at("threshold_hi"));
        c.pass = jc.at("pass").get<bool>();
        r.checks.push_back(std::move(c));
    }
    r.data = j.at("data");
    r.exempt = j.at("exempt").get<bool>();
    r.pass = j.at("pass").get<bool>();
    r.samples = j.at("samples").get<long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

}  // namespace gwleaf
