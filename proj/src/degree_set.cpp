#include "gwleaf/degree_set.hpp"

#include <algorithm>
#include <charconv>

#include "gwleaf/error.hpp"

namespace gwleaf {

namespace {

std::vector<long> normalise(std::vector<long> values) {
    for (long v : values) {
        if (v < 0) throw Error(Errc::DomainError, "degree sets contain nonnegative integers only");
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::vector<long> parse_list(std::string_view text) {
    std::vector<long> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        long value = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw Error(Errc::DomainError, "bad degree set element '" + std::string(item) + "'");
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

DegreeSet::DegreeSet(bool finite, std::vector<long> listed)
    : finite_(finite), listed_(normalise(std::move(listed))) {}

DegreeSet DegreeSet::finite(std::vector<long> elements) { return DegreeSet(true, std::move(elements)); }

DegreeSet DegreeSet::cofinite(std::vector<long> excluded) { return DegreeSet(false, std::move(excluded)); }

DegreeSet DegreeSet::parse(std::string_view text) {
    if (text == "N") return naturals();
    if (text.size() > 2 && text.substr(0, 2) == "N-") return cofinite(parse_list(text.substr(2)));
    if (text.empty()) throw Error(Errc::DomainError, "empty degree set");
    return finite(parse_list(text));
}

bool DegreeSet::contains(long k) const noexcept {
    if (k < 0) return false;
    const bool listed = std::binary_search(listed_.begin(), listed_.end(), k);
    return finite_ ? listed : !listed;
}

long DegreeSet::min_element() const {
    if (finite_) {
        if (listed_.empty()) throw Error(Errc::DomainError, "empty degree set has no minimum");
        return listed_.front();
    }
    long k = 0;
    while (!contains(k)) ++k;
    return k;
}

std::string DegreeSet::to_string() const {
    std::string out = finite_ ? "" : (listed_.empty() ? "N" : "N-");
    for (std::size_t i = 0; i < listed_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(listed_[i]);
    }
    return out;
}

}  // namespace gwleaf
