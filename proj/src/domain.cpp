#include "fusion/domain.hpp"

#include <cmath>

namespace fusion {

void require_finite_score(Score s, const char* context) {
    if (!std::isfinite(s))
        throw numeric_error("NotFinite", std::string(context) + ": score must be finite");
}

Probability::Probability(double value) : value_(value) {
    if (std::isnan(value) || std::isinf(value))
        throw numeric_error("NotFinite", "probability must be finite");
    if (value <= 0.0 || value >= 1.0)
        throw numeric_error("OutOfRange",
                            "probability must lie strictly inside (0, 1), got " +
                                std::to_string(value));
}

std::string to_string(SizeClass s) {
    switch (s) {
        case SizeClass::micro: return "micro";
        case SizeClass::small: return "small";
        case SizeClass::medium: return "medium";
        case SizeClass::large: return "large";
    }
    throw Error("InternalError", "unreachable size class");
}

std::optional<SizeClass> try_parse_size_class(const std::string& s) {
    if (s == "micro") return SizeClass::micro;
    if (s == "small") return SizeClass::small;
    if (s == "medium") return SizeClass::medium;
    if (s == "large") return SizeClass::large;
    return std::nullopt;
}

SizeClass parse_size_class(const std::string& s) {
    if (auto v = try_parse_size_class(s)) return *v;
    throw data_error("BadSizeClass", "unknown size class '" + s + "'");
}

std::string to_string(SourceKind s) {
    switch (s) {
        case SourceKind::balance_sheet: return "balance_sheet";
        case SourceKind::credit_register: return "credit_register";
        case SourceKind::expert_indicator: return "expert_indicator";
        case SourceKind::default_flag: return "default_flag";
    }
    throw Error("InternalError", "unreachable source kind");
}

SourceKind parse_source_kind(const std::string& s) {
    if (s == "balance_sheet") return SourceKind::balance_sheet;
    if (s == "credit_register") return SourceKind::credit_register;
    if (s == "expert_indicator") return SourceKind::expert_indicator;
    if (s == "default_flag") return SourceKind::default_flag;
    throw data_error("BadSourceKind", "unknown source kind '" + s + "'");
}

std::optional<double> Observation::value(const std::string& key) const {
    auto it = payload.find(key);
    if (it == payload.end()) return std::nullopt;
    return it->second;
}

bool Observation::flag(const std::string& key) const {
    auto it = payload.find(key);
    return it != payload.end() && it->second != 0.0;
}

void validate_observation(const Observation& obs) {
    if (obs.company_id.empty())
        throw data_error("InvalidObservation", "empty company_id");
    if (!is_valid_date(obs.reference_date) || !is_valid_date(obs.availability_date))
        throw data_error("InvalidObservation",
                         "invalid date on observation for " + obs.company_id);
    if (obs.availability_date < obs.reference_date)
        throw data_error("InvalidObservation",
                         "availability_date precedes reference_date for " +
                             obs.company_id + " at " + to_string(obs.reference_date));
    for (const auto& [key, value] : obs.payload) {
        if (key.rfind("pd_", 0) == 0) {
            Probability check(value); // throws OutOfRange / NotFinite
            (void)check;
        }
    }
}

double size_class_payload(SizeClass s) { return static_cast<double>(static_cast<int>(s)); }

std::optional<SizeClass> size_class_from_payload(const Observation& obs) {
    auto v = obs.value("size_class");
    if (!v) return std::nullopt;
    int code = static_cast<int>(*v);
    if (code < 0 || code >= kNumSizes || static_cast<double>(code) != *v)
        throw data_error("BadSizeClass",
                         "size_class payload out of range for " + obs.company_id);
    return static_cast<SizeClass>(code);
}

void ObservationLedger::insert(Observation obs) {
    validate_observation(obs);
    LedgerKey key{obs.company_id, obs.source, obs.reference_date};
    auto [it, inserted] = map_.emplace(std::move(key), std::move(obs));
    if (!inserted)
        throw data_error("DuplicateKey",
                         "duplicate observation for " + it->first.company_id + "/" +
                             to_string(it->first.source) + "/" +
                             to_string(it->first.reference_date));
}

const Observation* ObservationLedger::find(const std::string& company_id,
                                           SourceKind source,
                                           const Date& reference_date) const {
    auto it = map_.find(LedgerKey{company_id, source, reference_date});
    return it == map_.end() ? nullptr : &it->second;
}

std::vector<const Observation*> ObservationLedger::series(const std::string& company_id,
                                                          SourceKind source) const {
    std::vector<const Observation*> out;
    auto lo = map_.lower_bound(LedgerKey{company_id, source, Date{-32768, 1, 1}});
    for (auto it = lo; it != map_.end(); ++it) {
        if (it->first.company_id != company_id || it->first.source != source) break;
        out.push_back(&it->second);
    }
    return out;
}

std::vector<std::string> ObservationLedger::companies() const {
    std::vector<std::string> out;
    for (const auto& [key, obs] : map_) {
        if (out.empty() || out.back() != key.company_id) out.push_back(key.company_id);
    }
    return out;
}

bool ObservationLedger::contains_company(const std::string& company_id) const {
    auto lo = map_.lower_bound(LedgerKey{company_id, SourceKind::balance_sheet,
                                         Date{-32768, 1, 1}});
    return lo != map_.end() && lo->first.company_id == company_id;
}

std::optional<Date> ObservationLedger::min_reference_date() const {
    std::optional<Date> best;
    for (const auto& [key, obs] : map_)
        if (!best || key.reference_date < *best) best = key.reference_date;
    return best;
}

std::optional<Date> ObservationLedger::max_reference_date() const {
    std::optional<Date> best;
    for (const auto& [key, obs] : map_)
        if (!best || *best < key.reference_date) best = key.reference_date;
    return best;
}

} // namespace fusion
