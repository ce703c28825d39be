#pragma once

#include "fusion/dates.hpp"
#include "fusion/errors.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace fusion {

// Logit-space score. Unbounded but must stay finite; boundary-checking
// happens at the few entry points that accept raw doubles.
using Score = double;

void require_finite_score(Score s, const char* context);

// Probability in the open interval (0, 1). Exact 0/1 are rejected so that
// logit() is total on stored values; upstream producers must clip first.
class Probability {
public:
    explicit Probability(double value);
    double value() const noexcept { return value_; }

    friend auto operator<=>(const Probability&, const Probability&) = default;

private:
    double value_;
};

inline Probability make_probability(double x) { return Probability(x); }

enum class SizeClass { micro = 0, small = 1, medium = 2, large = 3 };

inline constexpr SizeClass kAllSizes[] = {SizeClass::micro, SizeClass::small,
                                          SizeClass::medium, SizeClass::large};
inline constexpr int kNumSizes = 4;

std::string to_string(SizeClass s);
SizeClass parse_size_class(const std::string& s);
std::optional<SizeClass> try_parse_size_class(const std::string& s);

enum class SourceKind {
    balance_sheet = 0,
    credit_register = 1,
    expert_indicator = 2,
    default_flag = 3,
};

inline constexpr SourceKind kAllSources[] = {
    SourceKind::balance_sheet, SourceKind::credit_register,
    SourceKind::expert_indicator, SourceKind::default_flag};

std::string to_string(SourceKind s);
SourceKind parse_source_kind(const std::string& s);

// One time-stamped record from one source. The payload is a named value
// map; boolean flags are stored as 0/1 and size classes as their code
// (see size_class_payload helpers). Keys starting with "pd_" must satisfy
// the Probability invariant.
struct Observation {
    std::string company_id;
    SourceKind source = SourceKind::balance_sheet;
    Date reference_date;    // period the data describes
    Date availability_date; // first date the data could have been used
    std::map<std::string, double> payload;

    std::optional<double> value(const std::string& key) const;
    bool flag(const std::string& key) const; // absent -> false
};

// Throws InvalidObservation / OutOfRange when invariants are violated.
void validate_observation(const Observation& obs);

// Payload helpers for the size_class key.
double size_class_payload(SizeClass s);
std::optional<SizeClass> size_class_from_payload(const Observation& obs);

struct LedgerKey {
    std::string company_id;
    SourceKind source;
    Date reference_date;

    auto operator<=>(const LedgerKey&) const = default;
};

// All observations, keyed and iterated in sorted (company, source, date)
// order so that serialization is reproducible. Mutation is single-threaded
// ingestion only; afterwards the ledger is shared read-only.
class ObservationLedger {
public:
    using Map = std::map<LedgerKey, Observation>;

    // Validates, rejects duplicates. Throws DuplicateKey / InvalidObservation.
    void insert(Observation obs);

    const Observation* find(const std::string& company_id, SourceKind source,
                            const Date& reference_date) const;

    // All observations for one (company, source), sorted by reference date.
    std::vector<const Observation*> series(const std::string& company_id,
                                           SourceKind source) const;

    std::vector<std::string> companies() const;
    bool contains_company(const std::string& company_id) const;

    std::optional<Date> min_reference_date() const;
    std::optional<Date> max_reference_date() const;

    bool empty() const noexcept { return map_.empty(); }
    size_t size() const noexcept { return map_.size(); }
    const Map& entries() const noexcept { return map_; }

private:
    Map map_;
};

} // namespace fusion
