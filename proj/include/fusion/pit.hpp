#pragma once

#include "fusion/dates.hpp"
#include "fusion/domain.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fusion {

// `reference` is the idealized training alignment (data referenced on or
// before the evaluation date); `availability` is production scoring, where
// an observation is usable only once published.
enum class PitMode { reference, availability };

std::string to_string(PitMode m);
PitMode parse_pit_mode(const std::string& s);

// Maximum publication lag per source, in months. Used by the simulator to
// stamp availability dates and by ingestion to derive missing ones.
struct LagPolicy {
    std::array<int, 4> max_publication_lag = {9, 2, 2, 0};
    // indexed by SourceKind: balance_sheet, credit_register, expert_indicator,
    // default_flag

    int lag_for(SourceKind s) const {
        return max_publication_lag[static_cast<size_t>(s)];
    }
    void set_lag(SourceKind s, int months) {
        max_publication_lag[static_cast<size_t>(s)] = months;
    }
};

void validate_lag_policy(const LagPolicy& policy);

struct ChosenObservation {
    Observation obs;
    int staleness_months = 0; // whole months from reference to evaluation
};

struct Snapshot {
    std::string company_id;
    Date evaluation_date;
    PitMode mode = PitMode::reference;
    std::map<SourceKind, ChosenObservation> chosen; // absent source -> no entry

    const ChosenObservation* get(SourceKind s) const {
        auto it = chosen.find(s);
        return it == chosen.end() ? nullptr : &it->second;
    }
};

// For each source, picks the observation with the greatest reference_date
// whose mode constraint holds (reference: reference_date <= evaluation;
// availability: additionally availability_date <= evaluation). Throws
// UnknownCompany / EmptyLedger.
Snapshot as_of_join(const ObservationLedger& ledger, const std::string& company_id,
                    const Date& evaluation_date, const LagPolicy& policy, PitMode mode);

struct PanelRow {
    std::string company_id;
    Date evaluation_date;
    double pd_crd = 0.0;
    double pd_bhv = 0.0;
    SizeClass size = SizeClass::large;
    Date crd_reference_date;
    Date crd_availability_date;
    Date bhv_reference_date;
    Date bhv_availability_date;
    int crd_staleness_months = 0;
    int bhv_staleness_months = 0;
    std::optional<int> label;           // static 12-month default target
    std::optional<double> target_score; // dynamic interpolated target
};

struct Exclusion {
    std::string company_id;
    Date evaluation_date;
    std::string reason;
};

struct FeaturePanel {
    PitMode mode = PitMode::reference;
    std::vector<PanelRow> rows;
    std::vector<Exclusion> exclusions;
};

struct AnchorOptions {
    // The ideal alignment has CR data referenced exactly on Dec 31; real
    // feeds may skip a month, so a small staleness window is tolerated and
    // recorded per row.
    int max_bhv_staleness_months = 1;
};

// One row per company holding pd_crd from the balance sheet referenced at
// Dec 31 of `year`, pd_bhv from the latest CR observation on or before that
// date, and the size class. Companies missing a source are emitted to the
// exclusion list with a machine-readable reason, never silently dropped.
FeaturePanel anchor_panel(const ObservationLedger& ledger, int year,
                          const LagPolicy& policy, const AnchorOptions& options = {});

// One used observation, as consumed by the no-lookahead audit.
struct AuditEntry {
    std::string company_id;
    SourceKind source = SourceKind::balance_sheet;
    Date reference_date;
    Date availability_date;
    Date evaluation_date;
    PitMode mode = PitMode::reference;
};

struct AuditViolation {
    AuditEntry entry;
    std::string constraint; // "reference" or "availability"
};

struct AuditReport {
    size_t entries_checked = 0;
    std::vector<AuditViolation> violations;

    bool clean() const { return violations.empty(); }
};

std::vector<AuditEntry> audit_entries(const Snapshot& snapshot);
std::vector<AuditEntry> audit_entries(const FeaturePanel& panel);

// Empty violation list iff every used observation respects its mode's date
// constraint (reference_date <= evaluation always; availability_date <=
// evaluation additionally in availability mode).
AuditReport check_no_lookahead(std::span<const AuditEntry> entries);

} // namespace fusion
