#include "fusion/pit.hpp"

namespace fusion {

std::string to_string(PitMode m) {
    return m == PitMode::reference ? "reference" : "availability";
}

PitMode parse_pit_mode(const std::string& s) {
    if (s == "reference") return PitMode::reference;
    if (s == "availability") return PitMode::availability;
    throw config_error("BadConfig", "mode must be 'reference' or 'availability', got '" + s + "'");
}

void validate_lag_policy(const LagPolicy& policy) {
    for (SourceKind s : kAllSources)
        if (policy.lag_for(s) < 0)
            throw config_error("BadConfig",
                               "publication lag for " + to_string(s) + " must be >= 0");
}

Snapshot as_of_join(const ObservationLedger& ledger, const std::string& company_id,
                    const Date& evaluation_date, const LagPolicy& policy, PitMode mode) {
    validate_lag_policy(policy);
    if (ledger.empty()) throw data_error("EmptyLedger", "as_of_join over empty ledger");
    if (!ledger.contains_company(company_id))
        throw data_error("UnknownCompany", "no observations for '" + company_id + "'");

    Snapshot snap;
    snap.company_id = company_id;
    snap.evaluation_date = evaluation_date;
    snap.mode = mode;

    for (SourceKind source : kAllSources) {
        const Observation* best = nullptr;
        for (const Observation* obs : ledger.series(company_id, source)) {
            if (evaluation_date < obs->reference_date) break; // series is date-sorted
            if (mode == PitMode::availability && evaluation_date < obs->availability_date)
                continue;
            best = obs; // latest so far; loop runs in ascending reference order
        }
        if (best) {
            snap.chosen.emplace(source,
                                ChosenObservation{*best, months_between(best->reference_date,
                                                                        evaluation_date)});
        }
    }
    return snap;
}

FeaturePanel anchor_panel(const ObservationLedger& ledger, int year,
                          const LagPolicy& policy, const AnchorOptions& options) {
    if (ledger.empty()) throw data_error("EmptyLedger", "anchor_panel over empty ledger");
    const Date anchor = dec31(year);

    FeaturePanel panel;
    panel.mode = PitMode::reference;

    for (const std::string& company : ledger.companies()) {
        const Observation* sheet = ledger.find(company, SourceKind::balance_sheet, anchor);
        if (!sheet || !sheet->value("pd_crd")) {
            panel.exclusions.push_back({company, anchor, "missing_crd"});
            continue;
        }
        const auto size = size_class_from_payload(*sheet);
        if (!size) {
            panel.exclusions.push_back({company, anchor, "missing_size"});
            continue;
        }

        Snapshot snap = as_of_join(ledger, company, anchor, policy, PitMode::reference);
        const ChosenObservation* cr = snap.get(SourceKind::credit_register);
        if (!cr || !cr->obs.value("pd_bhv")) {
            panel.exclusions.push_back({company, anchor, "missing_bhv"});
            continue;
        }
        if (cr->staleness_months > options.max_bhv_staleness_months) {
            panel.exclusions.push_back({company, anchor, "stale_bhv"});
            continue;
        }

        PanelRow row;
        row.company_id = company;
        row.evaluation_date = anchor;
        row.pd_crd = *sheet->value("pd_crd");
        row.pd_bhv = *cr->obs.value("pd_bhv");
        row.size = *size;
        row.crd_reference_date = sheet->reference_date;
        row.crd_availability_date = sheet->availability_date;
        row.bhv_reference_date = cr->obs.reference_date;
        row.bhv_availability_date = cr->obs.availability_date;
        row.crd_staleness_months = 0;
        row.bhv_staleness_months = cr->staleness_months;
        panel.rows.push_back(std::move(row));
    }
    return panel;
}

std::vector<AuditEntry> audit_entries(const Snapshot& snapshot) {
    std::vector<AuditEntry> out;
    for (const auto& [source, chosen] : snapshot.chosen) {
        out.push_back({snapshot.company_id, source, chosen.obs.reference_date,
                       chosen.obs.availability_date, snapshot.evaluation_date,
                       snapshot.mode});
    }
    return out;
}

std::vector<AuditEntry> audit_entries(const FeaturePanel& panel) {
    std::vector<AuditEntry> out;
    out.reserve(panel.rows.size() * 2);
    for (const PanelRow& row : panel.rows) {
        out.push_back({row.company_id, SourceKind::balance_sheet, row.crd_reference_date,
                       row.crd_availability_date, row.evaluation_date, panel.mode});
        out.push_back({row.company_id, SourceKind::credit_register, row.bhv_reference_date,
                       row.bhv_availability_date, row.evaluation_date, panel.mode});
    }
    return out;
}

AuditReport check_no_lookahead(std::span<const AuditEntry> entries) {
    AuditReport report;
    report.entries_checked = entries.size();
    for (const AuditEntry& e : entries) {
        if (e.evaluation_date < e.reference_date)
            report.violations.push_back({e, "reference"});
        if (e.mode == PitMode::availability && e.evaluation_date < e.availability_date)
            report.violations.push_back({e, "availability"});
    }
    return report;
}

} // namespace fusion
