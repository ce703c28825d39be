#pragma once

#include "fusion/domain.hpp"
#include "fusion/pit.hpp"
#include "fusion/simulator.hpp"

#include <span>
#include <string>

namespace fusion {

// Shortest round-trip decimal representation; keeps outputs byte-stable.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64 over the content, hex encoded. Used to fingerprint training
// panels and artifacts.
std::string content_hash_hex(std::string_view content);

// Canonical ledger file, one observation payload entry per line:
//   company_id,source,reference_date,availability_date,key,value
// The long format lets all four source kinds share one schema. The value
// column holds a number; for the size_class key it holds the label. An
// empty availability_date is derived as reference + policy lag.
std::string ledger_to_csv(const ObservationLedger& ledger);
ObservationLedger ledger_from_csv(const std::string& content, const LagPolicy& fallback_lags);

// JSON-lines twin of the CSV schema (same fields, one object per line).
std::string ledger_to_jsonl(const ObservationLedger& ledger);
ObservationLedger ledger_from_jsonl(const std::string& content, const LagPolicy& fallback_lags);

// Dispatch on extension: .csv or .jsonl.
void save_ledger(const ObservationLedger& ledger, const std::string& path);
ObservationLedger load_ledger(const std::string& path, const LagPolicy& fallback_lags);

std::string panel_to_csv(const FeaturePanel& panel);
std::string exclusions_to_csv(std::span<const Exclusion> exclusions);

// One violation per line, machine-readable.
std::string audit_to_jsonl(const AuditReport& report);

std::string truth_to_csv(const SimulatedTruth& truth);

} // namespace fusion
