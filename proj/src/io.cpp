#include "fusion/io.hpp"

#include "fusion/rng.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace fusion {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("FileNotFound", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("FileWriteError", "cannot write '" + path + "'");
    out << content;
    if (!out) throw data_error("FileWriteError", "write failed for '" + path + "'");
}

std::string content_hash_hex(std::string_view content) {
    const uint64_t h = fnv1a64(content);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace {

constexpr const char* kLedgerHeader =
    "company_id,source,reference_date,availability_date,key,value";

std::vector<std::string> split_csv_line(const std::string& line, size_t expected) {
    std::vector<std::string> fields;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    if (fields.size() != expected)
        throw data_error("BadCsv", "expected " + std::to_string(expected) +
                                       " fields, got " + std::to_string(fields.size()));
    return fields;
}

std::string payload_value_to_string(const std::string& key, double value) {
    if (key == "size_class") {
        const int code = static_cast<int>(value);
        return to_string(static_cast<SizeClass>(code));
    }
    return format_double(value);
}

double payload_value_from_string(const std::string& key, const std::string& text) {
    if (auto size = try_parse_size_class(text)) return size_class_payload(*size);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw data_error("BadCsv", "cannot parse value '" + text + "' for key '" + key + "'");
    return v;
}

struct LedgerLine {
    std::string company_id;
    SourceKind source;
    Date reference_date;
    std::optional<Date> availability_date;
    std::string key;
    double value;
};

ObservationLedger assemble_ledger(const std::vector<LedgerLine>& lines,
                                  const LagPolicy& fallback_lags) {
    // Group payload entries by (company, source, reference_date).
    std::map<LedgerKey, Observation> grouped;
    for (const LedgerLine& line : lines) {
        const Date availability =
            line.availability_date
                ? *line.availability_date
                : add_months(line.reference_date, fallback_lags.lag_for(line.source));
        LedgerKey key{line.company_id, line.source, line.reference_date};
        auto it = grouped.find(key);
        if (it == grouped.end()) {
            Observation obs;
            obs.company_id = line.company_id;
            obs.source = line.source;
            obs.reference_date = line.reference_date;
            obs.availability_date = availability;
            obs.payload[line.key] = line.value;
            grouped.emplace(std::move(key), std::move(obs));
        } else {
            if (it->second.availability_date != availability)
                throw data_error("InconsistentAvailability",
                                 "conflicting availability dates for " + line.company_id +
                                     "/" + to_string(line.source) + "/" +
                                     to_string(line.reference_date));
            if (!it->second.payload.emplace(line.key, line.value).second)
                throw data_error("DuplicateKey",
                                 "repeated payload key '" + line.key + "' for " +
                                     line.company_id + "/" + to_string(line.source) + "/" +
                                     to_string(line.reference_date));
        }
    }
    ObservationLedger ledger;
    for (auto& [key, obs] : grouped) ledger.insert(std::move(obs));
    return ledger;
}

} // namespace

std::string ledger_to_csv(const ObservationLedger& ledger) {
    std::string out(kLedgerHeader);
    out += '\n';
    for (const auto& [key, obs] : ledger.entries()) {
        for (const auto& [pkey, pvalue] : obs.payload) {
            out += obs.company_id;
            out += ',';
            out += to_string(obs.source);
            out += ',';
            out += to_string(obs.reference_date);
            out += ',';
            out += to_string(obs.availability_date);
            out += ',';
            out += pkey;
            out += ',';
            out += payload_value_to_string(pkey, pvalue);
            out += '\n';
        }
    }
    return out;
}

ObservationLedger ledger_from_csv(const std::string& content, const LagPolicy& fallback_lags) {
    std::vector<LedgerLine> lines;
    std::istringstream in(content);
    std::string line;
    bool first = true;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line != kLedgerHeader)
                throw data_error("BadCsv", "unexpected ledger header: '" + line + "'");
            continue;
        }
        try {
            auto fields = split_csv_line(line, 6);
            LedgerLine entry;
            entry.company_id = fields[0];
            entry.source = parse_source_kind(fields[1]);
            entry.reference_date = parse_date(fields[2]);
            if (!fields[3].empty()) entry.availability_date = parse_date(fields[3]);
            entry.key = fields[4];
            entry.value = payload_value_from_string(entry.key, fields[5]);
            lines.push_back(std::move(entry));
        } catch (const Error& e) {
            throw data_error(e.code(), "ledger line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return assemble_ledger(lines, fallback_lags);
}

std::string ledger_to_jsonl(const ObservationLedger& ledger) {
    std::string out;
    for (const auto& [key, obs] : ledger.entries()) {
        for (const auto& [pkey, pvalue] : obs.payload) {
            json j;
            j["company_id"] = obs.company_id;
            j["source"] = to_string(obs.source);
            j["reference_date"] = to_string(obs.reference_date);
            j["availability_date"] = to_string(obs.availability_date);
            j["key"] = pkey;
            if (pkey == "size_class")
                j["value"] = payload_value_to_string(pkey, pvalue);
            else
                j["value"] = pvalue;
            out += j.dump();
            out += '\n';
        }
    }
    return out;
}

ObservationLedger ledger_from_jsonl(const std::string& content, const LagPolicy& fallback_lags) {
    std::vector<LedgerLine> lines;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            LedgerLine entry;
            entry.company_id = j.at("company_id").get<std::string>();
            entry.source = parse_source_kind(j.at("source").get<std::string>());
            entry.reference_date = parse_date(j.at("reference_date").get<std::string>());
            if (j.contains("availability_date") && !j.at("availability_date").is_null()) {
                const auto text = j.at("availability_date").get<std::string>();
                if (!text.empty()) entry.availability_date = parse_date(text);
            }
            entry.key = j.at("key").get<std::string>();
            const auto& value = j.at("value");
            entry.value = value.is_string()
                              ? payload_value_from_string(entry.key, value.get<std::string>())
                              : value.get<double>();
            lines.push_back(std::move(entry));
        } catch (const json::exception& e) {
            throw data_error("BadJsonl",
                             "ledger line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw data_error(e.code(), "ledger line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return assemble_ledger(lines, fallback_lags);
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

void save_ledger(const ObservationLedger& ledger, const std::string& path) {
    if (ends_with(path, ".jsonl"))
        write_text_file(path, ledger_to_jsonl(ledger));
    else if (ends_with(path, ".csv"))
        write_text_file(path, ledger_to_csv(ledger));
    else
        throw config_error("BadConfig", "ledger path must end in .csv or .jsonl: " + path);
}

ObservationLedger load_ledger(const std::string& path, const LagPolicy& fallback_lags) {
    if (ends_with(path, ".jsonl"))
        return ledger_from_jsonl(read_text_file(path), fallback_lags);
    if (ends_with(path, ".csv"))
        return ledger_from_csv(read_text_file(path), fallback_lags);
    throw config_error("BadConfig", "ledger path must end in .csv or .jsonl: " + path);
}

std::string panel_to_csv(const FeaturePanel& panel) {
    std::string out =
        "company_id,evaluation_date,pd_crd,pd_bhv,size,crd_reference_date,"
        "bhv_reference_date,crd_staleness_months,bhv_staleness_months,label,target_score\n";
    for (const PanelRow& row : panel.rows) {
        out += row.company_id;
        out += ',';
        out += to_string(row.evaluation_date);
        out += ',';
        out += format_double(row.pd_crd);
        out += ',';
        out += format_double(row.pd_bhv);
        out += ',';
        out += to_string(row.size);
        out += ',';
        out += to_string(row.crd_reference_date);
        out += ',';
        out += to_string(row.bhv_reference_date);
        out += ',';
        out += std::to_string(row.crd_staleness_months);
        out += ',';
        out += std::to_string(row.bhv_staleness_months);
        out += ',';
        out += row.label ? std::to_string(*row.label) : std::string();
        out += ',';
        out += row.target_score ? format_double(*row.target_score) : std::string();
        out += '\n';
    }
    return out;
}

std::string exclusions_to_csv(std::span<const Exclusion> exclusions) {
    std::string out = "company_id,evaluation_date,reason\n";
    for (const Exclusion& e : exclusions) {
        out += e.company_id;
        out += ',';
        out += to_string(e.evaluation_date);
        out += ',';
        out += e.reason;
        out += '\n';
    }
    return out;
}

std::string audit_to_jsonl(const AuditReport& report) {
    std::string out;
    for (const AuditViolation& v : report.violations) {
        json j;
        j["company_id"] = v.entry.company_id;
        j["source"] = to_string(v.entry.source);
        j["reference_date"] = to_string(v.entry.reference_date);
        j["availability_date"] = to_string(v.entry.availability_date);
        j["evaluation_date"] = to_string(v.entry.evaluation_date);
        j["mode"] = to_string(v.entry.mode);
        j["constraint"] = v.constraint;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string truth_to_csv(const SimulatedTruth& truth) {
    std::string out = "company_id,size,month,latent,hazard,defaulted_this_month\n";
    for (const CompanyTruth& c : truth.companies) {
        for (size_t i = 0; i < c.months.size(); ++i) {
            const bool defaulted = c.default_month && *c.default_month == c.months[i];
            out += c.company_id;
            out += ',';
            out += to_string(c.size);
            out += ',';
            out += to_string(c.months[i]);
            out += ',';
            out += format_double(c.latent[i]);
            out += ',';
            out += format_double(c.hazard[i]);
            out += ',';
            out += defaulted ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

} // namespace fusion
