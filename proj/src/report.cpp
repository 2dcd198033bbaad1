#include "mocsim/report.hpp"

#include "mocsim/errors.hpp"
#include "mocsim/trace_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mocsim {

using nlohmann::json;

double round6(double x)
{
    const std::string s = format_number(x);
    double v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

namespace {

json q_object(const ReliabilityReport& rep)
{
    json q = json::object();
    for (const auto& [m, v] : rep.q_s) q[std::string(to_string(m))] = round6(v);
    return q;
}

json optional_number(const std::optional<double>& v)
{
    return v ? json(round6(*v)) : json(nullptr);
}

json reliability_fields(const ReliabilityReport& rep)
{
    return {{"r_s", round6(rep.r_s)}, {"q_s", q_object(rep)}, {"mttf_ms", optional_number(rep.mttf_ms)}};
}

// Flat tables used for the CSV form of the nested sections.
json providers_table(const ScenarioResult& r)
{
    json cols = {"id", "r_s"};
    for (Metric m : kAllMetrics) cols.push_back("q_" + std::string(to_string(m)));
    cols.push_back("mttf_ms");
    cols.push_back("extra_hops");
    json rows = json::array();
    for (const auto& p : r.providers) {
        json row = {p.report.provider_set.front(), round6(p.report.r_s)};
        for (Metric m : kAllMetrics) {
            auto it = p.report.q_s.find(m);
            row.push_back(it == p.report.q_s.end() ? json(nullptr) : json(round6(it->second)));
        }
        row.push_back(optional_number(p.report.mttf_ms));
        row.push_back(p.extra_hops);
        rows.push_back(row);
    }
    return {{"columns", cols}, {"rows", rows}};
}

json combinations_table(const ScenarioResult& r)
{
    json cols = {"providers", "r_s"};
    for (Metric m : kAllMetrics) cols.push_back("q_" + std::string(to_string(m)));
    cols.push_back("mttf_ms");
    json rows = json::array();
    for (const auto& c : r.combinations) {
        std::string ids;
        for (const auto& id : c.provider_set) ids += (ids.empty() ? "" : "+") + id;
        json row = {ids, round6(c.r_s)};
        for (Metric m : kAllMetrics) {
            auto it = c.q_s.find(m);
            row.push_back(it == c.q_s.end() ? json(nullptr) : json(round6(it->second)));
        }
        row.push_back(optional_number(c.mttf_ms));
        rows.push_back(row);
    }
    return {{"columns", cols}, {"rows", rows}};
}

json policies_table(const ScenarioResult& r)
{
    json cols = {"name", "switches", "mean_effective_rtt_ms"};
    std::vector<std::string> baselines;
    if (!r.policies.empty()) {
        for (const auto& [b, _] : r.policies.front().stats.improvement_vs) baselines.push_back(b);
    }
    for (const auto& b : baselines) cols.push_back("improvement_vs_" + b);
    cols.push_back("r_s");
    for (Metric m : kAllMetrics) cols.push_back("q_" + std::string(to_string(m)));
    cols.push_back("mttf_ms");
    cols.push_back("coverage_holes");
    json rows = json::array();
    for (const auto& p : r.policies) {
        json row = {p.name, p.stats.switch_count, round6(p.stats.mean_effective_rtt)};
        for (const auto& b : baselines) row.push_back(round6(p.stats.improvement_vs.at(b)));
        row.push_back(round6(p.report.r_s));
        for (Metric m : kAllMetrics) {
            auto it = p.report.q_s.find(m);
            row.push_back(it == p.report.q_s.end() ? json(nullptr) : json(round6(it->second)));
        }
        row.push_back(optional_number(p.report.mttf_ms));
        row.push_back(p.coverage_holes.size());
        rows.push_back(row);
    }
    return {{"columns", cols}, {"rows", rows}};
}

json probes_table(const ScenarioResult& r)
{
    json cols = {"provider_id", "packet_size_bytes", "transport", "bursts", "mean_loss",
                 "median_rtt_ms"};
    json rows = json::array();
    for (const auto& p : r.probes) {
        rows.push_back({p.provider_id, p.spec.packet_size_bytes,
                        p.spec.transport == Transport::UDP_LIKE ? "udp" : "tcp", p.bursts,
                        round6(p.mean_loss), optional_number(p.median_rtt_ms)});
    }
    return {{"columns", cols}, {"rows", rows}};
}

json meta_json(const ScenarioResult& r)
{
    return {{"config_hash", r.config_hash},
            {"seed", r.seed},
            {"tool_version", std::string(kToolVersion)},
            {"rtt_statistic", "mean"}};
}

std::string cell_text(const json& v)
{
    if (v.is_null()) return "";
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s.find_first_of(",\"\r\n") != std::string::npos) {
            throw ContractViolation("table cell '" + s + "' cannot be written as CSV");
        }
        return s;
    }
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    throw ContractViolation("table cell is not a scalar");
}

json cell_value(std::string_view s)
{
    if (s.empty()) return nullptr;
    const char* end = s.data() + s.size();
    std::int64_t i = 0;
    if (auto res = std::from_chars(s.data(), end, i); res.ec == std::errc{} && res.ptr == end) {
        return i;
    }
    double d = 0;
    if (auto res = std::from_chars(s.data(), end, d); res.ec == std::errc{} && res.ptr == end) {
        return d;
    }
    return std::string(s);
}

} // namespace

json reactive_table_json(const ReactiveTable& t)
{
    json cols = {"window_s"};
    for (const auto& b : t.baselines) cols.push_back("improvement_vs_" + b);
    cols.push_back("switches");
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row = json::array();
        row.push_back(r.window_s ? json(round6(*r.window_s)) : json("oracle"));
        for (double v : r.improvement) row.push_back(round6(v));
        row.push_back(r.switches);
        rows.push_back(row);
    }
    return {{"columns", cols}, {"rows", rows}};
}

json curves_json(const std::vector<CurveRow>& rows)
{
    json out_rows = json::array();
    for (const auto& r : rows) {
        out_rows.push_back(
            {round6(r.lambda), r.n, round6(r.reliability), round6(r.mttf_times_lambda)});
    }
    return {{"columns", {"lambda", "n", "reliability", "mttf_times_lambda"}}, {"rows", out_rows}};
}

json report_json(const ScenarioResult& r)
{
    json j;
    j["meta"] = meta_json(r);

    j["providers"] = json::array();
    for (const auto& p : r.providers) {
        json o = reliability_fields(p.report);
        o["id"] = p.report.provider_set.front();
        o["extra_hops"] = p.extra_hops;
        j["providers"].push_back(o);
    }

    j["combinations"] = json::array();
    for (const auto& c : r.combinations) {
        json o = reliability_fields(c);
        o["providers"] = c.provider_set;
        j["combinations"].push_back(o);
    }

    if (!r.policies.empty()) {
        j["policies"] = json::array();
        for (const auto& p : r.policies) {
            json o = reliability_fields(p.report);
            o["name"] = p.name;
            o["switches"] = p.stats.switch_count;
            o["mean_effective_rtt_ms"] = round6(p.stats.mean_effective_rtt);
            json imp = json::object();
            for (const auto& [b, v] : p.stats.improvement_vs) imp[b] = round6(v);
            o["improvement_vs"] = imp;
            o["coverage_holes"] = p.coverage_holes.size();
            j["policies"].push_back(o);
        }
    }

    if (!r.probes.empty()) j["probes"] = probes_table(r);
    j["reactive_table"] = reactive_table_json(r.reactive);
    j["curves"] = curves_json(r.curves);
    return j;
}

std::string table_csv(const json& table)
{
    std::ostringstream out;
    bool first = true;
    for (const auto& c : table.at("columns")) {
        if (!first) out << ',';
        out << cell_text(c);
        first = false;
    }
    out << '\n';
    for (const auto& row : table.at("rows")) {
        first = true;
        for (const auto& v : row) {
            if (!first) out << ',';
            out << cell_text(v);
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

json table_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    json table = {{"columns", json::array()}, {"rows", json::array()}};
    auto split = [](const std::string& l) {
        std::vector<std::string_view> out;
        std::string_view sv(l);
        std::size_t start = 0;
        while (true) {
            auto c = sv.find(',', start);
            out.push_back(sv.substr(start, c == std::string_view::npos ? sv.npos : c - start));
            if (c == std::string_view::npos) break;
            start = c + 1;
        }
        return out;
    };
    if (!std::getline(in, line)) throw SchemaError("table CSV is empty");
    for (auto c : split(line)) table["columns"].push_back(std::string(c));
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != table["columns"].size()) {
            throw ParseError(row_no, "column count does not match the header");
        }
        json row = json::array();
        for (auto c : cells) row.push_back(cell_value(c));
        table["rows"].push_back(row);
    }
    return table;
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_report(const ScenarioResult& r, ReportFormat format, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    if (format == ReportFormat::Json) {
        write_text_file(dir / "report.json", report_json(r).dump(2) + "\n");
        return;
    }

    const json meta = meta_json(r);
    json meta_rows = json::array();
    for (const auto& [k, v] : meta.items()) {
        meta_rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
    }
    write_text_file(dir / "meta.csv", table_csv({{"columns", {"key", "value"}}, {"rows", meta_rows}}));
    write_text_file(dir / "providers.csv", table_csv(providers_table(r)));
    write_text_file(dir / "combinations.csv", table_csv(combinations_table(r)));
    if (!r.policies.empty()) write_text_file(dir / "policies.csv", table_csv(policies_table(r)));
    if (!r.probes.empty()) write_text_file(dir / "probes.csv", table_csv(probes_table(r)));
    write_text_file(dir / "reactive_table.csv", table_csv(reactive_table_json(r.reactive)));
    write_text_file(dir / "curves.csv", table_csv(curves_json(r.curves)));
}

json load_csv_tables(const std::filesystem::path& dir)
{
    return {{"reactive_table", table_from_csv(read_text_file(dir / "reactive_table.csv"))},
            {"curves", table_from_csv(read_text_file(dir / "curves.csv"))}};
}

} // namespace mocsim
