#include "mocsim/trace_csv.hpp"

#include "mocsim/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace mocsim {

std::string format_number(double v)
{
    if (!std::isfinite(v)) throw ContractViolation("cannot serialize a non-finite number");
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 6);
    std::string s(buf.data(), res.ptr);
    if (s == "-0") s = "0";
    return s;
}

namespace {

constexpr std::size_t kColumns = 12;

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(std::string_view field, std::size_t row, const char* column)
{
    double v = 0;
    const char* end = field.data() + field.size();
    auto res = std::from_chars(field.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
        throw ParseError(row, "cannot parse " + std::string(column) + " value '" +
                                  std::string(field) + "'");
    }
    return v;
}

std::optional<double> parse_optional(std::string_view field, std::size_t row, const char* column)
{
    if (field.empty()) return std::nullopt;
    return parse_double(field, row, column);
}

void check_text(std::string_view s, const char* what)
{
    if (s.find_first_of(",\"\r\n") != std::string_view::npos) {
        throw ContractViolation(std::string(what) + " '" + std::string(s) +
                                "' contains a character the trace CSV cannot carry");
    }
}

void write_optional(std::ostream& out, const std::optional<double>& v)
{
    out << ',';
    if (v) out << format_number(*v);
}

void write_row(std::ostream& out, const Sample& s)
{
    check_text(s.provider_id, "provider_id");
    std::array<char, 24> t{};
    auto res = std::to_chars(t.data(), t.data() + t.size(), s.t_ms);
    out.write(t.data(), res.ptr - t.data());
    out << ',' << s.provider_id << ',';
    if (s.rtt.is_timeout()) {
        out << "TIMEOUT";
    } else {
        out << format_number(s.rtt.ms());
    }
    write_optional(out, s.jitter_ms);
    write_optional(out, s.loss);
    write_optional(out, s.dl_kbps);
    write_optional(out, s.ul_kbps);
    write_optional(out, s.plt_ms);
    out << ',';
    if (s.net_type) out << to_string(*s.net_type);
    write_optional(out, s.lat);
    write_optional(out, s.lon);
    out << ',';
    if (s.cell_id) {
        check_text(*s.cell_id, "cell_id");
        out << *s.cell_id;
    }
    out << '\n';
}

} // namespace

std::vector<LinkTrace> parse_trace_csv(std::istream& in, std::int64_t tick_ms)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("trace CSV is empty; expected header: " + std::string(kTraceCsvHeader));
    }
    if (line != kTraceCsvHeader) {
        throw SchemaError("trace CSV header mismatch; expected: " + std::string(kTraceCsvHeader));
    }

    std::vector<LinkTrace> traces;
    std::map<std::string, std::size_t, std::less<>> index;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;
            throw ParseError(row, "empty line");
        }
        if (line.back() == '\r') throw ParseError(row, "CR line ending; the format uses LF");
        const auto f = split(line);
        if (f.size() != kColumns) {
            throw ParseError(row, "expected " + std::to_string(kColumns) + " columns, got " +
                                      std::to_string(f.size()));
        }

        Sample s;
        {
            std::int64_t t = 0;
            auto res = std::from_chars(f[0].data(), f[0].data() + f[0].size(), t);
            if (res.ec != std::errc{} || res.ptr != f[0].data() + f[0].size()) {
                throw ParseError(row, "cannot parse t_ms value '" + std::string(f[0]) + "'");
            }
            s.t_ms = t;
        }
        if (f[1].empty()) throw ParseError(row, "provider_id is empty");
        s.provider_id = std::string(f[1]);
        if (f[2] == "TIMEOUT") {
            s.rtt = Rtt::timeout();
        } else {
            const double rtt = parse_double(f[2], row, "rtt_ms");
            if (rtt < 0) throw ParseError(row, "rtt_ms is negative");
            s.rtt = Rtt::of(rtt);
        }
        s.jitter_ms = parse_optional(f[3], row, "jitter_ms");
        s.loss = parse_optional(f[4], row, "loss");
        s.dl_kbps = parse_optional(f[5], row, "dl_kbps");
        s.ul_kbps = parse_optional(f[6], row, "ul_kbps");
        s.plt_ms = parse_optional(f[7], row, "plt_ms");
        if (!f[8].empty()) {
            s.net_type = net_type_from_string(f[8]);
            if (!s.net_type) throw ParseError(row, "unknown net_type '" + std::string(f[8]) + "'");
        }
        s.lat = parse_optional(f[9], row, "lat");
        s.lon = parse_optional(f[10], row, "lon");
        if (!f[11].empty()) s.cell_id = std::string(f[11]);

        try {
            validate(s);
        } catch (const ContractViolation& e) {
            throw ParseError(row, e.what());
        }

        auto it = index.find(s.provider_id);
        if (it == index.end()) {
            it = index.emplace(s.provider_id, traces.size()).first;
            LinkTrace tr;
            tr.provider_id = s.provider_id;
            tr.tick_ms = tick_ms;
            traces.push_back(std::move(tr));
        }
        auto& samples = traces[it->second].samples;
        if (!samples.empty() && s.t_ms <= samples.back().t_ms) {
            throw ParseError(row, "t_ms " + std::to_string(s.t_ms) + " for provider '" +
                                      s.provider_id + "' is not after the previous row");
        }
        samples.push_back(std::move(s));
    }
    return traces;
}

std::vector<LinkTrace> parse_trace_csv(const std::filesystem::path& path, std::int64_t tick_ms)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace file " + path.string());
    return parse_trace_csv(in, tick_ms);
}

void write_trace_csv(std::ostream& out, const std::vector<LinkTrace>& traces)
{
    out << kTraceCsvHeader << '\n';
    // merge by time; ties keep provider order, matching how captures interleave
    std::vector<std::size_t> pos(traces.size(), 0);
    while (true) {
        std::optional<std::size_t> pick;
        for (std::size_t p = 0; p < traces.size(); ++p) {
            if (pos[p] >= traces[p].samples.size()) continue;
            if (!pick || traces[p].samples[pos[p]].t_ms < traces[*pick].samples[pos[*pick]].t_ms) {
                pick = p;
            }
        }
        if (!pick) break;
        Sample s = traces[*pick].samples[pos[*pick]++];
        s.provider_id = traces[*pick].provider_id;
        write_row(out, s);
    }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<LinkTrace>& traces)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write trace file " + path.string());
    write_trace_csv(out, traces);
    if (!out) throw IoError("failed writing trace file " + path.string());
}

} // namespace mocsim
