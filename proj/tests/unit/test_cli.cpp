#include "helpers.hpp"

#include "mocsim/errors.hpp"
#include "mocsim/report.hpp"
#include "mocsim/scenario.hpp"
#include "mocsim/trace_csv.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

using namespace mocsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string header() { return std::string(kTraceCsvHeader) + "\n"; }

// Random rows with every optional column sometimes empty, written with the
// same six-digit rule the writer uses so the text itself must round-trip.
std::string fuzz_csv(std::mt19937_64& rng, std::size_t rows)
{
    std::uniform_real_distribution<double> u(0, 1);
    auto num = [&](double lo, double hi) { return format_number(lo + (hi - lo) * u(rng)); };
    auto maybe = [&](const std::string& s) { return u(rng) < 0.2 ? std::string() : s; };
    const char* nets[] = {"LTE", "HSPA_PLUS", "OTHER", "NONE"};
    const char* ids[] = {"NP1", "NP2", "NP3"};
    std::int64_t t[3] = {0, 0, 0};
    std::ostringstream out;
    out << header();
    for (std::size_t i = 0; i < rows; ++i) {
        const int p = static_cast<int>(u(rng) * 3);
        t[p] += 1 + static_cast<std::int64_t>(u(rng) * 5000);
        out << t[p] << ',' << ids[p] << ',' << (u(rng) < 0.1 ? "TIMEOUT" : num(0, 20000)) << ','
            << maybe(num(0, 100)) << ',' << maybe(num(0, 1)) << ',' << maybe(num(0, 1e5)) << ','
            << maybe(num(0, 5e4)) << ',' << maybe(num(0, 5000)) << ','
            << maybe(nets[static_cast<int>(u(rng) * 4)]) << ',' << maybe(num(-90, 90)) << ','
            << maybe(num(-180, 180)) << ',' << maybe("cell-" + std::to_string(i)) << '\n';
    }
    return out.str();
}

std::vector<LinkTrace> parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_trace_csv(in);
}

std::string write(const std::vector<LinkTrace>& traces)
{
    std::ostringstream out;
    write_trace_csv(out, traces);
    return out.str();
}

fs::path temp_dir(const std::string& name)
{
    auto d = fs::temp_directory_path() / ("mocsim_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

json small_config()
{
    return json::parse(R"({
      "schema": 1, "seed": 9, "duration_ms": 600000,
      "providers": [
        {"id": "A", "synthetic": {"base_rtt_ms": 60, "hazard": {"phi": 0.0001}}},
        {"id": "B", "synthetic": {"base_rtt_ms": 70, "weibull": {"beta": 1.3, "eta": 2000}}},
        {"id": "A_ssm", "ssm_of": "A", "extra_rtt_ms": 20, "extra_hops": 3}
      ],
      "policies": [{"type": "single", "provider": "A"}, {"type": "oracle"}],
      "probes": [{"packets_per_burst": 10}],
      "curves": {"n_max": 3, "lambda_grid": [0.05, 0.1]}
    })");
}

} // namespace

TEST_CASE("number formatting")
{
    CHECK(format_number(418.10384) == "418.104");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e-7) == "1e-07");
    CHECK(format_number(100000) == "100000");
    CHECK(format_number(1234567) == "1.23457e+06");
    CHECK(round6(2.0 / 3.0) == 0.666667);
}

TEST_CASE("trace csv round trip on a fuzzed corpus")
{
    std::mt19937_64 rng(2024);
    const std::string text = fuzz_csv(rng, 1000);
    const auto traces = parse(text);
    CHECK(traces.size() == 3);
    std::size_t n = 0;
    for (const auto& t : traces) n += t.samples.size();
    CHECK(n == 1000);
    const std::string again = write(traces);
    // the time merge may change which provider appears first, never the per-provider rows
    auto by_id = [](std::vector<LinkTrace> v) {
        std::sort(v.begin(), v.end(),
                  [](const LinkTrace& a, const LinkTrace& b) { return a.provider_id < b.provider_id; });
        return v;
    };
    CHECK(by_id(parse(again)) == by_id(traces));
    CHECK(write(parse(again)) == again);
}

TEST_CASE("trace csv content")
{
    const auto traces = parse(header() + "0,NP1,38,,,,,,LTE,,,\n"
                                         "0,NP2,TIMEOUT,,1,,,,NONE,,,c1\n"
                                         "3000,NP1,45.5,1.5,0,60000,30000,500,,51.5,-0.1,\n");
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].samples.size() == 2);
    CHECK(traces[1].samples[0].rtt.is_timeout());
    CHECK_FALSE(meets_threshold(traces[1].samples[0], Thresholds{}, Metric::Availability));
    CHECK(*traces[1].samples[0].cell_id == "c1");
    CHECK(*traces[0].samples[1].lat == 51.5);
    CHECK_FALSE(traces[0].samples[0].jitter_ms.has_value());
}

TEST_CASE("trace csv errors")
{
    CHECK_THROWS_AS(parse(""), SchemaError);
    CHECK_THROWS_AS(parse("t_ms,provider\n"), SchemaError);
    try {
        parse(header() + "0,A,1,,,,,,,,,\n0,A,2,,,,,,,,,\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(std::string(e.what()).rfind("row 3: ", 0) == 0);
    }
    CHECK_THROWS_AS(parse(header() + "0,A,abc,,,,,,,,,\n"), ParseError);
    CHECK_THROWS_AS(parse(header() + "0,A,timeout,,,,,,,,,\n"), ParseError);
    CHECK_THROWS_AS(parse(header() + "0,A,1,,,,,,,,\n"), ParseError);
    CHECK_THROWS_AS(parse(header() + "0,A,1,,2,,,,,,,\n"), ParseError);
    CHECK_THROWS_AS(parse(header() + "0,A,1,,,,,,WIFI,,,\n"), ParseError);
    CHECK_THROWS_AS(parse(header() + "0,A,1,,,,,,,,,\r\n"), ParseError);
    CHECK_THROWS_AS(parse_trace_csv(fs::path("/nonexistent/trace.csv")), IoError);
}

TEST_CASE("config parsing")
{
    const auto cfg = config_from_json(small_config());
    CHECK(cfg.providers.size() == 3);
    CHECK(cfg.seed == 9);
    CHECK(cfg.policies.size() == 2);
    CHECK(cfg.n_max == 3);
    CHECK_NOTHROW(cfg.validate());

    auto j = small_config();
    j["schema"] = 2;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = small_config();
    j["bogus"] = 1;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = small_config();
    j["providers"][0]["synthetic"]["base_rtt_ms"] = "fast";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = small_config();
    j["duration_ms"] = 3000;
    CHECK_THROWS_AS(config_from_json(j).validate(), ConfigError);
    j = small_config();
    j["providers"] = json::array();
    CHECK_THROWS_AS(config_from_json(j).validate(), ConfigError);
    j = small_config();
    j["providers"][0] = {{"trace_file", "missing.csv"}};
    CHECK_THROWS_AS(config_from_json(j, "/nonexistent").validate(), ConfigError);
}

TEST_CASE("config hash tracks content")
{
    const auto a = config_from_json(small_config());
    auto j = small_config();
    CHECK(config_hash(a) == config_hash(config_from_json(j)));
    CHECK(config_hash(a).size() == 16);
    j["seed"] = 10;
    CHECK(config_hash(a) != config_hash(config_from_json(j)));
    CHECK(config_to_json(config_from_json(config_to_json(a))) == config_to_json(a));
}

TEST_CASE("scenario runs deterministically")
{
    const auto cfg = config_from_json(small_config());
    const auto r1 = run_scenario(cfg);
    const auto r2 = run_scenario(cfg);
    CHECK(report_json(r1).dump() == report_json(r2).dump());
    CHECK(r1.providers.size() == 3);
    CHECK(r1.providers[2].extra_hops == 3);
    CHECK(r1.combinations.size() == 4);
    CHECK(r1.policies.size() == 2);
    CHECK(r1.curves.size() == 6);
    CHECK(r1.reactive.rows.size() == 7);
    CHECK(r1.probes.size() == 3);
    CHECK(r1.probes[0].bursts == 20);

    auto other = cfg;
    other.seed = 10;
    CHECK(report_json(run_scenario(other)).dump() != report_json(r1).dump());
}

TEST_CASE("single clean provider meets the rtt threshold everywhere")
{
    auto j = json::parse(R"({"schema": 1, "duration_ms": 60000,
      "providers": [{"id": "A", "synthetic": {"base_rtt_ms": 80, "rtt_noise_sigma": 0,
        "hazard": {"phi": 1e-300}, "weibull": {"beta": 1, "eta": 1e300}}}],
      "policies": [{"type": "single", "provider": "A"}]})");
    const auto r = run_scenario(config_from_json(j));
    CHECK(r.providers[0].report.q_s.at(Metric::Rtt) == 1.0);
    CHECK(r.policies[0].report.q_s.at(Metric::Rtt) == 1.0);
    CHECK(r.combinations.empty());
}

TEST_CASE("windowed policy is bounded by the per-tick any-network construction")
{
    auto j = small_config();
    j["policies"] = json::parse(R"([{"type": "windowed", "window_s": 10}])");
    const auto cfg = config_from_json(j);
    const auto r = run_scenario(cfg);
    const auto at = align(r.traces, cfg.tick_ms);
    const double bound = dsm_q_s(at, cfg.thresholds, Metric::Rtt);
    CHECK(r.policies[0].report.q_s.at(Metric::Rtt) <= bound);
    // and the combination report is exactly that bound
    CHECK(r.combinations.back().q_s.at(Metric::Rtt) == bound);
}

TEST_CASE("report json layout")
{
    auto j = small_config();
    j["policies"] = json::array();
    const auto r = run_scenario(config_from_json(j));
    const auto rep = report_json(r);
    CHECK_FALSE(rep.contains("policies"));
    for (const char* key : {"meta", "providers", "reactive_table", "curves"}) CHECK(rep.contains(key));
    CHECK(rep["meta"]["config_hash"] == r.config_hash);
    CHECK(rep["meta"]["seed"] == 9);
    CHECK(rep["meta"]["tool_version"] == std::string(kToolVersion));
    CHECK(rep["curves"]["rows"].size() == 2 * 3);
    CHECK(rep["reactive_table"]["columns"] ==
          json({"window_s", "improvement_vs_A", "improvement_vs_B", "improvement_vs_A_ssm", "switches"}));
    CHECK(rep["reactive_table"]["rows"].back()[0] == "oracle");
}

TEST_CASE("json and csv reports agree on tabular sections")
{
    const auto r = run_scenario(config_from_json(small_config()));
    const auto dir = temp_dir("csv");
    emit_report(r, ReportFormat::Csv, dir);
    emit_report(r, ReportFormat::Json, dir);
    const auto from_csv = load_csv_tables(dir);
    const auto from_json = json::parse(read_text_file(dir / "report.json"));
    CHECK(from_csv["reactive_table"] == from_json["reactive_table"]);
    CHECK(from_csv["curves"] == from_json["curves"]);
    for (const char* f : {"meta.csv", "providers.csv", "combinations.csv", "policies.csv",
                          "probes.csv", "reactive_table.csv", "curves.csv"}) {
        CHECK(fs::exists(dir / f));
    }
    CHECK(read_text_file(dir / "curves.csv").rfind("lambda,n,reliability,mttf_times_lambda\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("unwritable report path")
{
    const auto r = run_scenario(config_from_json(small_config()));
    const auto dir = temp_dir("blocked");
    write_text_file(dir / "file", "x");
    CHECK_THROWS_AS(emit_report(r, ReportFormat::Json, dir / "file" / "sub"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("replaying written traces reproduces the scenario reports")
{
    const auto cfg = config_from_json(small_config());
    const auto r = run_scenario(cfg);
    const auto dir = temp_dir("replay");
    write_trace_csv(dir / "t.csv", r.traces);
    auto j = small_config();
    j["providers"] = json::array({{{"trace_file", "t.csv"}}});
    const auto replay = run_scenario(config_from_json(j, dir));
    REQUIRE(replay.providers.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(round6(replay.providers[i].report.r_s) == round6(r.providers[i].report.r_s));
        CHECK(round6(replay.providers[i].report.q_s.at(Metric::Rtt)) ==
              round6(r.providers[i].report.q_s.at(Metric::Rtt)));
    }
    fs::remove_all(dir);
}
