// Command-line front end: simulate, replay, curves, oracle, validate.

#include "mocsim/errors.hpp"
#include "mocsim/report.hpp"
#include "mocsim/scenario.hpp"
#include "mocsim/trace_csv.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mocsim;

namespace {

enum Exit { kOk = 0, kConfig = 2, kParse = 3, kRuntime = 4 };

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
    std::vector<double> windows;
    std::optional<std::int64_t> switch_delay_ms;
};

void add_common(CLI::App* sub, CommonFlags& f)
{
    sub->add_option("--config", f.config, "Scenario config (JSON)");
    sub->add_option("--seed", f.seed, "Override the scenario seed");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--window", f.windows, "Reactive window in seconds (repeatable)");
    sub->add_option("--switch-delay-ms", f.switch_delay_ms, "Switching delay in milliseconds");
}

ScenarioConfig base_config(const CommonFlags& f, bool config_required)
{
    ScenarioConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
    } else if (config_required) {
        throw ConfigError("--config is required for this subcommand");
    }
    if (f.seed) cfg.seed = *f.seed;
    if (!f.out.empty()) cfg.out_dir = f.out;
    if (f.format == "json") cfg.format = ReportFormat::Json;
    if (f.format == "csv") cfg.format = ReportFormat::Csv;
    if (!f.windows.empty()) cfg.windows_s = f.windows;
    if (f.switch_delay_ms) cfg.switch_delay_ms = *f.switch_delay_ms;
    return cfg;
}

int run_simulate(const CommonFlags& f)
{
    const ScenarioConfig cfg = base_config(f, true);
    cfg.validate();
    const ScenarioResult res = run_scenario(cfg);
    emit_report(res, cfg.format, cfg.out_dir);
    write_trace_csv(cfg.out_dir / "traces.csv", res.traces);
    std::cout << "wrote " << cfg.out_dir.string() << " (config " << res.config_hash << ")\n";
    return kOk;
}

int run_replay(const CommonFlags& f, const std::string& trace, const std::vector<std::string>& ids)
{
    ScenarioConfig cfg = base_config(f, false);
    if (!trace.empty()) {
        TraceFileSource src;
        src.path = trace;
        src.path_as_written = trace;
        src.provider_ids = ids;
        cfg.providers = {src};
    }
    if (cfg.providers.empty()) throw ConfigError("replay needs --trace or a config with providers");
    if (cfg.policies.empty() && f.config.empty()) {
        cfg.policies.push_back(policy::Oracle{cfg.oracle_granularity_s});
    }
    cfg.validate();
    const ScenarioResult res = run_scenario(cfg);
    emit_report(res, cfg.format, cfg.out_dir);
    std::cout << "wrote " << cfg.out_dir.string() << " (config " << res.config_hash << ")\n";
    return kOk;
}

int run_curves(const CommonFlags& f, std::optional<int> n_max, const std::vector<double>& lambdas)
{
    ScenarioConfig cfg = base_config(f, false);
    if (n_max) cfg.n_max = *n_max;
    if (!lambdas.empty()) cfg.lambda_grid = lambdas;
    if (cfg.n_max < 1) throw ConfigError("--n-max must be >= 1");
    for (double l : cfg.lambda_grid) {
        if (!(l > 0 && l <= 1)) throw ConfigError("lambda values must lie in (0, 1]");
    }
    const auto rows =
        redundancy_curves(cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid, cfg.n_max);
    const auto table = curves_json(rows);
    const std::string csv = table_csv(table);
    if (!f.out.empty() || !f.config.empty()) {
        fs::create_directories(cfg.out_dir);
        if (cfg.format == ReportFormat::Json) {
            write_text_file(cfg.out_dir / "curves.json", table.dump(2) + "\n");
        } else {
            write_text_file(cfg.out_dir / "curves.csv", csv);
        }
    }
    std::cout << csv;
    return kOk;
}

int run_oracle(const CommonFlags& f)
{
    const ScenarioConfig cfg = base_config(f, true);
    cfg.validate();
    const ReactiveTable t = run_reactive(cfg);
    const auto table = reactive_table_json(t);
    const std::string csv = table_csv(table);
    if (!f.out.empty()) {
        fs::create_directories(cfg.out_dir);
        if (cfg.format == ReportFormat::Json) {
            write_text_file(cfg.out_dir / "reactive_table.json", table.dump(2) + "\n");
        } else {
            write_text_file(cfg.out_dir / "reactive_table.csv", csv);
        }
    }
    std::cout << csv;
    return kOk;
}

int run_validate(const CommonFlags& f, const std::string& trace)
{
    if (f.config.empty() && trace.empty()) throw ConfigError("validate needs --config or --trace");
    if (!f.config.empty()) {
        const ScenarioConfig cfg = base_config(f, true);
        cfg.validate();
        std::cout << "config ok (" << config_hash(cfg) << ")\n";
    }
    if (!trace.empty()) {
        const auto traces = parse_trace_csv(fs::path(trace));
        std::size_t rows = 0;
        for (const auto& t : traces) {
            t.validate();
            rows += t.samples.size();
        }
        std::cout << "trace ok (" << traces.size() << " providers, " << rows << " rows)\n";
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-operator cellular connectivity simulator"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CommonFlags flags;
    std::string trace;
    std::vector<std::string> ids;
    std::optional<int> n_max;
    std::vector<double> lambdas;

    auto* simulate = app.add_subcommand("simulate", "Run a synthetic scenario and write a report");
    add_common(simulate, flags);

    auto* replay = app.add_subcommand("replay", "Run policies over a recorded trace CSV");
    add_common(replay, flags);
    replay->add_option("--trace", trace, "Trace CSV");
    replay->add_option("--provider", ids, "Restrict to these provider ids (repeatable)");

    auto* curves = app.add_subcommand("curves", "Parallel-redundancy reliability and MTTF table");
    add_common(curves, flags);
    curves->add_option("--n-max", n_max, "Largest number of providers");
    curves->add_option("--lambda", lambdas, "Failure probability (repeatable)");

    auto* oracle = app.add_subcommand("oracle", "Reactive switching table with the oracle row");
    add_common(oracle, flags);

    auto* validate_cmd = app.add_subcommand("validate", "Check a config and/or a trace CSV");
    add_common(validate_cmd, flags);
    validate_cmd->add_option("--trace", trace, "Trace CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*simulate) return run_simulate(flags);
        if (*replay) return run_replay(flags, trace, ids);
        if (*curves) return run_curves(flags, n_max, lambdas);
        if (*oracle) return run_oracle(flags);
        if (*validate_cmd) return run_validate(flags, trace);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfig;
    } catch (const SchemaError& e) {
        std::cerr << e.what() << '\n';
        return kParse;
    } catch (const ParseError& e) {
        std::cerr << e.what() << '\n';
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kRuntime;
    }
    return kRuntime;
}
