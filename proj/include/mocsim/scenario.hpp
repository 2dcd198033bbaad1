#pragma once

#include "mocsim/core.hpp"
#include "mocsim/links.hpp"
#include "mocsim/reliability.hpp"
#include "mocsim/switcher.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mocsim {

inline constexpr int kConfigSchema = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

struct SyntheticSource {
    SyntheticLinkSpec spec;
    /// When set, spec.seed is replaced by derive_seed(scenario seed, index).
    bool derive_seed = true;
};

/// Providers read from a trace CSV. An empty id list takes every provider
/// in the file.
struct TraceFileSource {
    std::filesystem::path path;  // resolved
    std::string path_as_written; // as in the config; used for hashing
    std::vector<std::string> provider_ids;
};

/// A supply-side variant of another provider with a route penalty.
struct SsmSource {
    std::string id;
    std::string of;
    double extra_rtt_ms = 0;
    int extra_hops = 0;
};

using ProviderSource = std::variant<SyntheticSource, TraceFileSource, SsmSource>;

enum class ReportFormat { Json, Csv };

struct ScenarioConfig {
    std::vector<ProviderSource> providers;
    Thresholds thresholds;
    std::vector<Policy> policies;
    std::int64_t duration_ms = 3'600'000;
    std::int64_t tick_ms = 3000;
    std::optional<std::int64_t> staleness_bound_ms;
    PltModel plt;
    std::vector<ProbeSpec> probes;
    std::int64_t switch_delay_ms = 0;
    SwitchMode switch_mode = SwitchMode::MakeBeforeBreak;
    std::uint64_t seed = 1;
    std::vector<double> windows_s{10, 20, 30, 40, 50, 60};
    std::vector<std::string> baselines;
    double oracle_granularity_s = 10;
    std::vector<double> lambda_grid;
    int n_max = 4;
    std::filesystem::path out_dir = "out";
    ReportFormat format = ReportFormat::Json;

    /// Throws ConfigError on a broken invariant.
    void validate() const;
};

/// Default curve grid: 0.02, 0.03, ..., 0.21.
std::vector<double> default_lambda_grid();

/// Relative trace-file paths are resolved against `base_dir`.
ScenarioConfig config_from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// FNV-1a 64 over the canonical JSON form, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

/// Seed of the i-th synthetic provider when the scenario seed drives it.
std::uint64_t derive_seed(std::uint64_t scenario_seed, std::size_t index);

struct ProviderResult {
    ReliabilityReport report;
    int extra_hops = 0;
};

struct PolicyResult {
    std::string name;
    ReliabilityReport report;
    SwitchStats stats;
    std::vector<std::int64_t> coverage_holes;
};

struct ProbeResult {
    ProbeSpec spec;
    std::string provider_id;
    std::size_t bursts = 0;
    double mean_loss = 0;
    std::optional<double> median_rtt_ms;
};

struct ScenarioResult {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<LinkTrace> traces;
    std::vector<ProviderResult> providers;
    /// Any-network combination of every provider subset of size >= 2.
    std::vector<ReliabilityReport> combinations;
    std::vector<PolicyResult> policies;
    std::vector<ProbeResult> probes;
    ReactiveTable reactive;
    std::vector<CurveRow> curves;
};

/// Builds or loads the provider traces of a scenario.
std::vector<LinkTrace> build_traces(const ScenarioConfig& cfg);

/// Deterministic for a fixed config.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Only the reactive table; skips per-provider and policy reports.
ReactiveTable run_reactive(const ScenarioConfig& cfg);

} // namespace mocsim
