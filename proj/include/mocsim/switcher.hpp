#pragma once

#include "mocsim/core.hpp"
#include "mocsim/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mocsim {

namespace policy {

struct Single {
    std::string provider_id;
};

/// Reactive rule: average each provider's probes over a window and use the
/// best one for the following window.
struct WindowedDsm {
    double window_s = 10;
    double probe_interval_s = 3;
    std::optional<std::string> start_provider;
};

/// Hindsight rule: per window, the provider that actually did best in it.
struct Oracle {
    double granularity_s = 10;
};

} // namespace policy

using Policy = std::variant<policy::Single, policy::WindowedDsm, policy::Oracle>;

void validate(const Policy& p);
std::string policy_name(const Policy& p);

struct Segment {
    std::int64_t t_start_ms = 0;
    std::string provider_id;

    bool operator==(const Segment&) const = default;
};

/// Piecewise-constant provider assignment over [span_start_ms, span_end_ms].
struct Schedule {
    std::vector<Segment> segments;
    std::int64_t span_start_ms = 0;
    std::int64_t span_end_ms = 0;
    /// Start times of windows where no provider had any sample.
    std::vector<std::int64_t> coverage_holes;

    std::size_t switch_count() const { return segments.empty() ? 0 : segments.size() - 1; }
    /// Provider active at time t.
    const std::string& provider_at(std::int64_t t_ms) const;

    void validate() const;
    bool operator==(const Schedule&) const = default;
};

struct SwitchStats {
    std::size_t switch_count = 0;
    std::map<std::string, double> improvement_vs;
    double mean_effective_rtt = 0;
};

/// Per-tick RTT cost used by every policy comparison: the RTT capped at the
/// availability bound, which is also the cost of a TIMEOUT.
double rtt_cost(const Sample& s, const Thresholds& th);

/// Mean of rtt_cost over a trace.
double mean_effective_rtt(const LinkTrace& trace, const Thresholds& th = {});

Schedule single_schedule(const AlignedTraces& at, const std::string& provider_id);

/// Windows start at the first tick. Each provider's mean over its non-GAP
/// ticks (TIMEOUT scored as the availability bound) decides the provider for
/// the next window; ties keep the current one.
Schedule windowed_decide(const AlignedTraces& at, double window_s,
                         const std::string& start_provider, const Thresholds& th = {});

/// Picks the best provider of each window in hindsight, scoring GAP ticks as
/// the availability bound since that is what the client would get. Ties keep
/// the incumbent.
Schedule oracle_schedule(const AlignedTraces& at, double granularity_s,
                         const Thresholds& th = {});

Schedule decide(const Policy& p, const AlignedTraces& at, const Thresholds& th = {});

enum class SwitchMode {
    /// During the switch delay traffic stays on the previous provider.
    MakeBeforeBreak,
    /// During the switch delay there is no connectivity.
    StrictOutage,
};

struct ApplyOptions {
    std::int64_t switch_delay_ms = 0;
    SwitchMode mode = SwitchMode::MakeBeforeBreak;
    PltModel plt;
    /// provider_id of the resulting trace; defaults to the ids joined by '+'.
    std::optional<std::string> label;
};

/// The trace a switching client would observe. GAP cells and strict-outage
/// ticks become TIMEOUT samples.
LinkTrace apply_schedule(const Schedule& sched, const AlignedTraces& at,
                         const ApplyOptions& opts = {});

/// Percent reduction of mean effective RTT relative to the baseline.
double improvement(const LinkTrace& effective, const LinkTrace& baseline,
                   const Thresholds& th = {});

SwitchStats switch_stats(const Schedule& sched, const LinkTrace& effective,
                         const AlignedTraces& at, const std::vector<std::string>& baselines,
                         const Thresholds& th = {}, const ApplyOptions& opts = {});

struct ReactiveRow {
    std::optional<double> window_s; // nullopt for the oracle row
    std::vector<double> improvement; // parallel to ReactiveTable::baselines
    std::size_t switches = 0;
    double mean_effective_rtt = 0;

    bool operator==(const ReactiveRow&) const = default;
};

struct ReactiveTable {
    std::vector<std::string> baselines;
    std::vector<ReactiveRow> rows; // windowed rows in input order, oracle last

    bool operator==(const ReactiveTable&) const = default;
};

struct ReactiveOptions {
    std::vector<double> windows_s{10, 20, 30, 40, 50, 60};
    std::vector<std::string> baselines;
    double oracle_granularity_s = 10;
    std::optional<std::string> start_provider;
    ApplyOptions apply;
};

/// Improvement and switch count per window size, plus an oracle row.
ReactiveTable reactive_table(const AlignedTraces& at, const ReactiveOptions& opts,
                             const Thresholds& th = {});

} // namespace mocsim
