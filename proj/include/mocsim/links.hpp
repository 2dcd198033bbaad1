#pragma once

#include "mocsim/core.hpp"
#include "mocsim/reliability.hpp"
#include "mocsim/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mocsim {

/// Parameters of a seeded synthetic provider. Hazard and Weibull parameters
/// are expressed in seconds of elapsed scenario time.
struct SyntheticLinkSpec {
    std::string provider_id = "NP";
    double base_rtt_ms = 50;
    double rtt_noise_sigma = 0.3;
    double congestion_rtt_multiplier = 4;
    double base_dl_kbps = 50000;
    double base_ul_kbps = 25000;
    HazardParams hazard;
    WeibullParams weibull{1.0, 1e6};
    std::uint64_t seed = 1;

    void validate() const;
    bool operator==(const SyntheticLinkSpec&) const = default;
};

/// Probability that the congestion process fires during the tick starting at
/// `elapsed_s`: hazard_congestion(elapsed_s) * tick_s, capped at 0.95.
double congestion_probability(double elapsed_s, double tick_s, const HazardParams& hp);

/// Probability that the Weibull failure process fires during
/// [elapsed_s, elapsed_s + tick_s): 1 - exp(-(H(t1) - H(t0))).
double outage_probability(double elapsed_s, double tick_s, const WeibullParams& wp);

/// floor(duration / tick) samples at t = 0, tick, 2*tick, ...
/// Deterministic for a fixed spec (including seed) on every platform.
LinkTrace generate_trace(const SyntheticLinkSpec& spec, std::int64_t duration_ms,
                         std::int64_t tick_ms, const PltModel& plt = {});

/// Resamples traces onto a common grid from the latest start to the earliest
/// end. Each cell takes the latest sample no older than the staleness bound
/// (default 2 * tick), else GAP.
AlignedTraces align(const std::vector<LinkTrace>& traces, std::int64_t tick_ms,
                    std::optional<std::int64_t> staleness_bound_ms = std::nullopt);

/// Adds a fixed route penalty to every finite RTT, as seen when a supply-side
/// operator hauls traffic through its own core. PLT shifts by the same number
/// of handshake round trips; everything else is untouched.
LinkTrace ssm_transform(const LinkTrace& trace, double extra_rtt_ms, int extra_hops,
                        const PltModel& plt = {});

} // namespace mocsim
