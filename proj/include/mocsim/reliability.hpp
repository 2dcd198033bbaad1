#pragma once

#include "mocsim/core.hpp"
#include "mocsim/trace.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mocsim {

/// Congestion hazard Y(t) = t * phi * exp(-p).
struct HazardParams {
    double phi = 0.001; // hazard rate per inherent failure, > 0
    double p = 0.0;     // traffic density change rate, in (-1, 1)

    void validate() const;
    bool operator==(const HazardParams&) const = default;
};

struct WeibullParams {
    double beta = 1.0; // shape
    double eta = 1.0;  // scale

    void validate() const;
    bool operator==(const WeibullParams&) const = default;
};

struct RedundancyParams {
    double lambda = 0.0; // per-network failure rate
    int n = 1;           // parallel networks

    void validate() const;
};

struct ReliabilityReport {
    double r_s = 0;
    std::map<Metric, double> q_s;
    /// Empirical mean time to fail in ms; nullopt if no failure was observed.
    std::optional<double> mttf_ms;
    std::vector<std::string> provider_set;
};

double hazard_congestion(double t, const HazardParams& hp);

/// Standard Weibull density. Throws DomainError at t = 0 when beta < 1.
double weibull_availability(double t, const WeibullParams& wp);

/// Weibull hazard function beta/eta * (t/eta)^(beta-1).
double weibull_hazard(double t, const WeibullParams& wp);

/// Weibull cumulative hazard (t/eta)^beta.
double weibull_cumulative_hazard(double t, const WeibullParams& wp);

struct CumulativeFailure {
    double raw = 0;     // trapezoidal integral as computed
    double lambda = 0;  // raw clamped to [0, 1]
    bool clamped = false;
};

/// Trapezoidal integral of hazard_congestion + weibull_availability over
/// [0, horizon]. The last panel is shortened if step does not divide horizon.
CumulativeFailure cumulative_failure(const HazardParams& hp, const WeibullParams& wp,
                                     double horizon, double step);

/// Q = W * R.
double performance_constrained_q(bool gate, double r);

/// R = 1 - lambda, clamped to [0, 1]. Only a reporting convenience; all
/// redundancy math below uses exp(-lambda) survival.
double linear_reliability(double lambda);

/// 1 - (1 - exp(-lambda))^n
double parallel_reliability(const RedundancyParams& rp);

/// H_n / lambda. Returns +infinity when lambda == 0.
double mttf(const RedundancyParams& rp);

/// Harmonic number H_n.
double harmonic(int n);

double empirical_r_s(const LinkTrace& trace, const Thresholds& th);

/// Fraction of samples that are available and meet `metric`. Samples that do
/// not carry the metric count as failing; MissingMetric if none carries it.
double empirical_q_s(const LinkTrace& trace, const Thresholds& th, Metric metric);

/// Fraction of ticks where at least one provider is available and meets
/// `metric`. GAP cells fail.
double dsm_q_s(const AlignedTraces& at, const Thresholds& th, Metric metric);

/// As above for raw traces; they must share identical timestamps, else
/// AlignmentError.
double dsm_q_s(const std::vector<LinkTrace>& traces, const Thresholds& th, Metric metric);

/// Total available time divided by the number of available -> unavailable
/// transitions. nullopt when the trace never fails.
std::optional<double> empirical_mttf_ms(const LinkTrace& trace, const Thresholds& th);

/// R_s, Q_s for every metric the trace carries, and empirical MTTF.
ReliabilityReport report_for_trace(const LinkTrace& trace, const Thresholds& th);

/// Same as report_for_trace for the any-network combination of `at`.
ReliabilityReport report_for_combination(const AlignedTraces& at, const Thresholds& th);

struct CurveRow {
    double lambda = 0;
    int n = 0;
    double reliability = 0;
    double mttf_times_lambda = 0;

    bool operator==(const CurveRow&) const = default;
};

/// Rows ordered by lambda (grid order), then n = 1..n_max.
std::vector<CurveRow> redundancy_curves(const std::vector<double>& lambda_grid, int n_max);

} // namespace mocsim
