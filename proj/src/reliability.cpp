#include "mocsim/reliability.hpp"

#include "mocsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mocsim {

void HazardParams::validate() const
{
    if (!(phi > 0)) throw ContractViolation("hazard phi must be > 0");
    if (!(p > -1 && p < 1)) throw ContractViolation("hazard p must lie in (-1, 1)");
}

void WeibullParams::validate() const
{
    if (!(beta > 0)) throw ContractViolation("weibull beta must be > 0");
    if (!(eta > 0)) throw ContractViolation("weibull eta must be > 0");
}

void RedundancyParams::validate() const
{
    if (!(lambda >= 0) || !std::isfinite(lambda)) {
        throw ContractViolation("failure rate lambda must be finite and >= 0");
    }
    if (n < 1) throw ContractViolation("redundancy n must be >= 1");
}

double hazard_congestion(double t, const HazardParams& hp)
{
    hp.validate();
    if (!(t >= 0)) throw DomainError("hazard time must be >= 0");
    return t * hp.phi * std::exp(-hp.p);
}

double weibull_availability(double t, const WeibullParams& wp)
{
    wp.validate();
    if (!(t >= 0)) throw DomainError("weibull time must be >= 0");
    if (t == 0 && wp.beta < 1) throw DomainError("weibull density is unbounded at t=0 for beta<1");
    const double x = t / wp.eta;
    return wp.beta / wp.eta * std::pow(x, wp.beta - 1) * std::exp(-std::pow(x, wp.beta));
}

double weibull_hazard(double t, const WeibullParams& wp)
{
    wp.validate();
    if (!(t >= 0)) throw DomainError("weibull time must be >= 0");
    if (t == 0 && wp.beta < 1) throw DomainError("weibull hazard is unbounded at t=0 for beta<1");
    return wp.beta / wp.eta * std::pow(t / wp.eta, wp.beta - 1);
}

double weibull_cumulative_hazard(double t, const WeibullParams& wp)
{
    wp.validate();
    if (!(t >= 0)) throw DomainError("weibull time must be >= 0");
    return std::pow(t / wp.eta, wp.beta);
}

CumulativeFailure cumulative_failure(const HazardParams& hp, const WeibullParams& wp,
                                     double horizon, double step)
{
    if (!(horizon > 0)) throw DomainError("integration horizon must be > 0");
    if (!(step > 0)) throw DomainError("integration step must be > 0");
    if (step > horizon) throw DomainError("integration step must not exceed the horizon");

    auto f = [&](double t) { return hazard_congestion(t, hp) + weibull_availability(t, wp); };

    const auto panels = static_cast<std::size_t>(std::ceil(horizon / step - 1e-12));
    double sum = 0;
    double prev_t = 0;
    double prev_f = f(0);
    for (std::size_t i = 1; i <= panels; ++i) {
        const double t = i == panels ? horizon : static_cast<double>(i) * step;
        const double ft = f(t);
        sum += 0.5 * (t - prev_t) * (prev_f + ft);
        prev_t = t;
        prev_f = ft;
    }

    CumulativeFailure out;
    out.raw = sum;
    out.lambda = std::clamp(sum, 0.0, 1.0);
    out.clamped = sum > 1.0;
    return out;
}

double performance_constrained_q(bool gate, double r)
{
    if (!(r >= 0 && r <= 1)) throw DomainError("reliability must lie in [0,1]");
    return gate ? r : 0.0;
}

double linear_reliability(double lambda)
{
    return std::clamp(1.0 - lambda, 0.0, 1.0);
}

double parallel_reliability(const RedundancyParams& rp)
{
    rp.validate();
    // 1 - exp(-lambda) == -expm1(-lambda), accurate for small lambda
    const double fail_one = -std::expm1(-rp.lambda);
    return 1.0 - std::pow(fail_one, rp.n);
}

double harmonic(int n)
{
    if (n < 1) throw ContractViolation("harmonic number needs n >= 1");
    double h = 0;
    // summed smallest-first
    for (int k = n; k >= 1; --k) h += 1.0 / k;
    return h;
}

double mttf(const RedundancyParams& rp)
{
    rp.validate();
    if (rp.lambda == 0) return std::numeric_limits<double>::infinity();
    return harmonic(rp.n) / rp.lambda;
}

namespace {

void require_non_empty(const LinkTrace& trace)
{
    if (trace.samples.empty()) {
        throw ContractViolation("trace '" + trace.provider_id + "' is empty");
    }
}

bool passes(const Sample& s, const Thresholds& th, Metric m)
{
    if (!meets_threshold(s, th, Metric::Availability)) return false;
    if (!has_metric(s, m)) return false;
    return meets_threshold(s, th, m);
}

} // namespace

double empirical_r_s(const LinkTrace& trace, const Thresholds& th)
{
    require_non_empty(trace);
    std::size_t ok = 0;
    for (const Sample& s : trace.samples) {
        if (meets_threshold(s, th, Metric::Availability)) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(trace.samples.size());
}

double empirical_q_s(const LinkTrace& trace, const Thresholds& th, Metric metric)
{
    require_non_empty(trace);
    std::size_t ok = 0;
    bool carried = false;
    for (const Sample& s : trace.samples) {
        carried = carried || has_metric(s, metric);
        if (passes(s, th, metric)) ++ok;
    }
    if (!carried) {
        throw MissingMetric("trace '" + trace.provider_id + "' carries no " +
                            std::string(to_string(metric)) + " values");
    }
    return static_cast<double>(ok) / static_cast<double>(trace.samples.size());
}

double dsm_q_s(const AlignedTraces& at, const Thresholds& th, Metric metric)
{
    if (at.provider_count() == 0) throw ContractViolation("no providers to combine");
    if (at.tick_count() == 0) throw ContractViolation("aligned timeline is empty");
    bool carried = false;
    std::size_t ok = 0;
    for (std::size_t k = 0; k < at.tick_count(); ++k) {
        bool any = false;
        for (std::size_t p = 0; p < at.provider_count(); ++p) {
            const auto& cell = at.cells[p][k];
            if (!cell) continue;
            carried = carried || has_metric(*cell, metric);
            if (!any && passes(*cell, th, metric)) any = true;
        }
        if (any) ++ok;
    }
    if (!carried) {
        throw MissingMetric("no provider carries " + std::string(to_string(metric)) + " values");
    }
    return static_cast<double>(ok) / static_cast<double>(at.tick_count());
}

double dsm_q_s(const std::vector<LinkTrace>& traces, const Thresholds& th, Metric metric)
{
    if (traces.empty()) throw ContractViolation("no providers to combine");
    AlignedTraces at;
    at.tick_ms = traces.front().tick_ms;
    for (const Sample& s : traces.front().samples) at.timeline.push_back(s.t_ms);
    for (const LinkTrace& tr : traces) {
        if (tr.samples.size() != at.timeline.size()) {
            throw AlignmentError("trace '" + tr.provider_id + "' is not on the common timeline");
        }
        std::vector<std::optional<Sample>> row;
        row.reserve(tr.samples.size());
        for (std::size_t k = 0; k < tr.samples.size(); ++k) {
            if (tr.samples[k].t_ms != at.timeline[k]) {
                throw AlignmentError("trace '" + tr.provider_id + "' is not on the common timeline");
            }
            row.emplace_back(tr.samples[k]);
        }
        at.provider_ids.push_back(tr.provider_id);
        at.cells.push_back(std::move(row));
    }
    return dsm_q_s(at, th, metric);
}

namespace {

std::optional<double> mttf_from_flags(const std::vector<bool>& up, double tick_ms)
{
    std::size_t up_count = 0;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < up.size(); ++i) {
        if (up[i]) ++up_count;
        if (i > 0 && up[i - 1] && !up[i]) ++failures;
    }
    if (failures == 0) return std::nullopt;
    return static_cast<double>(up_count) * tick_ms / static_cast<double>(failures);
}

} // namespace

std::optional<double> empirical_mttf_ms(const LinkTrace& trace, const Thresholds& th)
{
    require_non_empty(trace);
    std::vector<bool> up;
    up.reserve(trace.samples.size());
    for (const Sample& s : trace.samples) up.push_back(meets_threshold(s, th, Metric::Availability));
    return mttf_from_flags(up, static_cast<double>(trace.tick_ms));
}

ReliabilityReport report_for_trace(const LinkTrace& trace, const Thresholds& th)
{
    ReliabilityReport rep;
    rep.provider_set = {trace.provider_id};
    rep.r_s = empirical_r_s(trace, th);
    for (Metric m : kAllMetrics) {
        const bool carried = std::any_of(trace.samples.begin(), trace.samples.end(),
                                         [m](const Sample& s) { return has_metric(s, m); });
        if (carried) rep.q_s[m] = empirical_q_s(trace, th, m);
    }
    rep.mttf_ms = empirical_mttf_ms(trace, th);
    return rep;
}

ReliabilityReport report_for_combination(const AlignedTraces& at, const Thresholds& th)
{
    ReliabilityReport rep;
    rep.provider_set = at.provider_ids;
    rep.r_s = dsm_q_s(at, th, Metric::Availability);
    for (Metric m : kAllMetrics) {
        bool carried = false;
        for (const auto& row : at.cells) {
            for (const auto& cell : row) {
                if (cell && has_metric(*cell, m)) {
                    carried = true;
                    break;
                }
            }
            if (carried) break;
        }
        if (carried) rep.q_s[m] = dsm_q_s(at, th, m);
    }
    std::vector<bool> up(at.tick_count(), false);
    for (std::size_t k = 0; k < at.tick_count(); ++k) {
        for (const auto& row : at.cells) {
            if (row[k] && meets_threshold(*row[k], th, Metric::Availability)) {
                up[k] = true;
                break;
            }
        }
    }
    rep.mttf_ms = mttf_from_flags(up, static_cast<double>(at.tick_ms));
    return rep;
}

std::vector<CurveRow> redundancy_curves(const std::vector<double>& lambda_grid, int n_max)
{
    if (lambda_grid.empty()) throw ContractViolation("lambda grid is empty");
    if (n_max < 1) throw ContractViolation("n_max must be >= 1");
    std::vector<CurveRow> rows;
    rows.reserve(lambda_grid.size() * static_cast<std::size_t>(n_max));
    for (double lambda : lambda_grid) {
        if (!(lambda > 0 && lambda <= 1)) {
            throw DomainError("curve lambda must lie in (0, 1], got " + std::to_string(lambda));
        }
        for (int n = 1; n <= n_max; ++n) {
            const RedundancyParams rp{lambda, n};
            // mttf * lambda == H_n, taken directly so the column is exactly lambda-free
            rows.push_back({lambda, n, parallel_reliability(rp), harmonic(n)});
        }
    }
    return rows;
}

} // namespace mocsim
