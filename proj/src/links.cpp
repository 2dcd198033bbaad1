#include "mocsim/links.hpp"

#include "mocsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace mocsim {

void LinkTrace::validate() const
{
    if (tick_ms <= 0) throw ContractViolation("trace tick must be > 0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        mocsim::validate(samples[i]);
        if (i > 0 && samples[i].t_ms <= samples[i - 1].t_ms) {
            throw ContractViolation("trace '" + provider_id +
                                    "' timestamps are not strictly increasing at index " +
                                    std::to_string(i));
        }
    }
}

std::size_t AlignedTraces::index_of(const std::string& id) const
{
    auto it = std::find(provider_ids.begin(), provider_ids.end(), id);
    if (it == provider_ids.end()) {
        throw ContractViolation("provider '" + id + "' is not part of the aligned set");
    }
    return static_cast<std::size_t>(it - provider_ids.begin());
}

std::vector<LinkTrace> AlignedTraces::as_traces() const
{
    std::vector<LinkTrace> out;
    out.reserve(provider_count());
    for (std::size_t p = 0; p < provider_count(); ++p) {
        LinkTrace tr;
        tr.provider_id = provider_ids[p];
        tr.tick_ms = tick_ms;
        tr.extra_hops = p < extra_hops.size() ? extra_hops[p] : 0;
        auto push = [&](const std::optional<Sample>& s) {
            if (!s) return;
            if (!tr.samples.empty() && tr.samples.back().t_ms >= s->t_ms) return;
            tr.samples.push_back(*s);
        };
        if (p < head.size()) push(head[p]);
        for (const auto& cell : cells[p]) push(cell);
        if (p < tail.size()) push(tail[p]);
        out.push_back(std::move(tr));
    }
    return out;
}

void SyntheticLinkSpec::validate() const
{
    if (!(base_rtt_ms > 0)) throw ContractViolation("base_rtt_ms must be > 0");
    if (!(rtt_noise_sigma >= 0)) throw ContractViolation("rtt_noise_sigma must be >= 0");
    if (!(congestion_rtt_multiplier >= 1)) {
        throw ContractViolation("congestion_rtt_multiplier must be >= 1");
    }
    if (!(base_dl_kbps > 0) || !(base_ul_kbps > 0)) {
        throw ContractViolation("base throughputs must be > 0");
    }
    hazard.validate();
    weibull.validate();
}

double congestion_probability(double elapsed_s, double tick_s, const HazardParams& hp)
{
    return std::min(0.95, hazard_congestion(elapsed_s, hp) * tick_s);
}

double outage_probability(double elapsed_s, double tick_s, const WeibullParams& wp)
{
    const double dh = weibull_cumulative_hazard(elapsed_s + tick_s, wp) -
                      weibull_cumulative_hazard(elapsed_s, wp);
    return -std::expm1(-dh);
}

namespace {

// std:: distributions are implementation-defined; these are not, so traces
// are reproducible across standard libraries.
class TraceRng {
public:
    explicit TraceRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal()
    {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace

LinkTrace generate_trace(const SyntheticLinkSpec& spec, std::int64_t duration_ms,
                         std::int64_t tick_ms, const PltModel& plt)
{
    spec.validate();
    plt.validate();
    if (tick_ms <= 0) throw ContractViolation("tick must be > 0");
    if (duration_ms <= 0) throw ContractViolation("zero duration would produce an empty trace");
    if (duration_ms < tick_ms) throw ContractViolation("duration shorter than one tick");

    const auto count = static_cast<std::size_t>(duration_ms / tick_ms);
    const double tick_s = static_cast<double>(tick_ms) / 1000.0;

    LinkTrace trace;
    trace.provider_id = spec.provider_id;
    trace.tick_ms = tick_ms;
    trace.samples.reserve(count);

    TraceRng rng(spec.seed);
    std::vector<double> recent; // finite RTTs since the last outage, newest last
    for (std::size_t k = 0; k < count; ++k) {
        const std::int64_t t = static_cast<std::int64_t>(k) * tick_ms;
        const double elapsed_s = static_cast<double>(t) / 1000.0;

        // fixed draw order per tick keeps the stream aligned across parameter changes
        const bool out = rng.uniform() < outage_probability(elapsed_s, tick_s, spec.weibull);
        const bool congested =
            rng.uniform() < congestion_probability(elapsed_s, tick_s, spec.hazard);
        const double noise = rng.normal();

        Sample s;
        s.t_ms = t;
        s.provider_id = spec.provider_id;
        if (out) {
            s.rtt = Rtt::timeout();
            s.loss = 1.0;
            s.dl_kbps = 0.0;
            s.ul_kbps = 0.0;
            s.net_type = NetType::NONE;
            recent.clear();
        } else {
            const double factor = congested ? spec.congestion_rtt_multiplier : 1.0;
            const double rtt = spec.base_rtt_ms * std::exp(spec.rtt_noise_sigma * noise) * factor;
            s.rtt = Rtt::of(rtt);
            s.loss = 0.0;
            s.dl_kbps = spec.base_dl_kbps / factor;
            s.ul_kbps = spec.base_ul_kbps / factor;
            s.plt_ms = plt_model_ms(rtt, *s.dl_kbps, plt);
            s.net_type = NetType::LTE;
            recent.push_back(rtt);
            if (recent.size() > 5) recent.erase(recent.begin());
            if (recent.size() == 5) s.jitter_ms = jitter_from_window(std::span<const double>(recent));
        }
        trace.samples.push_back(std::move(s));
    }
    return trace;
}

AlignedTraces align(const std::vector<LinkTrace>& traces, std::int64_t tick_ms,
                    std::optional<std::int64_t> staleness_bound_ms)
{
    if (traces.empty()) throw ContractViolation("nothing to align");
    if (tick_ms <= 0) throw ContractViolation("alignment tick must be > 0");
    const std::int64_t stale = staleness_bound_ms.value_or(2 * tick_ms);
    if (stale < 0) throw ContractViolation("staleness bound must be >= 0");

    std::set<std::string> seen;
    std::int64_t start = INT64_MIN;
    std::int64_t end = INT64_MAX;
    for (const LinkTrace& tr : traces) {
        tr.validate();
        if (tr.samples.empty()) throw ContractViolation("trace '" + tr.provider_id + "' is empty");
        if (!seen.insert(tr.provider_id).second) {
            throw ContractViolation("duplicate provider '" + tr.provider_id + "'");
        }
        start = std::max(start, tr.samples.front().t_ms);
        end = std::min(end, tr.samples.back().t_ms);
    }
    if (start > end) throw AlignmentError("traces do not overlap in time");

    AlignedTraces at;
    at.tick_ms = tick_ms;
    at.staleness_bound_ms = stale;
    for (std::int64_t t = start; t <= end; t += tick_ms) at.timeline.push_back(t);

    for (const LinkTrace& tr : traces) {
        at.provider_ids.push_back(tr.provider_id);
        at.extra_hops.push_back(tr.extra_hops);

        std::vector<std::optional<Sample>> row;
        row.reserve(at.timeline.size());
        const auto& samples = tr.samples;
        std::size_t next = 0; // first sample with t > current tick
        for (std::int64_t tick : at.timeline) {
            while (next < samples.size() && samples[next].t_ms <= tick) ++next;
            if (next > 0 && tick - samples[next - 1].t_ms <= stale) {
                row.emplace_back(samples[next - 1]);
            } else {
                row.emplace_back(std::nullopt);
            }
        }
        at.cells.push_back(std::move(row));

        const std::int64_t first = at.timeline.front();
        const std::int64_t last = at.timeline.back();
        auto head = std::upper_bound(samples.begin(), samples.end(), first,
                                     [](std::int64_t t, const Sample& s) { return t < s.t_ms; });
        at.head.emplace_back(*std::prev(head));
        auto tail = std::lower_bound(samples.begin(), samples.end(), last,
                                     [](const Sample& s, std::int64_t t) { return s.t_ms < t; });
        at.tail.emplace_back(*tail);
    }
    return at;
}

LinkTrace ssm_transform(const LinkTrace& trace, double extra_rtt_ms, int extra_hops,
                        const PltModel& plt)
{
    if (!(extra_rtt_ms >= 0) || !std::isfinite(extra_rtt_ms)) {
        throw ContractViolation("extra_rtt_ms must be finite and >= 0");
    }
    if (extra_hops < 0) throw ContractViolation("extra_hops must be >= 0");
    plt.validate();

    LinkTrace out = trace;
    out.extra_hops = trace.extra_hops + extra_hops;
    if (extra_rtt_ms == 0) return out;
    for (Sample& s : out.samples) {
        if (s.rtt.is_timeout()) continue;
        s.rtt = Rtt::of(s.rtt.ms() + extra_rtt_ms);
        // the model is linear in rtt, so a measured PLT shifts by the same delta
        if (s.plt_ms) *s.plt_ms += plt.handshake_rtts * extra_rtt_ms;
    }
    return out;
}

} // namespace mocsim
