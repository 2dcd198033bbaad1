#include "mocsim/switcher.hpp"

#include "mocsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mocsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

std::string format_seconds(double s)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << s;
    return os.str();
}

std::int64_t to_ms(double seconds, const char* what)
{
    if (!(seconds > 0) || !std::isfinite(seconds)) {
        throw ContractViolation(std::string(what) + " must be > 0");
    }
    return std::llround(seconds * 1000.0);
}

struct Window {
    std::int64_t start_ms;
    std::size_t begin; // tick indices [begin, end)
    std::size_t end;
};

std::vector<Window> partition(const AlignedTraces& at, std::int64_t window_ms)
{
    if (at.tick_count() == 0) throw ContractViolation("aligned timeline is empty");
    if (at.provider_count() == 0) throw ContractViolation("aligned set has no providers");
    if (window_ms < at.tick_ms) {
        throw ContractViolation("window of " + std::to_string(window_ms) +
                                " ms is shorter than one tick");
    }
    const std::int64_t origin = at.timeline.front();
    std::vector<Window> windows;
    for (std::size_t k = 0; k < at.tick_count(); ++k) {
        const std::int64_t index = (at.timeline[k] - origin) / window_ms;
        const std::int64_t start = origin + index * window_ms;
        if (windows.empty() || windows.back().start_ms != start) {
            windows.push_back({start, k, k + 1});
        } else {
            windows.back().end = k + 1;
        }
    }
    return windows;
}

Schedule empty_schedule(const AlignedTraces& at)
{
    Schedule s;
    s.span_start_ms = at.timeline.front();
    s.span_end_ms = at.timeline.back();
    return s;
}

void switch_to(Schedule& s, std::int64_t t, const std::string& provider)
{
    if (s.segments.empty() || s.segments.back().provider_id != provider) {
        s.segments.push_back({t, provider});
    }
}

// Index of the smallest score; `incumbent` wins ties, then the lowest index.
std::optional<std::size_t> argmin(const std::vector<std::optional<double>>& score,
                                  std::optional<std::size_t> incumbent)
{
    std::optional<std::size_t> best;
    for (std::size_t p = 0; p < score.size(); ++p) {
        if (!score[p]) continue;
        if (!best || *score[p] < *score[*best]) best = p;
    }
    if (best && incumbent && score[*incumbent] && *score[*incumbent] == *score[*best]) {
        return incumbent;
    }
    return best;
}

Sample outage_sample(std::int64_t t, const std::string& provider)
{
    Sample s;
    s.t_ms = t;
    s.provider_id = provider;
    s.rtt = Rtt::timeout();
    s.loss = 1.0;
    s.net_type = NetType::NONE;
    return s;
}

std::string joined_ids(const AlignedTraces& at)
{
    std::string out;
    for (const auto& id : at.provider_ids) {
        if (!out.empty()) out += '+';
        out += id;
    }
    return out;
}

} // namespace

void validate(const Policy& p)
{
    std::visit(Overloaded{
                   [](const policy::Single& s) {
                       if (s.provider_id.empty()) {
                           throw ContractViolation("single policy needs a provider id");
                       }
                   },
                   [](const policy::WindowedDsm& w) {
                       if (!(w.probe_interval_s > 0)) {
                           throw ContractViolation("probe interval must be > 0");
                       }
                       if (!(w.window_s >= w.probe_interval_s)) {
                           throw ContractViolation("window must be at least one probe interval");
                       }
                   },
                   [](const policy::Oracle& o) {
                       if (!(o.granularity_s > 0)) {
                           throw ContractViolation("oracle granularity must be > 0");
                       }
                   },
               },
               p);
}

std::string policy_name(const Policy& p)
{
    return std::visit(
        Overloaded{
            [](const policy::Single& s) { return "single:" + s.provider_id; },
            [](const policy::WindowedDsm& w) { return "windowed:" + format_seconds(w.window_s); },
            [](const policy::Oracle& o) { return "oracle:" + format_seconds(o.granularity_s); },
        },
        p);
}

const std::string& Schedule::provider_at(std::int64_t t_ms) const
{
    if (segments.empty()) throw ContractViolation("schedule has no segments");
    auto it = std::upper_bound(segments.begin(), segments.end(), t_ms,
                               [](std::int64_t t, const Segment& s) { return t < s.t_start_ms; });
    if (it == segments.begin()) throw ContractViolation("time precedes the schedule");
    return std::prev(it)->provider_id;
}

void Schedule::validate() const
{
    if (segments.empty()) throw ContractViolation("schedule has no segments");
    if (segments.front().t_start_ms != span_start_ms) {
        throw ContractViolation("schedule does not start at the timeline origin");
    }
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].t_start_ms <= segments[i - 1].t_start_ms) {
            throw ContractViolation("schedule segments are not strictly increasing");
        }
        if (segments[i].provider_id == segments[i - 1].provider_id) {
            throw ContractViolation("consecutive schedule segments use the same provider");
        }
    }
}

double rtt_cost(const Sample& s, const Thresholds& th)
{
    // anything past the availability bound is as bad as no answer at all
    return std::min(s.rtt.ms_or(th.availability_rtt_ms), th.availability_rtt_ms);
}

double mean_effective_rtt(const LinkTrace& trace, const Thresholds& th)
{
    if (trace.samples.empty()) throw ContractViolation("trace '" + trace.provider_id + "' is empty");
    double sum = 0;
    for (const Sample& s : trace.samples) sum += rtt_cost(s, th);
    return sum / static_cast<double>(trace.samples.size());
}

Schedule single_schedule(const AlignedTraces& at, const std::string& provider_id)
{
    if (at.tick_count() == 0) throw ContractViolation("aligned timeline is empty");
    at.index_of(provider_id);
    Schedule s = empty_schedule(at);
    s.segments.push_back({s.span_start_ms, provider_id});
    return s;
}

Schedule windowed_decide(const AlignedTraces& at, double window_s,
                         const std::string& start_provider, const Thresholds& th)
{
    const auto windows = partition(at, to_ms(window_s, "window"));
    std::size_t current = at.index_of(start_provider);

    Schedule sched = empty_schedule(at);
    sched.segments.push_back({sched.span_start_ms, start_provider});

    for (std::size_t w = 0; w < windows.size(); ++w) {
        std::vector<std::optional<double>> mean(at.provider_count());
        for (std::size_t p = 0; p < at.provider_count(); ++p) {
            double sum = 0;
            std::size_t n = 0;
            for (std::size_t k = windows[w].begin; k < windows[w].end; ++k) {
                if (const auto& cell = at.cells[p][k]) {
                    sum += rtt_cost(*cell, th);
                    ++n;
                }
            }
            if (n > 0) mean[p] = sum / static_cast<double>(n);
        }

        const auto best = argmin(mean, current);
        if (!best) {
            sched.coverage_holes.push_back(windows[w].start_ms);
            continue;
        }
        // the decision only takes effect in the next window
        if (w + 1 < windows.size() && *best != current) {
            current = *best;
            switch_to(sched, windows[w + 1].start_ms, at.provider_ids[current]);
        }
    }
    return sched;
}

Schedule oracle_schedule(const AlignedTraces& at, double granularity_s, const Thresholds& th)
{
    const auto windows = partition(at, to_ms(granularity_s, "oracle granularity"));
    std::optional<std::size_t> incumbent;

    Schedule sched = empty_schedule(at);
    for (const Window& win : windows) {
        bool any_sample = false;
        std::vector<std::optional<double>> cost(at.provider_count());
        for (std::size_t p = 0; p < at.provider_count(); ++p) {
            double sum = 0;
            for (std::size_t k = win.begin; k < win.end; ++k) {
                const auto& cell = at.cells[p][k];
                any_sample = any_sample || cell.has_value();
                sum += cell ? rtt_cost(*cell, th) : th.availability_rtt_ms;
            }
            cost[p] = sum;
        }
        std::size_t pick;
        if (!any_sample) {
            sched.coverage_holes.push_back(win.start_ms);
            pick = incumbent.value_or(0);
        } else {
            pick = *argmin(cost, incumbent);
        }
        switch_to(sched, win.start_ms, at.provider_ids[pick]);
        incumbent = pick;
    }
    return sched;
}

Schedule decide(const Policy& p, const AlignedTraces& at, const Thresholds& th)
{
    validate(p);
    return std::visit(Overloaded{
                          [&](const policy::Single& s) { return single_schedule(at, s.provider_id); },
                          [&](const policy::WindowedDsm& w) {
                              return windowed_decide(at, w.window_s,
                                                     w.start_provider.value_or(at.provider_ids.at(0)),
                                                     th);
                          },
                          [&](const policy::Oracle& o) {
                              return oracle_schedule(at, o.granularity_s, th);
                          },
                      },
                      p);
}

LinkTrace apply_schedule(const Schedule& sched, const AlignedTraces& at, const ApplyOptions& opts)
{
    sched.validate();
    if (at.tick_count() == 0) throw ContractViolation("aligned timeline is empty");
    if (sched.span_start_ms != at.timeline.front() || sched.span_end_ms != at.timeline.back()) {
        throw ContractViolation("schedule span does not match the aligned timeline");
    }
    if (opts.switch_delay_ms < 0) throw ContractViolation("switch delay must be >= 0");

    std::vector<std::size_t> seg_provider;
    seg_provider.reserve(sched.segments.size());
    for (const Segment& s : sched.segments) seg_provider.push_back(at.index_of(s.provider_id));

    LinkTrace out;
    out.provider_id = opts.label.value_or(joined_ids(at));
    out.tick_ms = at.tick_ms;
    out.samples.reserve(at.tick_count());

    std::size_t seg = 0;
    for (std::size_t k = 0; k < at.tick_count(); ++k) {
        const std::int64_t t = at.timeline[k];
        while (seg + 1 < sched.segments.size() && sched.segments[seg + 1].t_start_ms <= t) ++seg;

        std::size_t p = seg_provider[seg];
        const bool migrating = seg > 0 && t < sched.segments[seg].t_start_ms + opts.switch_delay_ms;
        if (migrating && opts.mode == SwitchMode::StrictOutage) {
            out.samples.push_back(outage_sample(t, out.provider_id));
            continue;
        }
        if (migrating) p = seg_provider[seg - 1];

        const auto& cell = at.cells[p][k];
        if (!cell) {
            out.samples.push_back(outage_sample(t, out.provider_id));
            continue;
        }
        Sample s = *cell;
        s.t_ms = t;
        s.provider_id = out.provider_id;
        if (!s.rtt.is_timeout() && s.dl_kbps && *s.dl_kbps > 0) {
            s.plt_ms = plt_model_ms(s.rtt.ms(), *s.dl_kbps, opts.plt);
        }
        out.samples.push_back(std::move(s));
    }
    return out;
}

double improvement(const LinkTrace& effective, const LinkTrace& baseline, const Thresholds& th)
{
    if (effective.samples.size() != baseline.samples.size()) {
        throw ContractViolation("improvement needs traces on the same timeline");
    }
    for (std::size_t i = 0; i < effective.samples.size(); ++i) {
        if (effective.samples[i].t_ms != baseline.samples[i].t_ms) {
            throw ContractViolation("improvement needs traces on the same timeline");
        }
    }
    const double base = mean_effective_rtt(baseline, th);
    if (base == 0) throw DomainError("baseline mean RTT is zero");
    return 100.0 * (base - mean_effective_rtt(effective, th)) / base;
}

SwitchStats switch_stats(const Schedule& sched, const LinkTrace& effective,
                         const AlignedTraces& at, const std::vector<std::string>& baselines,
                         const Thresholds& th, const ApplyOptions& opts)
{
    SwitchStats st;
    st.switch_count = sched.switch_count();
    st.mean_effective_rtt = mean_effective_rtt(effective, th);
    for (const auto& b : baselines) {
        ApplyOptions base_opts = opts;
        base_opts.label = b;
        const LinkTrace base = apply_schedule(single_schedule(at, b), at, base_opts);
        st.improvement_vs[b] = improvement(effective, base, th);
    }
    return st;
}

ReactiveTable reactive_table(const AlignedTraces& at, const ReactiveOptions& opts,
                             const Thresholds& th)
{
    if (opts.windows_s.empty()) throw ContractViolation("reactive table needs at least one window");
    if (at.provider_count() == 0) throw ContractViolation("aligned set has no providers");

    ReactiveTable table;
    table.baselines = opts.baselines.empty() ? at.provider_ids : opts.baselines;

    std::vector<LinkTrace> base_traces;
    for (const auto& b : table.baselines) {
        ApplyOptions base_opts = opts.apply;
        base_opts.label = b;
        base_traces.push_back(apply_schedule(single_schedule(at, b), at, base_opts));
    }

    auto row_for = [&](const Schedule& sched, std::optional<double> window) {
        const LinkTrace eff = apply_schedule(sched, at, opts.apply);
        ReactiveRow row;
        row.window_s = window;
        row.switches = sched.switch_count();
        row.mean_effective_rtt = mean_effective_rtt(eff, th);
        for (const auto& base : base_traces) row.improvement.push_back(improvement(eff, base, th));
        return row;
    };

    const std::string start = opts.start_provider.value_or(at.provider_ids.front());
    for (double w : opts.windows_s) {
        table.rows.push_back(row_for(windowed_decide(at, w, start, th), w));
    }
    table.rows.push_back(row_for(oracle_schedule(at, opts.oracle_granularity_s, th), std::nullopt));
    return table;
}

} // namespace mocsim
