#include "mocsim/scenario.hpp"

#include "mocsim/errors.hpp"
#include "mocsim/trace_csv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace mocsim {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

// Reads one JSON object and rejects keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where))
    {
        if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
    }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <class T>
    T get(const std::string& key, T fallback)
    {
        if (!has(key)) return fallback;
        return as<T>(key);
    }

    template <class T>
    T require(const std::string& key)
    {
        if (!has(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
        return as<T>(key);
    }

    const json& raw(const std::string& key)
    {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const
    {
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
        }
    }

private:
    template <class T>
    T as(const std::string& key)
    {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(where_ + ": key '" + key + "' has the wrong type");
        }
    }

    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

HazardParams hazard_from_json(const json& j, const std::string& where)
{
    ObjectReader r(j, where);
    HazardParams hp;
    hp.phi = r.get("phi", hp.phi);
    hp.p = r.get("p", hp.p);
    r.finish();
    return hp;
}

WeibullParams weibull_from_json(const json& j, const std::string& where)
{
    ObjectReader r(j, where);
    WeibullParams wp{1.0, 1e6};
    wp.beta = r.get("beta", wp.beta);
    wp.eta = r.get("eta", wp.eta);
    r.finish();
    return wp;
}

Thresholds thresholds_from_json(const json& j)
{
    ObjectReader r(j, "thresholds");
    Thresholds th;
    th.uplink_kbps = r.get("uplink_kbps", th.uplink_kbps);
    th.downlink_kbps = r.get("downlink_kbps", th.downlink_kbps);
    th.loss_max = r.get("loss_max", th.loss_max);
    th.rtt_ms = r.get("rtt_ms", th.rtt_ms);
    th.jitter_ms = r.get("jitter_ms", th.jitter_ms);
    th.plt_ms = r.get("plt_ms", th.plt_ms);
    th.availability_rtt_ms = r.get("availability_rtt_ms", th.availability_rtt_ms);
    r.finish();
    return th;
}

ProbeSpec probe_from_json(const json& j, const std::string& where)
{
    ObjectReader r(j, where);
    ProbeSpec ps;
    ps.packet_size_bytes = r.get("packet_size_bytes", ps.packet_size_bytes);
    ps.packets_per_burst = r.get("packets_per_burst", ps.packets_per_burst);
    ps.burst_interval_s = r.get("burst_interval_s", ps.burst_interval_s);
    ps.timeout_s = r.get("timeout_s", ps.timeout_s);
    const auto transport = r.get<std::string>("transport", "tcp");
    if (transport == "tcp") {
        ps.transport = Transport::TCP_LIKE;
    } else if (transport == "udp") {
        ps.transport = Transport::UDP_LIKE;
    } else {
        throw ConfigError(where + ": transport must be 'tcp' or 'udp'");
    }
    r.finish();
    return ps;
}

ProviderSource provider_from_json(const json& j, std::size_t index,
                                  const std::filesystem::path& base_dir)
{
    const std::string where = "providers[" + std::to_string(index) + "]";
    ObjectReader r(j, where);
    if (r.has("synthetic")) {
        SyntheticSource src;
        src.spec.provider_id = r.require<std::string>("id");
        ObjectReader s(r.raw("synthetic"), where + ".synthetic");
        auto& spec = src.spec;
        spec.base_rtt_ms = s.get("base_rtt_ms", spec.base_rtt_ms);
        spec.rtt_noise_sigma = s.get("rtt_noise_sigma", spec.rtt_noise_sigma);
        spec.congestion_rtt_multiplier =
            s.get("congestion_rtt_multiplier", spec.congestion_rtt_multiplier);
        spec.base_dl_kbps = s.get("base_dl_kbps", spec.base_dl_kbps);
        spec.base_ul_kbps = s.get("base_ul_kbps", spec.base_ul_kbps);
        if (s.has("hazard")) spec.hazard = hazard_from_json(s.raw("hazard"), where + ".hazard");
        if (s.has("weibull")) spec.weibull = weibull_from_json(s.raw("weibull"), where + ".weibull");
        if (s.has("seed")) {
            spec.seed = s.require<std::uint64_t>("seed");
            src.derive_seed = false;
        }
        s.finish();
        r.finish();
        return src;
    }
    if (r.has("trace_file")) {
        TraceFileSource src;
        src.path_as_written = r.require<std::string>("trace_file");
        std::filesystem::path p(src.path_as_written);
        src.path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
        src.provider_ids = r.get<std::vector<std::string>>("ids", {});
        r.finish();
        return src;
    }
    if (r.has("ssm_of")) {
        SsmSource src;
        src.id = r.require<std::string>("id");
        src.of = r.require<std::string>("ssm_of");
        src.extra_rtt_ms = r.get("extra_rtt_ms", 0.0);
        src.extra_hops = r.get("extra_hops", 0);
        r.finish();
        return src;
    }
    throw ConfigError(where + ": needs one of 'synthetic', 'trace_file' or 'ssm_of'");
}

Policy policy_from_json(const json& j, std::size_t index)
{
    const std::string where = "policies[" + std::to_string(index) + "]";
    ObjectReader r(j, where);
    const auto type = r.require<std::string>("type");
    Policy p;
    if (type == "single") {
        p = policy::Single{r.require<std::string>("provider")};
    } else if (type == "windowed") {
        policy::WindowedDsm w;
        w.window_s = r.get("window_s", w.window_s);
        w.probe_interval_s = r.get("probe_interval_s", w.probe_interval_s);
        if (r.has("start_provider")) w.start_provider = r.require<std::string>("start_provider");
        p = w;
    } else if (type == "oracle") {
        policy::Oracle o;
        o.granularity_s = r.get("granularity_s", o.granularity_s);
        p = o;
    } else {
        throw ConfigError(where + ": unknown policy type '" + type + "'");
    }
    r.finish();
    return p;
}

json policy_to_json(const Policy& p)
{
    return std::visit(Overloaded{
                          [](const policy::Single& s) {
                              return json{{"type", "single"}, {"provider", s.provider_id}};
                          },
                          [](const policy::WindowedDsm& w) {
                              json j{{"type", "windowed"},
                                     {"window_s", w.window_s},
                                     {"probe_interval_s", w.probe_interval_s}};
                              if (w.start_provider) j["start_provider"] = *w.start_provider;
                              return j;
                          },
                          [](const policy::Oracle& o) {
                              return json{{"type", "oracle"}, {"granularity_s", o.granularity_s}};
                          },
                      },
                      p);
}

} // namespace

std::vector<double> default_lambda_grid()
{
    std::vector<double> grid;
    for (int i = 2; i <= 21; ++i) grid.push_back(i / 100.0);
    return grid;
}

void ScenarioConfig::validate() const
{
    try {
        if (providers.empty()) throw ConfigError("scenario needs at least one provider");
        if (tick_ms <= 0) throw ConfigError("tick_ms must be > 0");
        if (duration_ms < 10 * tick_ms) throw ConfigError("duration_ms must cover at least 10 ticks");
        if (staleness_bound_ms && *staleness_bound_ms < 0) {
            throw ConfigError("staleness_bound_ms must be >= 0");
        }
        if (switch_delay_ms < 0) throw ConfigError("switch_delay_ms must be >= 0");
        thresholds.validate();
        plt.validate();
        for (const auto& p : probes) p.validate();
        for (const auto& p : policies) mocsim::validate(p);
        if (windows_s.empty()) throw ConfigError("reactive table needs at least one window");
        for (double w : windows_s) {
            if (!(w * 1000.0 >= static_cast<double>(tick_ms))) {
                throw ConfigError("reactive window shorter than one tick");
            }
        }
        if (!(oracle_granularity_s * 1000.0 >= static_cast<double>(tick_ms))) {
            throw ConfigError("oracle granularity shorter than one tick");
        }
        if (n_max < 1) throw ConfigError("curves n_max must be >= 1");
        for (double l : lambda_grid) {
            if (!(l > 0 && l <= 1)) throw ConfigError("curve lambda values must lie in (0, 1]");
        }
        for (const auto& src : providers) {
            if (const auto* s = std::get_if<SyntheticSource>(&src)) s->spec.validate();
            if (const auto* f = std::get_if<TraceFileSource>(&src)) {
                if (!std::filesystem::exists(f->path)) {
                    throw ConfigError("trace file not found: " + f->path.string());
                }
            }
            if (const auto* s = std::get_if<SsmSource>(&src)) {
                if (!(s->extra_rtt_ms >= 0) || s->extra_hops < 0) {
                    throw ConfigError("ssm provider '" + s->id + "' needs non-negative penalties");
                }
            }
        }
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
}

ScenarioConfig config_from_json(const json& j, const std::filesystem::path& base_dir)
{
    ObjectReader r(j, "config");
    const int schema = r.require<int>("schema");
    if (schema != kConfigSchema) {
        throw ConfigError("unsupported config schema " + std::to_string(schema) + ", expected " +
                          std::to_string(kConfigSchema));
    }

    ScenarioConfig cfg;
    cfg.seed = r.get<std::uint64_t>("seed", cfg.seed);
    cfg.duration_ms = r.get<std::int64_t>("duration_ms", cfg.duration_ms);
    cfg.tick_ms = r.get<std::int64_t>("tick_ms", cfg.tick_ms);
    if (r.has("staleness_bound_ms")) {
        cfg.staleness_bound_ms = r.require<std::int64_t>("staleness_bound_ms");
    }
    if (r.has("thresholds")) cfg.thresholds = thresholds_from_json(r.raw("thresholds"));
    if (r.has("plt_model")) {
        ObjectReader p(r.raw("plt_model"), "plt_model");
        cfg.plt.page_bytes = p.get("page_bytes", cfg.plt.page_bytes);
        cfg.plt.handshake_rtts = p.get("handshake_rtts", cfg.plt.handshake_rtts);
        p.finish();
    }
    if (r.has("probes")) {
        const auto& arr = r.raw("probes");
        if (!arr.is_array()) throw ConfigError("probes must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            cfg.probes.push_back(probe_from_json(arr[i], "probes[" + std::to_string(i) + "]"));
        }
    }
    {
        if (!r.has("providers")) throw ConfigError("config: missing key 'providers'");
        const auto& arr = r.raw("providers");
        if (!arr.is_array()) throw ConfigError("providers must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            cfg.providers.push_back(provider_from_json(arr[i], i, base_dir));
        }
    }
    if (r.has("policies")) {
        const auto& arr = r.raw("policies");
        if (!arr.is_array()) throw ConfigError("policies must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) cfg.policies.push_back(policy_from_json(arr[i], i));
    }
    cfg.switch_delay_ms = r.get<std::int64_t>("switch_delay_ms", cfg.switch_delay_ms);
    {
        const auto mode = r.get<std::string>("switch_mode", "make_before_break");
        if (mode == "make_before_break") {
            cfg.switch_mode = SwitchMode::MakeBeforeBreak;
        } else if (mode == "strict_outage") {
            cfg.switch_mode = SwitchMode::StrictOutage;
        } else {
            throw ConfigError("switch_mode must be 'make_before_break' or 'strict_outage'");
        }
    }
    if (r.has("reactive_table")) {
        ObjectReader t(r.raw("reactive_table"), "reactive_table");
        cfg.windows_s = t.get("windows_s", cfg.windows_s);
        cfg.baselines = t.get("baselines", cfg.baselines);
        cfg.oracle_granularity_s = t.get("oracle_granularity_s", cfg.oracle_granularity_s);
        t.finish();
    }
    if (r.has("curves")) {
        ObjectReader c(r.raw("curves"), "curves");
        cfg.lambda_grid = c.get("lambda_grid", cfg.lambda_grid);
        cfg.n_max = c.get("n_max", cfg.n_max);
        c.finish();
    }
    if (r.has("output")) {
        ObjectReader o(r.raw("output"), "output");
        const auto dir = o.get<std::string>("dir", cfg.out_dir.string());
        cfg.out_dir = std::filesystem::path(dir).is_absolute() || base_dir.empty()
                          ? std::filesystem::path(dir)
                          : base_dir / dir;
        const auto fmt = o.get<std::string>("format", "json");
        if (fmt == "json") {
            cfg.format = ReportFormat::Json;
        } else if (fmt == "csv") {
            cfg.format = ReportFormat::Csv;
        } else {
            throw ConfigError("output.format must be 'json' or 'csv'");
        }
        o.finish();
    }
    r.finish();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    auto cfg = config_from_json(j, path.parent_path());
    return cfg;
}

json config_to_json(const ScenarioConfig& cfg)
{
    json j;
    j["schema"] = kConfigSchema;
    j["seed"] = cfg.seed;
    j["duration_ms"] = cfg.duration_ms;
    j["tick_ms"] = cfg.tick_ms;
    if (cfg.staleness_bound_ms) j["staleness_bound_ms"] = *cfg.staleness_bound_ms;
    const auto& th = cfg.thresholds;
    j["thresholds"] = {{"uplink_kbps", th.uplink_kbps},     {"downlink_kbps", th.downlink_kbps},
                       {"loss_max", th.loss_max},           {"rtt_ms", th.rtt_ms},
                       {"jitter_ms", th.jitter_ms},         {"plt_ms", th.plt_ms},
                       {"availability_rtt_ms", th.availability_rtt_ms}};
    j["plt_model"] = {{"page_bytes", cfg.plt.page_bytes}, {"handshake_rtts", cfg.plt.handshake_rtts}};
    j["probes"] = json::array();
    for (const auto& p : cfg.probes) {
        j["probes"].push_back({{"packet_size_bytes", p.packet_size_bytes},
                               {"packets_per_burst", p.packets_per_burst},
                               {"burst_interval_s", p.burst_interval_s},
                               {"timeout_s", p.timeout_s},
                               {"transport", p.transport == Transport::UDP_LIKE ? "udp" : "tcp"}});
    }
    j["providers"] = json::array();
    for (const auto& src : cfg.providers) {
        j["providers"].push_back(std::visit(
            Overloaded{
                [](const SyntheticSource& s) {
                    const auto& sp = s.spec;
                    json syn{{"base_rtt_ms", sp.base_rtt_ms},
                             {"rtt_noise_sigma", sp.rtt_noise_sigma},
                             {"congestion_rtt_multiplier", sp.congestion_rtt_multiplier},
                             {"base_dl_kbps", sp.base_dl_kbps},
                             {"base_ul_kbps", sp.base_ul_kbps},
                             {"hazard", {{"phi", sp.hazard.phi}, {"p", sp.hazard.p}}},
                             {"weibull", {{"beta", sp.weibull.beta}, {"eta", sp.weibull.eta}}}};
                    if (!s.derive_seed) syn["seed"] = sp.seed;
                    return json{{"id", sp.provider_id}, {"synthetic", syn}};
                },
                [](const TraceFileSource& f) {
                    json t{{"trace_file", f.path_as_written}};
                    if (!f.provider_ids.empty()) t["ids"] = f.provider_ids;
                    return t;
                },
                [](const SsmSource& s) {
                    return json{{"id", s.id},
                                {"ssm_of", s.of},
                                {"extra_rtt_ms", s.extra_rtt_ms},
                                {"extra_hops", s.extra_hops}};
                },
            },
            src));
    }
    j["policies"] = json::array();
    for (const auto& p : cfg.policies) j["policies"].push_back(policy_to_json(p));
    j["switch_delay_ms"] = cfg.switch_delay_ms;
    j["switch_mode"] =
        cfg.switch_mode == SwitchMode::StrictOutage ? "strict_outage" : "make_before_break";
    j["reactive_table"] = {{"windows_s", cfg.windows_s},
                           {"baselines", cfg.baselines},
                           {"oracle_granularity_s", cfg.oracle_granularity_s}};
    j["curves"] = {{"lambda_grid", cfg.lambda_grid}, {"n_max", cfg.n_max}};
    return j;
}

std::string config_hash(const ScenarioConfig& cfg)
{
    const std::string text = config_to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t derive_seed(std::uint64_t scenario_seed, std::size_t index)
{
    // splitmix64 step over seed and index
    std::uint64_t z = scenario_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<LinkTrace> build_traces(const ScenarioConfig& cfg)
{
    cfg.validate();
    std::vector<LinkTrace> traces;
    std::map<std::filesystem::path, std::vector<LinkTrace>> file_cache;

    for (std::size_t i = 0; i < cfg.providers.size(); ++i) {
        const auto& src = cfg.providers[i];
        if (const auto* s = std::get_if<SyntheticSource>(&src)) {
            SyntheticLinkSpec spec = s->spec;
            if (s->derive_seed) spec.seed = derive_seed(cfg.seed, i);
            traces.push_back(generate_trace(spec, cfg.duration_ms, cfg.tick_ms, cfg.plt));
        } else if (const auto* f = std::get_if<TraceFileSource>(&src)) {
            auto it = file_cache.find(f->path);
            if (it == file_cache.end()) {
                it = file_cache.emplace(f->path, parse_trace_csv(f->path, cfg.tick_ms)).first;
            }
            const auto& loaded = it->second;
            if (f->provider_ids.empty()) {
                traces.insert(traces.end(), loaded.begin(), loaded.end());
            } else {
                for (const auto& id : f->provider_ids) {
                    auto m = std::find_if(loaded.begin(), loaded.end(),
                                          [&](const LinkTrace& t) { return t.provider_id == id; });
                    if (m == loaded.end()) {
                        throw ConfigError("provider '" + id + "' not found in " + f->path.string());
                    }
                    traces.push_back(*m);
                }
            }
        }
    }
    // supply-side variants derive from the providers built above
    for (const auto& src : cfg.providers) {
        const auto* s = std::get_if<SsmSource>(&src);
        if (!s) continue;
        auto m = std::find_if(traces.begin(), traces.end(),
                              [&](const LinkTrace& t) { return t.provider_id == s->of; });
        if (m == traces.end()) {
            throw ConfigError("ssm provider '" + s->id + "' refers to unknown provider '" + s->of + "'");
        }
        LinkTrace ssm = ssm_transform(*m, s->extra_rtt_ms, s->extra_hops, cfg.plt);
        ssm.provider_id = s->id;
        for (auto& sample : ssm.samples) sample.provider_id = s->id;
        traces.push_back(std::move(ssm));
    }

    std::set<std::string> ids;
    for (const auto& t : traces) {
        if (!ids.insert(t.provider_id).second) {
            throw ConfigError("duplicate provider id '" + t.provider_id + "'");
        }
    }
    return traces;
}

namespace {

ReactiveOptions reactive_options(const ScenarioConfig& cfg, const AlignedTraces& at)
{
    ReactiveOptions ro;
    ro.windows_s = cfg.windows_s;
    ro.baselines = cfg.baselines;
    for (const auto& b : ro.baselines) at.index_of(b);
    ro.oracle_granularity_s = cfg.oracle_granularity_s;
    ro.apply.switch_delay_ms = cfg.switch_delay_ms;
    ro.apply.mode = cfg.switch_mode;
    ro.apply.plt = cfg.plt;
    return ro;
}

std::vector<ProbeResult> probe_results(const ScenarioConfig& cfg,
                                       const std::vector<LinkTrace>& traces)
{
    std::vector<ProbeResult> out;
    for (const auto& spec : cfg.probes) {
        const auto burst = static_cast<std::size_t>(spec.packets_per_burst);
        for (const auto& tr : traces) {
            ProbeResult pr;
            pr.spec = spec;
            pr.provider_id = tr.provider_id;
            std::vector<double> medians;
            double loss_sum = 0;
            std::vector<Rtt> outcomes;
            for (std::size_t start = 0; start + burst <= tr.samples.size(); start += burst) {
                outcomes.clear();
                for (std::size_t k = start; k < start + burst; ++k) {
                    outcomes.push_back(tr.samples[k].rtt);
                }
                const auto bs = burst_stats(outcomes, spec);
                loss_sum += bs.loss;
                if (bs.rtt_median) medians.push_back(*bs.rtt_median);
                ++pr.bursts;
            }
            if (pr.bursts > 0) pr.mean_loss = loss_sum / static_cast<double>(pr.bursts);
            if (!medians.empty()) {
                std::sort(medians.begin(), medians.end());
                const std::size_t n = medians.size();
                pr.median_rtt_ms =
                    n % 2 == 1 ? medians[n / 2] : (medians[n / 2 - 1] + medians[n / 2]) / 2.0;
            }
            out.push_back(std::move(pr));
        }
    }
    return out;
}

AlignedTraces subset(const AlignedTraces& at, const std::vector<std::size_t>& members)
{
    AlignedTraces s;
    s.timeline = at.timeline;
    s.tick_ms = at.tick_ms;
    s.staleness_bound_ms = at.staleness_bound_ms;
    for (std::size_t p : members) {
        s.provider_ids.push_back(at.provider_ids[p]);
        s.cells.push_back(at.cells[p]);
        s.head.push_back(at.head[p]);
        s.tail.push_back(at.tail[p]);
        s.extra_hops.push_back(at.extra_hops[p]);
    }
    return s;
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
    ScenarioResult res;
    res.config_hash = config_hash(cfg);
    res.seed = cfg.seed;
    res.traces = build_traces(cfg);
    const auto& th = cfg.thresholds;

    for (const auto& tr : res.traces) res.providers.push_back({report_for_trace(tr, th), tr.extra_hops});

    const AlignedTraces at = align(res.traces, cfg.tick_ms, cfg.staleness_bound_ms);

    // every subset of two or more providers, in bitmask order
    const std::size_t n = at.provider_count();
    if (n >= 2 && n <= 8) {
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            if (std::popcount(mask) < 2) continue;
            std::vector<std::size_t> members;
            for (std::size_t p = 0; p < n; ++p) {
                if (mask & (1u << p)) members.push_back(p);
            }
            res.combinations.push_back(report_for_combination(subset(at, members), th));
        }
    } else if (n > 8) {
        res.combinations.push_back(report_for_combination(at, th));
    }

    const ReactiveOptions ro = reactive_options(cfg, at);
    const std::vector<std::string> baselines = ro.baselines.empty() ? at.provider_ids : ro.baselines;
    for (const auto& p : cfg.policies) {
        PolicyResult pr;
        pr.name = policy_name(p);
        const Schedule sched = decide(p, at, th);
        ApplyOptions opts = ro.apply;
        opts.label = pr.name;
        const LinkTrace eff = apply_schedule(sched, at, opts);
        pr.report = report_for_trace(eff, th);
        pr.report.provider_set = at.provider_ids;
        pr.stats = switch_stats(sched, eff, at, baselines, th, ro.apply);
        pr.coverage_holes = sched.coverage_holes;
        res.policies.push_back(std::move(pr));
    }

    res.probes = probe_results(cfg, res.traces);
    res.reactive = reactive_table(at, ro, th);
    res.curves = redundancy_curves(cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid,
                                   cfg.n_max);
    return res;
}

ReactiveTable run_reactive(const ScenarioConfig& cfg)
{
    const auto traces = build_traces(cfg);
    const AlignedTraces at = align(traces, cfg.tick_ms, cfg.staleness_bound_ms);
    return reactive_table(at, reactive_options(cfg, at), cfg.thresholds);
}

} // namespace mocsim
