#include "mocsim/core.hpp"

#include "mocsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mocsim {

Rtt Rtt::of(double ms)
{
    if (!std::isfinite(ms) || ms < 0) {
        throw DomainError("rtt must be a finite non-negative value, got " + std::to_string(ms));
    }
    Rtt r;
    r.ms_ = ms;
    return r;
}

double Rtt::ms() const
{
    if (!ms_) throw DomainError("rtt is TIMEOUT");
    return *ms_;
}

std::string_view to_string(NetType t)
{
    switch (t) {
    case NetType::LTE: return "LTE";
    case NetType::HSPA_PLUS: return "HSPA_PLUS";
    case NetType::OTHER: return "OTHER";
    case NetType::NONE: return "NONE";
    }
    return "OTHER";
}

std::optional<NetType> net_type_from_string(std::string_view s)
{
    if (s == "LTE") return NetType::LTE;
    if (s == "HSPA_PLUS") return NetType::HSPA_PLUS;
    if (s == "OTHER") return NetType::OTHER;
    if (s == "NONE") return NetType::NONE;
    return std::nullopt;
}

void validate(const Sample& s)
{
    if (s.t_ms < 0) throw ContractViolation("sample time must be >= 0");
    if (s.loss && !(*s.loss >= 0 && *s.loss <= 1)) {
        throw ContractViolation("loss must lie in [0,1]");
    }
    if (s.dl_kbps && !(*s.dl_kbps >= 0)) throw ContractViolation("dl throughput must be >= 0");
    if (s.ul_kbps && !(*s.ul_kbps >= 0)) throw ContractViolation("ul throughput must be >= 0");
    if (s.jitter_ms && !(*s.jitter_ms >= 0)) throw ContractViolation("jitter must be >= 0");
    if (s.plt_ms && !(*s.plt_ms >= 0)) throw ContractViolation("plt must be >= 0");
}

void Thresholds::validate() const
{
    for (double v : {uplink_kbps, downlink_kbps, rtt_ms, jitter_ms, plt_ms, availability_rtt_ms}) {
        if (!(v > 0)) throw ContractViolation("thresholds must be positive");
    }
    if (!(loss_max >= 0 && loss_max <= 1)) throw ContractViolation("loss_max must lie in [0,1]");
    if (!(rtt_ms < availability_rtt_ms)) {
        throw ContractViolation("rtt_ms must be below availability_rtt_ms");
    }
}

void ProbeSpec::validate() const
{
    if (packet_size_bytes < 1) throw ContractViolation("packet_size_bytes must be >= 1");
    if (packets_per_burst < 1) throw ContractViolation("packets_per_burst must be >= 1");
    if (!(timeout_s > 0)) throw ContractViolation("timeout_s must be > 0");
    if (!(burst_interval_s > 0)) throw ContractViolation("burst_interval_s must be > 0");
}

void PltModel::validate() const
{
    if (!(page_bytes >= 1)) throw ContractViolation("page_bytes must be >= 1");
    if (!(handshake_rtts >= 0)) throw ContractViolation("handshake_rtts must be >= 0");
}

std::string_view to_string(Metric m)
{
    switch (m) {
    case Metric::Rtt: return "rtt";
    case Metric::Jitter: return "jitter";
    case Metric::Loss: return "loss";
    case Metric::Downlink: return "downlink";
    case Metric::Uplink: return "uplink";
    case Metric::Plt: return "plt";
    case Metric::Availability: return "availability";
    }
    return "rtt";
}

std::optional<Metric> metric_from_string(std::string_view s)
{
    for (Metric m : kAllMetrics) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

bool has_metric(const Sample& s, Metric m)
{
    switch (m) {
    case Metric::Rtt:
    case Metric::Availability: return true;
    case Metric::Jitter: return s.jitter_ms.has_value();
    case Metric::Loss: return s.loss.has_value();
    case Metric::Downlink: return s.dl_kbps.has_value();
    case Metric::Uplink: return s.ul_kbps.has_value();
    case Metric::Plt: return s.plt_ms.has_value();
    }
    return false;
}

double jitter_from_window(std::span<const double> rtts)
{
    if (rtts.size() != 5) {
        throw ContractViolation("jitter window needs exactly 5 RTTs, got " +
                                std::to_string(rtts.size()));
    }
    double sum = 0;
    for (std::size_t i = 1; i < rtts.size(); ++i) {
        if (!std::isfinite(rtts[i]) || !std::isfinite(rtts[i - 1])) {
            throw DomainError("jitter window contains a non-finite RTT; drop the window");
        }
        sum += std::abs(rtts[i] - rtts[i - 1]);
    }
    return sum / 4.0;
}

double jitter_from_window(std::span<const Rtt> rtts)
{
    if (rtts.size() != 5) {
        throw ContractViolation("jitter window needs exactly 5 RTTs, got " +
                                std::to_string(rtts.size()));
    }
    double values[5];
    for (std::size_t i = 0; i < 5; ++i) {
        if (rtts[i].is_timeout()) {
            throw DomainError("jitter window contains a TIMEOUT; drop the window");
        }
        values[i] = rtts[i].ms();
    }
    return jitter_from_window(std::span<const double>(values));
}

double plt_model_ms(double rtt_ms, double dl_kbps, const PltModel& model)
{
    if (!std::isfinite(rtt_ms)) throw DomainError("plt model needs a finite rtt");
    if (!(dl_kbps > 0)) throw DomainError("plt model needs a positive downlink throughput");
    // bits / (kbit/s) == milliseconds
    return model.handshake_rtts * rtt_ms + model.page_bytes * 8.0 / dl_kbps;
}

namespace {

template <class T>
const T& require(const std::optional<T>& v, Metric m)
{
    if (!v) throw MissingMetric("sample has no " + std::string(to_string(m)) + " value");
    return *v;
}

} // namespace

bool meets_threshold(const Sample& s, const Thresholds& th, Metric m)
{
    switch (m) {
    case Metric::Rtt: return !s.rtt.is_timeout() && s.rtt.ms() <= th.rtt_ms;
    case Metric::Availability:
        return !s.rtt.is_timeout() && s.rtt.ms() <= th.availability_rtt_ms;
    case Metric::Jitter: return require(s.jitter_ms, m) <= th.jitter_ms;
    case Metric::Loss: return require(s.loss, m) <= th.loss_max;
    case Metric::Downlink: return require(s.dl_kbps, m) >= th.downlink_kbps;
    case Metric::Uplink: return require(s.ul_kbps, m) >= th.uplink_kbps;
    case Metric::Plt: return require(s.plt_ms, m) <= th.plt_ms;
    }
    return false;
}

BurstStats burst_stats(std::span<const Rtt> outcomes, const ProbeSpec& spec)
{
    spec.validate();
    if (outcomes.empty()) throw ContractViolation("burst has no packets");
    if (outcomes.size() != static_cast<std::size_t>(spec.packets_per_burst)) {
        throw ContractViolation("burst has " + std::to_string(outcomes.size()) +
                                " packets, probe spec expects " +
                                std::to_string(spec.packets_per_burst));
    }

    const double timeout_ms = spec.timeout_s * 1000.0;
    std::vector<double> survived;
    survived.reserve(outcomes.size());
    for (const Rtt& r : outcomes) {
        if (!r.is_timeout() && r.ms() < timeout_ms) survived.push_back(r.ms());
    }

    BurstStats out;
    out.loss = static_cast<double>(outcomes.size() - survived.size()) /
               static_cast<double>(spec.packets_per_burst);
    if (survived.size() >= 5) {
        out.jitter = jitter_from_window(std::span<const double>(survived.data(), 5));
    }
    if (!survived.empty()) {
        std::vector<double> sorted = survived;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        out.rtt_median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    }
    return out;
}

} // namespace mocsim
