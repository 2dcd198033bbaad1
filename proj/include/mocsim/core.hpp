#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace mocsim {

/// Round-trip time of a probe: either a finite value in milliseconds or the
/// TIMEOUT marker. Reading the value of a timeout throws, so timeouts can
/// never be averaged into an RTT statistic by accident.
class Rtt {
public:
    static Rtt of(double ms);
    static Rtt timeout() { return Rtt{}; }

    bool is_timeout() const noexcept { return !ms_.has_value(); }
    double ms() const;

    /// The value, or `penalty_ms` for a timeout.
    double ms_or(double penalty_ms) const noexcept { return ms_.value_or(penalty_ms); }

    bool operator==(const Rtt&) const = default;

private:
    Rtt() = default;
    std::optional<double> ms_;
};

enum class NetType { LTE, HSPA_PLUS, OTHER, NONE };

std::string_view to_string(NetType t);
std::optional<NetType> net_type_from_string(std::string_view s);

struct Sample {
    std::int64_t t_ms = 0;
    std::string provider_id;
    Rtt rtt = Rtt::timeout();
    std::optional<double> jitter_ms;
    std::optional<double> loss;
    std::optional<double> dl_kbps;
    std::optional<double> ul_kbps;
    std::optional<double> plt_ms;
    std::optional<NetType> net_type;
    std::optional<double> lat;
    std::optional<double> lon;
    std::optional<std::string> cell_id;

    bool operator==(const Sample&) const = default;
};

/// Throws ContractViolation if the sample breaks a field invariant.
void validate(const Sample& s);

/// Performance benchmarks. Boundaries count as passing.
struct Thresholds {
    double uplink_kbps = 25000;
    double downlink_kbps = 50000;
    double loss_max = 0.0;
    double rtt_ms = 100;
    double jitter_ms = 20;
    double plt_ms = 1000;
    double availability_rtt_ms = 10000;

    void validate() const;
    bool operator==(const Thresholds&) const = default;
};

enum class Transport { TCP_LIKE, UDP_LIKE };

struct ProbeSpec {
    int packet_size_bytes = 1024;
    int packets_per_burst = 10;
    double burst_interval_s = 60;
    double timeout_s = 60;
    Transport transport = Transport::TCP_LIKE;

    void validate() const;
    bool operator==(const ProbeSpec&) const = default;
};

/// Simulated page load: handshake round trips plus serialization of the page.
struct PltModel {
    double page_bytes = 1363149; // 1.3 MiB
    double handshake_rtts = 2;

    void validate() const;
    bool operator==(const PltModel&) const = default;
};

enum class Metric { Rtt, Jitter, Loss, Downlink, Uplink, Plt, Availability };

inline constexpr Metric kAllMetrics[] = {Metric::Rtt,    Metric::Jitter, Metric::Loss,
                                         Metric::Downlink, Metric::Uplink, Metric::Plt,
                                         Metric::Availability};

std::string_view to_string(Metric m);
std::optional<Metric> metric_from_string(std::string_view s);

/// True if the sample carries a value for `m`. RTT and availability are
/// always carried.
bool has_metric(const Sample& s, Metric m);

/// Mean absolute successive difference over a window of exactly five RTTs.
double jitter_from_window(std::span<const double> rtts);
/// As above; throws DomainError if any entry is a timeout (drop the window).
double jitter_from_window(std::span<const Rtt> rtts);

double plt_model_ms(double rtt_ms, double dl_kbps, const PltModel& model = {});

/// The binary gate W for one metric. Boundaries pass.
bool meets_threshold(const Sample& s, const Thresholds& th, Metric m);

struct BurstStats {
    std::optional<double> rtt_median;
    std::optional<double> jitter;
    double loss = 0;

    bool operator==(const BurstStats&) const = default;
};

/// Summarises one probe burst. Packets whose RTT reaches the probe timeout
/// count as lost.
BurstStats burst_stats(std::span<const Rtt> outcomes, const ProbeSpec& spec);

} // namespace mocsim
