#pragma once

#include "mocsim/core.hpp"
#include "mocsim/trace.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace testutil {

inline mocsim::Sample sample(std::int64_t t, const std::string& id, std::optional<double> rtt)
{
    mocsim::Sample s;
    s.t_ms = t;
    s.provider_id = id;
    s.rtt = rtt ? mocsim::Rtt::of(*rtt) : mocsim::Rtt::timeout();
    return s;
}

/// One sample per tick starting at t0; nullopt entries are TIMEOUTs.
inline mocsim::LinkTrace trace(const std::string& id, const std::vector<std::optional<double>>& rtts,
                               std::int64_t tick = 3000, std::int64_t t0 = 0)
{
    mocsim::LinkTrace tr;
    tr.provider_id = id;
    tr.tick_ms = tick;
    for (std::size_t i = 0; i < rtts.size(); ++i) {
        tr.samples.push_back(sample(t0 + static_cast<std::int64_t>(i) * tick, id, rtts[i]));
    }
    return tr;
}

/// Random RTT trace with occasional timeouts and near-threshold values.
inline mocsim::LinkTrace random_trace(std::mt19937_64& rng, const std::string& id, std::size_t n,
                                      std::int64_t tick = 3000)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::optional<double>> rtts;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(rng);
        if (x < 0.08) {
            rtts.push_back(std::nullopt);
        } else if (x < 0.12) {
            rtts.push_back(10000.0 + 5000.0 * u(rng));
        } else {
            rtts.push_back(std::round(20.0 + 200.0 * u(rng)));
        }
    }
    return trace(id, rtts, tick);
}

} // namespace testutil
