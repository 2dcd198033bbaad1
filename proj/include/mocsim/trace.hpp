#pragma once

#include "mocsim/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mocsim {

/// Time-ordered samples of a single provider.
struct LinkTrace {
    std::string provider_id;
    std::vector<Sample> samples;
    std::int64_t tick_ms = 3000;
    /// Extra network hops this trace was routed through (set by ssm_transform).
    int extra_hops = 0;

    /// Throws ContractViolation unless samples are strictly increasing in t.
    void validate() const;
    bool operator==(const LinkTrace&) const = default;
};

/// Several traces resampled onto one tick grid. `cells[p][k]` is the sample
/// provider p had at `timeline[k]`, or nullopt for a GAP.
struct AlignedTraces {
    std::vector<std::string> provider_ids;
    std::vector<std::int64_t> timeline;
    std::vector<std::vector<std::optional<Sample>>> cells;
    std::int64_t tick_ms = 3000;
    std::int64_t staleness_bound_ms = 6000;
    /// Per provider: latest sample at or before the first tick and earliest
    /// sample at or after the last tick. Kept so as_traces() can be realigned
    /// onto the identical grid.
    std::vector<std::optional<Sample>> head;
    std::vector<std::optional<Sample>> tail;
    std::vector<int> extra_hops;

    std::size_t provider_count() const { return provider_ids.size(); }
    std::size_t tick_count() const { return timeline.size(); }

    /// Index of `id` in provider_ids; throws ContractViolation if absent.
    std::size_t index_of(const std::string& id) const;

    /// The source samples backing this alignment, one trace per provider.
    std::vector<LinkTrace> as_traces() const;

    bool operator==(const AlignedTraces&) const = default;
};

} // namespace mocsim
