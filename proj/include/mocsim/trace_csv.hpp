#pragma once

#include "mocsim/trace.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mocsim {

inline constexpr std::string_view kTraceCsvHeader =
    "t_ms,provider_id,rtt_ms,jitter_ms,loss,dl_kbps,ul_kbps,plt_ms,net_type,lat,lon,cell_id";

/// Six significant digits, '.' separator, independent of the global locale.
std::string format_number(double v);

/// Long-format trace CSV: one LinkTrace per distinct provider_id, in order of
/// first appearance. Rows are numbered from 1 (the header) in errors.
std::vector<LinkTrace> parse_trace_csv(std::istream& in, std::int64_t tick_ms = 3000);
std::vector<LinkTrace> parse_trace_csv(const std::filesystem::path& path,
                                       std::int64_t tick_ms = 3000);

/// Rows are written trace by trace.
void write_trace_csv(std::ostream& out, const std::vector<LinkTrace>& traces);
void write_trace_csv(const std::filesystem::path& path, const std::vector<LinkTrace>& traces);

} // namespace mocsim
