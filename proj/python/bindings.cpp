#include "mocsim/errors.hpp"
#include "mocsim/links.hpp"
#include "mocsim/reliability.hpp"
#include "mocsim/report.hpp"
#include "mocsim/scenario.hpp"
#include "mocsim/switcher.hpp"
#include "mocsim/trace_csv.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace mocsim;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string simulate_json(const std::string& config_text, const std::string& base_dir)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const auto cfg = config_from_json(j, base_dir);
    cfg.validate();
    return report_json(run_scenario(cfg)).dump();
}

std::string oracle_json(const std::string& config_text, const std::string& base_dir)
{
    const auto cfg = config_from_json(nlohmann::json::parse(config_text), base_dir);
    cfg.validate();
    return reactive_table_json(run_reactive(cfg)).dump();
}

std::string synthetic_csv(double base_rtt_ms, double phi, double beta, double eta,
                          std::uint64_t seed, std::int64_t duration_ms, std::int64_t tick_ms,
                          const std::string& provider_id)
{
    SyntheticLinkSpec spec;
    spec.provider_id = provider_id;
    spec.base_rtt_ms = base_rtt_ms;
    spec.hazard.phi = phi;
    spec.weibull = {beta, eta};
    spec.seed = seed;
    std::ostringstream out;
    write_trace_csv(out, {generate_trace(spec, duration_ms, tick_ms)});
    return out.str();
}

std::string roundtrip_csv(const std::string& text)
{
    std::istringstream in(text);
    std::ostringstream out;
    write_trace_csv(out, parse_trace_csv(in));
    return out.str();
}

} // namespace

PYBIND11_MODULE(_mocsim, m)
{
    m.doc() = "Multi-operator cellular connectivity simulator";
    m.attr("__version__") = std::string(kToolVersion);

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());

    m.def("parallel_reliability",
          [](double lambda, int n) { return parallel_reliability({lambda, n}); },
          py::arg("lam"), py::arg("n"));
    m.def("mttf", [](double lambda, int n) { return mttf({lambda, n}); }, py::arg("lam"),
          py::arg("n"));
    m.def("harmonic", &harmonic, py::arg("n"));
    m.def(
        "redundancy_curves",
        [](const std::vector<double>& grid, int n_max) {
            return curves_json(redundancy_curves(grid, n_max)).dump();
        },
        py::arg("lambda_grid"), py::arg("n_max"));
    m.def("jitter_from_window",
          [](const std::vector<double>& rtts) { return jitter_from_window(std::span<const double>(rtts)); },
          py::arg("rtts"));
    m.def(
        "plt_model_ms",
        [](double rtt, double dl, double page_bytes, double handshake_rtts) {
            return plt_model_ms(rtt, dl, PltModel{page_bytes, handshake_rtts});
        },
        py::arg("rtt_ms"), py::arg("dl_kbps"), py::arg("page_bytes") = PltModel{}.page_bytes,
        py::arg("handshake_rtts") = PltModel{}.handshake_rtts);
    m.def("synthetic_csv", &synthetic_csv, py::arg("base_rtt_ms"), py::arg("phi"), py::arg("beta"),
          py::arg("eta"), py::arg("seed"), py::arg("duration_ms"), py::arg("tick_ms") = 3000,
          py::arg("provider_id") = "NP");
    m.def("roundtrip_csv", &roundtrip_csv, py::arg("text"));
    m.def("simulate_json", &simulate_json, py::arg("config_text"), py::arg("base_dir") = "");
    m.def("oracle_json", &oracle_json, py::arg("config_text"), py::arg("base_dir") = "");
}
