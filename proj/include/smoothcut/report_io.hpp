#pragma once

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

#include "smoothcut/harness.hpp"

namespace smoothcut {

// Trace CSV, columns exactly: t, mistake, cum_mistakes, log_volume,
// recompute, wallclock_us. %.17g keeps the bytes reproducible per seed.
inline void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << "t,mistake,cum_mistakes,log_volume,recompute,wallclock_us\n";
    char buf[64];
    for (const auto& r : trace.records) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.log_volume);
        out << r.t << ',' << (r.mistake ? 1 : 0) << ',' << r.cum_mistakes << ',' << buf << ','
            << (r.recompute ? 1 : 0) << ',' << r.wallclock_us << '\n';
    }
}

inline void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_trace_csv(trace, out);
}

inline nlohmann::json bound_report_json(const BoundReport& b) {
    return {{"bound_name", b.bound_name},
            {"bound_value", b.bound_value},
            {"observed", b.observed},
            {"satisfied", b.satisfied},
            {"parameters", b.parameters}};
}

inline nlohmann::json summary_json(const Summary& s, const nlohmann::json& config_echo) {
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& b : s.bounds) bounds.push_back(bound_report_json(b));
    nlohmann::json decay = {{"pass", s.decay.pass},
                            {"checked_drops", s.decay.checked_drops},
                            {"violations", s.decay.violations}};
    return {{"config", config_echo},
            {"master_seed", s.master_seed},
            {"trial", s.trial},
            {"total_mistakes", s.total_mistakes},
            {"final_log_volume", s.final_log_volume},
            {"bound_reports", bounds},
            {"decay_check", decay},
            {"adversary", s.adversary_params},
            {"oracle", s.oracle_params},
            {"learner", s.learner_extra}};
}

inline void write_summary_json(const Summary& s, const nlohmann::json& config_echo,
                               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << summary_json(s, config_echo).dump(2) << '\n';
}

// Sweep CSV: one row per (horizon, sigma, trial).
inline void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
    out << "horizon,sigma,trial,mistakes\n";
    char buf[64];
    for (const auto& cell : sweep.cells) {
        for (std::size_t trial = 0; trial < cell.mistakes.size(); ++trial) {
            std::snprintf(buf, sizeof(buf), "%.17g", cell.sigma_axis);
            out << cell.horizon << ',' << buf << ',' << trial << ',' << cell.mistakes[trial] << '\n';
        }
    }
}

inline void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_sweep_csv(sweep, out);
}

inline nlohmann::json sweep_json(const SweepResult& sweep) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : sweep.cells)
        cells.push_back({{"horizon", c.horizon},
                         {"sigma", c.sigma_axis},
                         {"mistakes", c.mistakes},
                         {"mean", c.mean}});
    nlohmann::json out = {{"cells", cells}};
    if (sweep.slope_vs_log_T) out["slope_vs_log_T"] = *sweep.slope_vs_log_T;
    if (sweep.slope_vs_log_inv_sigma) out["slope_vs_log_inv_sigma"] = *sweep.slope_vs_log_inv_sigma;
    return out;
}

}  // namespace smoothcut
