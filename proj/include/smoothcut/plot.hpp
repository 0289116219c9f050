#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace smoothcut {

// Minimal self-contained SVG line plots. No external assets; output bytes are
// a deterministic function of the input data.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel, bool log_x = false,
            bool log_y = false)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
          log_x_(log_x), log_y_(log_y) {}

    void add_series(std::string name, std::vector<double> xs, std::vector<double> ys,
                    std::string color, bool dashed = false) {
        series_.push_back({std::move(name), std::move(xs), std::move(ys), std::move(color), dashed});
    }

    std::string render() const {
        const double W = 720, H = 480, ml = 70, mr = 20, mt = 40, mb = 55;
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
            << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
        out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
        out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
               "font-family=\"sans-serif\">" << title_ << "</text>\n";

        double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
        bool any = false;
        for (const auto& s : series_) {
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                double x = tx(s.xs[i]), y = ty(s.ys[i]);
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                any = true;
                x_lo = std::min(x_lo, x); x_hi = std::max(x_hi, x);
                y_lo = std::min(y_lo, y); y_hi = std::max(y_hi, y);
            }
        }
        if (!any) { x_lo = 0; x_hi = 1; y_lo = 0; y_hi = 1; }
        if (x_hi - x_lo < 1e-12) { x_lo -= 0.5; x_hi += 0.5; }
        if (y_hi - y_lo < 1e-12) { y_lo -= 0.5; y_hi += 0.5; }

        auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
        auto py = [&](double y) { return H - mb - (y - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

        // axes
        out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
            << H - mb << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
            << "\" stroke=\"black\"/>\n";
        for (int k = 0; k <= 5; ++k) {
            double fx = x_lo + (x_hi - x_lo) * k / 5.0;
            double fy = y_lo + (y_hi - y_lo) * k / 5.0;
            out << "<text x=\"" << px(fx) << "\" y=\"" << H - mb + 18
                << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
                << fmt(inv_tx(fx)) << "</text>\n";
            out << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
                << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
                << fmt(inv_ty(fy)) << "</text>\n";
        }
        out << "<text x=\"" << (W + ml - mr) / 2 << "\" y=\"" << H - 12
            << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xlabel_
            << "</text>\n";
        out << "<text x=\"16\" y=\"" << (H + mt - mb) / 2
            << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
               "transform=\"rotate(-90 16 " << (H + mt - mb) / 2 << ")\">" << ylabel_
            << "</text>\n";

        double legend_y = mt + 6;
        for (const auto& s : series_) {
            std::ostringstream pts;
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                double x = tx(s.xs[i]), y = ty(s.ys[i]);
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                pts << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
            }
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
            if (s.dashed) out << " stroke-dasharray=\"6,4\"";
            out << " points=\"" << pts.str() << "\"/>\n";
            out << "<text x=\"" << W - mr - 8 << "\" y=\"" << legend_y
                << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
                << s.color << "\">" << s.name << "</text>\n";
            legend_y += 16;
        }
        out << "</svg>\n";
        return out.str();
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << render();
    }

private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
        std::string color;
        bool dashed;
    };
    std::string title_, xlabel_, ylabel_;
    bool log_x_, log_y_;
    std::vector<Series> series_;

    double tx(double v) const { return log_x_ ? std::log10(std::max(v, 1e-300)) : v; }
    double ty(double v) const { return log_y_ ? std::log10(std::max(v, 1e-300)) : v; }
    double inv_tx(double v) const { return log_x_ ? std::pow(10.0, v) : v; }
    double inv_ty(double v) const { return log_y_ ? std::pow(10.0, v) : v; }

    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return buf;
    }
};

// Parsed trace rows needed by the figures.
struct TraceRows {
    std::vector<double> t, mistake, cum, log_volume, recompute;
};

// Strict reader for the trace CSV; throws on malformed rows.
inline TraceRows read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "t,mistake,cum_mistakes,log_volume,recompute,wallclock_us")
        throw std::runtime_error(path + ": not a trace CSV (bad header)");
    TraceRows rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double v[6];
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3], &v[4],
                        &v[5]) != 6)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed row");
        rows.t.push_back(v[0]);
        rows.mistake.push_back(v[1]);
        rows.cum.push_back(v[2]);
        rows.log_volume.push_back(v[3]);
        rows.recompute.push_back(v[4]);
    }
    return rows;
}

struct SweepRow {
    std::int64_t horizon;
    double sigma;
    std::int64_t trial;
    double mistakes;
};

inline std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "horizon,sigma,trial,mistakes")
        throw std::runtime_error(path + ": not a sweep CSV (bad header)");
    std::vector<SweepRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        SweepRow r;
        double h, trial;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &h, &r.sigma, &trial, &r.mistakes) != 4)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed row");
        r.horizon = static_cast<std::int64_t>(h);
        r.trial = static_cast<std::int64_t>(trial);
        rows.push_back(r);
    }
    return rows;
}

// Figure 1: cumulative mistakes vs t, log x-axis.
inline void plot_cumulative_mistakes(const TraceRows& rows, const std::string& path) {
    SvgPlot plot("cumulative mistakes", "t", "mistakes", /*log_x=*/true);
    plot.add_series("mistakes", rows.t, rows.cum, "#1f6fb2");
    plot.save(path);
}

// Figure 2: log-volume surrogate vs mistake index with the (8/9)^m reference.
inline void plot_volume_decay(const TraceRows& rows, const std::string& path) {
    std::vector<double> idx, vol;
    for (std::size_t i = 0; i < rows.t.size(); ++i)
        if (rows.recompute[i] > 0.5 && std::isfinite(rows.log_volume[i])) {
            idx.push_back(static_cast<double>(idx.size() + 1));
            vol.push_back(rows.log_volume[i]);
        }
    SvgPlot plot("volume decay per recompute", "mistake index", "log volume");
    std::vector<double> ref;
    double v0 = vol.empty() ? 0.0 : vol.front();
    for (std::size_t i = 0; i < idx.size(); ++i)
        ref.push_back(v0 + static_cast<double>(i) * std::log(8.0 / 9.0));
    plot.add_series("observed", idx, vol, "#1f6fb2");
    plot.add_series("(8/9)^m reference", idx, ref, "#c23b22", /*dashed=*/true);
    plot.save(path);
}

// Figure 3: mean mistakes vs log10(1/sigma) from a sweep.
inline void plot_mistakes_vs_sigma(const std::vector<SweepRow>& rows, const std::string& path) {
    std::map<double, std::pair<double, int>> agg;
    for (const auto& r : rows) {
        agg[r.sigma].first += r.mistakes;
        agg[r.sigma].second += 1;
    }
    std::vector<double> xs, ys;
    for (const auto& [sigma, sum_n] : agg) {
        xs.push_back(std::log10(1.0 / sigma));
        ys.push_back(sum_n.first / sum_n.second);
    }
    SvgPlot plot("mistakes vs smoothness", "log10(1/sigma)", "mean mistakes");
    plot.add_series("mean mistakes", xs, ys, "#1f6fb2");
    plot.save(path);
}

}  // namespace smoothcut
