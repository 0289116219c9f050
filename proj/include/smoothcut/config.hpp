#pragma once

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "smoothcut/errors.hpp"
#include "smoothcut/harness.hpp"

namespace smoothcut {

// Plain-text experiment config: one `section.key = value` per line, `#`
// comments. Every key must be in the schema below; unknown keys are hard
// errors so a typo in an adversary parameter cannot silently corrupt an
// experiment. The full schema is documented in configs/README.md.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_string(ss.str(), path);
    }

    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>") {
        ConfigFile cf;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (cf.values_.count(key))
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
            cf.values_[key] = value;
        }
        cf.origin_ = origin;
        return cf;
    }

    ExperimentConfig to_experiment_config() const {
        ExperimentConfig cfg;
        std::map<std::string, bool> seen;
        auto s = [&](const std::string& k, std::string& out) { read(k, out, seen); };
        auto i = [&](const std::string& k, auto& out) { read_int(k, out, seen); };
        auto f = [&](const std::string& k, double& out) { read_double(k, out, seen); };
        auto b = [&](const std::string& k, bool& out) { read_bool(k, out, seen); };

        s("learner.kind", cfg.learner_kind);
        i("learner.dim", cfg.dim);
        i("learner.k", cfg.k_classes);
        i("learner.ell", cfg.ell);
        f("learner.fit_tol", cfg.fit_tol);
        s("learner.feature", cfg.feature);
        f("learner.feature_param", cfg.feature_param);
        i("learner.poly_degree", cfg.poly_degree);
        f("learner.poly_alpha", cfg.poly_alpha);
        i("learner.meta_p", cfg.meta_p);
        f("learner.meta_c", cfg.meta_c);
        f("learner.gamma", cfg.igw_gamma);
        f("learner.mu", cfg.igw_mu);
        i("learner.actions", cfg.igw_actions);
        b("learner.lift_affine", cfg.perceptron_lift);
        f("learner.eta", cfg.naive_eta);
        i("learner.prune_factor", cfg.prune_factor);

        s("adversary.kind", cfg.adversary_kind);
        f("adversary.sigma", cfg.sigma);
        f("adversary.epsilon", cfg.epsilon);
        f("adversary.r", cfg.line_r);
        s("adversary.center", cfg.center_policy);
        read_double_list("adversary.fixed", cfg.fixed_center, seen);

        s("oracle.kind", cfg.oracle_kind);
        f("oracle.piece_scale", cfg.piece_scale);

        read_int_list("corruption.flips", cfg.corruption_flips, seen);

        i("run.horizon", cfg.horizon);
        f("run.delta", cfg.delta);
        i("run.seed", cfg.master_seed);
        i("run.trials", cfg.trials);
        i("run.mc_samples", cfg.mc_samples);
        b("run.record_timing", cfg.record_timing);
        s("run.out", cfg.out_dir);

        read_int_list("sweep.horizons", cfg.sweep_horizons, seen);
        read_double_list("sweep.sigmas", cfg.sweep_sigmas, seen);

        for (const auto& [k, v] : values_)
            if (!seen.count(k)) throw ConfigError(origin_ + ": unknown config key: " + k);

        validate(cfg);
        return cfg;
    }

    // Nested echo of the raw key/value pairs, for the summary JSON. The
    // round-trip invariant: parsing the echoed pairs yields the same config.
    nlohmann::json echo() const {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [k, v] : values_) {
            nlohmann::json* node = &out;
            std::string rest = k;
            std::size_t dot;
            while ((dot = rest.find('.')) != std::string::npos) {
                node = &(*node)[rest.substr(0, dot)];
                rest = rest.substr(dot + 1);
            }
            (*node)[rest] = v;
        }
        return out;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_;

    static std::string trim(const std::string& s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? "" : s.substr(a, b - a + 1);
    }

    static void validate(const ExperimentConfig& cfg) {
        if (cfg.horizon < 0) throw ConfigError("run.horizon must be >= 0");
        if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("run.delta must be in (0,1)");
        if (cfg.trials < 1) throw ConfigError("run.trials must be >= 1");
        if (cfg.dim < 1) throw ConfigError("learner.dim must be >= 1");
        if (cfg.k_classes < 1) throw ConfigError("learner.k must be >= 1");
        if (cfg.adversary_kind == "eps_ball" && !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
            throw ConfigError("adversary.epsilon must be in (0,1)");
        if ((cfg.adversary_kind == "lower_bound_1d" || cfg.adversary_kind == "naive_punisher") &&
            !(cfg.sigma > 0.0 && cfg.sigma <= 1.0))
            throw ConfigError("adversary.sigma must be in (0,1]");
    }

    void read(const std::string& k, std::string& out, std::map<std::string, bool>& seen) const {
        auto it = values_.find(k);
        seen[k] = true;
        if (it != values_.end()) out = it->second;
    }
    template <typename Int>
    void read_int(const std::string& k, Int& out, std::map<std::string, bool>& seen) const {
        auto it = values_.find(k);
        seen[k] = true;
        if (it == values_.end()) return;
        try {
            out = static_cast<Int>(std::stoll(it->second));
        } catch (...) {
            throw ConfigError(k + ": expected an integer, got '" + it->second + "'");
        }
    }
    void read_double(const std::string& k, double& out, std::map<std::string, bool>& seen) const {
        auto it = values_.find(k);
        seen[k] = true;
        if (it == values_.end()) return;
        try {
            out = std::stod(it->second);
        } catch (...) {
            throw ConfigError(k + ": expected a number, got '" + it->second + "'");
        }
    }
    void read_bool(const std::string& k, bool& out, std::map<std::string, bool>& seen) const {
        auto it = values_.find(k);
        seen[k] = true;
        if (it == values_.end()) return;
        if (it->second == "true") out = true;
        else if (it->second == "false") out = false;
        else throw ConfigError(k + ": expected true or false, got '" + it->second + "'");
    }
    template <typename T, typename Conv>
    void read_list(const std::string& k, std::vector<T>& out, std::map<std::string, bool>& seen,
                   Conv conv) const {
        auto it = values_.find(k);
        seen[k] = true;
        if (it == values_.end()) return;
        out.clear();
        std::istringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            try {
                out.push_back(conv(tok));
            } catch (...) {
                throw ConfigError(k + ": bad list element '" + tok + "'");
            }
        }
    }
    void read_int_list(const std::string& k, std::vector<std::int64_t>& out,
                       std::map<std::string, bool>& seen) const {
        read_list(k, out, seen, [](const std::string& t) { return std::stoll(t); });
    }
    void read_double_list(const std::string& k, std::vector<double>& out,
                          std::map<std::string, bool>& seen) const {
        read_list(k, out, seen, [](const std::string& t) { return std::stod(t); });
    }
};

}  // namespace smoothcut
