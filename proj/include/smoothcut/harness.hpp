#pragma once

#include <chrono>
#include <cmath>
#include <future>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smoothcut/adversary.hpp"
#include "smoothcut/erm.hpp"
#include "smoothcut/learners/affine.hpp"
#include "smoothcut/learners/features.hpp"
#include "smoothcut/learners/igw.hpp"
#include "smoothcut/learners/john_linear.hpp"
#include "smoothcut/learners/k_class.hpp"
#include "smoothcut/learners/perceptron.hpp"
#include "smoothcut/learners/piecewise.hpp"

namespace smoothcut {

struct ExperimentConfig {
    // learner
    std::string learner_kind = "john_linear";
    int dim = 2;
    int k_classes = 2;
    int ell = 0;  // 0: determination number defaults to dim
    double fit_tol = 1e-8;
    std::string feature = "identity";
    double feature_param = 0.5;
    int poly_degree = 2;
    double poly_alpha = 1e-3;
    int meta_p = 0;   // 0: use ceil(C m ell log(L ell T / delta))
    double meta_c = 2.0;
    double igw_gamma = 0.0;  // 0: sqrt(actions * horizon)
    double igw_mu = 0.0;     // 0: number of actions
    int igw_actions = 3;
    bool perceptron_lift = false;
    double naive_eta = 1e-3;
    int prune_factor = 8;

    // adversary
    std::string adversary_kind = "uniform";
    double sigma = 1.0;    // lower_bound_1d / naive_punisher smoothness
    double epsilon = 0.1;  // eps_ball noise radius
    double line_r = 0.2;   // directional_line width
    std::string center_policy = "boundary";
    std::vector<double> fixed_center;

    // oracle ("self" for self-labelling adversaries)
    std::string oracle_kind = "linear";
    double piece_scale = 1.0;

    std::vector<std::int64_t> corruption_flips;

    // run
    std::int64_t horizon = 1000;
    double delta = 0.05;
    std::uint64_t master_seed = 1;
    int trials = 1;
    int mc_samples = 10000;
    int context_store_max_dim = 8;
    // real timing is incompatible with bitwise-reproducible trace bytes, so
    // the wallclock column reads 0 unless explicitly enabled
    bool record_timing = false;
    std::string out_dir;

    // sweep axes (empty: not swept)
    std::vector<std::int64_t> sweep_horizons;
    std::vector<double> sweep_sigmas;
};

struct RoundRecord {
    std::int64_t t = 0;
    std::optional<Eigen::VectorXd> x;  // elided above the size threshold
    Label y{0};
    Label y_hat{0};
    bool mistake = false;
    std::int64_t cum_mistakes = 0;
    double log_volume = std::numeric_limits<double>::quiet_NaN();
    bool recompute = false;
    std::int64_t wallclock_us = 0;
};

struct Trace {
    std::vector<RoundRecord> records;
    std::int64_t total_mistakes() const {
        return records.empty() ? 0 : records.back().cum_mistakes;
    }
};

struct BoundReport {
    std::string bound_name;
    double bound_value = 0.0;   // the evaluated formula
    double observed = 0.0;
    bool satisfied = false;
    nlohmann::json parameters;  // echoed inputs
};

struct DecayResult {
    bool pass = true;
    int checked_drops = 0;
    std::vector<std::int64_t> violations;
};

struct Summary {
    std::int64_t total_mistakes = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t trial = 0;
    std::vector<BoundReport> bounds;
    DecayResult decay;
    double final_log_volume = std::numeric_limits<double>::quiet_NaN();
    nlohmann::json learner_extra;
    nlohmann::json adversary_params;
    nlohmann::json oracle_params;
};

// Propagated learner/oracle failures annotated with the offending round.
struct RunError : std::runtime_error {
    std::int64_t round;
    std::string inner_kind;
    RunError(std::int64_t r, std::string kind, const std::string& what)
        : std::runtime_error("round " + std::to_string(r) + ": " + what),
          round(r),
          inner_kind(std::move(kind)) {}
};

// --- mistake-bound evaluators ------------------------------------------------

inline double warmup_bound(int d, double T, double sigma, double delta) {
    return 136.0 * d * std::log(static_cast<double>(d)) + 34.0 * std::log(T / (sigma * delta)) + 56.0;
}

// affine reduction: the warmup bound one dimension up at sigma' = sigma/4^(d+2)
inline double affine_bound(int d, double T, double sigma, double delta) {
    return warmup_bound(d + 1, T, affine_lift_sigma(sigma, d), delta);
}

inline double feature_bound(int d, double T, double sigma, double delta, double alpha) {
    return 136.0 * d * std::log(d / alpha) + 34.0 * std::log(T / (sigma * delta)) + 56.0;
}

inline double k_class_bound(int K, int d, double T, double sigma, double delta) {
    return 136.0 * K * K * d * std::log(static_cast<double>(d)) +
           91.0 * K * K * std::log(T * K * K / (sigma * delta));
}

inline double piecewise_bound(int K, int d, int ell, double T, double sigma, double delta) {
    return k_class_bound(K, d, T, sigma, delta) + static_cast<double>(K) * K * (ell + 1);
}

// constant-free perceptron rate under directional smoothness
inline double perceptron_dir_bound(double T, double sigma_dir, int n_err) {
    return std::pow(T / sigma_dir, 2.0 / 3.0) * std::cbrt(static_cast<double>(n_err));
}

struct BoundInputs {
    std::string learner_kind;
    int d = 2;
    double T = 0;
    double sigma = 1.0;                     // effective (post-lift) smoothness
    std::optional<double> sigma_dir;
    double delta = 0.05;
    int K = 2;
    int ell = 2;
    double feature_alpha = 1.0;
    int n_err = 1;
};

// Evaluates every bound applicable to the run and compares it with the
// observed mistake count. For the affine learner `sigma` is the post-lift
// sigma' and the warmup formula applies one dimension up.
inline std::vector<BoundReport> bound_report(const BoundInputs& in, double observed) {
    nlohmann::json params = {{"d", in.d},   {"T", in.T},     {"sigma", in.sigma},
                             {"delta", in.delta}, {"K", in.K}, {"ell", in.ell},
                             {"n_err", in.n_err}};
    if (in.sigma_dir) params["sigma_dir"] = *in.sigma_dir;
    std::vector<BoundReport> out;
    auto add = [&](const std::string& name, double value) {
        out.push_back({name, value, observed, observed <= value, params});
    };
    if (in.learner_kind == "john_linear")
        add("warmup_mistakes", warmup_bound(in.d, in.T, in.sigma, in.delta));
    else if (in.learner_kind == "john_affine")
        add("affine_mistakes", warmup_bound(in.d + 1, in.T, in.sigma, in.delta));
    else if (in.learner_kind == "john_feature")
        add("feature_mistakes", feature_bound(in.d, in.T, in.sigma, in.delta, in.feature_alpha));
    else if (in.learner_kind == "k_class")
        add("k_class_mistakes", k_class_bound(in.K, in.d, in.T, in.sigma, in.delta));
    else if (in.learner_kind == "piecewise")
        add("piecewise_mistakes", piecewise_bound(in.K, in.d, in.ell, in.T, in.sigma, in.delta));
    else if (in.learner_kind == "perceptron" && in.sigma_dir)
        add("perceptron_dir_rate", perceptron_dir_bound(in.T, *in.sigma_dir, in.n_err));
    return out;
}

// --- decay verification ----------------------------------------------------

// Verifies the volume surrogate drops by at least log(1/(c+slack)) at every
// recompute round and never increases elsewhere.
inline DecayResult decay_check(const Trace& trace, double c = 8.0 / 9.0, double slack = 1e-3) {
    DecayResult out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : trace.records) {
        if (std::isnan(r.log_volume)) continue;
        if (!std::isnan(prev)) {
            if (r.recompute) {
                ++out.checked_drops;
                if (r.log_volume > prev + std::log(c + slack) + 1e-9) out.violations.push_back(r.t);
            } else if (r.log_volume > prev + 1e-9) {
                out.violations.push_back(r.t);
            }
        }
        prev = r.log_volume;
    }
    out.pass = out.violations.empty();
    return out;
}

inline DecayResult decay_check(const std::vector<double>& volumes,
                               const std::vector<std::int64_t>& recompute_rounds,
                               double c = 8.0 / 9.0, double slack = 1e-3) {
    Trace t;
    std::size_t k = 0;
    for (std::size_t i = 0; i < volumes.size(); ++i) {
        RoundRecord r;
        r.t = static_cast<std::int64_t>(i);
        r.log_volume = std::log(volumes[i]);
        while (k < recompute_rounds.size() && recompute_rounds[k] < r.t) ++k;
        r.recompute = (k < recompute_rounds.size() && recompute_rounds[k] == r.t);
        t.records.push_back(r);
    }
    return decay_check(t, c, slack);
}

// --- disagreement mass -----------------------------------------------------

struct DisagreementEstimate {
    double mass = 0.0;
    double std_error = 0.0;
    int samples = 0;
};

// Monte-Carlo estimate of mu_d(D_t): x is disputed iff the version space
// contains classifiers on both sides of the margin tau (two feasibility LPs).
inline DisagreementEstimate disagreement_mass(const HalfspacePolytope& poly, int n_samples,
                                              double tau, Rng& rng) {
    int hits = 0;
    const int d = poly.dim();
    for (int i = 0; i < n_samples; ++i) {
        Eigen::VectorXd x = sample_uniform_ball(d, rng);
        LpResult up = poly.support(x);
        if (up.status == LpStatus::IterationLimit) throw LPFailure("disagreement_mass: LP stalled");
        if (up.status != LpStatus::Optimal || up.value < tau) continue;
        LpResult dn = poly.support(-x);
        if (dn.status == LpStatus::IterationLimit) throw LPFailure("disagreement_mass: LP stalled");
        if (dn.status != LpStatus::Optimal || dn.value < tau) continue;
        ++hits;
    }
    DisagreementEstimate out;
    out.samples = n_samples;
    out.mass = static_cast<double>(hits) / n_samples;
    out.std_error = std::sqrt(out.mass * (1.0 - out.mass) / n_samples);
    return out;
}

// --- least squares ----------------------------------------------------------

inline double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

// --- experiment assembly -----------------------------------------------------

struct ExperimentParts {
    std::unique_ptr<Learner> learner;
    std::unique_ptr<ContextSampler> adversary;
    std::unique_ptr<LabelOracle> oracle;  // null for self-labelling adversaries
    CorruptionSchedule corruption;
    double effective_sigma = 1.0;               // after any lift degradation
    std::optional<double> effective_sigma_dir;
    int effective_dim = 0;                      // dimension the bound applies in
};

inline CoordinateFeatureSpec make_feature_spec(const ExperimentConfig& cfg) {
    if (cfg.feature == "identity") return CoordinateFeatureSpec::identity();
    if (cfg.feature == "cubic_blend") return CoordinateFeatureSpec::cubic_blend(cfg.feature_param);
    if (cfg.feature == "tanh_scaled") return CoordinateFeatureSpec::tanh_scaled(cfg.feature_param);
    throw ConfigError("unknown coordinate feature: " + cfg.feature);
}

inline ExperimentParts assemble_experiment(const ExperimentConfig& cfg, std::uint64_t trial) {
    ExperimentParts parts;
    Rng oracle_rng(derive_seed(cfg.master_seed, trial, RngStream::Oracle));
    const int d = cfg.dim;

    // oracle first: its boundary feeds the oracle-tracking center policies
    if (cfg.oracle_kind == "linear") {
        parts.oracle = std::make_unique<LinearOracle>(LinearOracle::random(d, oracle_rng));
    } else if (cfg.oracle_kind == "affine") {
        parts.oracle = std::make_unique<AffineOracle>(AffineOracle::random(d, oracle_rng));
    } else if (cfg.oracle_kind == "feature_linear") {
        if (cfg.learner_kind == "john_poly") {
            auto spec = PolynomialFeatureSpec::monomials(d, cfg.poly_degree, cfg.poly_alpha);
            Eigen::VectorXd w = sample_unit_sphere(spec.feature_dim, oracle_rng);
            auto map = spec.map;
            parts.oracle = std::make_unique<FeatureLinearOracle>(std::move(w), map);
        } else {
            auto spec = make_feature_spec(cfg);
            Eigen::VectorXd w = sample_unit_sphere(d, oracle_rng);
            parts.oracle = std::make_unique<FeatureLinearOracle>(
                std::move(w), [spec](const Eigen::VectorXd& x) { return coordinate_feature_wrap(spec, x); });
        }
    } else if (cfg.oracle_kind == "k_class") {
        parts.oracle = std::make_unique<KClassOracle>(KClassOracle::random(cfg.k_classes, d, oracle_rng));
    } else if (cfg.oracle_kind == "piecewise") {
        parts.oracle = std::make_unique<PiecewiseOracle>(
            PiecewiseOracle::random(cfg.k_classes, d, oracle_rng, cfg.piece_scale));
    } else if (cfg.oracle_kind != "self") {
        throw ConfigError("unknown oracle kind: " + cfg.oracle_kind);
    }

    Eigen::VectorXd oracle_normal = Eigen::VectorXd::Zero(d);
    double oracle_offset = 0.0;
    if (parts.oracle) {
        if (auto hb = parts.oracle->boundary()) {
            oracle_normal = hb->normal;
            oracle_offset = hb->offset;
        }
    }

    CenterPolicy policy = center_policy_from_string(cfg.center_policy);
    Rng adv_init_rng(derive_seed(cfg.master_seed, trial, RngStream::Context) ^ 0x5eedULL);
    if (cfg.adversary_kind == "uniform") {
        parts.adversary = std::make_unique<UniformAdversary>(d);
    } else if (cfg.adversary_kind == "eps_ball") {
        Eigen::VectorXd fixed = Eigen::VectorXd::Zero(d);
        for (std::size_t i = 0; i < cfg.fixed_center.size() && i < static_cast<std::size_t>(d); ++i)
            fixed(static_cast<Eigen::Index>(i)) = cfg.fixed_center[i];
        parts.adversary = std::make_unique<EpsBallAdversary>(d, cfg.epsilon, policy, fixed,
                                                             oracle_normal, oracle_offset);
    } else if (cfg.adversary_kind == "directional_line") {
        parts.adversary = std::make_unique<DirectionalLineAdversary>(d, cfg.line_r, policy,
                                                                     adv_init_rng, oracle_normal,
                                                                     oracle_offset);
    } else if (cfg.adversary_kind == "lower_bound_1d") {
        parts.adversary = std::make_unique<LowerBound1DAdversary>(d, cfg.sigma);
    } else if (cfg.adversary_kind == "naive_punisher") {
        parts.adversary = std::make_unique<NaivePunisherAdversary>(cfg.sigma);
    } else if (cfg.adversary_kind == "rademacher_gp") {
        parts.adversary = std::make_unique<RademacherGPAdversary>(d);
    } else {
        throw ConfigError("unknown adversary kind: " + cfg.adversary_kind);
    }

    for (auto t : cfg.corruption_flips) parts.corruption.flip_times.insert(t);

    double sigma = parts.adversary->sigma().value_or(1.0);
    parts.effective_sigma = sigma;
    parts.effective_sigma_dir = parts.adversary->sigma_dir();
    parts.effective_dim = d;

    JohnOptions jopts;
    jopts.tol = 1e-8;
    if (cfg.learner_kind == "john_linear") {
        parts.learner = std::make_unique<JohnLinearLearner>(d, jopts, cfg.prune_factor);
    } else if (cfg.learner_kind == "john_affine") {
        parts.learner = std::make_unique<JohnAffineLearner>(d, jopts, cfg.prune_factor);
        parts.effective_sigma = affine_lift_sigma(sigma, d);
        parts.effective_dim = d + 1;
    } else if (cfg.learner_kind == "john_feature") {
        parts.learner = std::make_unique<JohnFeatureLearner>(d, make_feature_spec(cfg), jopts);
    } else if (cfg.learner_kind == "john_poly") {
        auto spec = PolynomialFeatureSpec::monomials(d, cfg.poly_degree, cfg.poly_alpha);
        int p = cfg.meta_p > 0
                    ? cfg.meta_p
                    : default_meta_capacity(cfg.meta_c, spec.feature_dim, spec.degree,
                                            spec.lipschitz, static_cast<double>(cfg.horizon),
                                            cfg.delta);
        Rng vrng(derive_seed(cfg.master_seed, trial, RngStream::Learner) ^ 0xfeedULL);
        parts.effective_dim = spec.feature_dim;
        parts.learner = std::make_unique<MetaPointLearner>(std::move(spec), p, vrng, jopts);
    } else if (cfg.learner_kind == "perceptron") {
        parts.learner = std::make_unique<PerceptronLearner>(d, cfg.perceptron_lift);
    } else if (cfg.learner_kind == "k_class") {
        parts.learner = std::make_unique<KClassLearner>(cfg.k_classes, d, jopts);
    } else if (cfg.learner_kind == "piecewise") {
        PiecewiseOptions po;
        po.K = cfg.k_classes;
        po.ell = cfg.ell;
        po.fit_tol = cfg.fit_tol;
        po.john = jopts;
        parts.learner = std::make_unique<PiecewiseRegLearner>(d, po);
    } else if (cfg.learner_kind == "naive_threshold") {
        parts.learner = std::make_unique<NaiveThresholdLearner>(cfg.naive_eta);
    } else if (cfg.learner_kind != "igw") {
        throw ConfigError("unknown learner kind: " + cfg.learner_kind);
    }

    // label-type compatibility: binary learners need sign labels, the
    // regression learners need real ones
    const bool self_labelled = cfg.oracle_kind == "self";
    if (cfg.learner_kind == "piecewise" || cfg.learner_kind == "igw") {
        if (cfg.oracle_kind != "piecewise")
            throw ConfigError(cfg.learner_kind + " needs oracle.kind = piecewise");
    } else if (cfg.learner_kind == "k_class") {
        if (cfg.oracle_kind != "k_class")
            throw ConfigError("k_class needs oracle.kind = k_class");
    } else if (!self_labelled && (cfg.oracle_kind == "piecewise" || cfg.oracle_kind == "k_class")) {
        throw ConfigError(cfg.learner_kind + " needs a binary oracle (linear/affine/feature_linear)");
    }
    if (self_labelled && cfg.adversary_kind != "lower_bound_1d" &&
        cfg.adversary_kind != "naive_punisher" && cfg.adversary_kind != "rademacher_gp")
        throw ConfigError("oracle.kind = self requires a self-labelling adversary");
    return parts;
}

// --- the online loop ---------------------------------------------------------

inline std::pair<Trace, Summary> run_experiment(const ExperimentConfig& cfg, std::uint64_t trial = 0) {
    ExperimentParts parts = assemble_experiment(cfg, trial);
    if (!parts.learner) throw ConfigError("bandit learners run through run_bandit_experiment");
    Rng ctx_rng(derive_seed(cfg.master_seed, trial, RngStream::Context));
    Rng label_rng(derive_seed(cfg.master_seed, trial, RngStream::Label));
    Rng learner_rng(derive_seed(cfg.master_seed, trial, RngStream::Learner));

    Trace trace;
    trace.records.reserve(static_cast<std::size_t>(cfg.horizon));
    Summary summary;
    summary.master_seed = cfg.master_seed;
    summary.trial = trial;
    summary.adversary_params = parts.adversary->params();
    if (parts.oracle) summary.oracle_params = parts.oracle->params();

    std::int64_t cum = 0;
    double last_volume = std::numeric_limits<double>::quiet_NaN();
    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
        Eigen::VectorXd x = parts.adversary->next(parts.learner->boundary_hint(), ctx_rng);
        auto start = std::chrono::steady_clock::now();
        Label y_hat, y;
        UpdateReport rep;
        try {
            y_hat = parts.learner->predict(x, learner_rng);
            if (auto self = parts.adversary->self_label(x, label_rng)) y = *self;
            else if (parts.oracle) y = parts.oracle->label(x);
            else throw ConfigError("no label source: oracle absent and adversary not self-labelling");
            y = parts.corruption.corrupt(t, y);
            parts.adversary->observe(x, y);
            rep = parts.learner->update(x, y, learner_rng);
        } catch (const NonRealizable& e) {
            throw RunError(t, "NonRealizable", e.what());
        } catch (const ErmInfeasible& e) {
            throw RunError(t, "ErmInfeasible", e.what());
        }
        auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();

        RoundRecord rec;
        rec.t = t;
        if (cfg.dim <= cfg.context_store_max_dim) rec.x = x;
        rec.y = y;
        rec.y_hat = y_hat;
        rec.mistake = rep.mistake;
        cum += rep.mistake ? 1 : 0;
        rec.cum_mistakes = cum;
        if (rep.new_log_volume) last_volume = *rep.new_log_volume;
        rec.log_volume = last_volume;
        rec.recompute = rep.recomputed;
        rec.wallclock_us = cfg.record_timing ? us : 0;
        trace.records.push_back(std::move(rec));
    }

    summary.total_mistakes = cum;
    summary.final_log_volume = last_volume;
    summary.decay = decay_check(trace);

    if (cfg.horizon > 0) {
        BoundInputs in;
        in.learner_kind = cfg.learner_kind;
        in.d = cfg.dim;
        in.T = static_cast<double>(cfg.horizon);
        in.sigma = parts.effective_sigma;
        in.sigma_dir = parts.effective_sigma_dir;
        in.delta = cfg.delta;
        in.K = cfg.k_classes;
        in.ell = cfg.ell > 0 ? cfg.ell : cfg.dim;
        if (cfg.learner_kind == "john_feature") in.feature_alpha = make_feature_spec(cfg).alpha;
        in.n_err = parts.corruption.n_err();
        summary.bounds = bound_report(in, static_cast<double>(cum));
    }

    summary.learner_extra = parts.learner->snapshot();
    summary.learner_extra["effective_sigma"] = parts.effective_sigma;
    if (parts.effective_sigma_dir) summary.learner_extra["sigma_dir"] = *parts.effective_sigma_dir;
    if (cfg.learner_kind == "john_affine")
        summary.learner_extra["sigma_prime"] = parts.effective_sigma;
    return {std::move(trace), std::move(summary)};
}

// --- bandit loop -------------------------------------------------------------

struct BanditResult {
    Trace trace;
    double cum_regret = 0.0;
    std::vector<std::pair<std::int64_t, double>> regret_checkpoints;
    bool distributions_valid = true;
};

inline BanditResult run_bandit_experiment(const ExperimentConfig& cfg, std::uint64_t trial = 0) {
    Rng ctx_rng(derive_seed(cfg.master_seed, trial, RngStream::Context));
    Rng learner_rng(derive_seed(cfg.master_seed, trial, RngStream::Learner));
    Rng oracle_rng(derive_seed(cfg.master_seed, trial, RngStream::Oracle));

    const int A = cfg.igw_actions;
    IGWConfig ic;
    ic.n_actions = A;
    ic.mu = cfg.igw_mu > 0 ? cfg.igw_mu : static_cast<double>(A);
    ic.gamma = cfg.igw_gamma > 0 ? cfg.igw_gamma
                                 : std::sqrt(static_cast<double>(A) * std::max<std::int64_t>(cfg.horizon, 1));
    PiecewiseOptions po;
    po.K = cfg.k_classes;
    po.ell = cfg.ell;
    po.fit_tol = cfg.fit_tol;
    IGWBandit bandit(ic, cfg.dim, po);

    std::vector<PiecewiseOracle> losses;
    for (int a = 0; a < A; ++a)
        losses.push_back(PiecewiseOracle::random(cfg.k_classes, cfg.dim, oracle_rng, cfg.piece_scale));
    UniformAdversary adv(cfg.dim);

    BanditResult out;
    std::int64_t cum_mistakes = 0;
    std::int64_t next_checkpoint = 100;
    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
        Eigen::VectorXd x = adv.next(std::nullopt, ctx_rng);
        auto start = std::chrono::steady_clock::now();
        int a;
        double loss;
        bool mistake;
        try {
            a = bandit.decide(x, learner_rng);
            double psum = 0.0;
            for (double p : bandit.last_probs()) {
                if (p < 0.0) out.distributions_valid = false;
                psum += p;
            }
            if (std::abs(psum - 1.0) > 1e-12) out.distributions_valid = false;
            loss = label_real(losses[static_cast<std::size_t>(a)].label(x));
            mistake = std::abs(bandit.last_predictions()[static_cast<std::size_t>(a)] - loss) >
                      1e-8 * (1.0 + std::abs(loss));
            double best = loss;
            for (int q = 0; q < A; ++q)
                best = std::min(best, label_real(losses[static_cast<std::size_t>(q)].label(x)));
            out.cum_regret += loss - best;
            bandit.reward(x, a, loss, learner_rng);
        } catch (const ErmInfeasible& e) {
            throw RunError(t, "ErmInfeasible", e.what());
        } catch (const NonRealizable& e) {
            throw RunError(t, "NonRealizable", e.what());
        }
        auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();

        RoundRecord rec;
        rec.t = t;
        if (cfg.dim <= cfg.context_store_max_dim) rec.x = x;
        rec.y = loss;
        rec.y_hat = bandit.last_predictions()[static_cast<std::size_t>(a)];
        rec.mistake = mistake;
        cum_mistakes += mistake ? 1 : 0;
        rec.cum_mistakes = cum_mistakes;
        rec.recompute = false;
        rec.wallclock_us = cfg.record_timing ? us : 0;
        out.trace.records.push_back(std::move(rec));

        if (t == next_checkpoint || t == cfg.horizon) {
            out.regret_checkpoints.emplace_back(t, out.cum_regret);
            next_checkpoint *= 10;
        }
    }
    return out;
}

// --- sweeps -------------------------------------------------------------------

struct SweepCell {
    std::int64_t horizon = 0;
    double sigma_axis = 0.0;  // adversary smoothness parameter on the sigma axis
    std::vector<std::int64_t> mistakes;
    double mean = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::optional<double> slope_vs_log_T;          // natural log
    std::optional<double> slope_vs_log_inv_sigma;  // natural log
};

// Applies a sweep axis value to a config copy.
inline ExperimentConfig with_axes(ExperimentConfig cfg, std::optional<std::int64_t> T,
                                  std::optional<double> sigma) {
    if (T) cfg.horizon = *T;
    if (sigma) {
        cfg.sigma = *sigma;
        if (cfg.adversary_kind == "eps_ball")
            cfg.epsilon = std::pow(*sigma, 1.0 / cfg.dim);  // sigma = eps^d
    }
    return cfg;
}

// Per-T mistake means and least-squares slopes vs log T and log(1/sigma).
// Trials inside a cell run concurrently; aggregation is ordered by trial
// index, so the result is independent of scheduling.
inline SweepResult run_sweep(const ExperimentConfig& base) {
    std::vector<std::optional<std::int64_t>> horizons;
    std::vector<std::optional<double>> sigmas;
    if (base.sweep_horizons.empty()) horizons.push_back(std::nullopt);
    else for (auto T : base.sweep_horizons) horizons.push_back(T);
    if (base.sweep_sigmas.empty()) sigmas.push_back(std::nullopt);
    else for (auto s : base.sweep_sigmas) sigmas.push_back(s);

    SweepResult out;
    for (const auto& sg : sigmas) {
        for (const auto& T : horizons) {
            ExperimentConfig cfg = with_axes(base, T, sg);
            SweepCell cell;
            cell.horizon = cfg.horizon;
            cell.sigma_axis = sg.value_or(cfg.sigma);
            std::vector<std::future<std::int64_t>> futs;
            futs.reserve(static_cast<std::size_t>(cfg.trials));
            for (int trial = 0; trial < cfg.trials; ++trial)
                futs.push_back(std::async(std::launch::async, [cfg, trial] {
                    return run_experiment(cfg, static_cast<std::uint64_t>(trial)).second.total_mistakes;
                }));
            double sum = 0.0;
            for (auto& f : futs) {
                cell.mistakes.push_back(f.get());
                sum += static_cast<double>(cell.mistakes.back());
            }
            cell.mean = sum / static_cast<double>(cell.mistakes.size());
            out.cells.push_back(std::move(cell));
        }
    }

    if (horizons.size() >= 2 && horizons[0].has_value()) {
        std::vector<double> xs, ys;
        for (const auto& c : out.cells) {
            xs.push_back(std::log(static_cast<double>(c.horizon)));
            ys.push_back(c.mean);
        }
        out.slope_vs_log_T = least_squares_slope(xs, ys);
    }
    if (sigmas.size() >= 2 && sigmas[0].has_value()) {
        std::vector<double> xs, ys;
        for (const auto& c : out.cells) {
            xs.push_back(std::log(1.0 / c.sigma_axis));
            ys.push_back(c.mean);
        }
        out.slope_vs_log_inv_sigma = least_squares_slope(xs, ys);
    }
    return out;
}

}  // namespace smoothcut
