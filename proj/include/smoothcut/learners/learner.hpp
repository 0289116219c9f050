#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <optional>
#include <variant>

#include "smoothcut/rng.hpp"

namespace smoothcut {

// int: binary label in {-1,+1} or class in 1..K; double: regression target.
using Label = std::variant<int, double>;

inline int label_int(const Label& y) { return std::get<int>(y); }
inline double label_real(const Label& y) { return std::get<double>(y); }

struct UpdateReport {
    bool mistake = false;
    bool recomputed = false;  // a John center recompute happened this round
    std::optional<double> new_log_volume;
};

// Learner's current decision boundary { x : <normal, x> + offset = 0 } in
// context space, exposed so adversarial center policies can track it.
struct BoundaryHint {
    Eigen::VectorXd normal;
    double offset = 0.0;
};

// Uniform contract over all online learners. update(x, y) must follow
// predict(x) with the same context; learners may cache per-round state (the
// affine lift draws its randomization at predict time and reuses it).
class Learner {
public:
    virtual ~Learner() = default;

    virtual Label predict(const Eigen::VectorXd& x, Rng& rng) = 0;
    virtual UpdateReport update(const Eigen::VectorXd& x, const Label& y, Rng& rng) = 0;

    virtual std::optional<double> log_volume_surrogate() const { return std::nullopt; }
    virtual std::optional<BoundaryHint> boundary_hint() const { return std::nullopt; }

    // versioned textual state dump (see README for the format)
    virtual nlohmann::json snapshot() const = 0;
};

inline int sign_pm(double v) { return v >= 0.0 ? 1 : -1; }  // sign(0) := +1

}  // namespace smoothcut
