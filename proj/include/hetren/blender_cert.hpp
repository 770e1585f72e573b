#pragma once

#include <cmath>

#include "hetren/cycle_model.hpp"
#include "hetren/errors.hpp"
#include "hetren/henon_limit.hpp"

namespace hetren {

// ---------------------------------------------------------------------------
// The sigma vector bridging the model to its limit endomorphism, the
// (kappa, eta) restriction map, and its constructive inverse.
// ---------------------------------------------------------------------------

inline SigmaVector sigma_vector(const ModelConfig& cfg, double xi) {
    const double rt2 = std::sqrt(2.0);
    const double b2 = cfg.qp.beta2;
    const double da = cfg.pq.a3 - cfg.pq.a2;
    SigmaVector s;
    s.s1 = b2 * (cfg.pq.a2 + cfg.pq.a3) / rt2;
    s.s2 = b2 * b2 * (cfg.pq.b2 + cfg.pq.b3 + cfg.pq.b4) / 2.0;
    s.s3 = xi * xi * (cfg.pq.b2 + cfg.pq.b3 - cfg.pq.b4) / (da * da);
    s.s4 = xi * rt2 * b2 * (cfg.pq.b3 - cfg.pq.b2) / da;
    s.s5 = b2 * (cfg.pq.c2 + cfg.pq.c2) / rt2;  // c3 = c2
    return s;
}

struct GammaXi {
    double kappa = 0.0;
    double eta = 0.0;      // s1 s5 / s2, the restriction form
    double eta_alt = 0.0;  // s1 s4 / s2, the conjugacy form
};

inline GammaXi gamma_xi(const ModelConfig& cfg, double xi) {
    SigmaVector s = sigma_vector(cfg, xi);
    if (s.s1 * s.s2 * s.s5 == 0.0)
        throw DegenerateSigma("gamma_xi: sigma vector degenerate (s1*s2*s5 = 0)");
    return {s.s1 * s.s1 * s.s3 / s.s2, s.s1 * s.s5 / s.s2, s.s1 * s.s4 / s.s2};
}

struct TargetSolve {
    ModelConfig config;
    bool nudged = false;       // eta0 = 0 was replaced by a reported minimum c2
    double nudge_value = 0.0;
};

struct SolveOptions {
    double eps_box = 0.5;    // |kappa0|, |eta0| must stay below this
    bool allow_nudge = false;
    double nudge = 1e-9;
};

// One explicit linear section realising gamma_xi = (kappa0, eta0): beta2, a2,
// a3 and the sum b2+b3+b4 are held fixed; b4 absorbs kappa0 (b2 = b3 keeps
// the split symmetric) and c2 = c3 absorbs eta0.
inline TargetSolve solve_targets(double xi, double kappa0, double eta0, const ModelConfig& base,
                                 const SolveOptions& opts = {}) {
    base.validate();
    if (!(xi > 0.0)) throw InfeasibleTargets("solve_targets: xi must be > 0");
    if (!(std::abs(kappa0) <= opts.eps_box && std::abs(eta0) <= opts.eps_box))
        throw InfeasibleTargets("solve_targets: targets outside the configured box");
    const double asum = base.pq.a2 + base.pq.a3;
    const double da = base.pq.a3 - base.pq.a2;
    const double bsum = base.pq.b2 + base.pq.b3 + base.pq.b4;
    if (asum == 0.0)
        throw InfeasibleTargets("solve_targets: a2 + a3 = 0 makes sigma1 vanish");
    if (bsum == 0.0)
        throw InfeasibleTargets("solve_targets: b2 + b3 + b4 = 0 makes sigma2 vanish");

    TargetSolve out;
    out.config = base;
    const double diff = kappa0 * da * da * bsum / (asum * asum * xi * xi);  // b2 + b3 - b4
    out.config.pq.b4 = (bsum - diff) / 2.0;
    out.config.pq.b2 = (bsum + diff) / 4.0;
    out.config.pq.b3 = (bsum + diff) / 4.0;

    double c2 = eta0 * bsum / (2.0 * asum);
    if (c2 == 0.0) {
        if (!opts.allow_nudge)
            throw InfeasibleTargets(
                "solve_targets: eta0 = 0 forces c2 = 0, violating b1*c2*(a3-a2) != 0 [e.d]; "
                "pass allow_nudge to accept a reported minimal c2");
        c2 = opts.nudge;
        out.nudged = true;
        out.nudge_value = opts.nudge;
    }
    out.config.pq.c2 = c2;
    out.config.validate();
    return out;
}

}  // namespace hetren
