#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hetren/blender_cert.hpp"
#include "hetren/certify.hpp"
#include "hetren/henon_limit.hpp"
#include "hetren/sojourn.hpp"

using namespace hetren;

namespace {
bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

SojournSchedule short_schedule(const ModelConfig& cfg, double xi) {
    return build_schedule(cfg.spectrum.sigma_P, cfg.spectrum.lambda_Q, tau_of(cfg), xi, 2, 0.02,
                          {10, 4000, 0.02});
}

ConvergenceOptions fast_opts() {
    ConvergenceOptions o;
    o.grid_n = 3;
    return o;
}
}  // namespace

TEST_CASE("sigma vector of the worked model") {
    ModelConfig cfg;
    SigmaVector s = sigma_vector(cfg, 1.185);
    CHECK(close(s.s1, 1.0));
    CHECK(close(s.s2, 1.0));
    CHECK(s.s3 == 0.0);  // b2 + b3 - b4 = 0 exactly
    CHECK(s.s4 == 0.0);  // b3 = b2 exactly
    CHECK(close(s.s5, 0.1));
}

TEST_CASE("sigma vector homogeneity in xi") {
    ModelConfig cfg;
    cfg.pq.b2 = 0.4;  // make s3, s4 nonzero
    cfg.pq.b3 = 0.15;
    cfg.pq.b4 = 0.35;
    double xi = 1.185;
    SigmaVector a = sigma_vector(cfg, xi);
    SigmaVector b = sigma_vector(cfg, 2 * xi);
    CHECK(b.s3 == 4.0 * a.s3);
    CHECK(b.s4 == 2.0 * a.s4);
    CHECK(b.s1 == a.s1);
    CHECK(b.s2 == a.s2);
    CHECK(b.s5 == a.s5);
}

TEST_CASE("gamma_xi forms and degenerate rejection") {
    ModelConfig cfg;
    GammaXi g = gamma_xi(cfg, 1.185);
    CHECK(close(g.kappa, 0.0));
    CHECK(close(g.eta, 0.1));
    CHECK(close(g.eta_alt, 0.0));

    // consistency with the sigma-ratio formulas
    cfg.pq.b2 = 0.4;
    cfg.pq.b3 = 0.15;
    cfg.pq.b4 = 0.35;
    cfg.pq.c2 = 0.07;
    SigmaVector s = sigma_vector(cfg, 1.185);
    LimitParams lp = derived_limit_params(s);
    GammaXi g2 = gamma_xi(cfg, 1.185);
    CHECK(close(g2.kappa, lp.kappa));
    CHECK(close(g2.eta, lp.eta5));
    CHECK(close(g2.eta_alt, lp.eta4));

    ModelConfig degen;
    degen.pq.a3 = -degen.pq.a2 - 1.0;  // would zero a2+a3 -> s1 = 0
    degen.pq.a2 = 1.0;
    degen.pq.a3 = -1.0;
    degen.qp.gamma3 = -degen.qp.gamma3;  // keep e.> valid with a3 < a2
    CHECK_THROWS_AS(gamma_xi(degen, 1.185), DegenerateSigma);
}

TEST_CASE("solve_targets worked examples") {
    ModelConfig base;
    TargetSolve ts = solve_targets(1.185, 0.0, 0.1, base);
    CHECK_FALSE(ts.nudged);
    CHECK(close(ts.config.pq.b4, 0.5));
    CHECK(close(ts.config.pq.b2, 0.25));
    CHECK(close(ts.config.pq.b3, 0.25));
    CHECK(close(ts.config.pq.c2, 0.05));
    GammaXi g = gamma_xi(ts.config, 1.185);
    CHECK(close(g.kappa, 0.0));
    CHECK(close(g.eta, 0.1));

    CHECK_THROWS_AS(solve_targets(1.185, 0.0, 0.0, base), InfeasibleTargets);
    SolveOptions opts;
    opts.allow_nudge = true;
    TargetSolve nudged = solve_targets(1.185, 0.0, 0.0, base, opts);
    CHECK(nudged.nudged);
    CHECK(nudged.config.pq.c2 == opts.nudge);

    CHECK_THROWS_AS(solve_targets(1.185, 0.7, 0.1, base), InfeasibleTargets);  // outside box
}

TEST_CASE("gamma_xi o solve_targets round trip") {
    ModelConfig base;
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int i = 0; i < 100; ++i) {
        double k0 = u(rng), e0 = u(rng);
        if (std::abs(e0) < 1e-6) e0 = 0.05;
        double xi = 1.18 + 0.01 * (u(rng) + 0.2) / 0.4;
        TargetSolve ts = solve_targets(xi, k0, e0, base);
        GammaXi g = gamma_xi(ts.config, xi);
        CHECK(close(g.kappa, k0, 1e-12 * std::max(1.0, std::abs(k0))));
        CHECK(close(g.eta, e0, 1e-12 * std::max(1.0, std::abs(e0))));
    }
}

TEST_CASE("solve_targets preserves the model invariants") {
    ModelConfig base;
    TargetSolve ts = solve_targets(1.185, 0.15, -0.12, base);
    ts.config.validate();
    CHECK(ts.config.pq.b1 * ts.config.pq.c2 * (ts.config.pq.a3 - ts.config.pq.a2) != 0.0);
    CHECK(ts.config.qp.gamma3 * (ts.config.pq.a3 - ts.config.pq.a2) > 0.0);
}

TEST_CASE("certify worked config passes") {
    ModelConfig cfg;
    CertReport rep = certify_scheme(cfg, 1.185, -9.5, 0.2, short_schedule(cfg, 1.185), fast_opts());
    CHECK(rep.spectral_ok);
    CHECK(rep.restriction_ok);
    CHECK(rep.restriction_ok_alt);
    CHECK(rep.xi_in_range);
    CHECK(rep.convergence_complete);
    CHECK(rep.final_c0_error < 0.05);
    CHECK(rep.verdict.rfind("numerical-evidence", 0) == 0);
    CHECK(certify_exit_code(rep) == 0);
    // last row beats the first: convergence in evidence
    REQUIRE(rep.schedule_summary.rows.size() == 2);
    CHECK(rep.schedule_summary.rows[1].sup_c0_error < rep.schedule_summary.rows[0].sup_c0_error);
}

TEST_CASE("certify flips on a violated spectral condition") {
    ModelConfig cfg;
    auto [lo, hi] = sigma_interval(cfg.spectrum.lambda_P, cfg.spectrum.sigma_P,
                                   cfg.spectrum.lambda_Q);
    cfg.spectrum.sigma_Q = hi * 1.02;  // just above sigma*
    CertReport rep = certify_scheme(cfg, 1.185, -9.5, 0.2, short_schedule(cfg, 1.185), fast_opts());
    CHECK_FALSE(rep.spectral_ok);
    CHECK(rep.restriction_ok);  // the sigma vector is untouched by sigma_Q
    CHECK(certify_exit_code(rep) == 1);
    // the landau column grows instead of shrinking
    REQUIRE(rep.schedule_summary.rows.size() == 2);
    CHECK(rep.schedule_summary.rows[1].landau > rep.schedule_summary.rows[0].landau);
}

TEST_CASE("certify flips on xi outside the region") {
    // xi = 1.5 also has no adapted schedule (tau^-1 xi sits outside the slack
    // window), so certification runs on the parameter checks alone.
    ModelConfig cfg;
    CHECK_THROWS_AS(short_schedule(cfg, 1.5), SojournNotFound);
    SojournSchedule empty;
    empty.target = 1.5 / tau_of(cfg);
    CertReport rep = certify_scheme(cfg, 1.5, -9.5, 0.2, empty, fast_opts());
    CHECK_FALSE(rep.xi_in_range);
    CHECK_FALSE(rep.restriction_ok);
    CHECK_FALSE(rep.convergence_complete);
    CHECK_FALSE(rep.warnings.empty());
    CHECK(certify_exit_code(rep) == 1);
}

TEST_CASE("certify flips when eps squeezes out eta") {
    ModelConfig cfg;
    CertReport rep = certify_scheme(cfg, 1.185, -9.5, 0.05, short_schedule(cfg, 1.185), fast_opts());
    CHECK_FALSE(rep.restriction_ok);  // eta5 = 0.1 outside (-0.05, 0.05)
    CHECK(certify_exit_code(rep) == 1);
}

TEST_CASE("limit parameters of a certified config match the report") {
    ModelConfig cfg;
    CertReport rep = certify_scheme(cfg, 1.185, -9.5, 0.2, short_schedule(cfg, 1.185), fast_opts());
    CHECK(in_blender_region(rep.xi, rep.mu, rep.kappa, rep.eta5, rep.eps) == rep.restriction_ok);
    CHECK(in_blender_region(rep.xi, rep.mu, rep.kappa, rep.eta4, rep.eps) ==
          rep.restriction_ok_alt);
}
