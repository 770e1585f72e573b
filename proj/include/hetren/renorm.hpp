#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hetren/blender_cert.hpp"
#include "hetren/cycle_model.hpp"
#include "hetren/henon_limit.hpp"
#include "hetren/scalar.hpp"
#include "hetren/sojourn.hpp"

namespace hetren {

// ---------------------------------------------------------------------------
// Renormalised return maps
//
//   psi_k^{-1} o [P->Q transition + mu~] o [P-local]^m o [Q->P transition + nu~]
//            o [Q-local]^n o psi_k
//
// computed two independent ways: by composing the chart maps step by step
// (renorm_direct) and by the exact closed-form coordinates (renorm_closed_form).
// Their agreement validates the whole return-map algebra.
// ---------------------------------------------------------------------------

// Grouped power products for a sojourn pair (m, n).  Each entry is a single
// exp of a summed-log exponent, so no intermediate huge/tiny factor is formed.
template <typename S>
struct RenormPowers {
    long m = 0, n = 0;
    S lp_m;         // lambda_P^m
    S sp_m;         // sigma_P^m
    S lq_n;         // lambda_Q^n
    S lq_2n;        // lambda_Q^2n
    S sp_m_inv;     // sigma_P^-m
    S sq_n_inv;     // sigma_Q^-n
    S su;           // sigma_P^-m sigma_Q^-n      (psi x/z scale)
    S su2;          // sigma_P^-2m sigma_Q^-2n    (psi y scale)
    S s2;           // sigma_P^-2m sigma_Q^-n     (y_k scale)
    S lq_sq;        // lambda_Q^n sigma_Q^-n
    S p1;           // sigma_P^m lambda_Q^n       (-> xi/tau)
    S p2;           // sigma_P^2m lambda_Q^2n
    S sm_sqn;       // sigma_P^m sigma_Q^n
    S s2m_sq2n;     // sigma_P^2m sigma_Q^2n
    S lp_lq;        // lambda_P^m lambda_Q^n
    S lp_spinv;     // lambda_P^m sigma_P^-m
    S lp_sqn;       // lambda_P^m sigma_Q^n
    S lp_sp_lq_sq;  // lambda_P^m sigma_P^m lambda_Q^n sigma_Q^n
    S lp_su_lq;     // lambda_P^m sigma_P^-m lambda_Q^n sigma_Q^-n
    S lp_s2;        // lambda_P^m sigma_P^-2m sigma_Q^-n
    S landau;       // lambda_P^m sigma_P^2m sigma_Q^2n
};

template <typename S>
RenormPowers<S> make_powers(const SaddleSpectrum& spec, long m, long n) {
    PowerBasis<S> B(S(spec.lambda_P), S(spec.sigma_P), S(spec.lambda_Q), S(spec.sigma_Q));
    RenormPowers<S> p;
    p.m = m;
    p.n = n;
    p.lp_m = B.pow(m, 0, 0, 0);
    p.sp_m = B.pow(0, m, 0, 0);
    p.lq_n = B.pow(0, 0, n, 0);
    p.lq_2n = B.pow(0, 0, 2 * n, 0);
    p.sp_m_inv = B.pow(0, -m, 0, 0);
    p.sq_n_inv = B.pow(0, 0, 0, -n);
    p.su = B.pow(0, -m, 0, -n);
    p.su2 = B.pow(0, -2 * m, 0, -2 * n);
    p.s2 = B.pow(0, -2 * m, 0, -n);
    p.lq_sq = B.pow(0, 0, n, -n);
    p.p1 = B.pow(0, m, n, 0);
    p.p2 = B.pow(0, 2 * m, 2 * n, 0);
    p.sm_sqn = B.pow(0, m, 0, n);
    p.s2m_sq2n = B.pow(0, 2 * m, 0, 2 * n);
    p.lp_lq = B.pow(m, 0, n, 0);
    p.lp_spinv = B.pow(m, -m, 0, 0);
    p.lp_sqn = B.pow(m, 0, 0, n);
    p.lp_sp_lq_sq = B.pow(m, m, n, n);
    p.lp_su_lq = B.pow(m, -m, n, -n);
    p.lp_s2 = B.pow(m, -2 * m, 0, -n);
    p.landau = B.pow(m, 2 * m, 0, 2 * n);
    return p;
}

// psi_s(x,y,z) = (1 + su x, sq_n_inv + su2 y, 1 + su z); affine, exact inverse.
template <typename S>
Vec3<S> psi(const RenormPowers<S>& pw, const Vec3<S>& v) {
    return {S(1) + pw.su * v.x, pw.sq_n_inv + pw.su2 * v.y, S(1) + pw.su * v.z};
}

template <typename S>
Vec3<S> psi_inv(const RenormPowers<S>& pw, const Vec3<S>& v) {
    return {(v.x - S(1)) / pw.su, (v.y - pw.sq_n_inv) / pw.su2, (v.z - S(1)) / pw.su};
}

// Standalone psi / psi_inv compute just the three affine scales they need.
template <typename S>
struct PsiScales {
    S su, su2, sq_n_inv;
};

template <typename S>
PsiScales<S> psi_scales(const SaddleSpectrum& spec, const SojournPair& pair) {
    PowerBasis<S> B(S(spec.lambda_P), S(spec.sigma_P), S(spec.lambda_Q), S(spec.sigma_Q));
    return {B.pow(0, -pair.m, 0, -pair.n), B.pow(0, -2 * pair.m, 0, -2 * pair.n),
            B.pow(0, 0, 0, -pair.n)};
}

template <typename S>
Vec3<S> psi(const SaddleSpectrum& spec, const SojournPair& pair, const Vec3<S>& v) {
    PsiScales<S> s = psi_scales<S>(spec, pair);
    return {S(1) + s.su * v.x, s.sq_n_inv + s.su2 * v.y, S(1) + s.su * v.z};
}

template <typename S>
Vec3<S> psi_inv(const SaddleSpectrum& spec, const SojournPair& pair, const Vec3<S>& v) {
    PsiScales<S> s = psi_scales<S>(spec, pair);
    return {(v.x - S(1)) / s.su, (v.y - s.sq_n_inv) / s.su2, (v.z - S(1)) / s.su};
}

// Bifurcation parameter maps.
template <typename S>
Vec3<S> mu_bar_k(const ModelConfig& cfg, const RenormPowers<S>& pw, const S& mu) {
    return {-pw.lp_m * S(cfg.pq.a1),
            pw.sq_n_inv + pw.su2 * mu - pw.lp_m * S(cfg.pq.b1),
            -pw.lp_m * S(cfg.pq.c1)};
}

template <typename S>
Vec3<S> nu_bar_k(const ModelConfig& cfg, const RenormPowers<S>& pw, const TrigSequences<S>& t,
                 const S& rho2, const S& rho3) {
    const S a1 = S(cfg.qp.alpha1), a3 = S(cfg.qp.alpha3), g3 = S(cfg.qp.gamma3);
    return {-pw.lq_n * (a1 * (t.c - t.s) + a3 * (t.s + t.c)),
            pw.sp_m_inv * (t.ct + t.st) - pw.lq_2n * rho2,
            pw.sp_m_inv * (t.ct - t.st) - pw.lq_n * g3 * (t.c + t.s) - pw.lq_2n * rho3};
}

template <typename S>
struct RenormParams {
    long k = 0;
    SojournPair pair;
    S mu{};
    S zeta{}, vartheta{};
    S alpha{}, beta{};
    TrigSequences<S> trig{};
    S rho2{}, rho3{};
    Vec3<S> mu_bar{}, nu_bar{};
    RenormPowers<S> pw{};
};

template <typename S>
RenormParams<S> make_renorm_params(const ModelConfig& cfg, long k, const ScheduleEntry& entry,
                                   const S& mu) {
    RenormParams<S> rp;
    rp.k = k;
    rp.pair = entry.pair;
    rp.mu = mu;
    rp.zeta = S(entry.zeta);
    rp.vartheta = S(entry.vartheta);
    rp.alpha = adapted_argument_P(entry.pair.m, S(cfg.spectrum.phi_P), rp.zeta);
    rp.beta = adapted_argument_Q(entry.pair.n, S(cfg.spectrum.phi_Q), rp.vartheta);
    rp.trig = trig_sequences(rp.zeta, rp.vartheta);
    auto [r2, r3] = rho_tilde(cfg.qp, rp.trig.c, rp.trig.s);
    rp.rho2 = r2;
    rp.rho3 = r3;
    rp.pw = make_powers<S>(cfg.spectrum, entry.pair.m, entry.pair.n);
    rp.mu_bar = mu_bar_k(cfg, rp.pw, rp.mu);
    rp.nu_bar = nu_bar_k(cfg, rp.pw, rp.trig, rp.rho2, rp.rho3);
    return rp;
}

// The mu_bar / nu_bar slots must always be recomputable from the rest.
template <typename S>
S renorm_params_defect(const ModelConfig& cfg, const RenormParams<S>& rp) {
    Vec3<S> mb = mu_bar_k(cfg, rp.pw, rp.mu);
    Vec3<S> nb = nu_bar_k(cfg, rp.pw, rp.trig, rp.rho2, rp.rho3);
    S d1 = (mb - rp.mu_bar).norm_inf();
    S d2 = (nb - rp.nu_bar).norm_inf();
    return d1 > d2 ? d1 : d2;
}

// ---------------------------------------------------------------------------
// Direct path: honest composition of the unfolded chart maps.  The one-step
// local maps are fixed within a chart, so their matrix entries are cached per
// RenormParams; every step still runs the same chart-domain and plateau
// checks as apply_unfolded (squared norms, no per-step sqrt).
// ---------------------------------------------------------------------------

template <typename S>
class LocalStepper {
public:
    LocalStepper(const ModelConfig& cfg, const RenormParams<S>& rp) {
        using std::cos;
        using std::sin;
        const S two_pi = S(2) * pi_value<S>();
        lp_ = S(cfg.spectrum.lambda_P);
        sp_ = S(cfg.spectrum.sigma_P);
        lq_ = S(cfg.spectrum.lambda_Q);
        sq_ = S(cfg.spectrum.sigma_Q);
        cp_ = cos(two_pi * S(cfg.spectrum.phi_P));
        sn_p_ = sin(two_pi * S(cfg.spectrum.phi_P));
        cq_ = cos(two_pi * S(cfg.spectrum.phi_Q));
        sn_q_ = sin(two_pi * S(cfg.spectrum.phi_Q));
        ca_ = cos(two_pi * rp.alpha);
        sa_ = sin(two_pi * rp.alpha);
        cb_ = cos(two_pi * rp.beta);
        sb_ = sin(two_pi * rp.beta);
        alpha_zero_ = rp.alpha == S(0);
        beta_zero_ = rp.beta == S(0);
        plateau_sq_ = S(kRotationRho / 2) * S(kRotationRho / 2);
        support_sq_ = S(kRotationRho) * S(kRotationRho);
    }

    Vec3<S> step_P(const Vec3<S>& v) const {
        require_in_chart(v, "renorm_direct[P]");
        Vec3<S> w{lp_ * v.x, sp_ * (cp_ * v.y - sn_p_ * v.z), sp_ * (sn_p_ * v.y + cp_ * v.z)};
        require_in_chart(w, "renorm_direct[P]");
        if (alpha_zero_) return w;
        S n2 = w.x * w.x + w.y * w.y + w.z * w.z;
        if (n2 <= plateau_sq_)
            return {w.x, ca_ * w.y - sa_ * w.z, sa_ * w.y + ca_ * w.z};
        if (n2 >= support_sq_) return w;
        throw PlateauViolation("renorm_direct[P]: rotation bump argument off the plateau");
    }

    Vec3<S> step_Q(const Vec3<S>& v) const {
        require_in_chart(v, "renorm_direct[Q]");
        Vec3<S> w{lq_ * (cq_ * v.x - sn_q_ * v.z), sq_ * v.y, lq_ * (sn_q_ * v.x + cq_ * v.z)};
        require_in_chart(w, "renorm_direct[Q]");
        if (beta_zero_) return w;
        S n2 = w.x * w.x + w.y * w.y + w.z * w.z;
        if (n2 <= plateau_sq_)
            return {cb_ * w.x - sb_ * w.z, w.y, sb_ * w.x + cb_ * w.z};
        if (n2 >= support_sq_) return w;
        throw PlateauViolation("renorm_direct[Q]: rotation bump argument off the plateau");
    }

private:
    S lp_, sp_, lq_, sq_;
    S cp_, sn_p_, cq_, sn_q_;
    S ca_, sa_, cb_, sb_;
    S plateau_sq_, support_sq_;
    bool alpha_zero_ = false, beta_zero_ = false;
};

template <typename S>
Vec3<S> renorm_direct(const ModelConfig& cfg, const RenormParams<S>& rp, const Vec3<S>& v) {
    UnfoldingParams<S> up{rp.mu_bar, rp.nu_bar, rp.alpha, rp.beta};
    LocalStepper<S> stepper(cfg, rp);
    Vec3<S> w = psi(rp.pw, v);
    require_in_chart(w, "renorm_direct[psi]");
    for (long i = 0; i < rp.pair.n; ++i) w = stepper.step_Q(w);
    w = apply_unfolded(cfg, up, w, Region::QPTransition);
    for (long i = 0; i < rp.pair.m; ++i) w = stepper.step_P(w);
    w = apply_unfolded(cfg, up, w, Region::PQTransition);
    return psi_inv(rp.pw, w);
}

// ---------------------------------------------------------------------------
// Closed form: the exact renormalised coordinates, higher-order groups
// included verbatim.  Also exposes the three rescaled h.o.t. groups for the
// decay diagnostics.
// ---------------------------------------------------------------------------

template <typename S>
struct ClosedForm {
    Vec3<S> value{};
    S hot1{}, hot2{}, hot3{};  // sigma-rescaled h.o.t. groups
};

template <typename S>
ClosedForm<S> renorm_closed_form_detail(const ModelConfig& cfg, const RenormParams<S>& rp,
                                        const Vec3<S>& v) {
    const RenormPowers<S>& pw = rp.pw;
    const S ct = rp.trig.ct, st = rp.trig.st, c = rp.trig.c, s = rp.trig.s;
    const S x = v.x, y = v.y, z = v.z;

    const S al1 = S(cfg.qp.alpha1), al2 = S(cfg.qp.alpha2), al3 = S(cfg.qp.alpha3);
    const S be2 = S(cfg.qp.beta2), ga3 = S(cfg.qp.gamma3);
    const S a1 = S(cfg.pq.a1), a2 = S(cfg.pq.a2), a3 = S(cfg.pq.a3);
    const S b1 = S(cfg.pq.b1), b2 = S(cfg.pq.b2), b3 = S(cfg.pq.b3), b4 = S(cfg.pq.b4);
    const S c1 = S(cfg.pq.c1), c2 = S(cfg.pq.c2), c3 = c2;

    const S rot = s * x + c * z;   // (s x + c z)
    const S rot2 = c * x - s * z;  // (c x - s z)
    const S lin_a = al1 * rot2 + al3 * rot;

    // Step A coordinates x_k = (x_k, y_k, z_k) relative to X.
    Vec3<S> xk{pw.lq_n * (pw.su * rot2 + (c - s)), pw.s2 * y, pw.lq_n * (pw.su * rot + (c + s))};

    // Quadratic tails of the Q->P transition at x_k; H^ absorbs the rho~ shift.
    const S Ht1 = quad_form(cfg.qp.hqp[0], xk);
    const S Hh2 = quad_form(cfg.qp.hqp[1], xk) - pw.lq_2n * rp.rho2;
    const S Hh3 = quad_form(cfg.qp.hqp[2], xk) - pw.lq_2n * rp.rho3;

    // Step C hat point; the primed parts are the explicit low-order terms.
    const S E2 = pw.sp_m * (ct * Hh2 - st * Hh3);
    const S E3 = pw.sp_m * (st * Hh2 + ct * Hh3);
    const S yhp = pw.su * ct * be2 * y - pw.lq_sq * st * ga3 * rot;
    const S zhp = pw.su * st * be2 * y + pw.lq_sq * ct * ga3 * rot;
    Vec3<S> xhat{pw.lp_m + pw.lp_su_lq * lin_a + pw.lp_s2 * al2 * y + pw.lp_m * Ht1,
                 yhp + E2, zhp + E3};

    // h.o.t. groups of the P->Q step, then their sigma rescalings.
    const S hot1_raw = a1 * pw.lp_m * Ht1 + a2 * E2 + a3 * E3 + quad_form(cfg.pq.hpq[0], xhat);
    const S hot2_raw = b1 * pw.lp_m * Ht1 + b2 * (E2 * E2 + S(2) * E2 * yhp) +
                       b3 * (E3 * E3 + S(2) * E3 * zhp) +
                       b4 * (E2 * E3 + E2 * zhp + E3 * yhp) + quad_form(cfg.pq.hpq[1], xhat);
    const S hot3_raw = c1 * pw.lp_m * Ht1 + c2 * E2 + c3 * E3 + quad_form(cfg.pq.hpq[2], xhat);

    ClosedForm<S> out;
    out.hot1 = pw.sm_sqn * hot1_raw;
    out.hot2 = pw.s2m_sq2n * hot2_raw;
    out.hot3 = pw.sm_sqn * hot3_raw;

    out.value.x = a1 * pw.lp_lq * lin_a + a1 * pw.lp_spinv * al2 * y +
                  (ct * a2 + st * a3) * be2 * y + pw.p1 * ga3 * (ct * a3 - st * a2) * rot +
                  out.hot1;

    out.value.y = rp.mu + b1 * pw.lp_sqn * al2 * y + b1 * pw.lp_sp_lq_sq * lin_a +
                  (ct * ct * b2 + st * st * b3 + ct * st * b4) * be2 * be2 * y * y +
                  pw.p2 * (st * st * b2 + ct * ct * b3 - ct * st * b4) * ga3 * ga3 * rot * rot +
                  pw.p1 * (S(2) * ct * st * (b3 - b2) + (ct * ct - st * st) * b4) * be2 * ga3 * y * rot +
                  out.hot2;

    out.value.z = c1 * pw.lp_lq * lin_a + c1 * pw.lp_spinv * al2 * y +
                  (ct * c2 + st * c3) * be2 * y + pw.p1 * ga3 * (ct * c3 - st * c2) * rot +
                  out.hot3;
    return out;
}

template <typename S>
Vec3<S> renorm_closed_form(const ModelConfig& cfg, const RenormParams<S>& rp, const Vec3<S>& v) {
    return renorm_closed_form_detail(cfg, rp, v).value;
}

// The limit endomorphism this scheme converges to.
inline EParams limit_map(const ModelConfig& cfg, double xi, double mu) {
    return EParams{xi, mu, sigma_vector(cfg, xi)};
}

// ---------------------------------------------------------------------------
// Convergence measurement.
// ---------------------------------------------------------------------------

struct RenormRow {
    long k = 0;
    long m = 0, n = 0;
    double sup_c0_error = 0.0;
    double sup_c1_error = 0.0;
    double sup_c2_error = std::numeric_limits<double>::quiet_NaN();  // opt-in
    double cross_check_error = std::numeric_limits<double>::quiet_NaN();
    double prod_target_gap = 0.0;  // |sigma_P^m lambda_Q^n - xi/tau|
    double landau = 0.0;           // lambda_P^m sigma_P^2m sigma_Q^2n
    double hot1 = 0.0, hot2 = 0.0, hot3 = 0.0;
    unsigned precision_bits = 0;
    bool precision_ok = true;
    std::string error;  // nonempty: row could not be completed
};

struct RenormReport {
    std::vector<RenormRow> rows;
    double xi = 0.0, mu = 0.0, target = 0.0;
    int grid_n = 0;
    double fd_step = 0.0;
    Precision precision = Precision::extended;
};

struct ConvergenceOptions {
    int grid_n = 11;          // points per axis over K = [-box, box]^3
    double box = 1.0;
    double fd_step = 1e-5;
    bool cross_check = true;  // run the direct path against the closed form
    bool measure_c2 = false;
    Precision precision = Precision::extended;
    unsigned forced_bits = 0;  // 0: choose per k
};

// Mantissa bits needed so the direct path's sigma_Q^-n representation,
// rescaled by psi^-1's sigma_P^2m sigma_Q^2n, still resolves 1e-13 absolute.
inline unsigned required_bits(const SaddleSpectrum& spec, const SojournPair& pair) {
    double b = 2.0 * pair.m * std::log2(spec.sigma_P) + pair.n * std::log2(spec.sigma_Q);
    return static_cast<unsigned>(std::ceil(b)) + 128;
}

RenormReport convergence_report(const ModelConfig& cfg, const SojournSchedule& sched, double xi,
                                double mu, const ConvergenceOptions& opts = {});

}  // namespace hetren
