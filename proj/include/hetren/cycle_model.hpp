#pragma once

#include <array>
#include <cmath>
#include <string>

#include "hetren/errors.hpp"
#include "hetren/scalar.hpp"
#include "hetren/vec3.hpp"

namespace hetren {

// ---------------------------------------------------------------------------
// The model diffeomorphism f as a labeled chart-transition system:
// linear saddle-focus charts U_P, U_Q = (-10,10)^3, quadratic transition maps
// along the two heteroclinic orbits, and compactly supported translation /
// rotation perturbations forming the 8-parameter unfolding family.
// ---------------------------------------------------------------------------

// Heteroclinic points in chart coordinates.
//   X  = (0,1,0) in U_Q,  Xt = f^{N1}(X) = (1,0,0) in U_P   (quasi-transverse)
//   Y  = (0,1,1) in U_P,  Yt = f^{N2}(Y) = (1,0,1) in U_Q   (tangency)
inline constexpr Vec3d kHetX{0.0, 1.0, 0.0};
inline constexpr Vec3d kHetXt{1.0, 0.0, 0.0};
inline constexpr Vec3d kHetY{0.0, 1.0, 1.0};
inline constexpr Vec3d kHetYt{1.0, 0.0, 1.0};

inline constexpr double kChartHalfWidth = 10.0;  // U_P, U_Q = (-10,10)^3
inline constexpr double kRotationRho = 8.0;      // rotating perturbations act on [-8,8]^3

struct SaddleSpectrum {
    double lambda_P = 0.04;
    double sigma_P = 2.0;
    double phi_P = 0.1137;  // argument in full turns: rotation angle is 2*pi*phi
    double lambda_Q = 0.4;
    double sigma_Q = 3.0;
    double phi_Q = 0.2741;

    void validate() const {
        if (!(lambda_P > 0 && lambda_P < 1 && sigma_P > 1))
            throw ConfigError("spectrum: need 0 < lambda_P < 1 < sigma_P");
        if (!(lambda_Q > 0 && lambda_Q < 1 && sigma_Q > 1))
            throw ConfigError("spectrum: need 0 < lambda_Q < 1 < sigma_Q");
        if (!(phi_P >= 0 && phi_P <= 1 && phi_Q >= 0 && phi_Q <= 1))
            throw ConfigError("spectrum: phi_P, phi_Q must lie in [0,1]");
        if (phi_P == phi_Q) throw ConfigError("spectrum: phi_P must differ from phi_Q");
    }
};

// Symmetric Hessian block: H(u) = 1/2 u^T A u, entries A[i][j] = d2H/du_i du_j (0).
using Hessian3 = std::array<std::array<double, 3>, 3>;
using QuadForms = std::array<Hessian3, 3>;  // one block per map component

inline constexpr QuadForms kZeroForms{};

template <typename S>
S quad_form(const Hessian3& A, const Vec3<S>& u) {
    S q = S(0.5) * (S(A[0][0]) * u.x * u.x + S(A[1][1]) * u.y * u.y + S(A[2][2]) * u.z * u.z);
    q += S(A[0][1]) * u.x * u.y + S(A[0][2]) * u.x * u.z + S(A[1][2]) * u.y * u.z;
    return q;
}

inline bool is_symmetric(const Hessian3& A) {
    return A[0][1] == A[1][0] && A[0][2] == A[2][0] && A[1][2] == A[2][1];
}

// Transition f^{N1} from U_Q to U_P along the orbit of X.
// On d = v - X:  (1 + a1 dx + a2 dy + a3 dz + H~1, b2 dy + H~2, g3 dz + H~3);
// the omitted linear entries are structurally zero, the H~ blocks carry the
// exact quadratic higher-order terms (zero value and gradient at 0).
struct TransitionQP {
    double alpha1 = 0.3;
    double alpha2 = 1.0;
    double alpha3 = 0.2;
    double beta2 = 1.4142135623730951;
    double gamma3 = 1.4142135623730951;
    QuadForms hqp = kZeroForms;

    void validate() const {
        if (alpha1 * beta2 * gamma3 == 0.0)
            throw ConfigError("transition Q->P: alpha1*beta2*gamma3 must be nonzero [e.dd]");
        for (const auto& A : hqp)
            if (!is_symmetric(A)) throw ConfigError("transition Q->P: hessian blocks must be symmetric");
    }
};

// Transition f^{N2} from U_P to U_Q along the orbit of Y.  c3 = c2 is
// structural and stored once; the second component has no linear y/z part
// (the tangency) and its quadratic block carries no y^2, z^2, yz entries.
struct TransitionPQ {
    double a1 = 0.2;
    double a2 = 0.0;
    double a3 = 1.0;
    double b1 = 1.0;
    double b2 = 0.25;
    double b3 = 0.25;
    double b4 = 0.5;
    double c1 = 0.1;
    double c2 = 0.05;
    QuadForms hpq = kZeroForms;

    void validate() const {
        if (b1 * c2 * (a3 - a2) == 0.0)
            throw ConfigError("transition P->Q: b1*c2*(a3-a2) must be nonzero [e.d]");
        for (const auto& A : hpq)
            if (!is_symmetric(A)) throw ConfigError("transition P->Q: hessian blocks must be symmetric");
        const Hessian3& H2 = hpq[1];
        if (H2[1][1] != 0.0 || H2[2][2] != 0.0 || H2[1][2] != 0.0)
            throw ConfigError("transition P->Q: H2 may carry no y^2, z^2, yz coefficients [e.hs]");
    }
};

struct ModelConfig {
    SaddleSpectrum spectrum;
    TransitionQP qp;
    TransitionPQ pq;
    double rho = 0.25;          // radius of the heteroclinic translation supports
    double trans_halfwidth = 0.5;  // transition neighbourhood box half-width
    int r = 2;                  // regularity order recorded in reports
    Precision precision = Precision::extended;

    void validate() const {
        spectrum.validate();
        qp.validate();
        pq.validate();
        if (!(qp.gamma3 * (pq.a3 - pq.a2) > 0.0))
            throw ConfigError("model: gamma3*(a3-a2) must be positive [e.>]");
        if (!(rho > 0.0 && rho < 0.5))
            throw ConfigError("model: rho must lie in (0, 0.5) so the two translation supports stay disjoint");
        if (!(trans_halfwidth > 0.0 && trans_halfwidth <= 2.0))
            throw ConfigError("model: trans_halfwidth must lie in (0, 2]");
        if (r < 2) throw ConfigError("model: r must be >= 2");
    }
};

// JSON (field names follow the chart symbols); implemented in model_config.cpp.
// run_validate = false parses structurally only, so invariant checkers can
// report each violated condition instead of failing at the first one.
ModelConfig model_config_from_json(const std::string& text, bool run_validate = true);
std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig load_model_config(const std::string& path, bool run_validate = true);

// ---------------------------------------------------------------------------
// Bump functions.
// ---------------------------------------------------------------------------

// C-infinity profile: 1 on |x| <= rho/2, 0 on |x| >= rho, strictly between
// otherwise (exponential-glue step, so one profile serves every C^r demand).
template <typename S>
S bump1(const S& rho, const S& x) {
    using std::abs;
    using std::exp;
    if (!(rho > S(0))) throw ConfigError("bump1: rho must be > 0");
    S ax = abs(x);
    S half = rho / S(2);
    if (ax <= half) return S(1);
    if (ax >= rho) return S(0);
    S t = (rho - ax) / half;  // in (0,1)
    S g = exp(S(-1) / t);
    S gc = exp(S(-1) / (S(1) - t));
    return g / (g + gc);
}

template <typename S>
S bump3(const S& rho, const Vec3<S>& v) {
    return bump1(rho, v.x) * bump1(rho, v.y) * bump1(rho, v.z);
}

// ---------------------------------------------------------------------------
// Local linear dynamics (argument in full turns; alpha/beta are the rotation
// adjustments of the unfolding family).
// ---------------------------------------------------------------------------

template <typename S>
Vec3<S> local_P(const SaddleSpectrum& spec, const S& alpha, const Vec3<S>& v) {
    using std::cos;
    using std::sin;
    const S two_pi = S(2) * pi_value<S>();
    S ang = two_pi * (S(spec.phi_P) + alpha);
    S c = cos(ang), s = sin(ang), sp = S(spec.sigma_P);
    return {S(spec.lambda_P) * v.x, sp * (c * v.y - s * v.z), sp * (s * v.y + c * v.z)};
}

template <typename S>
Vec3<S> local_Q(const SaddleSpectrum& spec, const S& beta, const Vec3<S>& v) {
    using std::cos;
    using std::sin;
    const S two_pi = S(2) * pi_value<S>();
    S ang = two_pi * (S(spec.phi_Q) + beta);
    S c = cos(ang), s = sin(ang), lq = S(spec.lambda_Q);
    return {lq * (c * v.x - s * v.z), S(spec.sigma_Q) * v.y, lq * (s * v.x + c * v.z)};
}

// ---------------------------------------------------------------------------
// Transition maps.
// ---------------------------------------------------------------------------

template <typename S>
void require_in_box(const Vec3<S>& d, double halfwidth, const char* what) {
    if (!(to_double(d.norm_inf()) <= halfwidth))
        throw OutOfNeighbourhood(std::string(what) + ": point outside the transition neighbourhood");
}

template <typename S>
Vec3<S> trans_QP(const TransitionQP& qp, double halfwidth, const Vec3<S>& v) {
    Vec3<S> d = v - vec_cast<S>(kHetX);
    require_in_box(d, halfwidth, "trans_QP");
    S lin1 = S(qp.alpha1) * d.x + S(qp.alpha2) * d.y + S(qp.alpha3) * d.z;
    return {S(1) + lin1 + quad_form(qp.hqp[0], d),
            S(qp.beta2) * d.y + quad_form(qp.hqp[1], d),
            S(qp.gamma3) * d.z + quad_form(qp.hqp[2], d)};
}

template <typename S>
Vec3<S> trans_PQ(const TransitionPQ& pq, double halfwidth, const Vec3<S>& v) {
    Vec3<S> d = v - vec_cast<S>(kHetY);
    require_in_box(d, halfwidth, "trans_PQ");
    return {S(1) + S(pq.a1) * d.x + S(pq.a2) * d.y + S(pq.a3) * d.z + quad_form(pq.hpq[0], d),
            S(pq.b1) * d.x + S(pq.b2) * d.y * d.y + S(pq.b3) * d.z * d.z + S(pq.b4) * d.y * d.z +
                quad_form(pq.hpq[1], d),
            S(1) + S(pq.c1) * d.x + S(pq.c2) * d.y + S(pq.c2) * d.z + quad_form(pq.hpq[2], d)};
}

// ---------------------------------------------------------------------------
// Perturbations of the identity.
// ---------------------------------------------------------------------------

// Translation-like perturbation supported in the ball of radius rho: inside,
// v + b_rho(|v-center|) w; identity outside.  The radial bump keeps the map
// smooth and makes it map the ball onto itself.
template <typename S>
Vec3<S> translation_perturb(const Vec3<S>& center, const Vec3<S>& w, const S& rho,
                            const Vec3<S>& v) {
    Vec3<S> d = v - center;
    S r = d.norm();
    if (!(r < rho)) return v;
    S b = bump1(rho, r);
    return v + (b * w);
}

enum class RotAxis { x, y };

// I^axis rotation by angle 2*pi*omega (in full turns).
template <typename S>
Vec3<S> axis_rotation(RotAxis axis, const S& omega, const Vec3<S>& v) {
    using std::cos;
    using std::sin;
    const S two_pi = S(2) * pi_value<S>();
    S c = cos(two_pi * omega), s = sin(two_pi * omega);
    if (axis == RotAxis::x) return {v.x, c * v.y - s * v.z, s * v.y + c * v.z};
    return {c * v.x - s * v.z, v.y, s * v.x + c * v.z};
}

// Rotation-like perturbation R^axis_{omega,rho}: angle scaled by b_rho(|v|).
template <typename S>
Vec3<S> rotation_perturb(RotAxis axis, const S& omega, const S& rho, const Vec3<S>& v) {
    S b = bump1(rho, v.norm());
    if (b == S(0)) return v;
    return axis_rotation(axis, omega * b, v);
}

// ---------------------------------------------------------------------------
// Unfolding family  f_upsilon = Gamma_upsilon o f.
// ---------------------------------------------------------------------------

template <typename S>
struct UnfoldingParams {
    Vec3<S> mu_bar{};  // translation at Yt (tangency unfolding)
    Vec3<S> nu_bar{};  // translation at Xt (quasi-transverse unfolding)
    S alpha{};         // argument adjustment at P
    S beta{};          // argument adjustment at Q
};

enum class Region { PLocal, QLocal, QPTransition, PQTransition };

template <typename S>
void require_in_chart(const Vec3<S>& v, const char* where) {
    if (!(to_double(v.norm_inf()) < kChartHalfWidth))
        throw DomainEscape(std::string(where) + ": orbit left the chart (-10,10)^3");
    if (!(is_finite(v.x) && is_finite(v.y) && is_finite(v.z)))
        throw PrecisionError(std::string(where) + ": non-finite coordinate");
}

// The return-map algebra assumes the perturbations act as pure rotations /
// translations, so the bump arguments must sit on the plateau (value 1) or
// outside the support (value 0); anything in between is an error.  A vanishing
// perturbation is exempt: it is the identity at every bump value.
template <typename S>
Vec3<S> apply_unfolded(const ModelConfig& cfg, const UnfoldingParams<S>& up, const Vec3<S>& v,
                       Region region) {
    require_in_chart(v, "apply_unfolded");
    const S rot_rho = S(kRotationRho);
    const S zero = S(0);
    switch (region) {
        case Region::PLocal: {
            Vec3<S> w = local_P(cfg.spectrum, zero, v);
            require_in_chart(w, "apply_unfolded[P]");
            if (up.alpha == zero) return w;
            S b = bump1(rot_rho, w.norm());
            if (b == S(1)) return axis_rotation(RotAxis::x, up.alpha, w);
            if (b == zero) return w;
            throw PlateauViolation("apply_unfolded[P]: rotation bump argument off the plateau");
        }
        case Region::QLocal: {
            Vec3<S> w = local_Q(cfg.spectrum, zero, v);
            require_in_chart(w, "apply_unfolded[Q]");
            if (up.beta == zero) return w;
            S b = bump1(rot_rho, w.norm());
            if (b == S(1)) return axis_rotation(RotAxis::y, up.beta, w);
            if (b == zero) return w;
            throw PlateauViolation("apply_unfolded[Q]: rotation bump argument off the plateau");
        }
        case Region::QPTransition: {
            Vec3<S> w = trans_QP(cfg.qp, cfg.trans_halfwidth, v);
            if (up.nu_bar.x == zero && up.nu_bar.y == zero && up.nu_bar.z == zero) return w;
            S b = bump1(S(cfg.rho), (w - vec_cast<S>(kHetXt)).norm());
            if (b == S(1)) return w + up.nu_bar;
            if (b == zero) return w;
            throw PlateauViolation("apply_unfolded[QP]: translation bump argument off the plateau");
        }
        case Region::PQTransition: {
            Vec3<S> w = trans_PQ(cfg.pq, cfg.trans_halfwidth, v);
            if (up.mu_bar.x == zero && up.mu_bar.y == zero && up.mu_bar.z == zero) return w;
            S b = bump1(S(cfg.rho), (w - vec_cast<S>(kHetYt)).norm());
            if (b == S(1)) return w + up.mu_bar;
            if (b == zero) return w;
            throw PlateauViolation("apply_unfolded[PQ]: translation bump argument off the plateau");
        }
    }
    throw Error("apply_unfolded: unknown region");
}

// ---------------------------------------------------------------------------
// Heteroclinic geometry checks (finite differences against the linear parts).
// ---------------------------------------------------------------------------

struct DerivativeCheck {
    Vec3d image_v;       // Df^{N}(pt) v for the probed direction(s)
    Vec3d image_w;       // second direction (tangency check only)
    Vec3d expected_v;
    Vec3d expected_w;
    double max_abs_err = 0.0;
    bool pass = false;
};

namespace detail {
inline Vec3d central_diff(const ModelConfig& cfg, bool qp_side, const Vec3d& base,
                          const Vec3d& dir, double h) {
    auto eval = [&](const Vec3d& p) {
        return qp_side ? trans_QP<double>(cfg.qp, cfg.trans_halfwidth, p)
                       : trans_PQ<double>(cfg.pq, cfg.trans_halfwidth, p);
    };
    Vec3d plus = eval(base + (h * dir));
    Vec3d minus = eval(base - (h * dir));
    return (1.0 / (2.0 * h)) * (plus - minus);
}
}  // namespace detail

// Df^{N1}(X)(0,1,0) = (alpha2, beta2, 0): X is quasi-transverse.
inline DerivativeCheck check_quasi_transverse(const ModelConfig& cfg, double h = 1e-5,
                                              double tol = 1e-6) {
    DerivativeCheck r;
    r.image_v = detail::central_diff(cfg, true, kHetX, {0, 1, 0}, h);
    r.expected_v = {cfg.qp.alpha2, cfg.qp.beta2, 0.0};
    r.max_abs_err = (r.image_v - r.expected_v).norm_inf();
    r.pass = r.max_abs_err <= tol && std::abs(r.image_v.y) > tol;
    if (std::abs(r.image_v.y) <= tol)
        throw DegenerateModel("check_quasi_transverse: beta2 direction below tolerance");
    return r;
}

// Df^{N2}(Y)(0,1,0) = (a2,0,c2) and Df^{N2}(Y)(0,0,1) = (a3,0,c2): the second
// components vanish, which is the heterodimensional tangency.
inline DerivativeCheck check_tangency(const ModelConfig& cfg, double h = 1e-5,
                                      double tol = 1e-6) {
    DerivativeCheck r;
    r.image_v = detail::central_diff(cfg, false, kHetY, {0, 1, 0}, h);
    r.image_w = detail::central_diff(cfg, false, kHetY, {0, 0, 1}, h);
    r.expected_v = {cfg.pq.a2, 0.0, cfg.pq.c2};
    r.expected_w = {cfg.pq.a3, 0.0, cfg.pq.c2};
    r.max_abs_err = std::max((r.image_v - r.expected_v).norm_inf(),
                             (r.image_w - r.expected_w).norm_inf());
    r.pass = r.max_abs_err <= tol;
    if (!r.pass) throw DegenerateModel("check_tangency: tangency images off the expected rank-deficient form");
    return r;
}

}  // namespace hetren
