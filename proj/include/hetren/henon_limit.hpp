#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "hetren/errors.hpp"
#include "hetren/vec3.hpp"

namespace hetren {

// ---------------------------------------------------------------------------
// Limit endomorphism families
//
//   G_{xi,mu,k1,k2}(x,y,z) = (y, mu + y^2 + k1 z^2 + k2 yz, xi z + y)
//   E_{xi,mu,sv}(x,y,z)    = (xi x + s1 y, mu + s2 y^2 + s3 x^2 + s4 xy, s5 y)
//
// and the coordinate change Theta conjugating one family to the other.
// ---------------------------------------------------------------------------

struct HenonParams {
    double xi = 1.185;
    double mu = -9.5;
    double kappa1 = 0.0;
    double kappa2 = 0.0;

    void validate() const {
        if (!(xi > 0.0)) throw ConfigError("HenonParams: xi must be > 0");
    }
};

struct SigmaVector {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0;

    bool nondegenerate() const { return s1 * s2 * s5 != 0.0; }
};

struct EParams {
    double xi = 1.185;
    double mu = -9.5;
    SigmaVector sv;

    void validate() const {
        if (!(xi > 0.0)) throw ConfigError("EParams: xi must be > 0");
    }
};

inline Vec3d eval_G(const HenonParams& p, const Vec3d& v) {
    return {v.y,
            p.mu + v.y * v.y + p.kappa1 * v.z * v.z + p.kappa2 * v.y * v.z,
            p.xi * v.z + v.y};
}

inline Vec3d eval_E(const EParams& e, const Vec3d& v) {
    const SigmaVector& s = e.sv;
    return {e.xi * v.x + s.s1 * v.y,
            e.mu + s.s2 * v.y * v.y + s.s3 * v.x * v.x + s.s4 * v.x * v.y,
            s.s5 * v.y};
}

// Jacobian of E at v; the third column vanishes identically (E is z-free).
inline void eval_E_jacobian(const EParams& e, const Vec3d& v, double J[3][3]) {
    const SigmaVector& s = e.sv;
    J[0][0] = e.xi;                         J[0][1] = s.s1;                       J[0][2] = 0.0;
    J[1][0] = 2.0 * s.s3 * v.x + s.s4 * v.y; J[1][1] = 2.0 * s.s2 * v.y + s.s4 * v.x; J[1][2] = 0.0;
    J[2][0] = 0.0;                          J[2][1] = s.s5;                       J[2][2] = 0.0;
}

// Point of the extended (parameter, point) space R^4 the conjugacy acts on.
struct Point4 {
    double mu = 0, x = 0, y = 0, z = 0;
};

// Theta(mu,x,y,z) = (mu/s2, s1 z/s2, y/s2, s5 x/s2)
inline Point4 theta_conjugacy(const SigmaVector& sv, const Point4& w) {
    if (sv.s2 == 0.0) throw DegenerateSigma("theta_conjugacy: sigma2 = 0");
    const double inv = 1.0 / sv.s2;
    return {inv * w.mu, inv * sv.s1 * w.z, inv * w.y, inv * sv.s5 * w.x};
}

struct LimitParams {
    double kappa = 0.0;
    double eta4 = 0.0;  // s1 s4 / s2
    double eta5 = 0.0;  // s1 s5 / s2
};

inline LimitParams derived_limit_params(const SigmaVector& sv) {
    if (sv.s2 == 0.0 || !sv.nondegenerate())
        throw DegenerateSigma("derived_limit_params: need s1*s2*s5 != 0");
    const double inv = 1.0 / sv.s2;
    return {sv.s1 * sv.s1 * sv.s3 * inv, sv.s1 * sv.s4 * inv, sv.s1 * sv.s5 * inv};
}

// Open box (1.18,1.19) x (-10,-9) x (-eps,eps)^2, all inequalities strict.
inline bool in_blender_region(double xi, double mu, double kappa, double eta, double eps) {
    if (!(eps > 0.0)) throw ConfigError("in_blender_region: eps must be > 0");
    return xi > 1.18 && xi < 1.19 && mu > -10.0 && mu < -9.0 &&
           std::abs(kappa) < eps && std::abs(eta) < eps;
}

struct Orbit {
    std::vector<Vec3d> points;
    bool escaped = false;
};

using EndoMap = std::variant<HenonParams, EParams>;

inline Vec3d eval_endomorphism(const EndoMap& map, const Vec3d& v) {
    if (std::holds_alternative<HenonParams>(map)) return eval_G(std::get<HenonParams>(map), v);
    return eval_E(std::get<EParams>(map), v);
}

inline Orbit iterate_endomorphism(const EndoMap& map, const Vec3d& v0, long steps,
                                  double escape_bound = 1e6) {
    if (steps < 0) throw ConfigError("iterate_endomorphism: steps must be >= 0");
    Orbit orbit;
    orbit.points.reserve(static_cast<size_t>(steps) + 1);
    orbit.points.push_back(v0);
    Vec3d v = v0;
    for (long i = 0; i < steps; ++i) {
        v = eval_endomorphism(map, v);
        orbit.points.push_back(v);
        if (v.norm_inf() > escape_bound) {
            orbit.escaped = true;
            break;
        }
    }
    return orbit;
}

// ---------------------------------------------------------------------------
// Conjugacy residuals.  The identity under test is
//     Theta((mu, G_{xi,mu,kappa,eta})(w)) = (mu', E_{xi,mu',sv})(Theta(w)),
// with mu' = mu/s2 and (kappa, eta) from derived_limit_params.  Both eta
// candidates are evaluated so the caller can record which one the family
// actually satisfies.
// ---------------------------------------------------------------------------

struct ConjugacyResidual {
    double err_eta4 = 0.0;
    double err_eta5 = 0.0;
};

inline double conjugacy_residual_one(const SigmaVector& sv, double xi, double eta,
                                     const Point4& w) {
    LimitParams lp = derived_limit_params(sv);
    HenonParams g{xi, w.mu, lp.kappa, eta};
    Point4 lhs_in{w.mu, 0, 0, 0};
    Vec3d gv = eval_G(g, {w.x, w.y, w.z});
    lhs_in.x = gv.x; lhs_in.y = gv.y; lhs_in.z = gv.z;
    Point4 lhs = theta_conjugacy(sv, lhs_in);

    Point4 tw = theta_conjugacy(sv, w);
    EParams e{xi, tw.mu, sv};
    Vec3d ev = eval_E(e, {tw.x, tw.y, tw.z});
    Point4 rhs{tw.mu, ev.x, ev.y, ev.z};

    auto rel = [](double a, double b) {
        double scale = std::max({1.0, std::abs(a), std::abs(b)});
        return std::abs(a - b) / scale;
    };
    return std::max({rel(lhs.mu, rhs.mu), rel(lhs.x, rhs.x), rel(lhs.y, rhs.y), rel(lhs.z, rhs.z)});
}

inline ConjugacyResidual conjugacy_residual(const SigmaVector& sv, double xi, const Point4& w) {
    LimitParams lp = derived_limit_params(sv);
    return {conjugacy_residual_one(sv, xi, lp.eta4, w),
            conjugacy_residual_one(sv, xi, lp.eta5, w)};
}

}  // namespace hetren
