#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hetren/cycle_model.hpp"
#include "hetren/errors.hpp"
#include "hetren/scalar.hpp"

namespace hetren {

// ---------------------------------------------------------------------------
// Spectral condition, sojourn-time search, and adapted arguments.
// ---------------------------------------------------------------------------

struct SpectralCheck {
    bool ok = false;
    double eta = 0.0;    // log(1/lambda_Q) / log(sigma_P)
    double value = 0.0;  // (lambda_P^(1/2) sigma_P)^eta * sigma_Q
};

inline SpectralCheck check_spectral(const SaddleSpectrum& spec) {
    SpectralCheck r;
    r.eta = std::log(1.0 / spec.lambda_Q) / std::log(spec.sigma_P);
    r.value = std::pow(std::sqrt(spec.lambda_P) * spec.sigma_P, r.eta) * spec.sigma_Q;
    r.ok = r.value > 0.0 && r.value < 1.0;
    return r;
}

// The interval (1, sigma*) of sigma_Q values compatible with the spectral
// condition for given (lambda~, sigma~, lambda).
inline std::pair<double, double> sigma_interval(double lt, double st, double l) {
    if (!(lt > 0 && lt < 1 && st > 1 && std::sqrt(lt) * st < 1))
        throw NotInZTilde("sigma_interval: need 0 < sqrt(lambda~)*sigma~ < 1");
    if (!(l > 0 && l < 1)) throw NotInZTilde("sigma_interval: need 0 < lambda < 1");
    double eta = std::log(1.0 / l) / std::log(st);
    double sigma_star = std::exp(-eta * std::log(std::sqrt(lt) * st));
    return {1.0, sigma_star};
}

// tau(a2, a3, gamma3) = gamma3 (a3 - a2) / sqrt(2) > 0.
inline double tau_of(const ModelConfig& cfg) {
    return cfg.qp.gamma3 * (cfg.pq.a3 - cfg.pq.a2) / std::sqrt(2.0);
}

struct SojournPair {
    long m = 0;
    long n = 0;
    double product = 0.0;  // sigma^m lambda^n
    double slack = 0.0;    // |m - n*eta - eta~|
};

struct ScheduleEntry {
    SojournPair pair;
    double zeta = 0.0;      // argument offset at P
    double vartheta = 0.0;  // argument offset at Q
};

struct SojournSchedule {
    std::vector<ScheduleEntry> entries;
    double target = 0.0;  // xi / tau

    void validate() const {
        for (size_t k = 1; k < entries.size(); ++k) {
            if (!(entries[k].pair.m > entries[k - 1].pair.m && entries[k].pair.n > entries[k - 1].pair.n))
                throw ConfigError("schedule: m_k and n_k must be strictly increasing");
        }
        for (size_t k = 0; k < entries.size(); ++k) {
            double bound = 1.0 / (static_cast<double>(k) + 1.0);
            if (!(std::abs(entries[k].zeta) <= bound && std::abs(entries[k].vartheta) <= bound))
                throw ConfigError("schedule: offsets must decay at least like 1/(k+1)");
        }
    }
};

// Scan for (m,n), n0 < n <= n_max, with |tau sigma^m lambda^n - xi| < eps and
// |m - n eta - eta~| < 1 (eta~ = log(tau/xi)/log sigma).  The slack bound
// confines m to the two integers around n*eta + eta~, so the scan is complete.
// Implemented in sojourn.cpp (the power test runs in extended precision).
SojournPair find_sojourn(double sigma, double lambda, double tau, double xi, double eps,
                         long n0, long n_max);

struct ScheduleOptions {
    long n0 = 10;
    long n_max = 4000;
    // Offset sequence Theta_k -> 0; default per design decision 1/(k+2).
    double offset0 = -1.0;   // if > 0: geometric offset0 / 2^k
};

SojournSchedule build_schedule(double sigma, double lambda, double tau, double xi, int count,
                               double eps0, const ScheduleOptions& opts = {});

std::string schedule_to_json(const SojournSchedule& s);
SojournSchedule schedule_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Adapted arguments: the smallest corrections making the m-th (resp. n-th)
// iterated rotation angle land on pi/4 + zeta (resp. pi/2 + vartheta) mod 2pi.
// ---------------------------------------------------------------------------

template <typename S>
S adapted_argument_P(long m, const S& theta, const S& zeta) {
    using std::floor;
    const S pi = pi_value<S>();
    const S two_pi = S(2) * pi;
    S mt = S(m) * theta;
    return (pi / S(4) - two_pi * mt + two_pi * floor(mt) + zeta) / (two_pi * S(m));
}

template <typename S>
S adapted_argument_Q(long n, const S& omega, const S& vartheta) {
    using std::floor;
    const S pi = pi_value<S>();
    const S two_pi = S(2) * pi;
    S nw = S(n) * omega;
    return (pi / S(2) - two_pi * nw + two_pi * floor(nw) + vartheta) / (two_pi * S(n));
}

template <typename S>
std::pair<S, S> adapted_arguments(long m, long n, const S& theta, const S& omega, const S& zeta,
                                  const S& vartheta) {
    if (m < 1 || n < 1) throw ConfigError("adapted_arguments: m, n must be >= 1");
    return {adapted_argument_P(m, theta, zeta), adapted_argument_Q(n, omega, vartheta)};
}

// By construction  2 pi m (theta + alpha) = pi/4 + zeta + 2 pi floor(m theta)
// exactly; this returns |m(theta+alpha) - 1/8 - zeta/(2 pi) - floor(m theta)|
// so callers can assert the congruence without evaluating huge-angle trig.
template <typename S>
S angle_congruence_defect_P(long m, const S& theta, const S& zeta, const S& alpha) {
    using std::abs;
    using std::floor;
    const S two_pi = S(2) * pi_value<S>();
    S mt = S(m) * theta;
    S lhs = S(m) * (theta + alpha);
    S rhs = S(1) / S(8) + zeta / two_pi + floor(mt);
    return abs(lhs - rhs);
}

template <typename S>
S angle_congruence_defect_Q(long n, const S& omega, const S& vartheta, const S& beta) {
    using std::abs;
    using std::floor;
    const S two_pi = S(2) * pi_value<S>();
    S nw = S(n) * omega;
    S lhs = S(n) * (omega + beta);
    S rhs = S(1) / S(4) + vartheta / two_pi + floor(nw);
    return abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Trigonometric sequences: c~ = cos(2 pi m phi_{P,k}) etc., always evaluated
// on the reduced congruence angles pi/4 + zeta and pi/2 + vartheta, which the
// adapted arguments make exact; the raw product 2 pi m phi would shed all its
// precision for deep schedules.
// ---------------------------------------------------------------------------

template <typename S>
struct TrigSequences {
    S ct, st;  // cos/sin(pi/4 + zeta)
    S c, s;    // cos/sin(pi/2 + vartheta)
};

template <typename S>
TrigSequences<S> trig_sequences(const S& zeta, const S& vartheta) {
    using std::cos;
    using std::sin;
    const S pi = pi_value<S>();
    S ap = pi / S(4) + zeta;
    S aq = pi / S(2) + vartheta;
    return {cos(ap), sin(ap), cos(aq), sin(aq)};
}

// rho~_2 and rho~_3: quadratic tails of H~2, H~3 surviving in the adapted
// limit; c, s are the Q-side trig values.
template <typename S>
std::pair<S, S> rho_tilde(const TransitionQP& qp, const S& c, const S& s) {
    S half = S(1) / S(2);
    S cs_m = (c - s) * (c - s);
    S cs_p = (s + c) * (s + c);
    S r2 = half * S(qp.hqp[1][0][0]) * cs_m + half * S(qp.hqp[1][2][2]) * cs_p;
    S r3 = half * S(qp.hqp[2][0][0]) * cs_m + half * S(qp.hqp[2][2][2]) * cs_p;
    return {r2, r3};
}

}  // namespace hetren
