#include "hetren/sojourn.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hetren {

namespace {

// The lemma behind the search only holds off a residual set; when
// log(1/lambda)/log(sigma) is (numerically) a small rational the power
// products sigma^m lambda^n live on a discrete geometric grid and the scan
// cannot converge.  Detect that for the failure diagnostic.
struct Resonance {
    bool found = false;
    long p = 0, q = 0;
};

Resonance detect_resonance(double eta, double tol = 1e-9, long q_max = 100) {
    for (long q = 1; q <= q_max; ++q) {
        double pq = eta * static_cast<double>(q);
        double p = std::round(pq);
        if (p >= 1.0 && std::abs(eta - p / static_cast<double>(q)) < tol)
            return {true, static_cast<long>(p), q};
    }
    return {false, 0, 0};
}

}  // namespace

SojournPair find_sojourn(double sigma, double lambda, double tau, double xi, double eps,
                         long n0, long n_max) {
    if (!(sigma > 1.0)) throw ConfigError("find_sojourn: sigma must be > 1");
    if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("find_sojourn: lambda must be in (0,1)");
    if (!(tau > 0.0 && xi > 0.0)) throw ConfigError("find_sojourn: tau, xi must be > 0");
    if (!(eps > 0.0 && eps < xi)) throw ConfigError("find_sojourn: need 0 < eps < xi");
    if (n_max <= n0) throw ConfigError("find_sojourn: n_max must exceed n0");

    // 300 bits is ample for n_max ~ 10^4: the log-space exponents stay below
    // ~1e5, so the products carry ~80 accurate decimal digits.
    PrecisionScope scope(300);
    const BigFloat ls = log(BigFloat(sigma));
    const BigFloat ll = log(BigFloat(lambda));
    const BigFloat eta = -ll / ls;
    const BigFloat eta_t = log(BigFloat(tau) / BigFloat(xi)) / ls;
    const BigFloat big_tau(tau), big_xi(xi), big_eps(eps);

    for (long n = n0 + 1; n <= n_max; ++n) {
        BigFloat center = BigFloat(n) * eta + eta_t;
        long lo = static_cast<long>(floor(center));
        for (long m : {lo, lo + 1}) {
            if (m <= n0 || m < 1) continue;
            BigFloat product = exp(BigFloat(m) * ls + BigFloat(n) * ll);
            if (abs(big_tau * product - big_xi) >= big_eps) continue;
            BigFloat slack = abs(BigFloat(m) - BigFloat(n) * eta - eta_t);
            if (slack >= 1) continue;
            return {m, n, to_double(product), to_double(slack)};
        }
    }

    Resonance res = detect_resonance(to_double(eta));
    std::ostringstream msg;
    msg << "find_sojourn: no pair with n <= " << n_max << " satisfies |" << tau << "*" << sigma
        << "^m*" << lambda << "^n - " << xi << "| < " << eps << " with slack < 1";
    if (res.found)
        msg << " [resonance: log(1/lambda)/log(sigma) ~ " << res.p << "/" << res.q
            << ", the pair (sigma, lambda) lies off the residual set the search needs]";
    throw SojournNotFound(msg.str(), n_max, res.found);
}

SojournSchedule build_schedule(double sigma, double lambda, double tau, double xi, int count,
                               double eps0, const ScheduleOptions& opts) {
    if (count < 0) throw ConfigError("build_schedule: count must be >= 0");
    if (count > 0 && !(eps0 > 0.0)) throw ConfigError("build_schedule: eps0 must be > 0");
    SojournSchedule s;
    s.target = xi / tau;
    long n0 = opts.n0;
    double eps_cap = eps0;  // keeps |tau sigma^m lambda^n - xi| nonincreasing in k
    for (int k = 0; k < count; ++k) {
        double eps = std::min(eps0 / std::pow(2.0, k), eps_cap);
        SojournPair pair = find_sojourn(sigma, lambda, tau, xi, eps, n0, opts.n_max);
        double off = opts.offset0 > 0.0 ? opts.offset0 / std::pow(2.0, k)
                                        : 1.0 / (static_cast<double>(k) + 2.0);
        s.entries.push_back({pair, off, off});
        n0 = pair.n;
        eps_cap = std::abs(tau * pair.product - xi);
    }
    s.validate();
    return s;
}

std::string schedule_to_json(const SojournSchedule& s) {
    nlohmann::json j;
    j["target"] = s.target;
    j["pairs"] = nlohmann::json::array();
    for (const auto& e : s.entries) {
        j["pairs"].push_back({{"m", e.pair.m},
                              {"n", e.pair.n},
                              {"product", e.pair.product},
                              {"slack", e.pair.slack},
                              {"zeta", e.zeta},
                              {"vartheta", e.vartheta}});
    }
    return j.dump(2) + "\n";
}

SojournSchedule schedule_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("schedule JSON parse error: ") + e.what());
    }
    SojournSchedule s;
    try {
        s.target = j.at("target").get<double>();
        for (const auto& p : j.at("pairs")) {
            ScheduleEntry e;
            e.pair.m = p.at("m").get<long>();
            e.pair.n = p.at("n").get<long>();
            e.pair.product = p.at("product").get<double>();
            e.pair.slack = p.at("slack").get<double>();
            e.zeta = p.at("zeta").get<double>();
            e.vartheta = p.at("vartheta").get<double>();
            s.entries.push_back(e);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("schedule JSON field error: ") + e.what());
    }
    s.validate();
    return s;
}

}  // namespace hetren
