#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "hetren/errors.hpp"

namespace hetren {

// Arbitrary-precision scalar. Precision is per-value, taken from the
// thread-local default at construction time; see PrecisionScope.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

enum class Precision { native, extended };

inline const char* to_string(Precision p) {
    return p == Precision::native ? "native" : "extended";
}

inline Precision precision_from_string(const std::string& s) {
    if (s == "native") return Precision::native;
    if (s == "extended") return Precision::extended;
    throw ConfigError("precision must be 'native' or 'extended', got '" + s + "'");
}

// RAII guard: set the BigFloat working precision (in bits) for a scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits)
        : saved_(BigFloat::default_precision()) {
        BigFloat::default_precision(digits10_from_bits(bits));
    }
    ~PrecisionScope() { BigFloat::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

    static unsigned digits10_from_bits(unsigned bits) {
        // log10(2) ~ 0.30103; round up and keep a couple of guard digits.
        return static_cast<unsigned>(bits * 0.30103) + 4;
    }

private:
    unsigned saved_;
};

template <typename S>
inline double to_double(const S& x) {
    return static_cast<double>(x);
}

// pi at the working precision of S.
template <typename S>
inline S pi_value() {
    using std::acos;
    return acos(S(-1));
}

template <>
inline double pi_value<double>() {
    return 3.14159265358979323846264338327950288;
}

template <typename S>
inline bool is_finite(const S& x) {
    using std::isfinite;
    return isfinite(x);
}

inline bool is_finite(const BigFloat& x) {
    return boost::multiprecision::isfinite(x);
}

// exp(sum_i e_i * log(b_i)) for positive bases. The renormalisation power
// products sigma_P^a lambda_Q^b ... are always evaluated through this, so
// huge and tiny factors are combined in log space and rounded once.
template <typename S>
class PowerBasis {
public:
    PowerBasis(const S& lambda_p, const S& sigma_p, const S& lambda_q, const S& sigma_q) {
        using std::log;
        log_lp_ = log(lambda_p);
        log_sp_ = log(sigma_p);
        log_lq_ = log(lambda_q);
        log_sq_ = log(sigma_q);
    }

    // lambda_P^a sigma_P^b lambda_Q^c sigma_Q^d
    S pow(long a, long b, long c, long d) const {
        using std::exp;
        S e = S(a) * log_lp_ + S(b) * log_sp_ + S(c) * log_lq_ + S(d) * log_sq_;
        S r = exp(e);
        if (!is_finite(r)) {
            throw PrecisionError(
                "power product overflows the active scalar (log-exponent " +
                std::to_string(to_double(e)) + "); use extended precision");
        }
        return r;
    }

private:
    S log_lp_, log_sp_, log_lq_, log_sq_;
};

}  // namespace hetren
