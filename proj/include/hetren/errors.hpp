#pragma once

#include <stdexcept>
#include <string>

namespace hetren {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / input problems (bad JSON, violated model invariants).
struct ConfigError : Error {
    using Error::Error;
};

// sigma2 (or sigma1*sigma2*sigma5) vanishes where a conjugacy needs it.
struct DegenerateSigma : Error {
    using Error::Error;
};

// A transversality / tangency check failed numerically.
struct DegenerateModel : Error {
    using Error::Error;
};

// Point handed to a transition map outside its neighbourhood box.
struct OutOfNeighbourhood : Error {
    using Error::Error;
};

// A bump argument landed in the open (0,1) shell: the perturbed map would
// differ from the pure rotation/translation the return-map algebra assumes.
struct PlateauViolation : Error {
    using Error::Error;
};

// Orbit left the linearising chart (-10,10)^3 during a composition.
struct DomainEscape : Error {
    using Error::Error;
};

// (lambda~, sigma~) outside the admissible set 0 < lambda~^(1/2) sigma~ < 1.
struct NotInZTilde : Error {
    using Error::Error;
};

// Sojourn-time scan exhausted n_max.
struct SojournNotFound : Error {
    SojournNotFound(const std::string& msg, long n_max_, bool resonance_)
        : Error(msg), n_max(n_max_), resonance(resonance_) {}
    long n_max = 0;
    bool resonance = false;
};

// solve_targets cannot reach (kappa0, eta0) without breaking an invariant.
struct InfeasibleTargets : Error {
    using Error::Error;
};

// Scalar type cannot represent the magnitudes a computation needs.
struct PrecisionError : Error {
    using Error::Error;
};

// A chart composition failed inside a convergence run; carries the offending
// schedule index and grid point.
struct CompositionError : Error {
    CompositionError(const std::string& msg, long k_, double x_, double y_, double z_)
        : Error(msg), k(k_), x(x_), y(y_), z(z_) {}
    long k = 0;
    double x = 0, y = 0, z = 0;
};

}  // namespace hetren
