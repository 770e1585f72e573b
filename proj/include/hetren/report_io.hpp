#pragma once

#include <string>

#include "hetren/certify.hpp"
#include "hetren/henon_limit.hpp"
#include "hetren/renorm.hpp"

namespace hetren {

// Deterministic serialisation: shortest round-trip float formatting, fixed
// column order, no timestamps in data files.
std::string format_double(double x);

std::string report_to_csv(const RenormReport& rep);
std::string report_to_json(const RenormReport& rep);
std::string cert_report_to_json(const CertReport& rep);
std::string orbit_to_csv(const Orbit& orbit);

}  // namespace hetren
