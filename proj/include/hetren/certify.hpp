#pragma once

#include <string>
#include <vector>

#include "hetren/blender_cert.hpp"
#include "hetren/renorm.hpp"

namespace hetren {

// Certification assembles the parameter checks and the convergence run.  The
// verdict grade is always "numerical-evidence": the pipeline confirms the
// parameters sit inside the cited blender region and the renormalised returns
// converge on the sampled grid, nothing stronger.
struct CertReport {
    SigmaVector sigma_vec;
    double xi = 0.0, mu = 0.0, eps = 0.0;
    double kappa = 0.0;
    double eta4 = 0.0;  // conjugacy form s1 s4 / s2
    double eta5 = 0.0;  // restriction form s1 s5 / s2
    bool spectral_ok = false;
    double spectral_value = 0.0;
    bool restriction_ok = false;      // (xi, mu, kappa, eta5) in the region
    bool restriction_ok_alt = false;  // same with eta4
    bool xi_in_range = false;
    double final_c0_error = 0.0;  // last completed schedule row
    bool convergence_complete = false;
    RenormReport schedule_summary;
    std::string verdict;
    std::vector<std::string> warnings;
};

CertReport certify_scheme(const ModelConfig& cfg, double xi, double mu, double eps,
                          const SojournSchedule& sched, const ConvergenceOptions& opts = {});

// 0 iff spectral_ok, restriction_ok and the final C0 error beat the threshold.
int certify_exit_code(const CertReport& rep, double c0_threshold = 0.05);

std::string cert_report_summary(const CertReport& rep);

}  // namespace hetren
