#include "hetren/report_io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace hetren {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

nlohmann::json row_to_json(const RenormRow& r) {
    nlohmann::json j;
    j["k"] = r.k;
    j["m"] = r.m;
    j["n"] = r.n;
    j["sup_c0_error"] = r.sup_c0_error;
    j["sup_c1_error"] = r.sup_c1_error;
    j["sup_c2_error"] = r.sup_c2_error;
    j["cross_check_error"] = r.cross_check_error;
    j["prod_target_gap"] = r.prod_target_gap;
    j["lp_s2m_s2n"] = r.landau;
    j["hot1"] = r.hot1;
    j["hot2"] = r.hot2;
    j["hot3"] = r.hot3;
    j["precision_bits"] = r.precision_bits;
    j["precision_ok"] = r.precision_ok;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

}  // namespace

std::string report_to_csv(const RenormReport& rep) {
    std::ostringstream os;
    os << "k,m_k,n_k,sup_c0_error,sup_c1_error,sup_c2_error,cross_check_error,"
          "prod_target_gap,lp_s2m_s2n,hot1,hot2,hot3,precision_bits,precision_ok\n";
    for (const auto& r : rep.rows) {
        os << r.k << ',' << r.m << ',' << r.n << ',' << format_double(r.sup_c0_error) << ','
           << format_double(r.sup_c1_error) << ',' << format_double(r.sup_c2_error) << ','
           << format_double(r.cross_check_error) << ',' << format_double(r.prod_target_gap) << ','
           << format_double(r.landau) << ',' << format_double(r.hot1) << ','
           << format_double(r.hot2) << ',' << format_double(r.hot3) << ',' << r.precision_bits
           << ',' << (r.precision_ok ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string report_to_json(const RenormReport& rep) {
    nlohmann::json j;
    j["xi"] = rep.xi;
    j["mu"] = rep.mu;
    j["target"] = rep.target;
    j["grid_n"] = rep.grid_n;
    j["fd_step"] = rep.fd_step;
    j["precision"] = to_string(rep.precision);
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rep.rows) j["rows"].push_back(row_to_json(r));
    return j.dump(2) + "\n";
}

std::string cert_report_to_json(const CertReport& rep) {
    nlohmann::json j;
    j["xi"] = rep.xi;
    j["mu"] = rep.mu;
    j["eps"] = rep.eps;
    j["sigma_vec"] = {rep.sigma_vec.s1, rep.sigma_vec.s2, rep.sigma_vec.s3, rep.sigma_vec.s4,
                      rep.sigma_vec.s5};
    j["kappa"] = rep.kappa;
    j["eta4"] = rep.eta4;
    j["eta5"] = rep.eta5;
    j["spectral_ok"] = rep.spectral_ok;
    j["spectral_value"] = rep.spectral_value;
    j["restriction_ok"] = rep.restriction_ok;
    j["restriction_ok_alt"] = rep.restriction_ok_alt;
    j["xi_in_range"] = rep.xi_in_range;
    j["final_c0_error"] = rep.final_c0_error;
    j["convergence_complete"] = rep.convergence_complete;
    j["verdict"] = rep.verdict;
    j["warnings"] = rep.warnings;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.schedule_summary.rows) rows.push_back(row_to_json(r));
    j["schedule_summary"] = {{"target", rep.schedule_summary.target},
                             {"grid_n", rep.schedule_summary.grid_n},
                             {"fd_step", rep.schedule_summary.fd_step},
                             {"precision", to_string(rep.schedule_summary.precision)},
                             {"rows", rows}};
    return j.dump(2) + "\n";
}

std::string orbit_to_csv(const Orbit& orbit) {
    std::ostringstream os;
    os << "step,x,y,z,escaped\n";
    for (size_t i = 0; i < orbit.points.size(); ++i) {
        bool last = i + 1 == orbit.points.size();
        os << i << ',' << format_double(orbit.points[i].x) << ','
           << format_double(orbit.points[i].y) << ',' << format_double(orbit.points[i].z) << ','
           << ((last && orbit.escaped) ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace hetren
