#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <tuple>
#include <vector>

#include "hetren/blender_cert.hpp"
#include "hetren/certify.hpp"
#include "hetren/cycle_model.hpp"
#include "hetren/henon_limit.hpp"
#include "hetren/renorm.hpp"
#include "hetren/report_io.hpp"
#include "hetren/sojourn.hpp"

namespace py = pybind11;
using namespace hetren;

namespace {

using Triple = std::array<double, 3>;
using Five = std::array<double, 5>;

Vec3d to_vec(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple from_vec(const Vec3d& v) { return {v.x, v.y, v.z}; }

SigmaVector to_sigma(const Five& s) { return {s[0], s[1], s[2], s[3], s[4]}; }

SojournSchedule schedule_for(const ModelConfig& cfg, double xi, int count, double eps0, long n0,
                             long n_max, double offset0) {
    ScheduleOptions opts;
    opts.n0 = n0;
    opts.n_max = n_max;
    opts.offset0 = offset0;
    return build_schedule(cfg.spectrum.sigma_P, cfg.spectrum.lambda_Q, tau_of(cfg), xi, count,
                          eps0, opts);
}

}  // namespace

PYBIND11_MODULE(_hetren, m) {
    m.doc() = "renormalisation laboratory for a heterodimensional tangency between saddle-foci";

    py::register_exception<Error>(m, "HetrenError");

    // limit families
    m.def(
        "eval_g",
        [](double xi, double mu, double k1, double k2, const Triple& v) {
            return from_vec(eval_G({xi, mu, k1, k2}, to_vec(v)));
        },
        py::arg("xi"), py::arg("mu"), py::arg("kappa1"), py::arg("kappa2"), py::arg("v"));
    m.def(
        "eval_e",
        [](double xi, double mu, const Five& sv, const Triple& v) {
            return from_vec(eval_E({xi, mu, to_sigma(sv)}, to_vec(v)));
        },
        py::arg("xi"), py::arg("mu"), py::arg("sigma"), py::arg("v"));
    m.def(
        "theta_conjugacy",
        [](const Five& sv, const std::array<double, 4>& w) {
            Point4 p = theta_conjugacy(to_sigma(sv), {w[0], w[1], w[2], w[3]});
            return std::array<double, 4>{p.mu, p.x, p.y, p.z};
        },
        py::arg("sigma"), py::arg("point"));
    m.def(
        "derived_limit_params",
        [](const Five& sv) {
            LimitParams lp = derived_limit_params(to_sigma(sv));
            return std::make_tuple(lp.kappa, lp.eta4, lp.eta5);
        },
        py::arg("sigma"));
    m.def("in_blender_region", &in_blender_region, py::arg("xi"), py::arg("mu"), py::arg("kappa"),
          py::arg("eta"), py::arg("eps"));
    m.def(
        "iterate_g",
        [](double xi, double mu, double k1, double k2, const Triple& v0, long steps,
           double escape) {
            Orbit o = iterate_endomorphism(HenonParams{xi, mu, k1, k2}, to_vec(v0), steps, escape);
            std::vector<Triple> pts;
            for (const auto& p : o.points) pts.push_back(from_vec(p));
            return std::make_tuple(pts, o.escaped);
        },
        py::arg("xi"), py::arg("mu"), py::arg("kappa1"), py::arg("kappa2"), py::arg("v0"),
        py::arg("steps"), py::arg("escape") = 1e6);
    m.def(
        "iterate_e",
        [](double xi, double mu, const Five& sv, const Triple& v0, long steps, double escape) {
            Orbit o = iterate_endomorphism(EParams{xi, mu, to_sigma(sv)}, to_vec(v0), steps, escape);
            std::vector<Triple> pts;
            for (const auto& p : o.points) pts.push_back(from_vec(p));
            return std::make_tuple(pts, o.escaped);
        },
        py::arg("xi"), py::arg("mu"), py::arg("sigma"), py::arg("v0"), py::arg("steps"),
        py::arg("escape") = 1e6);

    // bump functions and perturbations
    m.def("bump1", [](double rho, double x) { return bump1(rho, x); }, py::arg("rho"),
          py::arg("x"));
    m.def("bump3", [](double rho, const Triple& v) { return bump3(rho, to_vec(v)); },
          py::arg("rho"), py::arg("v"));

    // configs
    m.def("default_config", []() { return model_config_to_json(ModelConfig{}); });
    m.def("load_config", [](const std::string& path) {
        return model_config_to_json(load_model_config(path));
    });
    m.def("validate_config", [](const std::string& json) {
        model_config_from_json(json);
        return true;
    });

    // spectral and sojourn machinery
    m.def(
        "check_spectral",
        [](double lambda_P, double sigma_P, double lambda_Q, double sigma_Q) {
            SaddleSpectrum sp;
            sp.lambda_P = lambda_P;
            sp.sigma_P = sigma_P;
            sp.lambda_Q = lambda_Q;
            sp.sigma_Q = sigma_Q;
            SpectralCheck c = check_spectral(sp);
            py::dict d;
            d["ok"] = c.ok;
            d["eta"] = c.eta;
            d["value"] = c.value;
            return d;
        },
        py::arg("lambda_P"), py::arg("sigma_P"), py::arg("lambda_Q"), py::arg("sigma_Q"));
    m.def("sigma_interval", &sigma_interval, py::arg("lambda_tilde"), py::arg("sigma_tilde"),
          py::arg("lambda"));
    m.def("tau_of",
          [](const std::string& json) { return tau_of(model_config_from_json(json)); });
    m.def(
        "find_sojourn",
        [](double sigma, double lambda, double tau, double xi, double eps, long n0, long n_max) {
            SojournPair p = find_sojourn(sigma, lambda, tau, xi, eps, n0, n_max);
            py::dict d;
            d["m"] = p.m;
            d["n"] = p.n;
            d["product"] = p.product;
            d["slack"] = p.slack;
            return d;
        },
        py::arg("sigma"), py::arg("lambda"), py::arg("tau"), py::arg("xi"), py::arg("eps"),
        py::arg("n0") = 10, py::arg("n_max") = 4000);
    m.def(
        "build_schedule",
        [](const std::string& json, double xi, int count, double eps0, long n0, long n_max,
           double offset0) {
            ModelConfig cfg = model_config_from_json(json);
            return schedule_to_json(schedule_for(cfg, xi, count, eps0, n0, n_max, offset0));
        },
        py::arg("config"), py::arg("xi"), py::arg("count"), py::arg("eps0") = 0.02,
        py::arg("n0") = 10, py::arg("n_max") = 4000, py::arg("offset0") = 0.02);
    m.def(
        "adapted_arguments",
        [](long m_, long n_, double theta, double omega, double zeta, double vartheta) {
            return adapted_arguments(m_, n_, theta, omega, zeta, vartheta);
        },
        py::arg("m"), py::arg("n"), py::arg("theta"), py::arg("omega"), py::arg("zeta") = 0.0,
        py::arg("vartheta") = 0.0);
    m.def(
        "trig_sequences",
        [](double zeta, double vartheta) {
            TrigSequences<double> t = trig_sequences(zeta, vartheta);
            return std::make_tuple(t.ct, t.st, t.c, t.s);
        },
        py::arg("zeta") = 0.0, py::arg("vartheta") = 0.0);

    // model checks
    m.def("check_quasi_transverse", [](const std::string& json) {
        DerivativeCheck c = check_quasi_transverse(model_config_from_json(json));
        py::dict d;
        d["image"] = from_vec(c.image_v);
        d["expected"] = from_vec(c.expected_v);
        d["max_abs_err"] = c.max_abs_err;
        d["pass"] = c.pass;
        return d;
    });
    m.def("check_tangency", [](const std::string& json) {
        DerivativeCheck c = check_tangency(model_config_from_json(json));
        py::dict d;
        d["image_v"] = from_vec(c.image_v);
        d["image_w"] = from_vec(c.image_w);
        d["max_abs_err"] = c.max_abs_err;
        d["pass"] = c.pass;
        return d;
    });

    // limit parameters and certification
    m.def(
        "sigma_vector",
        [](const std::string& json, double xi) {
            SigmaVector s = sigma_vector(model_config_from_json(json), xi);
            return Five{s.s1, s.s2, s.s3, s.s4, s.s5};
        },
        py::arg("config"), py::arg("xi"));
    m.def(
        "gamma_xi",
        [](const std::string& json, double xi) {
            GammaXi g = gamma_xi(model_config_from_json(json), xi);
            return std::make_tuple(g.kappa, g.eta, g.eta_alt);
        },
        py::arg("config"), py::arg("xi"));
    m.def(
        "solve_targets",
        [](double xi, double kappa0, double eta0, const std::string& json, bool allow_nudge) {
            SolveOptions opts;
            opts.allow_nudge = allow_nudge;
            TargetSolve ts = solve_targets(xi, kappa0, eta0, model_config_from_json(json), opts);
            return std::make_tuple(model_config_to_json(ts.config), ts.nudged);
        },
        py::arg("xi"), py::arg("kappa0"), py::arg("eta0"), py::arg("config"),
        py::arg("allow_nudge") = false);

    // renormalisation
    m.def(
        "renorm_point",
        [](const std::string& json, long m_, long n_, double zeta, double vartheta, double mu,
           const Triple& v, bool direct) {
            ModelConfig cfg = model_config_from_json(json);
            ScheduleEntry e;
            e.pair.m = m_;
            e.pair.n = n_;
            e.zeta = zeta;
            e.vartheta = vartheta;
            PrecisionScope scope(required_bits(cfg.spectrum, e.pair));
            RenormParams<BigFloat> rp = make_renorm_params(cfg, 0, e, BigFloat(mu));
            Vec3<BigFloat> vb{BigFloat(v[0]), BigFloat(v[1]), BigFloat(v[2])};
            Vec3<BigFloat> out =
                direct ? renorm_direct(cfg, rp, vb) : renorm_closed_form(cfg, rp, vb);
            return Triple{to_double(out.x), to_double(out.y), to_double(out.z)};
        },
        py::arg("config"), py::arg("m"), py::arg("n"), py::arg("zeta"), py::arg("vartheta"),
        py::arg("mu"), py::arg("v"), py::arg("direct") = false);
    m.def(
        "convergence_report",
        [](const std::string& json, double xi, double mu, int count, double eps0, int grid,
           const std::string& precision, double offset0, bool cross_check) {
            ModelConfig cfg = model_config_from_json(json);
            SojournSchedule sched = schedule_for(cfg, xi, count, eps0, 10, 4000, offset0);
            ConvergenceOptions opts;
            opts.grid_n = grid;
            opts.cross_check = cross_check;
            opts.precision = precision.empty() ? cfg.precision : precision_from_string(precision);
            return report_to_json(convergence_report(cfg, sched, xi, mu, opts));
        },
        py::arg("config"), py::arg("xi"), py::arg("mu"), py::arg("count") = 2,
        py::arg("eps0") = 0.02, py::arg("grid") = 5, py::arg("precision") = "",
        py::arg("offset0") = 0.02, py::arg("cross_check") = true);
    m.def(
        "certify",
        [](const std::string& json, double xi, double mu, double eps, int count, double eps0,
           int grid, double offset0) {
            ModelConfig cfg = model_config_from_json(json);
            SojournSchedule sched;
            try {
                sched = schedule_for(cfg, xi, count, eps0, 10, 4000, offset0);
            } catch (const SojournNotFound&) {
                sched.target = xi / tau_of(cfg);
            }
            ConvergenceOptions opts;
            opts.grid_n = grid;
            CertReport rep = certify_scheme(cfg, xi, mu, eps, sched, opts);
            return std::make_tuple(cert_report_to_json(rep), certify_exit_code(rep));
        },
        py::arg("config"), py::arg("xi"), py::arg("mu"), py::arg("eps"), py::arg("count") = 2,
        py::arg("eps0") = 0.02, py::arg("grid") = 5, py::arg("offset0") = 0.02);
}
