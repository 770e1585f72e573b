// hetren: renormalisation laboratory for a heterodimensional tangency between
// two saddle-foci.  Subcommands wrap the library; exit codes: 0 success,
// 1 certification/invariant failure, 2 config error, 3 search failure,
// 4 composition failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hetren/certify.hpp"
#include "hetren/cycle_model.hpp"
#include "hetren/henon_limit.hpp"
#include "hetren/renorm.hpp"
#include "hetren/report_io.hpp"
#include "hetren/sojourn.hpp"
#include "svg_chart.hpp"

namespace fs = std::filesystem;
using namespace hetren;

namespace {

constexpr const char* kVersion = "hetren 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSearch = 3;
constexpr int kExitComposition = 4;

struct Manifest {
    std::string command;
    std::string config_path;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<std::string> outputs;
};

void write_file(const fs::path& path, const std::string& content, Manifest* manifest) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (manifest) manifest->outputs.push_back(path.string());
}

void write_manifest(const fs::path& dir, const Manifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["config"] = m.config_path;
    j["parameters"] = m.parameters;
    j["outputs"] = m.outputs;
    j["version"] = kVersion;
    auto now = std::chrono::system_clock::now();
    j["created_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << j.dump(2) << "\n";
}

Precision resolve_precision(const std::string& flag, const ModelConfig& cfg) {
    if (!flag.empty()) return precision_from_string(flag);
    if (const char* env = std::getenv("HETREN_PRECISION")) return precision_from_string(env);
    return cfg.precision;
}

Vec3d parse_vec3(const std::string& s) {
    Vec3d v;
    char comma1 = 0, comma2 = 0;
    std::istringstream is(s);
    if (!(is >> v.x >> comma1 >> v.y >> comma2 >> v.z) || comma1 != ',' || comma2 != ',')
        throw ConfigError("expected 'x,y,z', got '" + s + "'");
    return v;
}

SojournSchedule make_or_load_schedule(const ModelConfig& cfg, const std::string& schedule_path,
                                      double xi, int count, double eps0, long n0, long n_max,
                                      double offset0) {
    if (!schedule_path.empty()) {
        std::ifstream in(schedule_path);
        if (!in) throw ConfigError("cannot open schedule file: " + schedule_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return schedule_from_json(ss.str());
    }
    ScheduleOptions opts;
    opts.n0 = n0;
    opts.n_max = n_max;
    opts.offset0 = offset0;
    return build_schedule(cfg.spectrum.sigma_P, cfg.spectrum.lambda_Q, tau_of(cfg), xi, count,
                          eps0, opts);
}

// ---- check-model ----------------------------------------------------------

struct InvariantLine {
    std::string tag;
    std::string what;
    bool pass;
    std::string detail;
};

int cmd_check_model(const std::string& config_path) {
    ModelConfig cfg = load_model_config(config_path, /*run_validate=*/false);
    std::vector<InvariantLine> lines;

    auto add = [&](const std::string& tag, const std::string& what, bool pass,
                   const std::string& detail) {
        lines.push_back({tag, what, pass, detail});
    };

    double dd = cfg.qp.alpha1 * cfg.qp.beta2 * cfg.qp.gamma3;
    add("e.dd", "alpha1*beta2*gamma3 != 0", dd != 0.0, "value=" + format_double(dd));

    double d = cfg.pq.b1 * cfg.pq.c2 * (cfg.pq.a3 - cfg.pq.a2);
    add("e.d", "b1*c2*(a3-a2) != 0", d != 0.0, "value=" + format_double(d));

    double gt = cfg.qp.gamma3 * (cfg.pq.a3 - cfg.pq.a2);
    add("e.>", "gamma3*(a3-a2) > 0", gt > 0.0, "value=" + format_double(gt));

    bool spec_rng = cfg.spectrum.lambda_P > 0 && cfg.spectrum.lambda_P < 1 &&
                    cfg.spectrum.sigma_P > 1 && cfg.spectrum.lambda_Q > 0 &&
                    cfg.spectrum.lambda_Q < 1 && cfg.spectrum.sigma_Q > 1 &&
                    cfg.spectrum.phi_P != cfg.spectrum.phi_Q;
    add("e.localdynamics", "0 < lambda < 1 < sigma at P and Q, phi_P != phi_Q", spec_rng, "");

    const Hessian3& H2 = cfg.pq.hpq[1];
    bool hs = H2[1][1] == 0.0 && H2[2][2] == 0.0 && H2[1][2] == 0.0 && H2[2][1] == 0.0;
    add("e.hs", "H2 carries no y^2, z^2, yz coefficients", hs, "");

    if (spec_rng) {
        SpectralCheck sc = check_spectral(cfg.spectrum);
        add("e.seis", "0 < (lambda_P^(1/2) sigma_P)^eta sigma_Q < 1", sc.ok,
            "value=" + format_double(sc.value));
    } else {
        add("e.seis", "0 < (lambda_P^(1/2) sigma_P)^eta sigma_Q < 1", false,
            "skipped: spectrum ranges invalid");
    }

    bool structurally_ok = dd != 0.0 && d != 0.0 && spec_rng && hs;
    if (structurally_ok) {
        try {
            DerivativeCheck qt = check_quasi_transverse(cfg);
            add("quasi-transverse", "Df^N1(X)(0,1,0) = (alpha2, beta2, 0)", qt.pass,
                "err=" + format_double(qt.max_abs_err));
        } catch (const Error& e) {
            add("quasi-transverse", "Df^N1(X)(0,1,0) = (alpha2, beta2, 0)", false, e.what());
        }
        try {
            DerivativeCheck tg = check_tangency(cfg);
            add("tangency", "Df^N2(Y) images (a2,0,c2), (a3,0,c2)", tg.pass,
                "err=" + format_double(tg.max_abs_err));
        } catch (const Error& e) {
            add("tangency", "Df^N2(Y) images (a2,0,c2), (a3,0,c2)", false, e.what());
        }
    }

    bool all = true;
    for (const auto& l : lines) {
        std::cout << (l.pass ? "pass" : "FAIL") << "  [" << l.tag << "] " << l.what;
        if (!l.detail.empty()) std::cout << "  (" << l.detail << ")";
        std::cout << "\n";
        all = all && l.pass;
    }
    return all ? kExitOk : kExitInvariant;
}

// ---- search-sojourn --------------------------------------------------------

int cmd_search_sojourn(const std::string& config_path, double xi, double eps, int count,
                       long n_max, long n0, double offset0, const std::string& out_dir) {
    ModelConfig cfg = load_model_config(config_path);
    ScheduleOptions opts;
    opts.n0 = n0;
    opts.n_max = n_max;
    opts.offset0 = offset0;
    SojournSchedule sched = build_schedule(cfg.spectrum.sigma_P, cfg.spectrum.lambda_Q,
                                           tau_of(cfg), xi, count, eps, opts);

    std::cout << "target sigma_P^m lambda_Q^n -> " << format_double(sched.target) << "\n";
    std::cout << "k,m,n,product,slack\n";
    for (size_t k = 0; k < sched.entries.size(); ++k) {
        const auto& e = sched.entries[k];
        std::cout << k << ',' << e.pair.m << ',' << e.pair.n << ','
                  << format_double(e.pair.product) << ',' << format_double(e.pair.slack) << "\n";
    }

    Manifest man;
    man.command = "search-sojourn";
    man.config_path = config_path;
    man.parameters = {{"xi", xi}, {"eps", eps}, {"count", count}, {"n_max", n_max}, {"n0", n0}};
    fs::path dir(out_dir);
    write_file(dir / "schedule.json", schedule_to_json(sched), &man);
    write_manifest(dir, man);
    return kExitOk;
}

// ---- renormalize -----------------------------------------------------------

svg::Series series_of(const RenormReport& rep, const std::string& name, const std::string& color,
                      double RenormRow::*field) {
    svg::Series s{name, color, {}};
    for (const auto& r : rep.rows) s.values.push_back(r.*field);
    return s;
}

int cmd_renormalize(const std::string& config_path, double xi, double mu, int grid,
                    const std::string& precision_flag, const std::string& out_dir,
                    const std::string& schedule_path, int count, double eps0, double fd_step,
                    bool no_cross_check, double offset0, bool measure_c2) {
    ModelConfig cfg = load_model_config(config_path);
    SojournSchedule sched =
        make_or_load_schedule(cfg, schedule_path, xi, count, eps0, 10, 4000, offset0);

    ConvergenceOptions opts;
    opts.grid_n = grid;
    opts.fd_step = fd_step;
    opts.cross_check = !no_cross_check;
    opts.measure_c2 = measure_c2;
    opts.precision = resolve_precision(precision_flag, cfg);

    RenormReport rep = convergence_report(cfg, sched, xi, mu, opts);

    Manifest man;
    man.command = "renormalize";
    man.config_path = config_path;
    man.parameters = {{"xi", xi},       {"mu", mu},
                      {"grid", grid},   {"precision", to_string(opts.precision)},
                      {"count", count}, {"eps0", eps0},
                      {"fd_step", fd_step}};
    fs::path dir(out_dir);
    write_file(dir / "report.csv", report_to_csv(rep), &man);
    std::vector<svg::Series> series = {
        series_of(rep, "sup C0 error", "#1f77b4", &RenormRow::sup_c0_error),
        series_of(rep, "sup C1 error", "#ff7f0e", &RenormRow::sup_c1_error),
        series_of(rep, "cross-check", "#2ca02c", &RenormRow::cross_check_error),
        series_of(rep, "lambda_P^m sigma_P^2m sigma_Q^2n", "#d62728", &RenormRow::landau)};
    write_file(dir / "report.svg", svg::log_chart("renormalised return maps: error vs k", series),
               &man);
    write_manifest(dir, man);

    std::cout << report_to_csv(rep);
    bool flagged = false;
    for (const auto& r : rep.rows) flagged = flagged || !r.precision_ok || !r.error.empty();
    if (flagged)
        std::cerr << "warning: some rows exceeded the scalar's resolving power "
                     "(see precision_ok column)\n";
    return kExitOk;
}

// ---- certify ----------------------------------------------------------------

int cmd_certify(const std::string& config_path, double xi, double mu, double eps,
                const std::string& precision_flag, const std::string& out_dir,
                const std::string& schedule_path, int count, double eps0, int grid,
                double c0_threshold, double offset0) {
    ModelConfig cfg = load_model_config(config_path);
    SojournSchedule sched;
    std::string search_warning;
    try {
        sched = make_or_load_schedule(cfg, schedule_path, xi, count, eps0, 10, 4000, offset0);
    } catch (const SojournNotFound& e) {
        // No adapted schedule for this xi: certify the parameter conditions
        // anyway; the missing convergence run fails the verdict on its own.
        sched.target = xi / tau_of(cfg);
        search_warning = std::string("sojourn search failed: ") + e.what();
    }

    ConvergenceOptions opts;
    opts.grid_n = grid;
    opts.precision = resolve_precision(precision_flag, cfg);

    CertReport rep = certify_scheme(cfg, xi, mu, eps, sched, opts);
    if (!search_warning.empty()) rep.warnings.push_back(search_warning);

    Manifest man;
    man.command = "certify";
    man.config_path = config_path;
    man.parameters = {{"xi", xi},     {"mu", mu},           {"eps", eps},
                      {"grid", grid}, {"count", count},     {"eps0", eps0},
                      {"c0_threshold", c0_threshold},       {"precision", to_string(opts.precision)}};
    fs::path dir(out_dir);
    write_file(dir / "cert.json", cert_report_to_json(rep), &man);
    write_manifest(dir, man);

    std::cout << cert_report_summary(rep);
    return certify_exit_code(rep, c0_threshold);
}

// ---- orbit ------------------------------------------------------------------

int cmd_orbit(const std::string& family, double xi, double mu, double kappa1, double kappa2,
              const std::string& sigma, const std::string& from, long steps, double escape,
              const std::string& out_path) {
    EndoMap map;
    if (family == "G") {
        HenonParams p{xi, mu, kappa1, kappa2};
        p.validate();
        map = p;
    } else if (family == "E") {
        EParams e;
        e.xi = xi;
        e.mu = mu;
        std::istringstream is(sigma);
        char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
        if (!(is >> e.sv.s1 >> c1 >> e.sv.s2 >> c2 >> e.sv.s3 >> c3 >> e.sv.s4 >> c4 >> e.sv.s5))
            throw ConfigError("--sigma expects 's1,s2,s3,s4,s5'");
        e.validate();
        map = e;
    } else {
        throw ConfigError("--family must be G or E");
    }

    Orbit orbit = iterate_endomorphism(map, parse_vec3(from), steps, escape);
    std::string csv = orbit_to_csv(orbit);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv, nullptr);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"renormalisation laboratory for heterodimensional tangencies"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", schedule_path, precision_flag;

    auto* check = app.add_subcommand("check-model", "verify the model invariants of a config");
    check->add_option("config", config_path, "model config JSON")->required();

    double xi = 1.185, eps = 0.01, eps0 = 0.02, fd_step = 1e-5, offset0 = 0.02;
    int count = 3, grid = 11;
    long n_max = 4000, n0 = 10;

    auto* search = app.add_subcommand("search-sojourn", "find sojourn-time pairs (m_k, n_k)");
    search->add_option("config", config_path)->required();
    search->add_option("--xi", xi, "target xi")->capture_default_str();
    search->add_option("--eps", eps, "initial product tolerance eps0")->capture_default_str();
    search->add_option("--count", count, "number of schedule entries")->capture_default_str();
    search->add_option("--n-max", n_max)->capture_default_str();
    search->add_option("--n0", n0)->capture_default_str();
    search->add_option("--offset0", offset0,
                       "geometric argument-offset scale; <= 0 selects 1/(k+2)")
        ->capture_default_str();
    search->add_option("--out-dir", out_dir)->capture_default_str();

    double mu_r = -9.5;
    int count_r = 4;
    bool no_cross = false, measure_c2 = false;
    auto* ren = app.add_subcommand("renormalize", "convergence report for the renormalised returns");
    ren->add_option("config", config_path)->required();
    ren->add_option("--xi", xi)->capture_default_str();
    ren->add_option("--mu", mu_r)->capture_default_str();
    ren->add_option("--grid", grid, "grid points per axis on [-1,1]^3")->capture_default_str();
    ren->add_option("--precision", precision_flag, "native|extended (default: HETREN_PRECISION or config)");
    ren->add_option("--out-dir", out_dir)->capture_default_str();
    ren->add_option("--schedule", schedule_path, "schedule JSON (computed inline if absent)");
    ren->add_option("--count", count_r)->capture_default_str();
    ren->add_option("--eps0", eps0)->capture_default_str();
    ren->add_option("--fd-step", fd_step)->capture_default_str();
    ren->add_option("--offset0", offset0);
    ren->add_flag("--no-cross-check", no_cross, "skip the direct-vs-closed-form column");
    ren->add_flag("--measure-c2", measure_c2, "second-order finite-difference error column");

    double eps_c = 0.2, c0_threshold = 0.05;
    auto* cert = app.add_subcommand("certify", "parameter + convergence certification");
    cert->add_option("config", config_path)->required();
    cert->add_option("--xi", xi)->capture_default_str();
    cert->add_option("--mu", mu_r)->capture_default_str();
    cert->add_option("--eps", eps_c, "half-width of the (-eps,eps)^2 region box")->capture_default_str();
    cert->add_option("--precision", precision_flag);
    cert->add_option("--out-dir", out_dir)->capture_default_str();
    cert->add_option("--schedule", schedule_path);
    cert->add_option("--count", count_r)->capture_default_str();
    cert->add_option("--eps0", eps0)->capture_default_str();
    cert->add_option("--grid", grid)->capture_default_str();
    cert->add_option("--offset0", offset0);
    cert->add_option("--c0-threshold", c0_threshold)->capture_default_str();

    std::string family = "G", sigma = "1,1,0,0,0.1", from = "0,0,0", orbit_out;
    long steps = 100;
    double escape = 1e6, kappa1 = 0, kappa2 = 0;
    auto* orb = app.add_subcommand("orbit", "emit an orbit of the limit family G or E as CSV");
    orb->add_option("--family", family, "G|E")->capture_default_str();
    orb->add_option("--xi", xi)->capture_default_str();
    orb->add_option("--mu", mu_r)->capture_default_str();
    orb->add_option("--kappa1", kappa1)->capture_default_str();
    orb->add_option("--kappa2", kappa2)->capture_default_str();
    orb->add_option("--sigma", sigma, "s1,s2,s3,s4,s5 for family E")->capture_default_str();
    orb->add_option("--from", from, "initial point x,y,z")->capture_default_str();
    orb->add_option("--steps", steps)->capture_default_str();
    orb->add_option("--escape", escape, "escape bound on |coordinate|")->capture_default_str();
    orb->add_option("--out", orbit_out, "output CSV path (stdout if absent)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check_model(config_path);
        if (search->parsed())
            return cmd_search_sojourn(config_path, xi, eps, count, n_max, n0, offset0, out_dir);
        if (ren->parsed())
            return cmd_renormalize(config_path, xi, mu_r, grid, precision_flag, out_dir,
                                   schedule_path, count_r, eps0, fd_step, no_cross, offset0,
                                   measure_c2);
        if (cert->parsed())
            return cmd_certify(config_path, xi, mu_r, eps_c, precision_flag, out_dir,
                               schedule_path, count_r, eps0, grid, c0_threshold, offset0);
        if (orb->parsed())
            return cmd_orbit(family, xi, mu_r, kappa1, kappa2, sigma, from, steps, escape,
                             orbit_out);
    } catch (const SojournNotFound& e) {
        std::cerr << "search failure: " << e.what() << "\n";
        return kExitSearch;
    } catch (const CompositionError& e) {
        std::cerr << "composition failure: " << e.what() << "\n";
        return kExitComposition;
    } catch (const OutOfNeighbourhood& e) {
        std::cerr << "composition failure: " << e.what() << "\n";
        return kExitComposition;
    } catch (const PlateauViolation& e) {
        std::cerr << "composition failure: " << e.what() << "\n";
        return kExitComposition;
    } catch (const DomainEscape& e) {
        std::cerr << "composition failure: " << e.what() << "\n";
        return kExitComposition;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}
