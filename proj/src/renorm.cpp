#include "hetren/renorm.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace hetren {

namespace {

template <typename S>
std::vector<S> grid_axis(int n, double box) {
    std::vector<S> xs;
    if (n <= 1) {
        xs.push_back(S(0));
        return xs;
    }
    for (int i = 0; i < n; ++i)
        xs.push_back(S(-box) + S(2.0 * box) * S(i) / S(n - 1));
    return xs;
}

template <typename S>
double rel_gap(const Vec3<S>& a, const Vec3<S>& b) {
    using std::abs;
    S scale = b.norm_inf();
    if (scale < S(1)) scale = S(1);
    return to_double((a - b).norm_inf() / scale);
}

template <typename S>
RenormRow convergence_row(const ModelConfig& cfg, long k, const ScheduleEntry& entry, double mu,
                          double target, const EParams& ep, const ConvergenceOptions& opts) {
    constexpr bool extended = !std::is_same_v<S, double>;
    RenormRow row;
    row.k = k;
    row.m = entry.pair.m;
    row.n = entry.pair.n;
    const unsigned needed = required_bits(cfg.spectrum, entry.pair);
    unsigned bits = extended ? (opts.forced_bits ? opts.forced_bits : needed) : 53;
    row.precision_bits = bits;
    row.precision_ok = bits >= needed;

    std::optional<PrecisionScope> scope;
    if (extended) scope.emplace(bits);

    Vec3<S> probe{};  // last grid point, for composition error context
    try {
        RenormParams<S> rp = make_renorm_params(cfg, k, entry, S(mu));
        const S h = S(opts.fd_step);
        const std::vector<S> axis = grid_axis<S>(opts.grid_n, opts.box);

        double c0 = 0, c1 = 0, c2 = 0, cross = 0, h1 = 0, h2 = 0, h3 = 0;
        double JE[3][3];
        for (const S& gx : axis)
            for (const S& gy : axis)
                for (const S& gz : axis) {
                    Vec3<S> v{gx, gy, gz};
                    probe = v;
                    ClosedForm<S> cf = renorm_closed_form_detail(cfg, rp, v);
                    Vec3d vd{to_double(gx), to_double(gy), to_double(gz)};
                    Vec3d ev = eval_E(ep, vd);
                    Vec3d cd{to_double(cf.value.x), to_double(cf.value.y), to_double(cf.value.z)};
                    c0 = std::max(c0, (cd - ev).norm_inf());
                    h1 = std::max(h1, std::abs(to_double(cf.hot1)));
                    h2 = std::max(h2, std::abs(to_double(cf.hot2)));
                    h3 = std::max(h3, std::abs(to_double(cf.hot3)));

                    if (opts.cross_check) {
                        Vec3<S> dir = renorm_direct(cfg, rp, v);
                        cross = std::max(cross, rel_gap(dir, cf.value));
                    }

                    // C^1: central differences of the closed form, column by
                    // column, against the analytic Jacobian of E.
                    eval_E_jacobian(ep, vd, JE);
                    Vec3<S> fp[3], fm[3];
                    for (int j = 0; j < 3; ++j) {
                        Vec3<S> vp = v, vm = v;
                        (j == 0 ? vp.x : j == 1 ? vp.y : vp.z) += h;
                        (j == 0 ? vm.x : j == 1 ? vm.y : vm.z) -= h;
                        fp[j] = renorm_closed_form(cfg, rp, vp);
                        fm[j] = renorm_closed_form(cfg, rp, vm);
                        Vec3<S> col = (S(1) / (S(2) * h)) * (fp[j] - fm[j]);
                        c1 = std::max({c1, std::abs(to_double(col.x) - JE[0][j]),
                                       std::abs(to_double(col.y) - JE[1][j]),
                                       std::abs(to_double(col.z) - JE[2][j])});
                    }

                    if (opts.measure_c2) {
                        // Diagonal second differences reuse the C^1 stencil.
                        const SigmaVector& sv = ep.sv;
                        double D2E[3][3] = {{2 * sv.s3, sv.s4, 0}, {sv.s4, 2 * sv.s2, 0}, {0, 0, 0}};
                        for (int j = 0; j < 3; ++j) {
                            Vec3<S> dd = (S(1) / (h * h)) * (fp[j] - S(2) * cf.value + fm[j]);
                            c2 = std::max(c2, std::abs(to_double(dd.y) - D2E[j][j]));
                            c2 = std::max({c2, std::abs(to_double(dd.x)), std::abs(to_double(dd.z))});
                        }
                        // Mixed xy term (the only nonzero off-diagonal of E).
                        Vec3<S> vpp = v, vpm = v, vmp = v, vmm = v;
                        vpp.x += h; vpp.y += h;
                        vpm.x += h; vpm.y -= h;
                        vmp.x -= h; vmp.y += h;
                        vmm.x -= h; vmm.y -= h;
                        Vec3<S> mixed = (S(1) / (S(4) * h * h)) *
                                        ((renorm_closed_form(cfg, rp, vpp) - renorm_closed_form(cfg, rp, vpm)) -
                                         (renorm_closed_form(cfg, rp, vmp) - renorm_closed_form(cfg, rp, vmm)));
                        c2 = std::max(c2, std::abs(to_double(mixed.y) - D2E[0][1]));
                    }
                }

        row.sup_c0_error = c0;
        row.sup_c1_error = c1;
        if (opts.measure_c2) row.sup_c2_error = c2;
        if (opts.cross_check) row.cross_check_error = cross;
        row.hot1 = h1;
        row.hot2 = h2;
        row.hot3 = h3;

        using std::abs;
        row.prod_target_gap = to_double(abs(rp.pw.p1 - S(target)));
        row.landau = to_double(rp.pw.landau);
    } catch (const PrecisionError& e) {
        row.precision_ok = false;
        row.error = e.what();
        row.sup_c0_error = row.sup_c1_error = std::numeric_limits<double>::quiet_NaN();
        row.landau = row.prod_target_gap = std::numeric_limits<double>::quiet_NaN();
        row.hot1 = row.hot2 = row.hot3 = std::numeric_limits<double>::quiet_NaN();
    } catch (const Error& e) {
        if (!row.precision_ok) {
            // On an under-resolved row a tripped guard is the precision
            // symptom itself (rounding noise blown up past a plateau);
            // record it instead of aborting the report.
            row.error = e.what();
            row.sup_c0_error = row.sup_c1_error = std::numeric_limits<double>::quiet_NaN();
            row.landau = row.prod_target_gap = std::numeric_limits<double>::quiet_NaN();
            row.hot1 = row.hot2 = row.hot3 = std::numeric_limits<double>::quiet_NaN();
            return row;
        }
        std::ostringstream msg;
        msg << e.what() << " [k=" << k << ", grid point (" << to_double(probe.x) << ", "
            << to_double(probe.y) << ", " << to_double(probe.z) << ")]";
        throw CompositionError(msg.str(), k, to_double(probe.x), to_double(probe.y),
                               to_double(probe.z));
    }
    return row;
}

}  // namespace

RenormReport convergence_report(const ModelConfig& cfg, const SojournSchedule& sched, double xi,
                                double mu, const ConvergenceOptions& opts) {
    cfg.validate();
    sched.validate();
    if (opts.grid_n < 1) throw ConfigError("convergence_report: grid_n must be >= 1");
    if (!(opts.fd_step > 0)) throw ConfigError("convergence_report: fd_step must be > 0");

    RenormReport rep;
    rep.xi = xi;
    rep.mu = mu;
    rep.target = xi / tau_of(cfg);
    rep.grid_n = opts.grid_n;
    rep.fd_step = opts.fd_step;
    rep.precision = opts.precision;

    EParams ep = limit_map(cfg, xi, mu);
    for (size_t k = 0; k < sched.entries.size(); ++k) {
        const ScheduleEntry& e = sched.entries[k];
        RenormRow row = opts.precision == Precision::native
                            ? convergence_row<double>(cfg, static_cast<long>(k), e, mu,
                                                      rep.target, ep, opts)
                            : convergence_row<BigFloat>(cfg, static_cast<long>(k), e, mu,
                                                        rep.target, ep, opts);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace hetren
