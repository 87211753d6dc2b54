#include "shearlayer/estimate_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "shearlayer/operators.hpp"

namespace shearlayer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double yt(double y) { return y * (channel_height - y); }

// First node index inside the measurement window [x_min, L].
int window_start(const Field2D& f, const VerifierConfig& cfg) {
    const double x_min = cfg.x_min_fraction * f.physical_grid().L;
    return static_cast<int>(std::ceil(x_min / f.hx() - 1e-9));
}

// Last node index of the pointwise window [x_min, x_max].
int window_end(const Field2D& f, const VerifierConfig& cfg) {
    const double x_max = cfg.x_max_fraction * f.physical_grid().L;
    return static_cast<int>(std::floor(x_max / f.hx() + 1e-9));
}

// Trapezoid L2 over nodes i >= i0, all rows.
double windowed_l2(const Field2D& f, int i0) {
    const int ni = f.ni(), nj = f.nj();
    double s = 0.0;
    for (int j = 0; j < nj; ++j) {
        const double wj = (j == 0 || j == nj - 1) ? 0.5 : 1.0;
        for (int i = i0; i < ni; ++i) {
            const double wi = (i == i0 || i == ni - 1) ? 0.5 : 1.0;
            s += wi * wj * f.at(i, j) * f.at(i, j);
        }
    }
    return std::sqrt(s * f.hx() * f.h2());
}

double quotient(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs == 0.0 ? 0.0 : kInf;
}

EstimateRecord make_record(const Expansion& e, std::string name, double lhs, double rhs,
                           bool pass_is_ratio_finite = true) {
    EstimateRecord r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = quotient(lhs, rhs);
    r.nx = e.grid.nx;
    r.ny = e.grid.ny;
    r.epsilon = e.epsilon;
    r.pass = pass_is_ratio_finite ? std::isfinite(r.ratio) : (lhs <= rhs);
    return r;
}

void require_same_grid(const Field2D& a, const Field2D& b, const char* what) {
    if (!a.same_grid(b)) throw DimensionError(std::string(what) + ": grids differ");
}

} // namespace

NormSet compute_norms(const Field2D& u, const Field2D& v, const Expansion& e,
                      const VerifierConfig& cfg) {
    require_same_grid(u, e.u_s, "compute_norms");
    require_same_grid(v, e.u_s, "compute_norms");

    const Field2D ux = diff(u, Axis::x), uy = diff(u, Axis::y);
    const Field2D vx = diff(v, Axis::x), vy = diff(v, Axis::y);

    NormSet n;
    const double se = std::sqrt(e.epsilon);
    const double grad_u = std::sqrt(l2_norm(ux) * l2_norm(ux) + l2_norm(uy) * l2_norm(uy));
    const double grad_v = std::sqrt(l2_norm(vx) * l2_norm(vx) + l2_norm(vy) * l2_norm(vy));
    n.E = se * (grad_u + grad_v);

    Field2D p_density(e.grid);
    for (int j = 0; j < u.nj(); ++j)
        for (int i = 0; i < u.ni(); ++i) {
            double w = e.u_s.at(i, j);
            if (w < 0.0) {
                n.degenerate_weight = true;
                w = -w;
            }
            p_density.at(i, j) = w * (vx.at(i, j) * vx.at(i, j) + vy.at(i, j) * vy.at(i, j));
        }
    n.P = std::sqrt(integrate(p_density));

    n.sup_scaled = se * std::max(u.max_abs(), v.max_abs());
    n.X = n.E + std::pow(e.epsilon, 0.5 * cfg.gamma) * n.sup_scaled;
    n.l2_u = l2_norm(u);
    n.l2_v = l2_norm(v);
    return n;
}

std::vector<EstimateRecord> check_profile_estimates(const Expansion& e,
                                                    const ShearProfile& profile,
                                                    const VerifierConfig& cfg) {
    const Field2D& us = e.u_s;
    const Field2D& vs = e.v_s;
    const int nj = us.nj();
    const int i0 = window_start(us, cfg);
    const int i1 = window_end(us, cfg);
    const double eps = e.epsilon, se = std::sqrt(eps);

    const Field2D dxu = diff(us, Axis::x);
    const Field2D dyu = diff(us, Axis::y);
    const Field2D dyv = diff(vs, Axis::y);
    const Field2D vx = diff(vs, Axis::x);
    const Field2D vxx = diff(vs, Axis::x, 2);

    // deviation = |d_x u_s| + |d_y v_s| + |u_s - mu|, bounded two ways at once
    double c_dev = 0.0, c_grad = 0.0, c_v[3] = {0.0, 0.0, 0.0};
    double wall_dev = 0.0, wall_v = 0.0;
    for (int j = 0; j < nj; ++j) {
        const double y = us.y2(j);
        const double w = yt(y);
        const double mu = profile.value(y);
        const double mup = profile.derivative(y, 1);
        const bool wall = (j == 0 || j == nj - 1);
        for (int i = i0; i <= i1; ++i) {
            c_grad = std::max(c_grad, std::fabs(dyu.at(i, j) - mup) / se);
            const double dev = std::fabs(dxu.at(i, j)) + std::fabs(dyv.at(i, j)) +
                               std::fabs(us.at(i, j) - mu);
            const double vl[3] = {std::fabs(vs.at(i, j)), std::fabs(vx.at(i, j)),
                                  std::fabs(vxx.at(i, j))};
            if (wall) {
                wall_dev = std::max(wall_dev, dev);
                wall_v = std::max(wall_v, std::max(vl[0], std::max(vl[1], vl[2])));
                continue;
            }
            c_dev = std::max(c_dev, dev / std::min(se * w, eps));
            for (int l = 0; l < 3; ++l) c_v[l] = std::max(c_v[l], vl[l] / (eps * w));
        }
    }
    // wall rows have exact boundary data; anything left is stencil error
    const double h = std::max(us.hx(), us.h2());
    const double wall_tol = 10.0 * h * h + 1e-12;

    std::vector<EstimateRecord> out;
    out.push_back(make_record(e, "composite_deviation", c_dev, 1.0));
    out.push_back(make_record(e, "composite_deviation_walls", wall_dev, wall_tol, false));
    out.push_back(make_record(e, "shear_gradient_drift", c_grad, 1.0));
    out.push_back(make_record(e, "vertical_flow_weighted_l0", c_v[0], 1.0));
    out.push_back(make_record(e, "vertical_flow_weighted_l1", c_v[1], 1.0));
    out.push_back(make_record(e, "vertical_flow_weighted_l2", c_v[2], 1.0));
    out.push_back(make_record(e, "vertical_flow_walls", wall_v, wall_tol, false));
    return out;
}

std::vector<EstimateRecord> check_T_estimates(const ForcingLedger& ledger,
                                              const ShearProfile& profile,
                                              const Expansion& e,
                                              const VerifierConfig& cfg) {
    const Field2D& T1 = ledger.T1;
    const Field2D& T2 = ledger.T2;
    require_same_grid(T1, e.u_s, "check_T_estimates");
    const int ni = T1.ni(), nj = T1.nj();
    const int i0 = window_start(T1, cfg);
    const double eps = e.epsilon;

    const Field2D dyT1 = diff(T1, Axis::y);
    const Field2D dyT2 = diff(T2, Axis::y);

    // wall rows of T2/yt by the limiting quotient d_y T2 / yt', yt'(0) = 2
    Field2D T2w(e.grid);
    for (int j = 0; j < nj; ++j) {
        const double w = yt(T2.y2(j));
        for (int i = 0; i < ni; ++i) {
            if (j == 0)
                T2w.at(i, j) = 0.5 * dyT2.at(i, j);
            else if (j == nj - 1)
                T2w.at(i, j) = -0.5 * dyT2.at(i, j);
            else
                T2w.at(i, j) = T2.at(i, j) / w;
        }
    }

    const double n_t1 = windowed_l2(T1, i0);
    const double n_t2 = windowed_l2(T2w, i0);
    const double n_dt1 = windowed_l2(dyT1, i0);
    const double n_dt2 = windowed_l2(dyT2, i0);
    const double c0 = profile.coefficient_bound();
    const double h = std::max(T1.hx(), T1.h2());
    if (c0 <= 0.0 && std::max(std::max(n_t1, n_t2), std::max(n_dt1, n_dt2)) > 10.0 * h * h)
        throw Error("check_T_estimates: coefficient bound is zero but the main terms are not");

    const double q = std::pow(eps, 0.25);
    std::vector<EstimateRecord> out;
    out.push_back(make_record(e, "main_forcing_l2", n_t1, c0));
    out.push_back(make_record(e, "main_forcing_weighted_l2", n_t2, c0));
    out.push_back(make_record(e, "main_forcing_grad_l2", q * n_dt1, c0));
    out.push_back(make_record(e, "main_forcing_weighted_grad_l2", q * n_dt2, c0));
    if (c0 <= 0.0)
        for (auto& r : out) {
            // flat profile: the norms are discretization dust, not a quotient
            r.ratio = 0.0;
            r.pass = true;
        }

    double wall_t2 = 0.0;
    for (int i = 0; i < ni; ++i)
        wall_t2 = std::max(wall_t2, std::max(std::fabs(T2.at(i, 0)), std::fabs(T2.at(i, nj - 1))));
    out.push_back(make_record(e, "main_forcing_wall_rows", wall_t2,
                              1e-6 * T2.max_abs() + 10.0 * h * h, false));
    return out;
}

RemainderDiagnostics remainder_diagnostics(const NSSolution& ns, const Expansion& e,
                                           const ForcingLedger& ledger,
                                           const VerifierConfig& cfg) {
    if (!ns.converged)
        throw SolverError("remainder_diagnostics: flow solution did not converge");
    require_same_grid(ns.u, e.u_s, "remainder_diagnostics");
    if (ns.epsilon != e.epsilon)
        throw DimensionError("remainder_diagnostics: flow and expansion disagree on epsilon");

    const double eps = e.epsilon;
    const double scale = std::pow(eps, 1.5 + cfg.gamma);

    RemainderDiagnostics d;
    d.u = Field2D(e.grid);
    d.v = Field2D(e.grid);
    d.P = Field2D(e.grid);
    for (size_t n = 0; n < d.u.data().size(); ++n) {
        d.u.data()[n] = (ns.u.data()[n] - e.u_s.data()[n]) / scale;
        d.v.data()[n] = (ns.v.data()[n] - e.v_s.data()[n]) / scale;
        d.P.data()[n] = (ns.P.data()[n] - e.P_s.data()[n]) / scale;
    }
    d.norms = compute_norms(d.u, d.v, e, cfg);

    // The composite's momentum defect enters the remainder equations divided
    // by the remainder's own scale; the remainder transport enters times it.
    const Field2D ux = diff(d.u, Axis::x), uy = diff(d.u, Axis::y);
    const Field2D vx = diff(d.v, Axis::x), vy = diff(d.v, Axis::y);
    Field2D f(e.grid), g(e.grid);
    for (int j = 0; j < f.nj(); ++j)
        for (int i = 0; i < f.ni(); ++i) {
            const double uu = d.u.at(i, j), vv = d.v.at(i, j);
            f.at(i, j) = -scale * (uu * ux.at(i, j) + vv * uy.at(i, j)) -
                         ledger.F_u.at(i, j) / scale;
            g.at(i, j) = -scale * (uu * vx.at(i, j) + vv * vy.at(i, j)) -
                         ledger.F_v.at(i, j) / scale;
        }

    d.R1 = integrate(multiply(f, d.u)) + eps * integrate(multiply(g, d.v));
    d.R2 = -integrate(multiply(f, vy)) + integrate(multiply(g, vx));
    const double nf = l2_norm(f), ng = l2_norm(g);
    d.fg_l2sq = nf * nf + ng * ng;

    const double rhs = d.R1 + d.R2 + std::pow(eps, 0.5 * cfg.gamma) * d.fg_l2sq;
    d.master_constant = quotient(d.norms.X * d.norms.X, std::fabs(rhs));

    Field2D trace_density(e.grid);
    for (int j = 0; j < f.nj(); ++j)
        for (int i = 0; i < f.ni(); ++i)
            trace_density.at(i, j) = std::fabs(e.u_s.at(i, j)) *
                                     (d.u.at(i, j) * d.u.at(i, j) + d.v.at(i, j) * d.v.at(i, j));
    d.outflow_trace = std::sqrt(integrate(trace_density, Region::line_x(e.grid.L)));

    d.records.push_back(make_record(e, "remainder_energy_pairing", d.R1, 1.0));
    d.records.push_back(make_record(e, "remainder_dual_pairing", d.R2, 1.0));
    d.records.push_back(make_record(e, "remainder_forcing_l2sq", d.fg_l2sq, 1.0));
    {
        EstimateRecord r = make_record(e, "remainder_master_constant",
                                       d.norms.X * d.norms.X, std::fabs(rhs));
        r.pass = std::isfinite(r.ratio);
        d.records.push_back(r);
    }
    d.records.push_back(make_record(e, "remainder_outflow_trace", d.outflow_trace, 1.0));
    return d;
}

EstimateRecord stability_verdict(const std::vector<EstimateRecord>& sweep,
                                 const std::string& name, double factor) {
    double lo = kInf, hi = 0.0;
    int found = 0;
    for (const auto& r : sweep) {
        if (r.name != name) continue;
        ++found;
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    if (found == 0) throw ConfigError("stability_verdict: no records named " + name);

    // constants this small are roundoff left over from identically-zero
    // estimates; drift between two kinds of dust is not instability
    constexpr double kDust = 1e-9;
    EstimateRecord v;
    v.name = name + ".stability";
    v.lhs = hi;
    v.rhs = lo;
    if (hi <= kDust) {
        v.ratio = 1.0;
        v.pass = true;
    } else if (lo <= kDust || !std::isfinite(hi)) {
        v.ratio = kInf;
        v.pass = false;
    } else {
        v.ratio = hi / lo;
        v.pass = v.ratio <= factor;
    }
    return v;
}

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string report_csv(const std::vector<EstimateRecord>& records) {
    std::string out = "name,lhs,rhs,ratio,nx,ny,epsilon,pass\n";
    for (const auto& r : records) {
        out += r.name + ',' + num(r.lhs) + ',' + num(r.rhs) + ',' + num(r.ratio) + ',' +
               std::to_string(r.nx) + ',' + std::to_string(r.ny) + ',' + num(r.epsilon) + ',' +
               (r.pass ? '1' : '0');
        out += '\n';
    }
    return out;
}

std::string report_summary(const std::vector<EstimateRecord>& records) {
    std::string out;
    size_t passed = 0;
    for (const auto& r : records) {
        char line[256];
        std::snprintf(line, sizeof line, "%-4s %-36s constant=%-12.5g grid=%dx%d eps=%g\n",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.ratio, r.nx, r.ny, r.epsilon);
        out += line;
        if (r.pass) ++passed;
    }
    char tail[96];
    std::snprintf(tail, sizeof tail, "%zu of %zu checks passed\n", passed, records.size());
    out += tail;
    return out;
}

} // namespace shearlayer
