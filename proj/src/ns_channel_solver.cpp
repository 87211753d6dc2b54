#include "shearlayer/ns_channel_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "shearlayer/errors.hpp"
#include "shearlayer/linear_system.hpp"

namespace shearlayer {
namespace {

constexpr double kPi = 3.14159265358979323846;

// second-order derivative weights along one axis, one-sided at the ends
struct Stencil {
    int n = 0;
    int off[4]{};
    double w[4]{};
};

Stencil d1(int i, int last, double h) {
    Stencil s;
    if (i == 0) {
        s.n = 3;
        s.off[0] = 0; s.off[1] = 1; s.off[2] = 2;
        s.w[0] = -1.5 / h; s.w[1] = 2.0 / h; s.w[2] = -0.5 / h;
    } else if (i == last) {
        s.n = 3;
        s.off[0] = 0; s.off[1] = -1; s.off[2] = -2;
        s.w[0] = 1.5 / h; s.w[1] = -2.0 / h; s.w[2] = 0.5 / h;
    } else {
        s.n = 2;
        s.off[0] = -1; s.off[1] = 1;
        s.w[0] = -0.5 / h; s.w[1] = 0.5 / h;
    }
    return s;
}

Stencil d2(int i, int last, double h) {
    Stencil s;
    const double c = 1.0 / (h * h);
    if (i == 0 || i == last) {
        const int dir = (i == 0) ? 1 : -1;
        s.n = 4;
        for (int k = 0; k < 4; ++k) s.off[k] = dir * k;
        s.w[0] = 2.0 * c; s.w[1] = -5.0 * c; s.w[2] = 4.0 * c; s.w[3] = -c;
    } else {
        s.n = 3;
        s.off[0] = -1; s.off[1] = 0; s.off[2] = 1;
        s.w[0] = c; s.w[1] = -2.0 * c; s.w[2] = c;
    }
    return s;
}

// Discrete steady system on the packed state 3*(j*(nx+1)+i) + {u,v,P}.
// Interior nodes carry the two momentum rows and continuity stabilized by
// beta*(hx^2 P_xx + hy^2 P_yy); walls and inflow are Dirichlet with the
// normal momentum equation closing the pressure; the outflow column carries
// continuity, the tangential stress row, and the normal stress row, all
// referenced to the same stencils applied to the reference fields.
class ChannelSystem {
public:
    ChannelSystem(const PhysicalGrid& g, double eps, double beta,
                  const Field2D& u_ref, const Field2D& v_ref, const Field2D& P_ref,
                  const Field2D* fu, const Field2D* fv,
                  bool walls_from_ref, double wall_u_bottom, double wall_u_top)
        : nx_(g.nx), ny_(g.ny), hx_(g.hx()), hy_(g.hy()), L_(g.L),
          eps_(eps), beta_(beta), fu_(fu), fv_(fv) {
        ref_.resize(static_cast<size_t>(size()));
        for (int j = 0; j <= ny_; ++j)
            for (int i = 0; i <= nx_; ++i) {
                ref_[static_cast<size_t>(idx(i, j, 0))] = u_ref.at(i, j);
                ref_[static_cast<size_t>(idx(i, j, 1))] = v_ref.at(i, j);
                ref_[static_cast<size_t>(idx(i, j, 2))] = P_ref.at(i, j);
            }

        inflow_u_.resize(static_cast<size_t>(ny_) + 1);
        inflow_v_.resize(static_cast<size_t>(ny_) + 1);
        gT_.resize(static_cast<size_t>(ny_) + 1);
        gN_.resize(static_cast<size_t>(ny_) + 1);
        const Stencil sxe = d1(nx_, nx_, hx_);
        for (int j = 0; j <= ny_; ++j) {
            inflow_u_[static_cast<size_t>(j)] = u_ref.at(0, j);
            inflow_v_[static_cast<size_t>(j)] = v_ref.at(0, j);
            const Stencil sy = d1(j, ny_, hy_);
            gT_[static_cast<size_t>(j)] =
                apy(ref_, sy, nx_, j, 0) + apx(ref_, sxe, nx_, j, 1);
            gN_[static_cast<size_t>(j)] =
                P_ref.at(nx_, j) - 2.0 * eps_ * apx(ref_, sxe, nx_, j, 0);
        }

        wall_u_bot_.resize(static_cast<size_t>(nx_) + 1);
        wall_u_top_.resize(static_cast<size_t>(nx_) + 1);
        wall_v_bot_.assign(static_cast<size_t>(nx_) + 1, 0.0);
        wall_v_top_.assign(static_cast<size_t>(nx_) + 1, 0.0);
        for (int i = 0; i <= nx_; ++i) {
            if (walls_from_ref) {
                wall_u_bot_[static_cast<size_t>(i)] = u_ref.at(i, 0);
                wall_u_top_[static_cast<size_t>(i)] = u_ref.at(i, ny_);
                wall_v_bot_[static_cast<size_t>(i)] = v_ref.at(i, 0);
                wall_v_top_[static_cast<size_t>(i)] = v_ref.at(i, ny_);
            } else {
                wall_u_bot_[static_cast<size_t>(i)] = wall_u_bottom;
                wall_u_top_[static_cast<size_t>(i)] = wall_u_top;
            }
        }
    }

    int size() const { return 3 * (nx_ + 1) * (ny_ + 1); }

    std::vector<double> initial_state(double perturbation) const {
        std::vector<double> s = ref_;
        if (perturbation != 0.0) {
            for (int j = 0; j <= ny_; ++j)
                for (int i = 0; i <= nx_; ++i) {
                    const double x = i * hx_, y = j * hy_;
                    const double bump =
                        perturbation * std::sin(kPi * x / L_) * std::sin(kPi * y / 2.0);
                    s[static_cast<size_t>(idx(i, j, 0))] += bump;
                    s[static_cast<size_t>(idx(i, j, 1))] += bump;
                    s[static_cast<size_t>(idx(i, j, 2))] +=
                        perturbation * std::cos(kPi * x / L_) * std::cos(kPi * y / 4.0);
                }
        }
        return s;
    }

    // Residual sup norm at state s; fills F when given, and when sys is
    // given also emits the Jacobian with rhs = -residual.
    double assemble(const std::vector<double>& s, std::vector<double>* F,
                    LinearSystem* sys) const {
        double sup = 0.0;
        for (int j = 0; j <= ny_; ++j)
            for (int i = 0; i <= nx_; ++i) {
                const int ru = idx(i, j, 0), rv = idx(i, j, 1), rp = idx(i, j, 2);
                double Fu, Fv, Fp;
                if (j == 0 || j == ny_) {
                    const size_t si = static_cast<size_t>(i);
                    Fu = s[static_cast<size_t>(ru)] -
                         (j == 0 ? wall_u_bot_[si] : wall_u_top_[si]);
                    Fv = s[static_cast<size_t>(rv)] -
                         (j == 0 ? wall_v_bot_[si] : wall_v_top_[si]);
                    if (sys) {
                        sys->add(ru, ru, 1.0);
                        sys->add(rv, rv, 1.0);
                    }
                    Fp = (i == nx_) ? normal_stress_row(i, j, s, sys, rp)
                                    : momentum_row(1, i, j, s, sys, rp);
                } else if (i == 0) {
                    Fu = s[static_cast<size_t>(ru)] - inflow_u_[static_cast<size_t>(j)];
                    Fv = s[static_cast<size_t>(rv)] - inflow_v_[static_cast<size_t>(j)];
                    if (sys) {
                        sys->add(ru, ru, 1.0);
                        sys->add(rv, rv, 1.0);
                    }
                    Fp = momentum_row(0, i, j, s, sys, rp);
                } else if (i == nx_) {
                    Fu = continuity_row(i, j, false, s, sys, ru);
                    Fv = tangential_stress_row(i, j, s, sys, rv);
                    Fp = normal_stress_row(i, j, s, sys, rp);
                } else {
                    Fu = momentum_row(0, i, j, s, sys, ru);
                    Fv = momentum_row(1, i, j, s, sys, rv);
                    Fp = continuity_row(i, j, true, s, sys, rp);
                }
                if (F) {
                    (*F)[static_cast<size_t>(ru)] = Fu;
                    (*F)[static_cast<size_t>(rv)] = Fv;
                    (*F)[static_cast<size_t>(rp)] = Fp;
                }
                if (sys) {
                    sys->set_rhs(ru, -Fu);
                    sys->set_rhs(rv, -Fv);
                    sys->set_rhs(rp, -Fp);
                }
                sup = std::max({sup, std::fabs(Fu), std::fabs(Fv), std::fabs(Fp)});
            }
        return sup;
    }

    // Dirichlet nodes are snapped to their data after convergence; the sparse
    // solve leaves round-off on those rows and the wall conditions are
    // asserted exact downstream.
    void snap_boundary(std::vector<double>& s) const {
        for (int i = 0; i <= nx_; ++i) {
            const size_t si = static_cast<size_t>(i);
            s[static_cast<size_t>(idx(i, 0, 0))] = wall_u_bot_[si];
            s[static_cast<size_t>(idx(i, 0, 1))] = wall_v_bot_[si];
            s[static_cast<size_t>(idx(i, ny_, 0))] = wall_u_top_[si];
            s[static_cast<size_t>(idx(i, ny_, 1))] = wall_v_top_[si];
        }
        for (int j = 1; j < ny_; ++j) {
            s[static_cast<size_t>(idx(0, j, 0))] = inflow_u_[static_cast<size_t>(j)];
            s[static_cast<size_t>(idx(0, j, 1))] = inflow_v_[static_cast<size_t>(j)];
        }
    }

    void unpack(const std::vector<double>& s, Field2D& u, Field2D& v, Field2D& P) const {
        for (int j = 0; j <= ny_; ++j)
            for (int i = 0; i <= nx_; ++i) {
                u.at(i, j) = s[static_cast<size_t>(idx(i, j, 0))];
                v.at(i, j) = s[static_cast<size_t>(idx(i, j, 1))];
                P.at(i, j) = s[static_cast<size_t>(idx(i, j, 2))];
            }
    }

private:
    int idx(int i, int j, int c) const { return 3 * (j * (nx_ + 1) + i) + c; }

    double apx(const std::vector<double>& s, const Stencil& st, int i, int j, int c) const {
        double a = 0.0;
        for (int k = 0; k < st.n; ++k)
            a += st.w[k] * s[static_cast<size_t>(idx(i + st.off[k], j, c))];
        return a;
    }
    double apy(const std::vector<double>& s, const Stencil& st, int i, int j, int c) const {
        double a = 0.0;
        for (int k = 0; k < st.n; ++k)
            a += st.w[k] * s[static_cast<size_t>(idx(i, j + st.off[k], c))];
        return a;
    }

    double momentum_row(int comp, int i, int j, const std::vector<double>& s,
                        LinearSystem* sys, int row) const {
        const Stencil sx1 = d1(i, nx_, hx_), sy1 = d1(j, ny_, hy_);
        const Stencil sx2 = d2(i, nx_, hx_), sy2 = d2(j, ny_, hy_);
        const double U = s[static_cast<size_t>(idx(i, j, 0))];
        const double V = s[static_cast<size_t>(idx(i, j, 1))];
        const double dxq = apx(s, sx1, i, j, comp);
        const double dyq = apy(s, sy1, i, j, comp);
        const double lap = apx(s, sx2, i, j, comp) + apy(s, sy2, i, j, comp);
        const double dp = (comp == 0) ? apx(s, sx1, i, j, 2) : apy(s, sy1, i, j, 2);
        const double force = (comp == 0) ? (fu_ ? fu_->at(i, j) : 0.0)
                                         : (fv_ ? fv_->at(i, j) : 0.0);
        if (sys) {
            sys->add(row, idx(i, j, 0), dxq);
            sys->add(row, idx(i, j, 1), dyq);
            for (int k = 0; k < sx1.n; ++k)
                sys->add(row, idx(i + sx1.off[k], j, comp), U * sx1.w[k]);
            for (int k = 0; k < sy1.n; ++k)
                sys->add(row, idx(i, j + sy1.off[k], comp), V * sy1.w[k]);
            for (int k = 0; k < sx2.n; ++k)
                sys->add(row, idx(i + sx2.off[k], j, comp), -eps_ * sx2.w[k]);
            for (int k = 0; k < sy2.n; ++k)
                sys->add(row, idx(i, j + sy2.off[k], comp), -eps_ * sy2.w[k]);
            if (comp == 0)
                for (int k = 0; k < sx1.n; ++k)
                    sys->add(row, idx(i + sx1.off[k], j, 2), sx1.w[k]);
            else
                for (int k = 0; k < sy1.n; ++k)
                    sys->add(row, idx(i, j + sy1.off[k], 2), sy1.w[k]);
        }
        return U * dxq + V * dyq + dp - eps_ * lap - force;
    }

    double continuity_row(int i, int j, bool stabilized, const std::vector<double>& s,
                          LinearSystem* sys, int row) const {
        const Stencil sx1 = d1(i, nx_, hx_), sy1 = d1(j, ny_, hy_);
        double Fr = apx(s, sx1, i, j, 0) + apy(s, sy1, i, j, 1);
        if (sys) {
            for (int k = 0; k < sx1.n; ++k)
                sys->add(row, idx(i + sx1.off[k], j, 0), sx1.w[k]);
            for (int k = 0; k < sy1.n; ++k)
                sys->add(row, idx(i, j + sy1.off[k], 1), sy1.w[k]);
        }
        if (stabilized) {
            const Stencil sx2 = d2(i, nx_, hx_), sy2 = d2(j, ny_, hy_);
            const double cx = beta_ * hx_ * hx_, cy = beta_ * hy_ * hy_;
            Fr -= cx * apx(s, sx2, i, j, 2) + cy * apy(s, sy2, i, j, 2);
            if (sys) {
                for (int k = 0; k < sx2.n; ++k)
                    sys->add(row, idx(i + sx2.off[k], j, 2), -cx * sx2.w[k]);
                for (int k = 0; k < sy2.n; ++k)
                    sys->add(row, idx(i, j + sy2.off[k], 2), -cy * sy2.w[k]);
            }
        }
        return Fr;
    }

    double tangential_stress_row(int i, int j, const std::vector<double>& s,
                                 LinearSystem* sys, int row) const {
        const Stencil sx1 = d1(i, nx_, hx_), sy1 = d1(j, ny_, hy_);
        const double Fr =
            apy(s, sy1, i, j, 0) + apx(s, sx1, i, j, 1) - gT_[static_cast<size_t>(j)];
        if (sys) {
            for (int k = 0; k < sy1.n; ++k)
                sys->add(row, idx(i, j + sy1.off[k], 0), sy1.w[k]);
            for (int k = 0; k < sx1.n; ++k)
                sys->add(row, idx(i + sx1.off[k], j, 1), sx1.w[k]);
        }
        return Fr;
    }

    double normal_stress_row(int i, int j, const std::vector<double>& s,
                             LinearSystem* sys, int row) const {
        const Stencil sx1 = d1(i, nx_, hx_);
        const double Fr = s[static_cast<size_t>(idx(i, j, 2))] -
                          2.0 * eps_ * apx(s, sx1, i, j, 0) - gN_[static_cast<size_t>(j)];
        if (sys) {
            sys->add(row, idx(i, j, 2), 1.0);
            for (int k = 0; k < sx1.n; ++k)
                sys->add(row, idx(i + sx1.off[k], j, 0), -2.0 * eps_ * sx1.w[k]);
        }
        return Fr;
    }

    int nx_, ny_;
    double hx_, hy_, L_, eps_, beta_;
    const Field2D* fu_;
    const Field2D* fv_;
    std::vector<double> ref_;
    std::vector<double> inflow_u_, inflow_v_, gT_, gN_;
    std::vector<double> wall_u_bot_, wall_u_top_, wall_v_bot_, wall_v_top_;
};

} // namespace

NSSolution solve_ns(const ShearProfile& profile, const Expansion& e,
                    const NSOptions& options, const BodyForce* body) {
    const PhysicalGrid& g = e.grid;
    if (!(e.epsilon >= options.eps_min)) {
        std::ostringstream os;
        os << "solve_ns: eps = " << e.epsilon << " is below the robustness floor "
           << options.eps_min
           << "; the grid cannot resolve the sqrt(eps) wall layers there. "
              "Raise eps (the rate study operates in [2.5e-3, 1e-2]).";
        throw ConfigError(os.str());
    }
    if (body) {
        if (!body->fu.same_grid(e.u_s) || !body->fv.same_grid(e.u_s) ||
            !body->u_ref.same_grid(e.u_s) || !body->v_ref.same_grid(e.u_s) ||
            !body->P_ref.same_grid(e.u_s))
            throw DimensionError(
                "solve_ns: body-force and reference fields must live on the expansion grid");
    }
    const Field2D& u_ref = body ? body->u_ref : e.u_s;
    const Field2D& v_ref = body ? body->v_ref : e.v_s;
    const Field2D& P_ref = body ? body->P_ref : e.P_s;

    const ChannelSystem sysm(g, e.epsilon, options.stabilization, u_ref, v_ref, P_ref,
                             body ? &body->fu : nullptr, body ? &body->fv : nullptr,
                             body != nullptr, profile.value(0.0), profile.top_speed());

    std::vector<double> s = sysm.initial_state(options.initial_perturbation);
    std::vector<double> F(static_cast<size_t>(sysm.size()));
    std::vector<double> trial(s.size());

    NSSolution out;
    out.grid = g;
    out.epsilon = e.epsilon;

    double r = sysm.assemble(s, &F, nullptr);
    if (!std::isfinite(r))
        throw SolverError("solve_ns: non-finite residual at the initial iterate");
    out.residual_trace.push_back(r);

    int iter = 0;
    while (r > options.tol && iter < options.max_iter) {
        LinearSystem lin(sysm.size());
        lin.reserve(static_cast<size_t>(sysm.size()) * 18);
        sysm.assemble(s, &F, &lin);
        const std::vector<double> d = solve_linear(lin);

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 5; ++halving) {
            for (size_t k = 0; k < s.size(); ++k) trial[k] = s[k] + lambda * d[k];
            const double rt = sysm.assemble(trial, nullptr, nullptr);
            if (std::isfinite(rt) && rt < r) {
                s.swap(trial);
                r = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            std::ostringstream os;
            os << "solve_ns: newton stagnation at iteration " << iter
               << " (no step fraction down to 1/32 reduced the residual " << r
               << "); trace =";
            for (double t : out.residual_trace) os << ' ' << t;
            throw SolverError(os.str());
        }
        out.residual_trace.push_back(r);
        ++iter;
    }

    out.converged = r <= options.tol;
    if (out.converged) sysm.snap_boundary(s);
    out.u = Field2D(g);
    out.v = Field2D(g);
    out.P = Field2D(g);
    sysm.unpack(s, out.u, out.v, out.P);
    return out;
}

RateStudy rate_study(const ShearProfile& profile, const PhysicalGrid& grid,
                     const std::vector<double>& eps_list,
                     const CompositeOptions& composite_options,
                     const NSOptions& ns_options) {
    if (eps_list.empty())
        throw ConfigError("rate_study: the viscosity list must be nonempty");
    for (size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] < eps_list[k - 1]))
            throw ConfigError("rate_study: the viscosity list must be strictly decreasing");

    RateStudy rs;
    rs.profile_label = profile.name();
    {
        std::string bad;
        for (double eps : eps_list)
            if (grid.hy() > std::sqrt(eps) / 4.0) {
                if (!bad.empty()) bad += ", ";
                char b[40];
                std::snprintf(b, sizeof b, "%g", eps);
                bad += b;
            }
        if (!bad.empty())
            rs.profile_label +=
                " [warning: wall layer under-resolved (hy > sqrt(eps)/4) at eps = " + bad + "]";
    }

    const double c0 = profile.coefficient_bound();
    for (double eps : eps_list) {
        const Expansion e = build_expansion(profile, grid, eps, composite_options);
        const NSSolution sol = solve_ns(profile, e, ns_options);
        if (!sol.converged) {
            std::ostringstream os;
            os << "rate_study: the solve at eps = " << eps
               << " did not converge (final residual " << sol.residual_trace.back()
               << " after " << sol.residual_trace.size() - 1 << " accepted steps)";
            throw SolverError(os.str());
        }
        double eu = 0.0, ev = 0.0;
        for (int j = 0; j <= grid.ny; ++j) {
            const double mu = profile.value(grid.y(j));
            for (int i = 0; i <= grid.nx; ++i) {
                eu = std::max(eu, std::fabs(sol.u.at(i, j) - mu));
                ev = std::max(ev, std::fabs(sol.v.at(i, j)));
            }
        }
        rs.epsilon.push_back(eps);
        rs.sup_err_u.push_back(eu);
        rs.sup_err_v.push_back(ev);
        const double denom = c0 * eps;
        if (denom > 0.0)
            rs.constant.push_back((eu + ev) / denom);
        else
            rs.constant.push_back(eu + ev == 0.0
                                      ? 0.0
                                      : std::numeric_limits<double>::infinity());
    }

    // least-squares log-log slope; left at zero when a sup error vanishes
    // (the flat-shear flow is exact and carries no rate)
    bool fit = rs.epsilon.size() >= 2;
    for (size_t k = 0; k < rs.epsilon.size(); ++k)
        if (!(rs.sup_err_u[k] + rs.sup_err_v[k] > 0.0)) fit = false;
    if (fit) {
        const size_t n = rs.epsilon.size();
        double mx = 0.0, my = 0.0;
        std::vector<double> lx(n), ly(n);
        for (size_t k = 0; k < n; ++k) {
            lx[k] = std::log(rs.epsilon[k]);
            ly[k] = std::log(rs.sup_err_u[k] + rs.sup_err_v[k]);
            mx += lx[k];
            my += ly[k];
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        double sxx = 0.0, sxy = 0.0;
        for (size_t k = 0; k < n; ++k) {
            sxx += (lx[k] - mx) * (lx[k] - mx);
            sxy += (lx[k] - mx) * (ly[k] - my);
        }
        rs.fitted_rate = sxy / sxx;
    }
    return rs;
}

std::string rate_csv(const RateStudy& study) {
    std::string out = "epsilon,sup_err_u,sup_err_v,constant\n";
    char line[200];
    for (size_t k = 0; k < study.epsilon.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", study.epsilon[k],
                      study.sup_err_u[k], study.sup_err_v[k], study.constant[k]);
        out += line;
    }
    std::snprintf(line, sizeof line, "# fitted_rate,%.17g\n", study.fitted_rate);
    out += line;
    return out;
}

} // namespace shearlayer
