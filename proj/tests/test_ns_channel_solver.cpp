#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "shearlayer/composite_forcing.hpp"
#include "shearlayer/errors.hpp"
#include "shearlayer/estimate_verifier.hpp"
#include "shearlayer/ns_channel_solver.hpp"
#include "shearlayer/operators.hpp"

using namespace shearlayer;

namespace {

ShearProfile bump_profile() { return ShearProfile::couette_plus_bump(2.0, 0.1, 5); }

double sup_diff_from(const Field2D& u, const ShearProfile& mu) {
    double m = 0.0;
    for (int j = 0; j < u.nj(); ++j) {
        const double base = mu.value(u.y2(j));
        for (int i = 0; i < u.ni(); ++i) m = std::max(m, std::fabs(u.at(i, j) - base));
    }
    return m;
}

double sup_diff(const Field2D& a, const Field2D& b) {
    return (a - b).max_abs();
}

// analytic divergence-free flow used by the manufactured-forcing cases:
// stream function y^2/2 + a g(x) w(y) with w = y^2 (2-y)^2, so the no-slip
// values 0 and 2 hold at the walls for any g
struct Manufactured {
    double L = 1.0;
    double eps = 0.01;
    double a = 0.08;
    double b = 0.3;

    double g(double x) const { return std::sin(2.0 * x / L + 1.0 / 3.0); }
    double g1(double x) const { return (2.0 / L) * std::cos(2.0 * x / L + 1.0 / 3.0); }
    double g2(double x) const { return -(4.0 / (L * L)) * std::sin(2.0 * x / L + 1.0 / 3.0); }
    double g3(double x) const { return -(8.0 / (L * L * L)) * std::cos(2.0 * x / L + 1.0 / 3.0); }
    static double w(double y) { return ((y - 4.0) * y + 4.0) * y * y; }
    static double w1(double y) { return ((4.0 * y - 12.0) * y + 8.0) * y; }
    static double w2(double y) { return (12.0 * y - 24.0) * y + 8.0; }
    static double w3(double y) { return 24.0 * y - 24.0; }

    double u(double x, double y) const { return y + a * g(x) * w1(y); }
    double v(double x, double y) const { return -a * g1(x) * w(y); }
    double P(double x, double y) const { return b * std::sin(x / L + y / 2.0 + 0.2); }

    double fu(double x, double y) const {
        const double ux = a * g1(x) * w1(y);
        const double uy = 1.0 + a * g(x) * w2(y);
        const double uxx = a * g2(x) * w1(y);
        const double uyy = a * g(x) * w3(y);
        const double Px = (b / L) * std::cos(x / L + y / 2.0 + 0.2);
        return u(x, y) * ux + v(x, y) * uy + Px - eps * (uxx + uyy);
    }
    double fv(double x, double y) const {
        const double vx = -a * g2(x) * w(y);
        const double vy = -a * g1(x) * w1(y);
        const double vxx = -a * g3(x) * w(y);
        const double vyy = -a * g1(x) * w2(y);
        const double Py = (b / 2.0) * std::cos(x / L + y / 2.0 + 0.2);
        return u(x, y) * vx + v(x, y) * vy + Py - eps * (vxx + vyy);
    }
};

BodyForce manufactured_body(const PhysicalGrid& g, const Manufactured& m) {
    BodyForce body;
    body.fu = sample(g, [&](double x, double y) { return m.fu(x, y); });
    body.fv = sample(g, [&](double x, double y) { return m.fv(x, y); });
    body.u_ref = sample(g, [&](double x, double y) { return m.u(x, y); });
    body.v_ref = sample(g, [&](double x, double y) { return m.v(x, y); });
    body.P_ref = sample(g, [&](double x, double y) { return m.P(x, y); });
    return body;
}

double manufactured_error(int n, const Manufactured& m) {
    const PhysicalGrid g(n, n, m.L);
    const ShearProfile profile = ShearProfile::couette(2.0);
    const Expansion e = build_expansion(profile, g, m.eps);
    const BodyForce body = manufactured_body(g, m);
    const NSSolution sol = solve_ns(profile, e, NSOptions{}, &body);
    REQUIRE(sol.converged);
    const double eu = sup_diff(sol.u, body.u_ref);
    const double ev = sup_diff(sol.v, body.v_ref);
    return eu + ev;
}

} // namespace

TEST_CASE("plane couette is an exact fixed point") {
    const ShearProfile profile = ShearProfile::couette(2.0);
    const PhysicalGrid g(64, 64, 1.0);
    const Expansion e = build_expansion(profile, g, 0.01);

    const NSSolution sol = solve_ns(profile, e);
    CHECK(sol.converged);
    // the exact flow zeroes every row of the discrete system, so not a single
    // newton step is taken
    CHECK(sol.residual_trace.size() == 1);
    CHECK(sol.residual_trace[0] <= 1e-12);
    CHECK(sup_diff_from(sol.u, profile) <= 1e-10);
    CHECK(sol.v.max_abs() <= 1e-10);
    CHECK(sol.P.max_abs() <= 1e-10);
    for (int i = 0; i <= g.nx; ++i) {
        CHECK(sol.u.at(i, 0) == 0.0);
        CHECK(sol.u.at(i, g.ny) == 2.0);
        CHECK(sol.v.at(i, 0) == 0.0);
        CHECK(sol.v.at(i, g.ny) == 0.0);
    }
}

TEST_CASE("newton reconverges couette from a perturbed start") {
    const ShearProfile profile = ShearProfile::couette(2.0);
    const PhysicalGrid g(64, 64, 1.0);
    const Expansion e = build_expansion(profile, g, 0.01);

    NSOptions opt;
    opt.tol = 1e-12;
    opt.initial_perturbation = 0.2;
    const NSSolution sol = solve_ns(profile, e, opt);
    CHECK(sol.converged);
    REQUIRE(sol.residual_trace.size() >= 2);
    CHECK(sol.residual_trace.front() > 0.1);
    CHECK(sol.residual_trace.back() <= 1e-12);

    CHECK(sup_diff_from(sol.u, profile) <= 1e-10);
    CHECK(sol.v.max_abs() <= 1e-10);
    CHECK(sol.P.max_abs() <= 1e-9);

    // wall motion enters through the boundary data only: the perturbed and
    // unperturbed starts give the same flow
    const NSSolution plain = solve_ns(profile, e);
    CHECK(sup_diff(sol.u, plain.u) <= 1e-9);
    CHECK(sup_diff(sol.v, plain.v) <= 1e-9);
    CHECK(sup_diff(sol.P, plain.P) <= 1e-8);

    // quadratic tail: once the residual is below 1e-3, the next accepted
    // residual is bounded by a finite multiple of its square
    bool tail_seen = false;
    for (size_t k = 0; k + 1 < sol.residual_trace.size(); ++k) {
        const double rk = sol.residual_trace[k];
        const double rn = sol.residual_trace[k + 1];
        if (rk <= 1e-3 && rk > 0.0) {
            tail_seen = true;
            CHECK(rn / (rk * rk) <= 1e6);
        }
    }
    CHECK(tail_seen);
}

TEST_CASE("manufactured forcing is recovered at second order") {
    Manufactured m;
    const double coarse = manufactured_error(48, m);
    const double fine = manufactured_error(96, m);
    CHECK(fine <= 2e-3);
    const double ratio = coarse / fine;
    CHECK(ratio >= 3.2);
    CHECK(ratio <= 5.2);
}

TEST_CASE("bump flow converges and feeds the remainder diagnostics") {
    const ShearProfile profile = bump_profile();
    const PhysicalGrid g(64, 64, 1.0);
    const Expansion e = build_expansion(profile, g, 0.01);

    const NSSolution sol = solve_ns(profile, e);
    REQUIRE(sol.converged);
    CHECK(sol.residual_trace.size() <= 10);

    for (int i = 0; i <= g.nx; ++i) {
        CHECK(sol.u.at(i, 0) == profile.value(0.0));
        CHECK(sol.u.at(i, g.ny) == profile.top_speed());
        CHECK(sol.v.at(i, 0) == 0.0);
        CHECK(sol.v.at(i, g.ny) == 0.0);
    }
    for (int j = 1; j < g.ny; ++j) {
        CHECK(sol.u.at(0, j) == e.u_s.at(0, j));
        CHECK(sol.v.at(0, j) == e.v_s.at(0, j));
    }

    // interior divergence equals the pressure-stabilization term and is O(h^2)
    const Field2D div = diff(sol.u, Axis::x) + diff(sol.v, Axis::y);
    const Field2D Pxx = diff(sol.P, Axis::x, 2);
    const Field2D Pyy = diff(sol.P, Axis::y, 2);
    const double hx2 = g.hx() * g.hx(), hy2 = g.hy() * g.hy();
    double identity = 0.0, div_max = 0.0;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double stab = 0.1 * (hx2 * Pxx.at(i, j) + hy2 * Pyy.at(i, j));
            identity = std::max(identity, std::fabs(div.at(i, j) - stab));
            div_max = std::max(div_max, std::fabs(div.at(i, j)));
        }
    CHECK(identity <= 1e-7);
    CHECK(div_max <= 10.0 * (hx2 + hy2));

    // the solve moves off the composite, but only by a remainder-sized amount
    const double moved = sup_diff(sol.u, e.u_s);
    CHECK(moved > 1e-12);
    CHECK(moved <= 0.05);

    const ForcingLedger led = build_ledger(profile, e);
    const RemainderDiagnostics d = remainder_diagnostics(sol, e, led);
    CHECK(std::isfinite(d.R1));
    CHECK(std::isfinite(d.R2));
    CHECK(std::isfinite(d.fg_l2sq));
    CHECK(std::isfinite(d.master_constant));
    CHECK(d.norms.X > 0.0);
    CHECK(d.fg_l2sq > 0.0);
}

TEST_CASE("floor, iteration cap, and grid mismatches are refused") {
    const ShearProfile profile = ShearProfile::couette(2.0);
    const PhysicalGrid g(16, 16, 1.0);
    const Expansion e = build_expansion(profile, g, 0.01);

    NSOptions floor_opt;
    floor_opt.eps_min = 0.5;
    try {
        solve_ns(profile, e, floor_opt);
        FAIL("the floor refusal did not fire");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("robustness floor") != std::string::npos);
    }

    NSOptions capped;
    capped.max_iter = 0;
    capped.initial_perturbation = 0.1;
    const NSSolution stuck = solve_ns(profile, e, capped);
    CHECK_FALSE(stuck.converged);
    CHECK(stuck.residual_trace.size() == 1);
    CHECK(stuck.residual_trace[0] > capped.tol);

    CHECK_THROWS_AS(rate_study(profile, g, {0.01}, CompositeOptions{}, capped), SolverError);

    const PhysicalGrid other(32, 32, 1.0);
    Manufactured m;
    const BodyForce wrong = manufactured_body(other, m);
    CHECK_THROWS_AS(solve_ns(profile, e, NSOptions{}, &wrong), DimensionError);
}

TEST_CASE("rate study measures the linear viscosity rate") {
    const ShearProfile profile = bump_profile();
    const PhysicalGrid g(128, 128, 1.0);

    const RateStudy rs = rate_study(profile, g, {0.01, 0.005});
    REQUIRE(rs.epsilon.size() == 2);
    CHECK(rs.epsilon[0] > rs.epsilon[1]);
    CHECK(rs.profile_label.find("under-resolved") == std::string::npos);

    for (size_t k = 0; k < rs.epsilon.size(); ++k) {
        CHECK(rs.sup_err_u[k] > 0.0);
        CHECK(rs.sup_err_v[k] > 0.0);
        CHECK(std::isfinite(rs.constant[k]));
        CHECK(rs.constant[k] > 0.0);
    }
    // the sup error is linear in the viscosity, so the normalized constant is
    // stable across the sweep
    const double drift = rs.constant[0] / rs.constant[1];
    CHECK(drift >= 0.5);
    CHECK(drift <= 2.0);
    CHECK(rs.fitted_rate >= 0.9);
    CHECK(rs.fitted_rate <= 1.3);

    const std::string csv = rate_csv(rs);
    CHECK(csv.rfind("epsilon,sup_err_u,sup_err_v,constant\n", 0) == 0);
    const std::string tag = "# fitted_rate,";
    const size_t pos = csv.find(tag);
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(csv.substr(pos + tag.size())) == rs.fitted_rate);
    int rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 4);
}

TEST_CASE("flat shear study is exact and warns when the layer is under-resolved") {
    const ShearProfile profile = ShearProfile::couette(2.0);
    const PhysicalGrid g(24, 24, 1.0);

    const RateStudy rs = rate_study(profile, g, {0.01});
    CHECK(rs.profile_label.find("under-resolved") != std::string::npos);
    REQUIRE(rs.epsilon.size() == 1);
    CHECK(rs.sup_err_u[0] == 0.0);
    CHECK(rs.sup_err_v[0] == 0.0);
    CHECK(rs.constant[0] == 0.0);
    CHECK(rs.fitted_rate == 0.0);
}
