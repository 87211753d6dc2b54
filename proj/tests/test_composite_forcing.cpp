#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shearlayer/composite_forcing.hpp"
#include "shearlayer/errors.hpp"
#include "shearlayer/operators.hpp"

using namespace shearlayer;

namespace {

ShearProfile bump_profile() { return ShearProfile::couette_plus_bump(2.0, 0.1, 5); }

Expansion bump_expansion(int n, double epsilon = 0.01) {
    return build_expansion(bump_profile(), PhysicalGrid(n, n, 1.0), epsilon);
}

double identity_defect_u(const Expansion& e, const ForcingLedger& led) {
    Field2D defect = momentum_residual_u(e);
    add_scaled(defect, 1.0, led.G1);
    add_scaled(defect, 1.0, led.G2);
    add_scaled(defect, 1.0, led.G3);
    add_scaled(defect, 1.0, led.G4);
    add_scaled(defect, 1.0, led.F_u);
    return defect.max_abs();
}

double identity_defect_v(const Expansion& e, const ForcingLedger& led) {
    Field2D defect = momentum_residual_v(e);
    add_scaled(defect, 1.0, led.G1v);
    add_scaled(defect, 1.0, led.G2v);
    add_scaled(defect, 1.0, led.Gp);
    add_scaled(defect, 1.0, led.F_v);
    return defect.max_abs();
}

} // namespace

TEST_CASE("aligned copies map nodes exactly and reject mismatched grids") {
    const PhysicalGrid g(16, 16, 1.0);
    const double eps = 0.01;
    const BoundaryLayerGrid gb(16, 16, 1.0, 20.0, Orientation::bottom);
    const BoundaryLayerGrid gt(16, 16, 1.0, 20.0, Orientation::top);

    Field2D phys = sample(g, [](double x, double y) { return std::sin(x) + 3.0 * y; });
    for (const auto* lg : {&gb, &gt}) {
        Field2D layer = to_layer(phys, *lg, eps);
        Field2D back = to_physical(layer, g, eps);
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) CHECK(back.at(i, j) == phys.at(i, j));
    }
    // a top copy of a bottom-wall function reverses the rows
    Field2D layer_t = to_layer(phys, gt, eps);
    CHECK(layer_t.at(3, 0) == phys.at(3, 16));

    const BoundaryLayerGrid coarse(16, 32, 1.0, 20.0, Orientation::bottom);
    CHECK_THROWS_AS(to_layer(phys, coarse, eps), DimensionError);
    CHECK_THROWS_AS(to_layer(phys, gb, 0.005), DimensionError);
}

TEST_CASE("configuration validation refuses unusable setups") {
    const ShearProfile p = bump_profile();
    CHECK_THROWS_AS(build_expansion(p, PhysicalGrid(16, 17, 1.0), 0.01), ConfigError);
    CHECK_THROWS_AS(build_expansion(p, PhysicalGrid(16, 16, 1.0), 0.02), ConfigError);
    CHECK_THROWS_AS(build_expansion(p, PhysicalGrid(16, 16, 1.0), -1.0), ConfigError);
    CompositeOptions bad_scale;
    bad_scale.cutoff_scale = 0.0;
    CHECK_THROWS_AS(build_expansion(p, PhysicalGrid(16, 16, 1.0), 0.01, bad_scale), ConfigError);
    CompositeOptions frozen;
    frozen.coefficients.kind = MarchCoefficients::Kind::frozen;
    CHECK_THROWS_AS(build_expansion(p, PhysicalGrid(16, 16, 1.0), 0.01, frozen), ConfigError);
}

TEST_CASE("couette composite collapses to the base flow") {
    const ShearProfile p = ShearProfile::couette(2.0);
    const PhysicalGrid g(24, 24, 1.0);
    Expansion e = build_expansion(p, g, 0.01);

    Field2D base = sample(g, [&](double, double y) { return p.value(y); });
    CHECK((e.u_s - base).max_abs() <= 1e-12);
    CHECK(e.v_s.max_abs() <= 1e-12);
    CHECK(e.P_s.max_abs() <= 1e-12);
    CHECK(e.f2.max_abs() <= 1e-12);

    ForcingLedger led = build_ledger(p, e);
    CHECK(led.F_u.max_abs() <= 1e-12);
    CHECK(led.F_v.max_abs() <= 1e-12);
    CHECK(led.T1.max_abs() <= 1e-12);
    CHECK(led.T2.max_abs() <= 1e-12);
    for (const Field2D* gf : {&led.G1, &led.G2, &led.G3, &led.G4, &led.G1v, &led.G2v, &led.Gp})
        CHECK(gf->max_abs() <= 1e-12);
}

TEST_CASE("momentum residual decomposes exactly into groups and forcing") {
    Expansion e = bump_expansion(48);
    ForcingLedger led = build_ledger(bump_profile(), e);

    const double scale_u = momentum_residual_u(e).max_abs() + led.F_u.max_abs();
    const double scale_v = momentum_residual_v(e).max_abs() + led.F_v.max_abs();
    CHECK(identity_defect_u(e, led) <= 1e-12 * (1.0 + scale_u));
    CHECK(identity_defect_v(e, led) <= 1e-12 * (1.0 + scale_v));

    // the split into main term and residue is exact by construction
    Field2D recon = led.residue_u;
    add_scaled(recon, e.epsilon * e.epsilon, led.T1);
    CHECK((recon - led.F_u).max_abs() <= 1e-15 * (1.0 + led.F_u.max_abs()));
}

TEST_CASE("composite boundary values are exact where the construction pins them") {
    Expansion e = bump_expansion(48);
    const ShearProfile p = bump_profile();
    const PhysicalGrid& g = e.grid;
    const double e32 = e.epsilon * std::sqrt(e.epsilon);

    for (int i = 0; i <= g.nx; ++i) {
        CHECK(std::fabs(e.u_s.at(i, 0)) <= 1e-13);
        CHECK(std::fabs(e.u_s.at(i, g.ny) - p.top_speed()) <= 1e-12);
        CHECK(std::fabs(e.v_s.at(i, 0) + e32 * e.trace_shift_bottom) <= 1e-14);
        CHECK(std::fabs(e.v_s.at(i, g.ny) + e32 * e.trace_shift_top) <= 1e-14);
    }
    // inflow column carries the base flow only
    for (int j = 0; j <= g.ny; ++j)
        CHECK(std::fabs(e.u_s.at(0, j) - p.value(g.y(j))) <= 1e-13);
}

TEST_CASE("second-tier forcing vanishes between the cutoff bands") {
    Expansion e = bump_expansion(48);
    const PhysicalGrid& g = e.grid;
    const double h = g.hy();
    const double lo = 2.0 * e.options.cutoff_scale + 2.0 * h;
    const double hi = channel_height - lo;
    int checked = 0;
    for (int j = 0; j <= g.ny; ++j) {
        if (g.y(j) < lo || g.y(j) > hi) continue;
        for (int i = 0; i <= g.nx; ++i) CHECK(e.f2.at(i, j) == 0.0);
        ++checked;
    }
    CHECK(checked >= 3);
}

namespace {

// largest magnitude over nodes with x >= x_min, skipping every boundary row
// and column; these are the nodes where a flow solver assembles momentum
double interior_noedge_max(const Field2D& f, double x_min) {
    const PhysicalGrid& g = f.physical_grid();
    double m = 0.0;
    for (int j = 1; j + 1 < f.nj(); ++j)
        for (int i = 1; i + 1 < f.ni(); ++i) {
            if (g.x(i) < x_min) continue;
            m = std::max(m, std::fabs(f.at(i, j)));
        }
    return m;
}

double interior_l2(const Field2D& f, double x_min) {
    const PhysicalGrid& g = f.physical_grid();
    double s = 0.0;
    for (int j = 1; j < f.nj() - 1; ++j)
        for (int i = 0; i < f.ni(); ++i) {
            if (g.x(i) < x_min) continue;
            s += f.at(i, j) * f.at(i, j);
        }
    return std::sqrt(s * g.hx() * g.hy());
}

double wall_row_max(const Field2D& f, int j) {
    double m = 0.0;
    for (int i = 0; i < f.ni(); ++i) m = std::max(m, std::fabs(f.at(i, j)));
    return m;
}

struct LevelReadings {
    double g1, g2, g3, g4, g1v, g2v, gp, divm;
    double t2l2, t1, t2full, f2, ve2, ue2, v2p, p2, shift_b;
    double t2wall;
};

LevelReadings measure(int n) {
    Expansion e = bump_expansion(n);
    ForcingLedger led = build_ledger(bump_profile(), e);
    const double xm = e.grid.L / 8.0;
    Field2D div = diff(e.u_s, Axis::x) + diff(e.v_s, Axis::y);
    LevelReadings r;
    r.g1 = interior_noedge_max(led.G1, xm);
    r.g2 = interior_noedge_max(led.G2, xm);
    r.g3 = interior_noedge_max(led.G3, xm);
    r.g4 = interior_noedge_max(led.G4, xm);
    r.g1v = interior_noedge_max(led.G1v, xm);
    r.g2v = interior_noedge_max(led.G2v, xm);
    r.gp = interior_noedge_max(led.Gp, xm);
    r.divm = interior_noedge_max(div, xm);
    r.t2l2 = interior_l2(led.T2, xm);
    r.t1 = led.T1.max_abs();
    r.t2full = led.T2.max_abs();
    r.f2 = e.f2.max_abs();
    r.ve2 = e.e2.v.max_abs();
    r.ue2 = e.e2.u.max_abs();
    r.v2p = e.v2p.max_abs();
    r.p2 = e.e2.P.max_abs();
    r.shift_b = e.trace_shift_bottom;
    r.t2wall = std::max(wall_row_max(led.T2, 0), wall_row_max(led.T2, e.grid.ny));
    return r;
}

} // namespace

TEST_CASE("balance groups shrink under refinement and magnitudes stay pinned") {
    const LevelReadings a = measure(64);
    const LevelReadings b = measure(128);

    // every balance group loses at least most of a factor of four when the
    // grid is halved; the windows brace the measured second-order behaviour
    auto ratio = [](double coarse, double fine) { return coarse / fine; };
    CHECK(ratio(a.g1, b.g1) > 3.2);
    CHECK(ratio(a.g1, b.g1) < 4.4);
    CHECK(ratio(a.g2, b.g2) > 3.0);
    CHECK(ratio(a.g2, b.g2) < 4.3);
    CHECK(ratio(a.g3, b.g3) > 2.7);
    CHECK(ratio(a.g3, b.g3) < 4.2);
    CHECK(ratio(a.g4, b.g4) > 2.4);
    CHECK(ratio(a.g4, b.g4) < 4.2);
    CHECK(ratio(a.g1v, b.g1v) > 3.3);
    CHECK(ratio(a.g1v, b.g1v) < 4.6);
    CHECK(ratio(a.g2v, b.g2v) > 2.7);
    CHECK(ratio(a.g2v, b.g2v) < 4.2);
    CHECK(ratio(a.gp, b.gp) > 2.2);
    CHECK(ratio(a.gp, b.gp) < 3.6);
    CHECK(ratio(a.divm, b.divm) > 2.7);
    CHECK(ratio(a.divm, b.divm) < 4.2);

    // the main terms converge instead of shrinking
    CHECK(ratio(a.t2l2, b.t2l2) > 0.9);
    CHECK(ratio(a.t2l2, b.t2l2) < 1.05);
    CHECK(ratio(a.t1, b.t1) > 0.9);
    CHECK(ratio(a.t1, b.t1) < 1.05);

    // regression pins for the coarse level
    CHECK(a.g4 == doctest::Approx(3.40687e-4).epsilon(0.02));
    CHECK(a.t2l2 == doctest::Approx(6.10696).epsilon(0.01));
    CHECK(a.t1 == doctest::Approx(59.0793).epsilon(0.01));
    CHECK(a.f2 == doctest::Approx(2.45865).epsilon(0.01));
    CHECK(a.ve2 == doctest::Approx(2.08803).epsilon(0.01));
    CHECK(a.ue2 == doctest::Approx(6.32548).epsilon(0.01));
    CHECK(a.v2p == doctest::Approx(13.459).epsilon(0.01));
    CHECK(a.p2 == doctest::Approx(1.57874).epsilon(0.01));

    // the main vertical term vanishes on the walls up to round-off
    CHECK(a.t2wall <= 1e-9 * (1.0 + a.t2full));
    CHECK(b.t2wall <= 1e-9 * (1.0 + b.t2full));

    // the inflow trace artifact is first order in the grid and stays small
    CHECK(std::fabs(a.shift_b) < 0.01);
    CHECK(ratio(std::fabs(a.shift_b), std::fabs(b.shift_b)) > 1.4);
    CHECK(ratio(std::fabs(a.shift_b), std::fabs(b.shift_b)) < 2.6);
}
