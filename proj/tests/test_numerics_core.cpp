#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "shearlayer/errors.hpp"
#include "shearlayer/field.hpp"
#include "shearlayer/linear_system.hpp"
#include "shearlayer/operators.hpp"

using namespace shearlayer;

namespace {

double max_err(const Field2D& a, const Field2D& b) {
    Field2D d = a - b;
    return d.max_abs();
}

} // namespace

TEST_CASE("derivatives are exact for polynomials of degree two") {
    PhysicalGrid g(16, 16, 0.5);
    Field2D f = sample(g, [](double x, double y) { return 1.5 + 2.0 * x - y + 3.0 * x * x + x * y - 0.5 * y * y; });
    Field2D fx = sample(g, [](double x, double y) { return 2.0 + 6.0 * x + y; });
    Field2D fy = sample(g, [](double x, double y) { return -1.0 + x - y; });
    Field2D fxx = sample(g, [](double, double) { return 6.0; });
    Field2D fyy = sample(g, [](double, double) { return -1.0; });
    CHECK(max_err(diff(f, Axis::x), fx) < 1e-11);
    CHECK(max_err(diff(f, Axis::y), fy) < 1e-11);
    CHECK(max_err(diff(f, Axis::x, 2), fxx) < 1e-9);
    CHECK(max_err(diff(f, Axis::y, 2), fyy) < 1e-9);
}

TEST_CASE("y-derivative error of sin(y) drops by about 4x when ny doubles") {
    auto run = [](int ny) {
        PhysicalGrid g(8, ny, 0.5);
        Field2D f = sample(g, [](double, double y) { return std::sin(y); });
        Field2D ref = sample(g, [](double, double y) { return std::cos(y); });
        return max_err(diff(f, Axis::y), ref);
    };
    double e64 = run(64), e128 = run(128);
    double ratio = e64 / e128;
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);
}

TEST_CASE("second-derivative and x-derivative two-grid orders land near 2") {
    auto run = [](int n, Axis ax, int order) {
        PhysicalGrid g(n, n, 1.0);
        Field2D f = sample(g, [](double x, double y) { return std::exp(x) * std::sin(y); });
        Field2D ref = (ax == Axis::x && order == 1)
            ? sample(g, [](double x, double y) { return std::exp(x) * std::sin(y); })
            : sample(g, [](double x, double y) { return -std::exp(x) * std::sin(y); });
        if (ax == Axis::x && order == 2) ref = sample(g, [](double x, double y) { return std::exp(x) * std::sin(y); });
        return max_err(diff(f, ax, order), ref);
    };
    double o1 = std::log2(run(64, Axis::x, 1) / run(128, Axis::x, 1));
    double o2 = std::log2(run(64, Axis::y, 2) / run(128, Axis::y, 2));
    CHECK(o1 > 1.8);
    CHECK(o1 < 2.2);
    CHECK(o2 > 1.8);
    CHECK(o2 < 2.2);
}

TEST_CASE("repeated first derivatives stay second order up to the edges") {
    // the edge stencil carries the same leading error as the central one, so
    // diff(diff(f)) must not degrade at the node next to the boundary
    auto run = [](int n) {
        PhysicalGrid g(n, n, 1.0);
        Field2D f = sample(g, [](double x, double y) { return std::exp(x) * std::sin(x + 0.3 * y); });
        Field2D dd = diff(diff(f, Axis::x), Axis::x);
        // d2/dx2 of e^x sin(x+0.3y) is 2 e^x cos(x+0.3y)
        double worst = 0.0;
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                double x = g.x(i), y = g.y(j);
                double exact = std::exp(x) * 2.0 * std::cos(x + 0.3 * y);
                worst = std::max(worst, std::fabs(dd.at(i, j) - exact));
            }
        return worst;
    };
    double e64 = run(64), e128 = run(128);
    double ratio = e64 / e128;
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
}

TEST_CASE("diff is linear") {
    PhysicalGrid g(12, 12, 1.0);
    Field2D f = sample(g, [](double x, double y) { return std::sin(3 * x + y); });
    Field2D h = sample(g, [](double x, double y) { return std::cos(x - 2 * y); });
    Field2D lhs = diff(2.0 * f + (-3.0) * h, Axis::y);
    Field2D rhs = 2.0 * diff(f, Axis::y) + (-3.0) * diff(h, Axis::y);
    CHECK(max_err(lhs, rhs) < 1e-12);
}

TEST_CASE("trapezoid quadrature: constants and lines") {
    PhysicalGrid g(32, 32, 1.0);
    Field2D one = sample(g, [](double, double) { return 1.0; });
    CHECK(integrate(one) == doctest::Approx(2.0).epsilon(1e-14));  // area of (0,1)x(0,2)

    Field2D yf = sample(g, [](double, double y) { return y; });
    CHECK(integrate(yf, Region::line_x(0.5)) == doctest::Approx(2.0).epsilon(1e-14));

    PhysicalGrid fine(8, 256, 1.0);
    Field2D s = sample(fine, [](double, double y) { return std::sin(3.14159265358979323846 * y / 2.0); });
    double val = integrate(s, Region::line_x(0.0));
    CHECK(std::fabs(val - 4.0 / 3.14159265358979323846) < 1e-4);
}

TEST_CASE("quadrature rejects coordinates that miss every node") {
    PhysicalGrid g(8, 8, 1.0);
    Field2D f(g);
    CHECK_THROWS_AS(integrate(f, Region::line_x(0.3)), DimensionError);
    CHECK_NOTHROW(integrate(f, Region::line_x(0.25)));
}

TEST_CASE("half-line quadrature integrates the tail only") {
    PhysicalGrid g(8, 16, 1.0);
    Field2D one = sample(g, [](double, double) { return 1.0; });
    // from y=1 to y=2 along x=0
    CHECK(integrate(one, Region::half_line_y(0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cumulative trapezoid: fundamental-theorem consistency") {
    auto run = [](int n) {
        PhysicalGrid g(8, n, 1.0);
        Field2D f = sample(g, [](double, double y) { return std::cos(2.0 * y); });
        Field2D F = cumint(f, Axis::y, 0);
        return max_err(diff(F, Axis::y), f);
    };
    double e64 = run(64), e128 = run(128);
    CHECK(e64 < 1e-3);
    double order = std::log2(e64 / e128);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("cumulative trapezoid is exact against forward differences") {
    // The staggered pair (forward difference, node average) inverts cumint
    // to machine precision, whatever the integrand.
    PhysicalGrid g(16, 24, 0.5);
    Field2D f = sample(g, [](double x, double y) { return std::sin(5 * x) + y * y * std::cos(x); });
    Field2D F = cumint(f, Axis::x, 0);
    double hx = g.hx();
    double worst = 0.0;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double lhs = (F.at(i + 1, j) - F.at(i, j)) / hx;
            double rhs = 0.5 * (f.at(i, j) + f.at(i + 1, j));
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("cumint anchored away from the boundary changes sign across the anchor") {
    PhysicalGrid g(8, 16, 1.0);
    Field2D one = sample(g, [](double, double) { return 1.0; });
    Field2D F = cumint(one, Axis::y, 8);  // anchor at y = 1
    CHECK(F.at(0, 8) == 0.0);
    CHECK(F.at(0, 16) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(F.at(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("solve_linear: identity and 1D Dirichlet Laplacian recovery") {
    {
        LinearSystem sys(5);
        for (int i = 0; i < 5; ++i) {
            sys.add(i, i, 1.0);
            sys.set_rhs(i, 0.25 * i - 1.0);
        }
        auto x = solve_linear(sys);
        for (int i = 0; i < 5; ++i) CHECK(std::fabs(x[i] - (0.25 * i - 1.0)) < 1e-14);
    }
    {
        // -u'' on 49 interior nodes of (0,1); manufactured solution.
        const int n = 49;
        const double h = 1.0 / (n + 1);
        auto exact = [](double t) { return t * (1.0 - t) * std::exp(t); };
        LinearSystem sys(n);
        for (int i = 0; i < n; ++i) {
            sys.add(i, i, 2.0 / (h * h));
            if (i > 0) sys.add(i, i - 1, -1.0 / (h * h));
            if (i < n - 1) sys.add(i, i + 1, -1.0 / (h * h));
        }
        // rhs = A * exact so the solve must reproduce exact to solver precision
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = exact((i + 1) * h);
        for (int i = 0; i < n; ++i) {
            double v = 2.0 / (h * h) * xs[i];
            if (i > 0) v -= xs[i - 1] / (h * h);
            if (i < n - 1) v -= xs[i + 1] / (h * h);
            sys.set_rhs(i, v);
        }
        auto x = solve_linear(sys);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::fabs(x[i] - xs[i]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("solve_linear rejects singular systems") {
    LinearSystem sys(3);
    sys.add(0, 0, 1.0);
    sys.add(1, 1, 1.0);
    // row 2 left empty -> structurally singular
    sys.set_rhs(2, 1.0);
    CHECK_THROWS_AS(solve_linear(sys), SolverError);
}

TEST_CASE("field algebra enforces matching grids") {
    PhysicalGrid a(8, 8, 1.0), b(8, 16, 1.0);
    Field2D fa(a), fb(b);
    CHECK_THROWS_AS(fa + fb, DimensionError);
    CHECK_THROWS_AS(multiply(fa, fb), DimensionError);
}

TEST_CASE("boundary-layer grids carry their own spacing and bounds") {
    BoundaryLayerGrid g(16, 64, 0.5, 32.0, Orientation::top);
    CHECK(g.hY() == doctest::Approx(0.5));
    Field2D f = sample(g, [](double x, double Y) { return x + Y; });
    CHECK(f.y2(64) == doctest::Approx(32.0));
    Field2D fY = diff(f, Axis::y);
    CHECK(std::fabs(fY.at(3, 10) - 1.0) < 1e-11);
    CHECK_THROWS_AS(BoundaryLayerGrid(16, 64, 0.5, 10.0, Orientation::bottom), DimensionError);
}

TEST_CASE("field CSV writes are deterministic and read back") {
    PhysicalGrid g(8, 8, 0.5);
    Field2D f = sample(g, [](double x, double y) { return std::sin(x) * y; });
    const char* p1 = "ncore_csv_a.csv";
    const char* p2 = "ncore_csv_b.csv";
    write_csv(f, p1, {"layer: euler, tier: 1"});
    write_csv(f, p2, {"layer: euler, tier: 1"});
    std::ifstream s1(p1, std::ios::binary), s2(p2, std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(s1)), std::istreambuf_iterator<char>());
    std::string b2((std::istreambuf_iterator<char>(s2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    CHECK(!b1.empty());

    CsvTable t = read_field_csv(p1);
    CHECK(t.nx == 8);
    CHECK(t.ny == 8);
    CHECK(t.L == doctest::Approx(0.5));
    REQUIRE(t.value.size() == 81);
    CHECK(t.value[0] == doctest::Approx(f.at(0, 0)));
    CHECK(t.metadata.size() == 1);
    std::remove(p1);
    std::remove(p2);
}
