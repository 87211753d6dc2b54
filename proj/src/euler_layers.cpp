#include "shearlayer/euler_layers.hpp"

#include <cmath>

#include "shearlayer/errors.hpp"
#include "shearlayer/linear_system.hpp"
#include "shearlayer/operators.hpp"

namespace shearlayer {

namespace {

EulerTier recover(const ShearProfile& profile, const PhysicalGrid& grid, Field2D v) {
    Field2D u = -1.0 * cumint(diff(v, Axis::y), Axis::x, 0);
    Field2D mu = sample(grid, [&](double, double y) { return profile.value(y); });
    Field2D P = -1.0 * cumint(multiply(mu, diff(v, Axis::x)), Axis::y, 0);
    return {std::move(v), std::move(u), std::move(P)};
}

} // namespace

Field2D solve_vertical_velocity(const ShearProfile& profile, const PhysicalGrid& grid,
                                const Field2D& rhs, const EulerBoundary& bc) {
    if (!rhs.on_physical_grid() || !(rhs.physical_grid() == grid))
        throw DimensionError("vertical velocity solve: rhs grid mismatch");
    const int nx = grid.nx, ny = grid.ny;
    if (static_cast<int>(bc.bottom.size()) != nx + 1 || static_cast<int>(bc.top.size()) != nx + 1)
        throw DimensionError("vertical velocity solve: boundary data must have nx+1 nodes");
    if (!bc.left.empty() && static_cast<int>(bc.left.size()) != ny + 1)
        throw DimensionError("vertical velocity solve: left data must have ny+1 nodes");
    if (!bc.right_flux.empty() && static_cast<int>(bc.right_flux.size()) != ny + 1)
        throw DimensionError("vertical velocity solve: right flux data must have ny+1 nodes");
    const double ax = 1.0 / (grid.hx() * grid.hx()), ay = 1.0 / (grid.hy() * grid.hy());
    const int n = (nx + 1) * (ny + 1);
    auto idx = [nx](int i, int j) { return j * (nx + 1) + i; };

    LinearSystem sys(n);
    sys.reserve(5 * n);
    for (int j = 0; j <= ny; ++j) {
        const double q2 = profile.ratio2(grid.y(j));
        for (int i = 0; i <= nx; ++i) {
            const int r = idx(i, j);
            if (j == 0 || j == ny) {
                sys.add(r, r, 1.0);
                sys.set_rhs(r, j == 0 ? bc.bottom[i] : bc.top[i]);
            } else if (i == 0) {
                sys.add(r, r, 1.0);
                if (!bc.left.empty()) sys.set_rhs(r, bc.left[j]);
            } else if (i == nx) {
                if (bc.neumann_right) {
                    sys.add(r, idx(nx, j), 3.0);
                    sys.add(r, idx(nx - 1, j), -4.0);
                    sys.add(r, idx(nx - 2, j), 1.0);
                    if (!bc.right_flux.empty()) sys.set_rhs(r, 2.0 * grid.hx() * bc.right_flux[j]);
                } else {
                    sys.add(r, r, 1.0);
                }
            } else {
                sys.add(r, r, 2 * ax + 2 * ay + q2);
                sys.add(r, idx(i - 1, j), -ax);
                sys.add(r, idx(i + 1, j), -ax);
                sys.add(r, idx(i, j - 1), -ay);
                sys.add(r, idx(i, j + 1), -ay);
                sys.set_rhs(r, rhs.at(i, j));
            }
        }
    }
    std::vector<double> sol = solve_linear(sys);
    Field2D v(grid);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) v.at(i, j) = sol[idx(i, j)];
    // reimpose Dirichlet data exactly; the factorization leaves rounding there
    for (int i = 0; i <= nx; ++i) {
        v.at(i, 0) = bc.bottom[i];
        v.at(i, ny) = bc.top[i];
    }
    for (int j = 1; j < ny; ++j) {
        v.at(0, j) = bc.left.empty() ? 0.0 : bc.left[j];
        if (!bc.neumann_right) v.at(nx, j) = 0.0;
    }
    return v;
}

EulerTier solve_tier_one(const ShearProfile& profile, const PhysicalGrid& grid) {
    Field2D rhs = sample(grid, [&](double, double y) { return profile.ratio3(y); });
    EulerBoundary bc;
    bc.bottom.assign(grid.nx + 1, 0.0);
    bc.top.assign(grid.nx + 1, 0.0);
    return recover(profile, grid, solve_vertical_velocity(profile, grid, rhs, bc));
}

EulerTier solve_tier_two(const ShearProfile& profile, const PhysicalGrid& grid,
                         const std::vector<double>& bottom_trace,
                         const std::vector<double>& top_trace) {
    if (static_cast<int>(bottom_trace.size()) != grid.nx + 1 ||
        static_cast<int>(top_trace.size()) != grid.nx + 1)
        throw DimensionError("tier-two solve: wall traces must have nx+1 nodes");
    double scale = 1.0;
    for (double g : bottom_trace) scale = std::max(scale, std::fabs(g));
    for (double g : top_trace) scale = std::max(scale, std::fabs(g));
    if (std::fabs(bottom_trace[0]) > 1e-10 * scale || std::fabs(top_trace[0]) > 1e-10 * scale)
        throw CompatibilityError("tier-two solve: wall traces must vanish at the inflow corner");

    // Side data compatible with the traces to second order at all four
    // corners; incompatible data would seed corner singularities that degrade
    // the group identity from O(h^2) to O(h) nearby.
    const int nx = grid.nx, ny = grid.ny;
    const double hx = grid.hx();
    // least-squares curvature of the trace over a fixed window; a raw second
    // difference of a marched trace amplifies the weak leading-edge
    // singularity and does not converge under refinement
    auto second_at_start = [&](const std::vector<double>& g) {
        const int m = std::max(4, nx / 8);
        double a11 = 0, a12 = 0, a22 = 0, r1 = 0, r2 = 0;
        for (int i = 1; i <= m; ++i) {
            const double x = grid.x(i), d = g[i] - g[0];
            a11 += x * x;
            a12 += x * x * x;
            a22 += x * x * x * x;
            r1 += x * d;
            r2 += x * x * d;
        }
        return 2.0 * (a11 * r2 - a12 * r1) / (a11 * a22 - a12 * a12);
    };
    auto slope_at_end = [&](const std::vector<double>& g) {
        return (11.0 * g[nx] - 18.0 * g[nx - 1] + 9.0 * g[nx - 2] - 2.0 * g[nx - 3]) / (6.0 * hx);
    };
    const double sb = second_at_start(bottom_trace), st = second_at_start(top_trace);
    const double db = slope_at_end(bottom_trace), dt = slope_at_end(top_trace);
    std::vector<double> left(ny + 1), flux(ny + 1);
    for (int j = 0; j <= ny; ++j) {
        const double y = grid.y(j), t = 2.0 - y;
        left[j] = -0.5 * sb * y * y * std::pow(1.0 - y / 2.0, 3) -
                  0.5 * st * t * t * std::pow(y / 2.0, 3);
        flux[j] = db * (1.0 - y / 2.0) * (1.0 - y / 2.0) + dt * (y / 2.0) * (y / 2.0);
    }

    Field2D rhs(grid);
    EulerBoundary bc{bottom_trace, top_trace, std::move(left), std::move(flux), true};
    EulerTier tier = recover(profile, grid, solve_vertical_velocity(profile, grid, rhs, bc));

    // x-dependent pressure gauge; without it the momentum group picks up
    // mu'(0) * bottom_trace because the wall value of v no longer vanishes.
    const double slope = profile.derivative(0.0, 1);
    std::vector<double> gauge(grid.nx + 1, 0.0);
    for (int i = 1; i <= grid.nx; ++i)
        gauge[i] = gauge[i - 1] - slope * 0.5 * grid.hx() * (bottom_trace[i - 1] + bottom_trace[i]);
    for (int j = 0; j <= grid.ny; ++j)
        for (int i = 0; i <= grid.nx; ++i) tier.P.at(i, j) += gauge[i];
    return tier;
}

} // namespace shearlayer
