#include "shearlayer/prandtl_layers.hpp"

#include <cmath>

#include "shearlayer/errors.hpp"
#include "shearlayer/operators.hpp"

namespace shearlayer {

double cutoff_value(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    const double t = s - 1.0;
    return 1.0 - t * t * t * t * t * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + 70.0 * t))));
}

double cutoff_derivative(double s, int order) {
    if (order == 0) return cutoff_value(s);
    if (order < 0 || order > 3) throw DimensionError("cutoff_derivative: order must be 0..3");
    if (s <= 1.0 || s >= 2.0) return 0.0;
    const double t = s - 1.0, r = 1.0 - t;
    switch (order) {
        case 1: return -630.0 * t * t * t * t * r * r * r * r;
        case 2: return -2520.0 * t * t * t * r * r * r * (1.0 - 2.0 * t);
        default:
            return -2520.0 * (3.0 * t * t * r * r * (1.0 - 2.0 * t) * (1.0 - 2.0 * t) -
                              2.0 * t * t * t * r * r * r);
    }
}

double layer_coefficient(const ShearProfile& profile, const BoundaryLayerGrid& grid,
                         double epsilon, MarchCoefficients mode, double Y) {
    const double root_eps = std::sqrt(epsilon);
    switch (mode.kind) {
        case MarchCoefficients::Kind::frozen:
            return mode.frozen;
        case MarchCoefficients::Kind::linearized:
            return grid.orientation == Orientation::bottom
                       ? profile.value(0.0) + profile.derivative(0.0, 1) * root_eps * Y
                       : profile.value(2.0) - profile.derivative(2.0, 1) * root_eps * Y;
        case MarchCoefficients::Kind::literal:
        default:
            return grid.orientation == Orientation::bottom ? profile.value(root_eps * Y)
                                                           : profile.value(2.0 - root_eps * Y);
    }
}

Field2D march_heat(const ShearProfile& profile, const BoundaryLayerGrid& grid, double epsilon,
                   const std::vector<double>& wall_data, const Field2D* forcing,
                   MarchScheme scheme, MarchCoefficients mode, bool damped_start) {
    const int nx = grid.nx, nY = grid.nY;
    if (static_cast<int>(wall_data.size()) != nx + 1)
        throw DimensionError("march_heat: wall data must have nx+1 stations");
    if (forcing && (forcing->on_physical_grid() || !(forcing->layer_grid() == grid)))
        throw DimensionError("march_heat: forcing grid mismatch");

    const double dx = grid.hx(), hY = grid.hY();
    const double ay = 1.0 / (hY * hY);

    std::vector<double> muc(nY + 1);
    for (int k = 0; k <= nY; ++k) muc[k] = layer_coefficient(profile, grid, epsilon, mode, grid.Y(k));
    for (int k = 1; k < nY; ++k)
        if (!(muc[k] > 0.0))
            throw DegenerateProfileError("march_heat: transport coefficient not positive inside the layer");

    Field2D u(grid);
    for (int k = 0; k <= nY; ++k) u.at(0, k) = 0.0;
    u.at(0, 0) = wall_data[0];

    // Thomas solve per station. A damped start takes the first two stations as
    // pairs of backward Euler half-steps (Rannacher smoothing); without it an
    // inflow forcing jump rings down the whole march and x-differences of u
    // never converge at second order.
    std::vector<double> dia(nY + 1), low(nY + 1), upp(nY + 1), rhs(nY + 1), cp(nY + 1);
    auto solve_tridiag = [&](double* out) {
        cp[0] = upp[0] / dia[0];
        rhs[0] /= dia[0];
        for (int k = 1; k <= nY; ++k) {
            const double m = dia[k] - low[k] * cp[k - 1];
            cp[k] = (k < nY ? upp[k] : 0.0) / m;
            rhs[k] = (rhs[k] - low[k] * rhs[k - 1]) / m;
        }
        out[nY] = rhs[nY];
        for (int k = nY - 1; k >= 0; --k) out[k] = rhs[k] - cp[k] * out[k + 1];
    };
    // one implicit substep of size `step` from `prev`, with the forcing column
    // interpolated linearly between stations i-1 and i at fraction `frac`.
    auto be_substep = [&](const double* prev, double step, double wall, int i, double frac,
                          double* out) {
        for (int k = 1; k < nY; ++k) {
            dia[k] = muc[k] / step + 2.0 * ay;
            low[k] = -ay;
            upp[k] = -ay;
            double f = 0.0;
            if (forcing) f = frac * forcing->at(i, k) + (1.0 - frac) * forcing->at(i - 1, k);
            rhs[k] = muc[k] / step * prev[k] + f;
        }
        dia[0] = 1.0; upp[0] = 0.0; rhs[0] = wall;
        dia[nY] = 1.0; low[nY] = 0.0; rhs[nY] = 0.0;
        solve_tridiag(out);
    };

    std::vector<double> prev(nY + 1), mid(nY + 1), next(nY + 1);
    for (int i = 1; i <= nx; ++i) {
        if (scheme == MarchScheme::crank_nicolson && damped_start && i <= 2) {
            for (int k = 0; k <= nY; ++k) prev[k] = u.at(i - 1, k);
            be_substep(prev.data(), 0.5 * dx, 0.5 * (wall_data[i - 1] + wall_data[i]), i, 0.5,
                       mid.data());
            be_substep(mid.data(), 0.5 * dx, wall_data[i], i, 1.0, next.data());
            for (int k = 0; k <= nY; ++k) u.at(i, k) = next[k];
            continue;
        }
        const double theta = scheme == MarchScheme::crank_nicolson ? 0.5 : 1.0;
        for (int k = 1; k < nY; ++k) {
            dia[k] = muc[k] / dx + theta * 2.0 * ay;
            low[k] = -theta * ay;
            upp[k] = -theta * ay;
            const double lap_prev =
                ay * (u.at(i - 1, k + 1) - 2.0 * u.at(i - 1, k) + u.at(i - 1, k - 1));
            double f = 0.0;
            if (forcing) f = theta * forcing->at(i, k) + (1.0 - theta) * forcing->at(i - 1, k);
            rhs[k] = muc[k] / dx * u.at(i - 1, k) + (1.0 - theta) * lap_prev + f;
        }
        dia[0] = 1.0; upp[0] = 0.0; rhs[0] = wall_data[i];
        dia[nY] = 1.0; low[nY] = 0.0; rhs[nY] = 0.0;
        solve_tridiag(next.data());
        for (int k = 0; k <= nY; ++k) u.at(i, k) = next[k];
    }
    return u;
}

BoundaryLayer build_layer(const ShearProfile& profile, const BoundaryLayerGrid& grid,
                          double epsilon, int tier, const std::vector<double>& wall_data,
                          const Field2D* forcing, MarchScheme scheme, MarchCoefficients mode,
                          double cutoff_scale, bool damped_start) {
    if (tier != 1 && tier != 2) throw DimensionError("build_layer: tier must be 1 or 2");
    Field2D u = march_heat(profile, grid, epsilon, wall_data, forcing, scheme, mode, damped_start);

    // continuity in layer variables: d_Y v = -or_sign d_x u, with or_sign +1
    // at the bottom and -1 at the top (v stays the physical component).
    // First tier is anchored at the far edge (decay), second at the wall.
    const double or_sign = grid.orientation == Orientation::bottom ? 1.0 : -1.0;
    Field2D ux = diff(u, Axis::x);
    Field2D v = (-or_sign) * cumint(ux, Axis::y, tier == 1 ? grid.nY : 0);
    Field2D int_v = cumint(v, Axis::x, 0);

    const double root_eps = std::sqrt(epsilon);
    Field2D u_cut = u, v_cut = v;
    for (int k = 0; k <= grid.nY; ++k) {
        const double s = root_eps * grid.Y(k) / cutoff_scale;
        const double chi = cutoff_value(s), dchi = cutoff_derivative(s, 1);
        for (int i = 0; i <= grid.nx; ++i) {
            u_cut.at(i, k) = chi * u.at(i, k) - or_sign * (root_eps / cutoff_scale) * dchi * int_v.at(i, k);
            v_cut.at(i, k) = chi * v.at(i, k);
        }
    }
    return {grid, epsilon, tier, std::move(u), std::move(v), std::move(int_v),
            std::move(u_cut), std::move(v_cut)};
}

} // namespace shearlayer
