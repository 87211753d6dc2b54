#include "shearlayer/operators.hpp"

#include <cmath>

#include "shearlayer/errors.hpp"

namespace shearlayer {

namespace {

// Applies a 1D derivative along one axis of the row-major value table.
// n: node count along the axis, m: node count along the other axis.
template <typename Get, typename Set>
void apply_diff(int n, int m, double h, int order, Get f, Set set) {
    if (n < 4) throw DimensionError("diff: need at least 4 nodes along the axis");
    if (order == 1) {
        // The edge stencils are chosen to carry the same h^2/6 f''' leading
        // error as the central stencil, not to minimize their own error.
        // Differences of differentiated quantities then stay second-order
        // accurate at the node next to the edge, where a better-than-central
        // edge stencil would leave an O(h) mismatch.
        const double c = 1.0 / (2.0 * h);
        for (int b = 0; b < m; ++b) {
            set(0, b, c * (-4.0 * f(0, b) + 7.0 * f(1, b) - 4.0 * f(2, b) + f(3, b)));
            for (int a = 1; a < n - 1; ++a)
                set(a, b, c * (f(a + 1, b) - f(a - 1, b)));
            set(n - 1, b, c * (4.0 * f(n - 1, b) - 7.0 * f(n - 2, b) +
                               4.0 * f(n - 3, b) - f(n - 4, b)));
        }
    } else if (order == 2) {
        const double c = 1.0 / (h * h);
        for (int b = 0; b < m; ++b) {
            set(0, b, c * (2.0 * f(0, b) - 5.0 * f(1, b) + 4.0 * f(2, b) - f(3, b)));
            for (int a = 1; a < n - 1; ++a)
                set(a, b, c * (f(a + 1, b) - 2.0 * f(a, b) + f(a - 1, b)));
            set(n - 1, b, c * (2.0 * f(n - 1, b) - 5.0 * f(n - 2, b) +
                               4.0 * f(n - 3, b) - f(n - 4, b)));
        }
    } else {
        throw DimensionError("diff: order must be 1 or 2");
    }
}

} // namespace

Field2D diff(const Field2D& f, Axis axis, int order) {
    Field2D out = f;
    const int ni = f.ni(), nj = f.nj();
    if (axis == Axis::x) {
        apply_diff(
            ni, nj, f.hx(), order, [&](int a, int b) { return f.at(a, b); },
            [&](int a, int b, double v) { out.at(a, b) = v; });
    } else {
        apply_diff(
            nj, ni, f.h2(), order, [&](int a, int b) { return f.at(b, a); },
            [&](int a, int b, double v) { out.at(b, a) = v; });
    }
    return out;
}

namespace {

int node_index(double coord, double h, int n, const char* what) {
    double t = coord / h;
    int k = static_cast<int>(std::lround(t));
    if (k < 0 || k > n || std::fabs(coord - k * h) > 1e-12)
        throw DimensionError(std::string("integrate: ") + what +
                             " coordinate does not sit on a grid node");
    return k;
}

} // namespace

double integrate(const Field2D& f, Region r) {
    const int ni = f.ni(), nj = f.nj();
    const double hx = f.hx(), h2 = f.h2();
    auto wi = [&](int a, int n) { return (a == 0 || a == n - 1) ? 0.5 : 1.0; };
    switch (r.kind) {
        case Region::Kind::full: {
            double s = 0.0;
            for (int j = 0; j < nj; ++j)
                for (int i = 0; i < ni; ++i)
                    s += wi(i, ni) * wi(j, nj) * f.at(i, j);
            return s * hx * h2;
        }
        case Region::Kind::line_x: {
            int i = node_index(r.c, hx, ni - 1, "line x");
            double s = 0.0;
            for (int j = 0; j < nj; ++j) s += wi(j, nj) * f.at(i, j);
            return s * h2;
        }
        case Region::Kind::line_y: {
            int j = node_index(r.c, h2, nj - 1, "line y");
            double s = 0.0;
            for (int i = 0; i < ni; ++i) s += wi(i, ni) * f.at(i, j);
            return s * hx;
        }
        case Region::Kind::half_line_y: {
            int i = node_index(r.c, hx, ni - 1, "half-line x");
            int k0 = node_index(r.from, h2, nj - 1, "half-line origin");
            double s = 0.0;
            for (int j = k0; j < nj; ++j)
                s += ((j == k0 || j == nj - 1) ? 0.5 : 1.0) * f.at(i, j);
            return s * h2;
        }
    }
    throw DimensionError("integrate: unknown region");
}

Field2D cumint(const Field2D& f, Axis axis, int origin) {
    Field2D out = f;
    out.fill(0.0);
    const int ni = f.ni(), nj = f.nj();
    const int n = (axis == Axis::x) ? ni : nj;
    if (origin < 0 || origin >= n) throw DimensionError("cumint: origin out of range");
    const double h = (axis == Axis::x) ? f.hx() : f.h2();
    auto get = [&](int a, int b) { return axis == Axis::x ? f.at(a, b) : f.at(b, a); };
    auto set = [&](int a, int b, double v) {
        if (axis == Axis::x)
            out.at(a, b) = v;
        else
            out.at(b, a) = v;
    };
    const int m = (axis == Axis::x) ? nj : ni;
    for (int b = 0; b < m; ++b) {
        double acc = 0.0;
        set(origin, b, 0.0);
        for (int a = origin + 1; a < n; ++a) {
            acc += 0.5 * h * (get(a - 1, b) + get(a, b));
            set(a, b, acc);
        }
        acc = 0.0;
        for (int a = origin - 1; a >= 0; --a) {
            acc -= 0.5 * h * (get(a + 1, b) + get(a, b));
            set(a, b, acc);
        }
    }
    return out;
}

double l2_norm(const Field2D& f) {
    Field2D sq = multiply(f, f);
    return std::sqrt(integrate(sq));
}

double weighted_l2_norm(const Field2D& f, const Field2D& w) {
    Field2D g = multiply(f, w);
    return l2_norm(g);
}

} // namespace shearlayer
