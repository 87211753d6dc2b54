#pragma once

#include <string>

#include "shearlayer/errors.hpp"

namespace shearlayer {

// Channel height is fixed: y runs over (0, 2).
inline constexpr double channel_height = 2.0;

enum class Orientation { bottom, top };

inline const char* to_string(Orientation o) {
    return o == Orientation::bottom ? "bottom" : "top";
}

// Uniform nodal grid on (0,L) x (0,2); nodes include both boundaries.
struct PhysicalGrid {
    int nx = 0;
    int ny = 0;
    double L = 0.0;

    PhysicalGrid() = default;
    PhysicalGrid(int nx_, int ny_, double L_) : nx(nx_), ny(ny_), L(L_) {
        if (nx < 8 || ny < 8)
            throw DimensionError("PhysicalGrid: nx and ny must be at least 8");
        if (!(L > 0.0) || L > 1.0)
            throw DimensionError("PhysicalGrid: L must lie in (0, 1]");
    }

    double hx() const { return L / nx; }
    double hy() const { return channel_height / ny; }
    double x(int i) const { return i * hx(); }
    double y(int j) const { return j * hy(); }

    bool operator==(const PhysicalGrid&) const = default;
};

// Uniform nodal grid on (0,L) x (0,Ymax) in boundary-layer coordinates.
// The orientation fixes the map to physical y: bottom y = sqrt(eps)*Y,
// top y = 2 - sqrt(eps)*Y.
struct BoundaryLayerGrid {
    int nx = 0;
    int nY = 0;
    double L = 0.0;
    double Ymax = 0.0;
    Orientation orientation = Orientation::bottom;

    BoundaryLayerGrid() = default;
    BoundaryLayerGrid(int nx_, int nY_, double L_, double Ymax_, Orientation o)
        : nx(nx_), nY(nY_), L(L_), Ymax(Ymax_), orientation(o) {
        if (nx < 8 || nY < 16)
            throw DimensionError("BoundaryLayerGrid: nx must be >= 8 and nY >= 16");
        if (!(L > 0.0) || L > 1.0)
            throw DimensionError("BoundaryLayerGrid: L must lie in (0, 1]");
        if (Ymax < 20.0)
            throw DimensionError("BoundaryLayerGrid: Ymax must be at least 20");
    }

    double hx() const { return L / nx; }
    double hY() const { return Ymax / nY; }
    double x(int i) const { return i * hx(); }
    double Y(int k) const { return k * hY(); }

    bool operator==(const BoundaryLayerGrid&) const = default;
};

} // namespace shearlayer
