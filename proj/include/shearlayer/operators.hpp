#pragma once

#include "shearlayer/field.hpp"

namespace shearlayer {

enum class Axis { x, y };  // Axis::y is the second grid axis (physical y or layer Y)

// Finite-difference derivative of the given order (1 or 2) along an axis.
// Interior nodes use central second-order stencils; boundary nodes use
// one-sided second-order stencils. Exact for polynomials of degree <= 2.
Field2D diff(const Field2D& f, Axis axis, int order = 1);

struct Region {
    enum class Kind { full, line_x, line_y, half_line_y } kind = Kind::full;
    double c = 0.0;     // line coordinate (must sit on a node)
    double from = 0.0;  // lower bound for half_line_y (must sit on a node)

    static Region full() { return {}; }
    static Region line_x(double c) { return {Kind::line_x, c, 0.0}; }
    static Region line_y(double c) { return {Kind::line_y, c, 0.0}; }
    static Region half_line_y(double x, double from) { return {Kind::half_line_y, x, from}; }
};

// Trapezoid quadrature over the region. Line coordinates must match a grid
// node to 1e-12 or a DimensionError is thrown.
double integrate(const Field2D& f, Region r = Region::full());

// Cumulative trapezoid along an axis, anchored at node index `origin`:
// out(k) = integral from node origin to node k (negative when k < origin).
Field2D cumint(const Field2D& f, Axis axis, int origin = 0);

double l2_norm(const Field2D& f);                       // sqrt(trapz f^2)
double weighted_l2_norm(const Field2D& f, const Field2D& w);  // sqrt(trapz (f*w)^2)

} // namespace shearlayer
