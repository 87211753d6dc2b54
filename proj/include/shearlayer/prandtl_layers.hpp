#pragma once

#include <vector>

#include "shearlayer/field.hpp"
#include "shearlayer/shear_profile.hpp"

namespace shearlayer {

enum class MarchScheme { crank_nicolson, backward_euler };

// How the transport coefficient mu is sampled across the layer.
struct MarchCoefficients {
    enum class Kind { literal, linearized, frozen };
    Kind kind = Kind::literal;
    double frozen = 1.0;
};

// Smoothstep cutoff: 1 for s <= 1, 0 for s >= 2, ninth-order polynomial in
// between (C^4). Derivative orders 0..3 are all continuous across the joints;
// second differences of cut products stay O(h^2) only because of that.
double cutoff_value(double s);
double cutoff_derivative(double s, int order);

// mu evaluated at the physical height that layer coordinate Y represents for
// this grid's orientation, or its linearization at the wall, or a constant.
double layer_coefficient(const ShearProfile& profile, const BoundaryLayerGrid& grid,
                         double epsilon, MarchCoefficients mode, double Y);

// March mu_c du/dx - d^2 u/dY^2 = f from zero data at x = 0.
// Dirichlet rows: u(x, 0) = wall_data, u(x, Ymax) = 0. forcing may be null.
// damped_start takes the first two stations as pairs of backward Euler
// half-steps (Rannacher smoothing); use it when the forcing jumps on at the
// inflow, where an undamped trapezoid rings.
Field2D march_heat(const ShearProfile& profile, const BoundaryLayerGrid& grid, double epsilon,
                   const std::vector<double>& wall_data, const Field2D* forcing,
                   MarchScheme scheme, MarchCoefficients mode, bool damped_start = false);

// A marched layer with its vertical component and cutoff companions.
//   u      : streamwise field in layer variables
//   v      : physical vertical component recovered from continuity; first-tier
//            layers decay at the far edge, second-tier layers vanish at the wall
//   int_v  : int_0^x v dx'
//   u_cut, v_cut : after the divergence-preserving cutoff
struct BoundaryLayer {
    BoundaryLayerGrid grid;
    double epsilon;
    int tier;
    Field2D u, v, int_v, u_cut, v_cut;
};

BoundaryLayer build_layer(const ShearProfile& profile, const BoundaryLayerGrid& grid,
                          double epsilon, int tier, const std::vector<double>& wall_data,
                          const Field2D* forcing, MarchScheme scheme, MarchCoefficients mode,
                          double cutoff_scale, bool damped_start = false);

} // namespace shearlayer
