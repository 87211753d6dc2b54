#pragma once

#include <vector>

#include "shearlayer/field.hpp"
#include "shearlayer/shear_profile.hpp"

namespace shearlayer {

// One interior correction: vertical velocity v from an elliptic solve, with
// streamwise velocity u and pressure P recovered by quadrature so that the
// pair is divergence-free and the momentum group identity closes.
struct EulerTier {
    Field2D v, u, P;
};

// Boundary data for the elliptic solve. bottom/top are nodal wall values
// (size nx+1). left holds Dirichlet inflow values (empty means zero). The
// right edge is zero Dirichlet, or a one-sided Neumann condition with nodal
// flux values right_flux (empty means zero) when neumann_right is set.
struct EulerBoundary {
    std::vector<double> bottom, top;
    std::vector<double> left, right_flux;
    bool neumann_right = false;
};

// -Lap v + (mu''/mu) v = rhs on the channel rectangle.
Field2D solve_vertical_velocity(const ShearProfile& profile, const PhysicalGrid& grid,
                                const Field2D& rhs, const EulerBoundary& bc);

// rhs = mu'''/mu, zero boundary data; u = -int_0^x d_y v, P = -int_0^y mu d_x v.
EulerTier solve_tier_one(const ShearProfile& profile, const PhysicalGrid& grid);

// Zero rhs, wall traces prescribed (they cancel boundary-layer leakage).
// Traces must vanish at the inflow corner; throws CompatibilityError if not.
// Side data is chosen to be corner-compatible to second order, so the
// solution has no corner singularity that would spoil the group identity.
// P gains the gauge term -mu'(0) int_0^x bottom_trace, which closes the
// momentum group identity at the degenerate wall.
EulerTier solve_tier_two(const ShearProfile& profile, const PhysicalGrid& grid,
                         const std::vector<double>& bottom_trace,
                         const std::vector<double>& top_trace);

} // namespace shearlayer
