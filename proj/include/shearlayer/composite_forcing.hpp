#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shearlayer/euler_layers.hpp"
#include "shearlayer/field.hpp"
#include "shearlayer/prandtl_layers.hpp"
#include "shearlayer/shear_profile.hpp"

namespace shearlayer {

// The layer grids are aligned with the physical grid: Ymax = 2/sqrt(eps) and
// nY = ny, so every layer node sits on a physical node and compositing is a
// copy. This requires eps <= 0.01 (Ymax >= 20) and ny even (the auxiliary
// pressure is gauged at mid-channel and the second-tier forcing is split
// there).
struct CompositeOptions {
    MarchScheme scheme = MarchScheme::crank_nicolson;
    MarchCoefficients coefficients{};  // must stay literal for the pipeline
    double cutoff_scale = 0.4;         // cutoff transition on y in [scale, 2 scale]
};

struct Expansion {
    PhysicalGrid grid;
    double epsilon = 0.0;
    CompositeOptions options;

    EulerTier e1, e2;
    BoundaryLayer p1_bottom, p1_top, p2_bottom, p2_top;

    // cut layer fields copied to the physical grid, summed over both walls
    Field2D u1p, v1p, u2p, v2p;

    Field2D S_v;    // vertical-momentum source absorbed by the auxiliary pressure
    Field2D P_aux;  // eps^-2 int_y^1 S_v, so d_y(eps^2 P_aux) cancels S_v
    Field2D f2;     // second-tier march forcing, -eps^-3/2 times the absorbed group

    Field2D u_s, v_s, P_s;

    // inflow values subtracted from the second-tier wall traces so the
    // interior correction sees data that vanishes at x = 0
    double trace_shift_bottom = 0.0;
    double trace_shift_top = 0.0;
};

// Index maps between aligned grids. Throw DimensionError when the grids are
// not aligned for this epsilon.
Field2D to_physical(const Field2D& layer_field, const PhysicalGrid& grid, double epsilon);
Field2D to_layer(const Field2D& physical_field, const BoundaryLayerGrid& grid, double epsilon);

Expansion build_expansion(const ShearProfile& profile, const PhysicalGrid& grid,
                          double epsilon, const CompositeOptions& options = {});

// One named contribution to the momentum balance of the composite fields,
// stored with its absolute epsilon power applied.
struct LedgerTerm {
    std::string group;
    Field2D field;
};

// Groups:
//   g1, g2      interior-correction balances (vanish by construction)
//   g3, g4      march balances (vanish to the march's accuracy)
//   g1v, g2v    their vertical-momentum counterparts
//   gp          the auxiliary-pressure cancellation residual
//   c2u         terms absorbed into the second-tier march forcing
//   sv          terms absorbed by the auxiliary pressure
//   c1u, c3u, c1v, c3v   the genuine forcing, F = sum(c1) + sum(c3)
// The identity r + G + F = 0 holds node for node, where r is the momentum
// residual of the composite fields under the same stencils.
struct ForcingLedger {
    std::vector<std::pair<std::string, LedgerTerm>> terms;

    Field2D F_u, F_v;
    Field2D T1, T2;              // order-one main terms, F = eps^2 T + residue
    Field2D residue_u, residue_v;
    Field2D G1, G2, G3, G4, G1v, G2v, Gp;
};

ForcingLedger build_ledger(const ShearProfile& profile, const Expansion& e);

// eps Lap u - (u_s d_x u + v_s d_y u + d_x P) and its vertical counterpart,
// central stencils throughout.
Field2D momentum_residual_u(const Expansion& e);
Field2D momentum_residual_v(const Expansion& e);

// Max over nodes with x >= x_min, excluding the wall rows.
double interior_max(const Field2D& f, double x_min);

} // namespace shearlayer
