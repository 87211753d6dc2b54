#pragma once

#include <string>
#include <vector>

#include "shearlayer/composite_forcing.hpp"
#include "shearlayer/field.hpp"
#include "shearlayer/ns_channel_solver.hpp"
#include "shearlayer/shear_profile.hpp"

namespace shearlayer {

// Seminorms of a velocity pair on the physical grid.
//   E          sqrt(eps) * (||grad u||_2 + ||grad v||_2)
//   P          || sqrt(u_s) grad v ||_2                (degenerate weight note below)
//   sup_scaled sqrt(eps) * max(sup|u|, sup|v|)
//   X          E + eps^(gamma/2) * sup_scaled
// Gradients use the standard stencils (one-sided on boundary rows); integrals
// are trapezoid quadrature over the whole channel. All entries are
// nonnegative and X >= E by construction. If u_s dips below zero anywhere the
// P-weight falls back to |u_s| and degenerate_weight is set; that signals a
// profile or epsilon outside the regime everything else assumes.
struct NormSet {
    double E = 0.0;
    double P = 0.0;
    double X = 0.0;
    double sup_scaled = 0.0;
    double l2_u = 0.0;
    double l2_v = 0.0;
    bool degenerate_weight = false;
};

// Policy knobs, recorded in reports. Pointwise constants are measured on
// x_min_fraction * L <= x <= x_max_fraction * L: the corner at x = 0 carries
// the usual leading-edge incompatibility, the outflow band carries the
// second-tier march seam, and wall rows divide by a vanishing weight, so all
// three are kept out of the constants (walls get their own smallness
// records). The L2 quantities only drop the inflow eighth; a thin band
// cannot move an integral the way it moves a sup.
struct VerifierConfig {
    double gamma = 0.05;
    double x_min_fraction = 0.125;
    double x_max_fraction = 0.875;
    double stability_factor = 2.0;
};

// One measured inequality: lhs <= (constant) * rhs_scale. The measured
// constant is ratio = lhs / rhs, recorded even when the check fails.
struct EstimateRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    int nx = 0;
    int ny = 0;
    double epsilon = 0.0;
    bool pass = false;
};

NormSet compute_norms(const Field2D& u, const Field2D& v, const Expansion& e,
                      const VerifierConfig& cfg = {});

// Pointwise bounds on the composite profile:
//   composite_deviation      |d_x u_s| + |d_y v_s| + |u_s - mu|  vs  min(sqrt(eps)*yt, eps)
//   shear_gradient_drift     |d_y u_s - mu'|                     vs  sqrt(eps)
//   vertical_flow_weighted_l{0,1,2}   |d_x^l v_s|                vs  eps*yt
// where yt = y(2-y). Each record's ratio is the max nodewise quotient over
// the measurement window; wall rows get their own smallness records.
std::vector<EstimateRecord> check_profile_estimates(const Expansion& e,
                                                    const ShearProfile& profile,
                                                    const VerifierConfig& cfg = {});

// L2 sizes of the order-one forcing terms against the profile's coefficient
// bound c0: ||T1||, ||T2/yt|| (wall rows by the limiting quotient d_y T2 / yt'),
// and eps^(1/4) * ||d_y T1||, eps^(1/4) * ||d_y T2||. A zero c0 with T-norms
// above discretization size throws: the ledger disagrees with the profile.
std::vector<EstimateRecord> check_T_estimates(const ForcingLedger& ledger,
                                              const ShearProfile& profile,
                                              const Expansion& e,
                                              const VerifierConfig& cfg = {});

// Remainder fields and the pairings that bound them. The remainder is
// (flow - composite) / eps^(3/2+gamma); its forcing is the ledger total
// rescaled the same way plus the remainder's own quadratic transport.
struct RemainderDiagnostics {
    Field2D u, v, P;
    NormSet norms;
    double R1 = 0.0;               // int f u + eps int g v
    double R2 = 0.0;               // int f (-d_y v) + int g d_x v
    double fg_l2sq = 0.0;          // ||f||^2 + ||g||^2
    double master_constant = 0.0;  // X^2 / (R1 + R2 + eps^(gamma/2) fg_l2sq)
    double outflow_trace = 0.0;    // || sqrt(u_s) {u,v} ||_2 on x = L, report only
    std::vector<EstimateRecord> records;
};

// Throws SolverError unless ns.converged; grids must match the expansion.
RemainderDiagnostics remainder_diagnostics(const NSSolution& ns, const Expansion& e,
                                           const ForcingLedger& ledger,
                                           const VerifierConfig& cfg = {});

// Collapses every record named `name` in the sweep into one verdict record:
// lhs = largest constant, rhs = smallest, ratio = drift factor, pass iff the
// drift stays within `factor`. All-zero constants pass with ratio 1.
EstimateRecord stability_verdict(const std::vector<EstimateRecord>& sweep,
                                 const std::string& name, double factor);

// CSV header "name,lhs,rhs,ratio,nx,ny,epsilon,pass" plus one row per record,
// and an aligned human-readable digest. Rendering only; callers write files.
std::string report_csv(const std::vector<EstimateRecord>& records);
std::string report_summary(const std::vector<EstimateRecord>& records);

} // namespace shearlayer
