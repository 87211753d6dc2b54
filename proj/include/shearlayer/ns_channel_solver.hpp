#pragma once

#include <string>
#include <vector>

#include "shearlayer/composite_forcing.hpp"
#include "shearlayer/field.hpp"
#include "shearlayer/shear_profile.hpp"

namespace shearlayer {

struct NSOptions {
    double tol = 1e-10;          // sup norm of the nonlinear residual
    int max_iter = 50;
    double stabilization = 0.1;  // pressure-stabilization weight, kept in reports
    double eps_min = 1e-4;       // viscosity floor; solves below it are refused

    // amplitude of a smooth interior perturbation added to the initial
    // iterate (zero on every Dirichlet node); the converged flow must not
    // depend on it
    double initial_perturbation = 0.0;
};

// Converged means the final residual met NSOptions::tol; consumers must treat
// anything else as unusable. The trace keeps one residual per Newton step.
struct NSSolution {
    PhysicalGrid grid;
    double epsilon = 0.0;
    Field2D u, v, P;
    std::vector<double> residual_trace;
    bool converged = false;
};

// Optional body force on the momentum rows, used by manufactured-solution
// tests to make a chosen analytic field an exact steady solution. The
// reference fields then replace the composite everywhere boundary data is
// read (walls, inflow, outflow stress pair) and as the initial iterate.
struct BodyForce {
    Field2D fu, fv;
    Field2D u_ref, v_ref, P_ref;
};

// Newton iteration for the steady flow at e.epsilon on e.grid. Walls carry
// no-slip data (0 below, top_speed above), the inflow column is pinned to the
// composite fields, and the outflow column carries the stress-free pair
// referenced to the composite. The composite is also the initial guess.
NSSolution solve_ns(const ShearProfile& profile, const Expansion& e,
                    const NSOptions& options = {}, const BodyForce* body = nullptr);

struct RateStudy {
    std::string profile_label;
    std::vector<double> epsilon;    // strictly decreasing
    std::vector<double> sup_err_u;  // max |u - mu| over nodes
    std::vector<double> sup_err_v;  // max |v|
    std::vector<double> constant;   // sup_err / (c0 * eps)
    double fitted_rate = 0.0;       // log-log slope of (sup_err_u + sup_err_v) vs eps
};

// One solve per epsilon against the profile's own composite; any
// non-converged entry aborts with SolverError. Emits a warning entry in the
// label when hy > sqrt(eps)/4 (layer under-resolved near the walls).
RateStudy rate_study(const ShearProfile& profile, const PhysicalGrid& grid,
                     const std::vector<double>& eps_list,
                     const CompositeOptions& composite_options = {},
                     const NSOptions& ns_options = {});

// Header, one row per epsilon, then a trailing "# fitted_rate,<slope>" line.
std::string rate_csv(const RateStudy& study);

} // namespace shearlayer
