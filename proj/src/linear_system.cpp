#include "shearlayer/linear_system.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "shearlayer/errors.hpp"

namespace shearlayer {

std::vector<double> solve_linear(const LinearSystem& sys, double tol) {
    const int n = sys.size();
    Eigen::SparseMatrix<double> A(n, n);
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(sys.entries().size());
        for (const auto& e : sys.entries()) trip.emplace_back(e.row, e.col, e.value);
        A.setFromTriplets(trip.begin(), trip.end());
    }
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = sys.rhs()[static_cast<size_t>(i)];

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("solve_linear: factorization failed (singular or structurally deficient matrix)");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw SolverError("solve_linear: back substitution failed");

    // backward-error guard: matrices here carry O(1/h^2) entries, so the
    // residual is judged against the matrix scale, not the bare rhs
    double row_sum_max = 0.0;
    for (int k = 0; k < A.outerSize(); ++k) {
        // column-major storage; column sums bound ||A^T||_inf, which is the
        // same scale for the near-symmetric systems assembled here
        double s = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) s += std::fabs(it.value());
        row_sum_max = std::max(row_sum_max, s);
    }
    const double res = (A * x - b).norm();
    const double bound = tol * (row_sum_max * x.norm() + b.norm() + 1.0);
    if (!(res <= bound) || !x.allFinite()) {
        std::ostringstream os;
        os << "solve_linear: residual contract violated, ||Ax-b|| = " << res
           << " exceeds " << bound;
        throw SolverError(os.str());
    }
    return std::vector<double>(x.data(), x.data() + n);
}

} // namespace shearlayer
