#pragma once

#include <vector>

namespace shearlayer {

// Sparse linear system assembled as coordinate triplets. Duplicate (row,col)
// entries are summed at solve time.
class LinearSystem {
public:
    explicit LinearSystem(int n) : n_(n), rhs_(n, 0.0) {}

    int size() const { return n_; }

    void add(int row, int col, double value) {
        entries_.push_back({row, col, value});
    }
    void add_rhs(int row, double value) { rhs_[static_cast<size_t>(row)] += value; }
    void set_rhs(int row, double value) { rhs_[static_cast<size_t>(row)] = value; }

    struct Entry {
        int row;
        int col;
        double value;
    };

    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<double>& rhs() const { return rhs_; }

    void reserve(size_t n_entries) { entries_.reserve(n_entries); }

private:
    int n_;
    std::vector<Entry> entries_;
    std::vector<double> rhs_;
};

// Sparse LU solve. Throws SolverError unless ||Ax-b||_2 <= tol*(1+||b||_2);
// the thrown message reports the achieved residual.
std::vector<double> solve_linear(const LinearSystem& sys, double tol = 1e-10);

} // namespace shearlayer
