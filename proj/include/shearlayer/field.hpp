#pragma once

#include <string>
#include <variant>
#include <vector>

#include "shearlayer/grid.hpp"

namespace shearlayer {

using GridRef = std::variant<PhysicalGrid, BoundaryLayerGrid>;

// Nodal scalar field over a physical or boundary-layer grid.
// Storage is row-major in j (second axis), i.e. v[j*ni + i].
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const PhysicalGrid& g)
        : grid_(g), ni_(g.nx + 1), nj_(g.ny + 1), v_(static_cast<size_t>(ni_) * nj_, 0.0) {}
    explicit Field2D(const BoundaryLayerGrid& g)
        : grid_(g), ni_(g.nx + 1), nj_(g.nY + 1), v_(static_cast<size_t>(ni_) * nj_, 0.0) {}

    int ni() const { return ni_; }  // node count along x
    int nj() const { return nj_; }  // node count along y (or Y)

    double& at(int i, int j) { return v_[static_cast<size_t>(j) * ni_ + i]; }
    double at(int i, int j) const { return v_[static_cast<size_t>(j) * ni_ + i]; }

    const GridRef& grid() const { return grid_; }
    bool on_physical_grid() const { return std::holds_alternative<PhysicalGrid>(grid_); }
    const PhysicalGrid& physical_grid() const;
    const BoundaryLayerGrid& layer_grid() const;

    // Node spacing along each axis regardless of grid kind.
    double hx() const;
    double h2() const;  // hy on physical grids, hY on layer grids
    double x(int i) const;
    double y2(int j) const;  // y on physical grids, Y on layer grids

    bool same_grid(const Field2D& other) const { return grid_ == other.grid_; }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    double max_abs() const;
    double min_value() const;
    double max_value() const;

    void fill(double c);

private:
    GridRef grid_{};
    int ni_ = 0;
    int nj_ = 0;
    std::vector<double> v_;
};

// Pointwise algebra; grids must match.
Field2D operator+(const Field2D& a, const Field2D& b);
Field2D operator-(const Field2D& a, const Field2D& b);
Field2D operator*(double s, const Field2D& a);
Field2D multiply(const Field2D& a, const Field2D& b);
Field2D& add_scaled(Field2D& a, double s, const Field2D& b);  // a += s*b

// Builds a field from a callable of the node coordinates f(x, y).
template <typename G, typename F>
Field2D sample(const G& g, F&& f) {
    Field2D out(g);
    for (int j = 0; j < out.nj(); ++j)
        for (int i = 0; i < out.ni(); ++i)
            out.at(i, j) = f(out.x(i), out.y2(j));
    return out;
}

// CSV layout: optional "# ..." metadata lines, then "# grid: nx,ny,L",
// then "i,j,x,y,value" rows. Deterministic byte-for-byte output.
void write_csv(const Field2D& f, const std::string& path,
               const std::vector<std::string>& metadata = {});

// Raw read-back; rows are kept in file order. Used by the plotter, which
// does not need to reconstruct grid objects.
struct CsvTable {
    int nx = 0;
    int ny = 0;
    double L = 0.0;
    std::vector<std::string> metadata;
    std::vector<double> x, y, value;
};
CsvTable read_field_csv(const std::string& path);

} // namespace shearlayer
