#include "shearlayer/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shearlayer/errors.hpp"

namespace shearlayer {

const PhysicalGrid& Field2D::physical_grid() const {
    if (const auto* g = std::get_if<PhysicalGrid>(&grid_)) return *g;
    throw DimensionError("Field2D: expected a physical-grid field");
}

const BoundaryLayerGrid& Field2D::layer_grid() const {
    if (const auto* g = std::get_if<BoundaryLayerGrid>(&grid_)) return *g;
    throw DimensionError("Field2D: expected a boundary-layer-grid field");
}

double Field2D::hx() const {
    return std::visit([](const auto& g) { return g.hx(); }, grid_);
}

double Field2D::h2() const {
    if (const auto* g = std::get_if<PhysicalGrid>(&grid_)) return g->hy();
    return std::get<BoundaryLayerGrid>(grid_).hY();
}

double Field2D::x(int i) const {
    return std::visit([i](const auto& g) { return g.x(i); }, grid_);
}

double Field2D::y2(int j) const {
    if (const auto* g = std::get_if<PhysicalGrid>(&grid_)) return g->y(j);
    return std::get<BoundaryLayerGrid>(grid_).Y(j);
}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double v : v_) m = std::max(m, std::fabs(v));
    return m;
}

double Field2D::min_value() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double v : v_) m = std::min(m, v);
    return m;
}

double Field2D::max_value() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double v : v_) m = std::max(m, v);
    return m;
}

void Field2D::fill(double c) { std::fill(v_.begin(), v_.end(), c); }

static void require_same_grid(const Field2D& a, const Field2D& b) {
    if (!a.same_grid(b)) throw DimensionError("field operation: grid mismatch");
}

Field2D operator+(const Field2D& a, const Field2D& b) {
    require_same_grid(a, b);
    Field2D out = a;
    for (size_t k = 0; k < out.data().size(); ++k) out.data()[k] += b.data()[k];
    return out;
}

Field2D operator-(const Field2D& a, const Field2D& b) {
    require_same_grid(a, b);
    Field2D out = a;
    for (size_t k = 0; k < out.data().size(); ++k) out.data()[k] -= b.data()[k];
    return out;
}

Field2D operator*(double s, const Field2D& a) {
    Field2D out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

Field2D multiply(const Field2D& a, const Field2D& b) {
    require_same_grid(a, b);
    Field2D out = a;
    for (size_t k = 0; k < out.data().size(); ++k) out.data()[k] *= b.data()[k];
    return out;
}

Field2D& add_scaled(Field2D& a, double s, const Field2D& b) {
    require_same_grid(a, b);
    for (size_t k = 0; k < a.data().size(); ++k) a.data()[k] += s * b.data()[k];
    return a;
}

static std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const Field2D& f, const std::string& path,
               const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_csv: cannot open " + path);
    int nx = f.ni() - 1;
    int ny = f.nj() - 1;
    double L = std::visit([](const auto& g) { return g.L; }, f.grid());
    out << "# grid: " << nx << "," << ny << "," << fmt_double(L) << "\n";
    for (const auto& m : metadata) out << "# " << m << "\n";
    out << "i,j,x,y,value\n";
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            out << i << "," << j << "," << fmt_double(f.x(i)) << ","
                << fmt_double(f.y2(j)) << "," << fmt_double(f.at(i, j)) << "\n";
    if (!out) throw Error("write_csv: write failed for " + path);
}

CsvTable read_field_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_field_csv: cannot open " + path);
    CsvTable t;
    std::string line;
    bool grid_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# grid:", 0) == 0) {
                std::string rest = line.substr(7);
                std::replace(rest.begin(), rest.end(), ',', ' ');
                std::istringstream is(rest);
                if (!(is >> t.nx >> t.ny >> t.L))
                    throw Error("read_field_csv: malformed grid header in " + path);
                grid_seen = true;
            } else {
                std::string m = line.substr(1);
                if (!m.empty() && m[0] == ' ') m.erase(0, 1);
                t.metadata.push_back(m);
            }
            continue;
        }
        if (line.rfind("i,j,", 0) == 0) continue;  // column header
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        int i, j;
        double x, y, v;
        if (!(is >> i >> j >> x >> y >> v))
            throw Error("read_field_csv: malformed row in " + path);
        t.x.push_back(x);
        t.y.push_back(y);
        t.value.push_back(v);
    }
    if (!grid_seen) throw Error("read_field_csv: missing grid header in " + path);
    return t;
}

} // namespace shearlayer
