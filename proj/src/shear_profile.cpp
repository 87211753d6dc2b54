#include "shearlayer/shear_profile.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <utility>

namespace shearlayer {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double wall_switch = 0.05;   // distance below which the Taylor quotient takes over
constexpr int taylor_terms = 10;

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::vector<ProfileTerm> combine(std::map<std::tuple<int, int, int>, double>& acc) {
    std::vector<ProfileTerm> out;
    out.reserve(acc.size());
    for (const auto& [key, c] : acc)
        if (c != 0.0) out.push_back({c, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
    return out;
}

std::vector<ProfileTerm> differentiate(const std::vector<ProfileTerm>& in) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const ProfileTerm& t : in) {
        if (t.k > 0) acc[{t.k - 1, t.a, t.b}] += t.coeff * t.k;
        if (t.a > 0) acc[{t.k, t.a - 1, t.b + 1}] += t.coeff * t.a * (pi / 2);
        if (t.b > 0) acc[{t.k, t.a + 1, t.b - 1}] -= t.coeff * t.b * (pi / 2);
    }
    return combine(acc);
}

double eval_terms(const std::vector<ProfileTerm>& terms, double y) {
    const double s = std::sin(pi * y / 2), c = std::cos(pi * y / 2);
    double r = 0.0;
    for (const ProfileTerm& t : terms) r += t.coeff * ipow(y, t.k) * ipow(s, t.a) * ipow(c, t.b);
    return r;
}

// All derivatives 0..kmax of N/D given matching derivative values of N and D.
// Recursion: q^(k) = (N^(k) - sum_{i<k} C(k,i) q^(i) D^(k-i)) / D.
std::vector<double> quotient_derivatives(const std::vector<double>& N, const std::vector<double>& D, int kmax) {
    std::vector<double> q(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        double v = N[k];
        for (int i = 0; i < k; ++i) v -= binom(k, i) * q[i] * D[k - i];
        q[k] = v / D[0];
    }
    return q;
}

} // namespace

ShearProfile::ShearProfile(std::string name, std::vector<ProfileTerm> terms)
    : name_(std::move(name)), terms_(std::move(terms)) {
    deriv_cache_.push_back(terms_);
}

double ShearProfile::top_speed() const { return value(2.0); }

const std::vector<ProfileTerm>& ShearProfile::terms_for(int order) const {
    while (static_cast<int>(deriv_cache_.size()) <= order)
        deriv_cache_.push_back(differentiate(deriv_cache_.back()));
    return deriv_cache_[order];
}

double ShearProfile::value(double y) const { return eval_terms(terms_, y); }

double ShearProfile::derivative(double y, int order) const {
    if (order < 0) throw DimensionError("profile derivative order must be nonnegative");
    return eval_terms(terms_for(order), y);
}

double ShearProfile::ratio(int num_order, double y, int deriv_order) const {
    const double dist_bottom = y, dist_top = 2.0 - y;
    double wall = -1.0;
    if (dist_bottom < wall_switch && std::fabs(value(0.0)) < 1e-12) wall = 0.0;
    else if (dist_top < wall_switch && std::fabs(value(2.0)) < 1e-12) wall = 2.0;

    if (wall < 0.0) {
        std::vector<double> N(deriv_order + 1), D(deriv_order + 1);
        for (int k = 0; k <= deriv_order; ++k) {
            N[k] = derivative(y, num_order + k);
            D[k] = derivative(y, k);
        }
        return quotient_derivatives(N, D, deriv_order)[deriv_order];
    }

    // 0/0 at the wall: factor one power of (y - wall) out of numerator and
    // denominator Taylor series and take the quotient of the cofactors.
    if (std::fabs(derivative(wall, num_order)) > 1e-10)
        throw DegenerateProfileError("shear profile: ratio " + std::to_string(num_order) +
                                     " is unbounded at the wall y = " + std::to_string(wall));
    double slope = derivative(wall, 1);
    if (std::fabs(slope) < 1e-12)
        throw DegenerateProfileError("shear profile: zero wall slope leaves the ratio undefined at y = " +
                                     std::to_string(wall));
    const double t = y - wall;
    std::vector<double> a(taylor_terms), b(taylor_terms);
    for (int m = 0; m < taylor_terms; ++m) {
        a[m] = derivative(wall, num_order + m + 1) / factorial(m + 1);
        b[m] = derivative(wall, m + 1) / factorial(m + 1);
    }
    auto poly_derivs = [&](const std::vector<double>& c) {
        std::vector<double> v(deriv_order + 1, 0.0);
        for (int k = 0; k <= deriv_order; ++k)
            for (int m = k; m < taylor_terms; ++m)
                v[k] += c[m] * (factorial(m) / factorial(m - k)) * ipow(t, m - k);
        return v;
    };
    return quotient_derivatives(poly_derivs(a), poly_derivs(b), deriv_order)[deriv_order];
}

void ShearProfile::validate() const {
    if (std::fabs(value(0.0)) > 1e-12)
        throw DegenerateProfileError("shear profile '" + name_ + "': must vanish at the bottom wall");
    const double slope = derivative(0.0, 1);
    if (slope < 1e-8)
        throw DegenerateProfileError("shear profile '" + name_ +
                                     "': needs a strictly positive slope at the bottom wall");
    const double scale = std::max(1.0, slope);
    if (std::fabs(derivative(0.0, 2)) > 1e-10 * scale || std::fabs(derivative(0.0, 3)) > 1e-10 * scale)
        throw DegenerateProfileError("shear profile '" + name_ +
                                     "': curvature at the bottom wall leaves the ratio coefficients unbounded");
    const int n = 4000;
    for (int j = 1; j <= n; ++j) {
        const double y = 2.0 * j / n;
        if (value(y) <= 0.0)
            throw DegenerateProfileError("shear profile '" + name_ + "': not positive at y = " +
                                         std::to_string(y));
    }
}

double ShearProfile::coefficient_bound(int K, int samples) const {
    double best = 0.0;
    for (int j = 0; j <= samples; ++j) {
        const double y = 2.0 * j / samples;
        double s = 0.0;
        for (int k = 0; k <= K; ++k) s += std::fabs(ratio3_derivative(y, k));
        best = std::max(best, s);
    }
    return best;
}

ShearProfile ShearProfile::couette(double top_speed) {
    return ShearProfile("couette", {{top_speed / 2, 1, 0, 0}});
}

ShearProfile ShearProfile::couette_plus_bump(double top_speed, double alpha, int n0) {
    // bump = alpha * (2y - y^2)^(n0+1), flat to order n0+1 at both walls
    const int p = n0 + 1;
    std::vector<ProfileTerm> terms{{top_speed / 2, 1, 0, 0}};
    for (int j = 0; j <= p; ++j)
        terms.push_back({alpha * binom(p, j) * ipow(2.0, p - j) * (j % 2 ? -1.0 : 1.0), p + j, 0, 0});
    return ShearProfile("couette_plus_bump", std::move(terms));
}

ShearProfile ShearProfile::couette_plus_sine_bump(double top_speed, double alpha, int n0) {
    return ShearProfile("couette_plus_sine_bump", {{top_speed / 2, 1, 0, 0}, {alpha, 0, n0 + 1, 0}});
}

ShearProfile ShearProfile::quadratic() {
    return ShearProfile("quadratic", {{1.0, 2, 0, 0}});
}

ShearProfile make_profile(const std::string& kind, double top_speed, double alpha, int n0) {
    if (kind == "couette") return ShearProfile::couette(top_speed);
    if (kind == "couette_plus_bump") return ShearProfile::couette_plus_bump(top_speed, alpha, n0);
    if (kind == "couette_plus_sine_bump") return ShearProfile::couette_plus_sine_bump(top_speed, alpha, n0);
    if (kind == "quadratic") return ShearProfile::quadratic();
    throw ConfigError("unknown profile kind '" + kind + "'");
}

} // namespace shearlayer
