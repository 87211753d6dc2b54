#pragma once

#include <string>
#include <vector>

#include "shearlayer/errors.hpp"

namespace shearlayer {

// One term coeff * y^k * sin(pi y/2)^a * cos(pi y/2)^b.  Closed under
// differentiation, so every derivative order stays in the same family.
struct ProfileTerm {
    double coeff;
    int k, a, b;
};

class ShearProfile {
public:
    ShearProfile(std::string name, std::vector<ProfileTerm> terms);

    const std::string& name() const { return name_; }
    double top_speed() const;  // value at y = 2

    double value(double y) const;
    double derivative(double y, int order) const;

    // Throws DegenerateProfileError unless the flow vanishes linearly at the
    // bottom wall, stays positive above it, and has enough flatness there for
    // the ratio coefficients below to stay bounded.
    void validate() const;

    // ratio2 = mu''/mu and ratio3 = mu'''/mu, with the bottom-wall 0/0 limit
    // filled in by a factored Taylor quotient near the wall.
    double ratio2(double y) const { return ratio(2, y, 0); }
    double ratio3(double y) const { return ratio(3, y, 0); }
    double ratio2_derivative(double y, int order) const { return ratio(2, y, order); }
    double ratio3_derivative(double y, int order) const { return ratio(3, y, order); }

    // max over a uniform sample of [0,2] of sum_{k<=K} |d^k ratio3|
    double coefficient_bound(int K = 3, int samples = 4096) const;

    static ShearProfile couette(double top_speed);
    static ShearProfile couette_plus_bump(double top_speed, double alpha, int n0);
    static ShearProfile couette_plus_sine_bump(double top_speed, double alpha, int n0);
    static ShearProfile quadratic();

private:
    double ratio(int num_order, double y, int deriv_order) const;
    const std::vector<ProfileTerm>& terms_for(int order) const;

    std::string name_;
    std::vector<ProfileTerm> terms_;
    mutable std::vector<std::vector<ProfileTerm>> deriv_cache_;
};

// Factory keyed by config string; throws ConfigError on unknown kind.
ShearProfile make_profile(const std::string& kind, double top_speed, double alpha, int n0);

} // namespace shearlayer
