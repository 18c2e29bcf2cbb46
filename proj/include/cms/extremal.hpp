#pragma once

#include <string>
#include <vector>

#include "cms/canonical.hpp"
#include "cms/hermite.hpp"

namespace cms {

// q_x: the nonnegative degree-(2n-1) polynomial that is 1 at x, vanishes to
// its index order at the other nodes of the canonical rep through x, and
// integrates to lambda(x). Held in product form.
class Qx {
public:
    Qx(const CanonicalSystem& sys, const CanonicalRep& rep, double x);

    double operator()(double t) const;
    double x() const { return x_; }

    // integral of q_x against w (equals the weight of x in the rep)
    double integral(const WeightSpec& spec) const;

private:
    std::vector<double> nodes_;
    std::vector<int> exps_;
    size_t xpos_ = 0;
    double x_ = 0.0;
    int degree_ = 0;
};

// Interpolant that is 1 on the rep's nodes in [-1, x], 0 on those in (x, 1],
// with vanishing derivative at double nodes other than x. Majorizes the
// indicator of [-1, x].
HermiteInterpolant build_px(const CanonicalRep& rep, double x);

// Half-open variant: 1 on [-1, x), 0 on [x, 1]. Minorizes the indicator.
HermiteInterpolant build_px_lower(const CanonicalRep& rep, double x);

struct PiValues {
    double pi = 0.0;       // sum of weights over nodes <= x
    double pi_lower = 0.0; // sum of weights over nodes < x
    double lambda = 0.0;   // weight of x itself
};

// Weight sums of the rep through x, cross-checked against the integrals of
// p_x and p_x_lower to 1e-9 of the total mass.
PiValues pi_at(const CanonicalSystem& sys, const CanonicalRep& rep, double x);

// pi'(x) = -lambda(x) p_x'(x), cross-checked against the boundary form
// lambda_x(-1) p_x'(-1) + lambda_x(1) p_x'(1) - integral(p_x' w) to 1e-8 scale.
// x must not be a Gaussian or Lobatto node.
double pi_prime_at(const CanonicalSystem& sys, const CanonicalRep& rep, double x);

struct ProfileRow {
    double x = 0.0;
    double pi = 0.0;
    double pi_lower = 0.0;
    double lambda = 0.0;
    double pi_prime = 0.0; // NaN when excluded or failed
    double w = 0.0;
    bool excluded = false; // within half a grid step of a Gaussian/Lobatto node
    bool ok = true;
    std::string error;
};

struct Profile {
    int n = 0;
    int grid_points = 0; // total grid count including the endpoints +-1
    double step = 0.0;
    std::vector<ProfileRow> rows; // interior grid points only, ascending
};

// Evaluates the extremal functions on the interior of a uniform grid with
// grid_points points on [-1, 1]. Per-row failures are recorded, not fatal.
Profile make_profile(const CanonicalSystem& sys, int grid_points);

} // namespace cms
