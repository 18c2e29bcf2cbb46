#pragma once

#include <cstddef>
#include <vector>

#include "cms/recurrence.hpp"

namespace cms {

// One interpolation node: a prescribed value, optionally a prescribed first
// derivative. Nodes must be pairwise distinct.
struct HermiteCondition {
    double t = 0.0;
    double value = 0.0;
    bool has_deriv = false;
    double deriv = 0.0;
};

// Minimal-degree polynomial matching the conditions, held in a cardinal-basis
// product form: each basis function is a product of linear factors with an
// optional linear correction, so evaluation never forms monomial coefficients.
// Reproduces its conditions at the nodes to machine precision.
class HermiteInterpolant {
public:
    explicit HermiteInterpolant(std::vector<HermiteCondition> conditions);

    PolyVal eval(double t) const;
    double operator()(double t) const { return eval(t).value; }

    // degree bound: number of scalar conditions minus one
    int degree() const { return total_conditions_ - 1; }
    const std::vector<HermiteCondition>& conditions() const { return conditions_; }

private:
    PolyVal eval_direct(double t) const; // per-basis products; used near nodes

    std::vector<HermiteCondition> conditions_;
    std::vector<int> expo_;             // factor multiplicity per node (1 or 2)
    std::vector<double> log_deriv_;     // W_v'(v) for derivative-corrected nodes
    std::vector<long double> denom_;    // prod_{u != v} (t_v - t_u)^{e_u}
    int total_conditions_ = 0;
};

// Value at t of prod_{u != v} ((t - nodes[u]) / (nodes[v] - nodes[u]))^{exps[u]}.
double cardinal_value(const std::vector<double>& nodes, const std::vector<int>& exps,
                      size_t v, double t);

} // namespace cms
