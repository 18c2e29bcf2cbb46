#pragma once

#include <vector>

namespace cms {

// Nodes/weights of an m-point Gauss-Legendre rule on [-1,1] (unit weight).
// Exact for polynomials of degree <= 2m-1. Rules are cached per order.
struct GaussLegendreRule {
    std::vector<double> node;
    std::vector<double> weight;
};

const GaussLegendreRule& gauss_legendre(int points);

} // namespace cms
