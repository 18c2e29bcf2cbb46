#include "cms/quadrule.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cms/errors.hpp"

namespace cms {

namespace {

// Newton iteration on the Legendre polynomial P_m; initial guesses from the
// Tricomi cosine asymptotic, accurate enough to converge in a few steps for any m.
GaussLegendreRule make_rule(int m) {
    GaussLegendreRule rule;
    rule.node.resize(m);
    rule.weight.resize(m);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_m(x) and P_m'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15)
                break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.node[i] = -x; // ascending order: leftmost nodes first
        rule.node[m - 1 - i] = x;
        rule.weight[i] = w;
        rule.weight[m - 1 - i] = w;
    }
    if (m % 2 == 1)
        rule.node[m / 2] = 0.0;
    return rule;
}

} // namespace

const GaussLegendreRule& gauss_legendre(int points) {
    if (points < 1 || points > 600)
        throw misuse_error("gauss_legendre: order out of range: " + std::to_string(points));
    static std::mutex mu;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(points);
    if (it == cache.end())
        it = cache.emplace(points, make_rule(points)).first;
    return it->second;
}

} // namespace cms
