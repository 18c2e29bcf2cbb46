#include "cms/hermite.hpp"

#include <cmath>

#include "cms/errors.hpp"

namespace cms {

HermiteInterpolant::HermiteInterpolant(std::vector<HermiteCondition> conditions)
    : conditions_(std::move(conditions)) {
    const size_t n = conditions_.size();
    if (n == 0)
        throw misuse_error("HermiteInterpolant: no conditions");
    expo_.resize(n);
    log_deriv_.assign(n, 0.0);
    denom_.assign(n, 1.0L);
    total_conditions_ = 0;
    for (size_t v = 0; v < n; ++v) {
        expo_[v] = conditions_[v].has_deriv ? 2 : 1;
        total_conditions_ += expo_[v];
    }
    for (size_t v = 0; v < n; ++v) {
        double tv = conditions_[v].t;
        double s = 0.0;
        for (size_t u = 0; u < n; ++u) {
            if (u == v)
                continue;
            double d = tv - conditions_[u].t;
            if (d == 0.0)
                throw misuse_error("HermiteInterpolant: repeated node");
            s += expo_[u] / d;
            for (int e = 0; e < expo_[u]; ++e)
                denom_[v] *= d;
        }
        log_deriv_[v] = s;
        if (denom_[v] == 0.0L || !std::isfinite(static_cast<double>(denom_[v])))
            throw misuse_error("HermiteInterpolant: cardinal denominator out of range");
    }
}

PolyVal HermiteInterpolant::eval(double t) const {
    const size_t n = conditions_.size();
    // shared-product path: Omega(t) = prod (t - t_u)^{e_u}, each basis via division
    long double omega = 1.0L;
    double logd = 0.0;
    for (size_t u = 0; u < n; ++u) {
        double d = t - conditions_[u].t;
        if (std::abs(d) < 1e-12)
            return eval_direct(t);
        for (int e = 0; e < expo_[u]; ++e)
            omega *= d;
        logd += expo_[u] / d;
    }
    double aomega = std::abs(static_cast<double>(omega));
    if (!(aomega > 1e-280 && aomega < 1e280))
        return eval_direct(t);

    long double vacc = 0.0L, dacc = 0.0L;
    for (size_t v = 0; v < n; ++v) {
        const HermiteCondition& c = conditions_[v];
        if (c.value == 0.0 && (!c.has_deriv || c.deriv == 0.0))
            continue;
        double dv = t - c.t;
        long double wv = omega / denom_[v];
        for (int e = 0; e < expo_[v]; ++e)
            wv /= dv;
        long double wvp = wv * (logd - expo_[v] / dv);
        if (c.has_deriv) {
            long double lin = 1.0L - static_cast<long double>(log_deriv_[v]) * dv;
            vacc += c.value * (wv * lin);
            dacc += c.value * (wvp * lin - wv * log_deriv_[v]);
            vacc += c.deriv * (dv * wv);
            dacc += c.deriv * (wv + dv * wvp);
        } else {
            vacc += c.value * wv;
            dacc += c.value * wvp;
        }
    }
    return {static_cast<double>(vacc), static_cast<double>(dacc)};
}

PolyVal HermiteInterpolant::eval_direct(double t) const {
    const size_t n = conditions_.size();
    long double vacc = 0.0L, dacc = 0.0L;
    for (size_t v = 0; v < n; ++v) {
        const HermiteCondition& c = conditions_[v];
        if (c.value == 0.0 && (!c.has_deriv || c.deriv == 0.0))
            continue;
        // W_v and W_v' as a running product of ((t - t_u)/(t_v - t_u))^{e_u}
        long double p = 1.0L, dp = 0.0L;
        for (size_t u = 0; u < n; ++u) {
            if (u == v)
                continue;
            double denom = c.t - conditions_[u].t;
            double g = (t - conditions_[u].t) / denom;
            double gp = 1.0 / denom;
            for (int e = 0; e < expo_[u]; ++e) {
                dp = dp * g + p * gp;
                p = p * g;
            }
        }
        double dv = t - c.t;
        if (c.has_deriv) {
            double lin = 1.0 - log_deriv_[v] * dv;
            vacc += c.value * (p * lin);
            dacc += c.value * (dp * lin - p * log_deriv_[v]);
            vacc += c.deriv * (dv * p);
            dacc += c.deriv * (p + dv * dp);
        } else {
            vacc += c.value * p;
            dacc += c.value * dp;
        }
    }
    return {static_cast<double>(vacc), static_cast<double>(dacc)};
}

double cardinal_value(const std::vector<double>& nodes, const std::vector<int>& exps,
                      size_t v, double t) {
    double p = 1.0;
    for (size_t u = 0; u < nodes.size(); ++u) {
        if (u == v)
            continue;
        double g = (t - nodes[u]) / (nodes[v] - nodes[u]);
        for (int e = 0; e < exps[u]; ++e)
            p *= g;
    }
    return p;
}

} // namespace cms
