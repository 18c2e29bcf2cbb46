#include "cms/extremal.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cms/errors.hpp"

namespace cms {

namespace {

size_t find_node(const CanonicalRep& rep, double x) {
    for (size_t i = 0; i < rep.nodes.size(); ++i)
        if (rep.nodes[i].t == x)
            return i;
    for (size_t i = 0; i < rep.nodes.size(); ++i)
        if (std::abs(rep.nodes[i].t - x) < 1e-12)
            return i;
    throw misuse_error("x is not a node of the representation");
}

// q_x through the parametrized family: a ratio of P_a (or psi) squared.
double qx_family_form(const CanonicalSystem& sys, const CanonicalRep& rep, double x, double t) {
    double a = rep.param.a;
    if (std::isinf(a)) {
        PolyVal pt = eval_psi(sys.circle, sys.n - 1, t);
        PolyVal px = eval_psi(sys.circle, sys.n - 1, x);
        double ratio = pt.value / ((t - x) * px.deriv);
        return (1.0 - t * t) / (1.0 - x * x) * ratio * ratio;
    }
    PolyVal pt = eval_P(sys.plain, sys.circle, sys.n, a, t);
    PolyVal px = eval_P(sys.plain, sys.circle, sys.n, a, x);
    double s = (a > 0.0) ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
    double ratio = pt.value / ((t - x) * px.deriv);
    return (1.0 + s * t) / (1.0 + s * x) * ratio * ratio;
}

} // namespace

Qx::Qx(const CanonicalSystem& sys, const CanonicalRep& rep, double x) : x_(x) {
    size_t xpos = find_node(rep, x);
    for (size_t i = 0; i < rep.nodes.size(); ++i) {
        nodes_.push_back(rep.nodes[i].t);
        exps_.push_back(rep.nodes[i].index);
    }
    xpos_ = xpos;
    degree_ = 0;
    for (size_t i = 0; i < exps_.size(); ++i)
        if (i != xpos_)
            degree_ += exps_[i];

    // nonnegativity scan on a Chebyshev grid
    for (int j = 0; j < 1000; ++j) {
        double t = std::cos(3.14159265358979323846 * (j + 0.5) / 1000.0);
        if ((*this)(t) < -1e-10)
            throw consistency_error("q_x negative on scan at t=" + std::to_string(t));
    }
    // cross-check against the squared-family form away from the nodes
    for (int j = 0; j < 64; ++j) {
        double t = std::cos(3.14159265358979323846 * (j + 0.5) / 64.0);
        if (std::abs(t - x) < 0.05)
            continue;
        bool near_node = false;
        for (double u : nodes_)
            if (std::abs(t - u) < 0.02)
                near_node = true;
        if (near_node)
            continue;
        double q1 = (*this)(t);
        double q2 = qx_family_form(sys, rep, x, t);
        if (std::abs(q1 - q2) > 1e-9 * std::max({std::abs(q1), std::abs(q2), 1e-12})) {
            std::ostringstream os;
            os << "q_x forms disagree at t=" << t << ": product " << q1 << ", family " << q2;
            throw consistency_error(os.str());
        }
    }
}

double Qx::operator()(double t) const {
    return cardinal_value(nodes_, exps_, xpos_, t);
}

double Qx::integral(const WeightSpec& spec) const {
    return integrate_function(
        spec, [&](double t) { return (*this)(t); }, degree_, -1.0, 1.0,
        1e-12 * std::max(spec.M, 1.0));
}

namespace {

HermiteInterpolant build_indicator_interpolant(const CanonicalRep& rep, double x,
                                               bool include_x) {
    std::vector<HermiteCondition> conds;
    for (const NodeEntry& e : rep.nodes) {
        HermiteCondition c;
        c.t = e.t;
        c.value = (e.t < x || (include_x && e.t == x)) ? 1.0 : 0.0;
        c.has_deriv = (e.index == 2 && e.t != x);
        c.deriv = 0.0;
        conds.push_back(c);
    }
    return HermiteInterpolant(std::move(conds));
}

} // namespace

HermiteInterpolant build_px(const CanonicalRep& rep, double x) {
    find_node(rep, x);
    return build_indicator_interpolant(rep, x, true);
}

HermiteInterpolant build_px_lower(const CanonicalRep& rep, double x) {
    find_node(rep, x);
    return build_indicator_interpolant(rep, x, false);
}

PiValues pi_at(const CanonicalSystem& sys, const CanonicalRep& rep, double x) {
    size_t xpos = find_node(rep, x);
    PiValues out;
    for (size_t i = 0; i < rep.nodes.size(); ++i) {
        double t = rep.nodes[i].t, w = rep.nodes[i].weight;
        if (t < x || i == xpos)
            out.pi += w;
        if (t < x && i != xpos)
            out.pi_lower += w;
    }
    out.lambda = rep.nodes[xpos].weight;

    HermiteInterpolant px = build_px(rep, x);
    HermiteInterpolant pxl = build_px_lower(rep, x);
    double tol = 1e-9 * std::max(sys.mass, 1.0);
    double i_up = integrate_function(
        sys.spec, [&](double t) { return px.eval(t).value; }, px.degree(), -1.0, 1.0,
        1e-3 * tol);
    double i_lo = integrate_function(
        sys.spec, [&](double t) { return pxl.eval(t).value; }, pxl.degree(), -1.0, 1.0,
        1e-3 * tol);
    if (std::abs(i_up - out.pi) > tol || std::abs(i_lo - out.pi_lower) > tol) {
        std::ostringstream os;
        os << "pi_at: weight sums and interpolant integrals disagree at x=" << x << " (pi "
           << out.pi << " vs " << i_up << ", pi_lower " << out.pi_lower << " vs " << i_lo << ")";
        throw consistency_error(os.str());
    }
    return out;
}

double pi_prime_at(const CanonicalSystem& sys, const CanonicalRep& rep, double x) {
    size_t xpos = find_node(rep, x);
    double lambda = rep.nodes[xpos].weight;
    HermiteInterpolant px = build_px(rep, x);
    double primary = -lambda * px.eval(x).deriv;

    double boundary = 0.0;
    for (const NodeEntry& e : rep.nodes)
        if (e.t == -1.0 || e.t == 1.0)
            boundary += e.weight * px.eval(e.t).deriv;
    double interior = integrate_function(
        sys.spec, [&](double t) { return px.eval(t).deriv; },
        std::max(px.degree() - 1, 0), -1.0, 1.0,
        1e-12 * std::max(sys.mass, 1.0));
    double alt = boundary - interior;

    double scale = std::max(sys.spec.M, std::abs(primary));
    if (std::abs(primary - alt) > 1e-8 * scale) {
        std::ostringstream os;
        os << "pi_prime_at: derivative forms disagree at x=" << x << ": " << primary << " vs "
           << alt;
        throw consistency_error(os.str());
    }
    return primary;
}

Profile make_profile(const CanonicalSystem& sys, int grid_points) {
    if (grid_points < 8)
        throw misuse_error("make_profile: grid too small");
    Profile prof;
    prof.n = sys.n;
    prof.grid_points = grid_points;
    prof.step = 2.0 / (grid_points - 1);

    std::vector<double> kinks = sys.gauss_nodes;
    kinks.insert(kinks.end(), sys.eta.begin() + 1, sys.eta.end() - 1);

    prof.rows.reserve(grid_points - 2);
    for (int j = 1; j <= grid_points - 2; ++j) {
        ProfileRow row;
        row.x = -1.0 + prof.step * j;
        row.pi_prime = std::numeric_limits<double>::quiet_NaN();
        for (double u : kinks)
            if (std::abs(row.x - u) < 0.5 * prof.step)
                row.excluded = true;
        try {
            row.w = eval_weight(sys.spec, row.x);
            CanonicalRep rep = rep_of_x(sys, row.x);
            PiValues pv = pi_at(sys, rep, row.x);
            row.pi = pv.pi;
            row.pi_lower = pv.pi_lower;
            row.lambda = pv.lambda;
            if (!row.excluded)
                row.pi_prime = pi_prime_at(sys, rep, row.x);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        prof.rows.push_back(std::move(row));
    }
    return prof;
}

} // namespace cms
