#include "cms/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "cms/errors.hpp"
#include "cms/hermite.hpp"

namespace cms {

namespace {

struct TridiagEigen {
    std::vector<double> values;
    std::vector<double> first_component;
};

TridiagEigen tridiag_eigensolve(const std::vector<double>& diag, const std::vector<double>& sub) {
    const int n = static_cast<int>(diag.size());
    Eigen::VectorXd d(n), e(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i)
        d[i] = diag[i];
    for (int i = 0; i + 1 < n; ++i)
        e[i] = sub[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw convergence_error("tridiagonal eigensolve failed");
    TridiagEigen out;
    out.values.resize(n);
    out.first_component.resize(n);
    for (int i = 0; i < n; ++i) {
        out.values[i] = es.eigenvalues()[i];
        out.first_component[i] = es.eigenvectors()(0, i);
    }
    return out;
}

// Jacobi-matrix roots of the degree-k monic polynomial of the table's measure.
std::vector<double> jacobi_roots(const RecurrenceTable& table, int k,
                                 std::vector<double>* weights_scaled) {
    std::vector<double> d(table.alpha.begin(), table.alpha.begin() + k);
    std::vector<double> e(k > 1 ? k - 1 : 0);
    for (int i = 0; i + 1 < k; ++i)
        e[i] = std::sqrt(table.beta[i + 1]);
    TridiagEigen eig = tridiag_eigensolve(d, e);
    if (weights_scaled) {
        weights_scaled->resize(k);
        for (int i = 0; i < k; ++i)
            (*weights_scaled)[i] =
                table.beta[0] * eig.first_component[i] * eig.first_component[i];
    }
    return eig.values;
}

int sum_indices(const std::vector<int>& indices) {
    int s = 0;
    for (int i : indices)
        s += i;
    return s;
}

} // namespace

double CanonicalRep::index_sum() const {
    double s = 0;
    for (const NodeEntry& e : nodes)
        s += e.index;
    return s;
}

std::vector<double> hermite_weights(const WeightSpec& spec, const std::vector<double>& nodes,
                                    const std::vector<int>& indices) {
    const size_t N = nodes.size();
    if (N == 0 || indices.size() != N)
        throw misuse_error("hermite_weights: node/index size mismatch");
    for (size_t i = 0; i + 1 < N; ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw misuse_error("hermite_weights: nodes must be strictly ascending");
    const int index_sum = sum_indices(indices);
    const int exactness_degree = 2 * (index_sum / 2) - 1;

    double mass = total_mass(spec);
    std::vector<double> weights(N);
    std::vector<int> exps(N);
    long double wsum = 0.0L;
    for (size_t u = 0; u < N; ++u) {
        int deg = 0;
        for (size_t v = 0; v < N; ++v) {
            exps[v] = indices[v];
            if (v != u)
                deg += indices[v];
        }
        if (deg > exactness_degree) {
            // endpoint node of an index-(2n+1) rep: value conditions alone
            // already pin the weight; drop the derivative factors
            for (size_t v = 0; v < N; ++v)
                exps[v] = 1;
            deg = static_cast<int>(N) - 1;
        }
        double w = integrate_function(
            spec, [&](double t) { return cardinal_value(nodes, exps, u, t); }, deg, -1.0, 1.0);
        if (!(w > 0.0)) {
            std::ostringstream os;
            os << "hermite_weights: nonpositive weight " << w << " at node " << nodes[u];
            throw consistency_error(os.str());
        }
        weights[u] = w;
        wsum += w;
    }
    if (std::abs(static_cast<double>(wsum) - mass) > 1e-9 * mass) {
        std::ostringstream os;
        os << "hermite_weights: weights sum to " << static_cast<double>(wsum)
           << ", total mass is " << mass;
        throw consistency_error(os.str());
    }
    return weights;
}

CanonicalSystem make_system(const WeightSpec& spec, int n) {
    if (n < 1)
        throw misuse_error("make_system: n must be >= 1");
    if (n > degree_cap())
        throw misuse_error("make_system: n exceeds degree cap " + std::to_string(degree_cap()));
    require_valid(spec);

    CanonicalSystem sys;
    sys.spec = spec;
    sys.n = n;
    sys.mass = total_mass(spec);
    const int K = std::min(2 * n, degree_cap());
    sys.plain = compute_recurrence(spec, K, WeightKind::plain);
    sys.circle = compute_recurrence(spec, K, WeightKind::circle_modified);

    std::vector<double> gauss_w;
    sys.gauss_nodes = jacobi_roots(sys.plain, n, &gauss_w);
    for (size_t i = 0; i < sys.gauss_nodes.size(); ++i) {
        if (!(sys.gauss_nodes[i] > -1.0 && sys.gauss_nodes[i] < 1.0))
            throw consistency_error("gaussian node outside (-1, 1)");
        if (i > 0 && !(sys.gauss_nodes[i - 1] < sys.gauss_nodes[i]))
            throw consistency_error("gaussian nodes not strictly ascending");
    }
    sys.gaussian.n = n;
    sys.gaussian.param = {0, 0.0};
    for (int i = 0; i < n; ++i)
        sys.gaussian.nodes.push_back({sys.gauss_nodes[i], gauss_w[i], 2});

    sys.eta.push_back(-1.0);
    if (n >= 2) {
        std::vector<double> interior = jacobi_roots(sys.circle, n - 1, nullptr);
        for (double t : interior)
            sys.eta.push_back(t);
    }
    sys.eta.push_back(1.0);

    std::vector<int> lob_idx(sys.eta.size(), 2);
    lob_idx.front() = lob_idx.back() = 1;
    std::vector<double> lob_w = hermite_weights(spec, sys.eta, lob_idx);
    sys.lobatto.n = n;
    sys.lobatto.param = {0, std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < sys.eta.size(); ++i)
        sys.lobatto.nodes.push_back({sys.eta[i], lob_w[i], lob_idx[i]});

    sys.ortho_moments.resize(sys.plain.max_degree() + 1);
    for (int k = 0; k <= sys.plain.max_degree(); ++k)
        sys.ortho_moments[k] = integrate_function(
            spec, [&](double t) { return eval_phi(sys.plain, k, t).value; }, k, -1.0, 1.0);
    return sys;
}

double xi_of_a(const CanonicalSystem& sys, int r, double a) {
    if (r < 1 || r > sys.n)
        throw misuse_error("xi_of_a: root index out of range");
    if (!std::isfinite(a))
        throw misuse_error("xi_of_a: a must be finite; Lobatto nodes are eta_r");
    if (a == 0.0)
        return sys.gauss_nodes[r - 1];

    double lo = sys.eta[r - 1], hi = sys.eta[r];
    auto f = [&](double t) { return eval_P(sys.plain, sys.circle, sys.n, a, t); };
    double flo = f(lo).value, fhi = f(hi).value;
    if (!(flo * fhi < 0.0))
        throw consistency_error("xi_of_a: bracket endpoints do not change sign");

    const double wtol = 1e-14;
    double x = 0.5 * (lo + hi);
    // contraction phase: Newton steps with a forced bisection every other
    // iteration, so the bracket is guaranteed to collapse to wtol
    for (int iter = 0; iter < 200 && (hi - lo) > wtol; ++iter) {
        PolyVal pv = f(x);
        if (pv.value == 0.0)
            return x;
        if ((pv.value < 0.0) == (flo < 0.0))
            lo = x;
        else
            hi = x;
        double xn = (iter % 2 == 0 && pv.deriv != 0.0) ? x - pv.value / pv.deriv
                                                       : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi))
            xn = 0.5 * (lo + hi);
        x = xn;
    }
    if ((hi - lo) > wtol)
        throw convergence_error("xi_of_a: bracket failed to contract");
    // polish phase: the sign-change bracket already pins the root to width
    // wtol; Newton can only sharpen the last bits, so keep the smallest
    // residual seen rather than demanding one below the evaluation noise
    x = 0.5 * (lo + hi);
    double best_x = x;
    double best_f = std::abs(f(x).value);
    for (int iter = 0; iter < 8 && best_f > 0.0; ++iter) {
        PolyVal pv = f(x);
        if (pv.deriv == 0.0)
            break;
        double step = pv.value / pv.deriv;
        x -= step;
        double fx = std::abs(f(x).value);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
        if (std::abs(step) <= 0.25 * wtol)
            break;
    }
    return best_x;
}

CanonicalParam param_of_x(const CanonicalSystem& sys, double x) {
    if (!(x > -1.0 && x < 1.0))
        throw misuse_error("param_of_x: x must lie strictly inside (-1, 1)");
    const int n = sys.n;
    double psix = eval_psi(sys.circle, n - 1, x).value;

    if (n >= 2) {
        // Lobatto band: psi negligible against its local scale near the nearest root
        int jbest = 1;
        for (int j = 2; j <= n - 1; ++j)
            if (std::abs(x - sys.eta[j]) < std::abs(x - sys.eta[jbest]))
                jbest = j;
        double gap = std::min(sys.eta[jbest] - sys.eta[jbest - 1],
                              sys.eta[jbest + 1] - sys.eta[jbest]);
        double s1 = std::abs(eval_psi(sys.circle, n - 1, sys.eta[jbest] - 0.5 * gap).value);
        double s2 = std::abs(eval_psi(sys.circle, n - 1, sys.eta[jbest] + 0.5 * gap).value);
        double local_scale = std::max(s1, s2);
        if (std::abs(psix) <= 1e-9 * local_scale) {
            if (std::abs(x - sys.eta[jbest]) > 1e-8)
                throw consistency_error("param_of_x: Lobatto band hit away from eta root");
            return {jbest, std::numeric_limits<double>::infinity()};
        }
    }

    int r = 1;
    for (int j = 1; j <= n - 1; ++j)
        if (sys.eta[j] <= x)
            ++r;

    // an exact hit on a Gaussian node: a would come out as evaluation noise
    // around zero and attach a spurious endpoint of noise-level weight
    if (std::abs(x - sys.gauss_nodes[r - 1]) <= 1e-13)
        return {r, 0.0};

    double phix = eval_phi(sys.plain, n, x).value;
    double a = phix / ((1.0 - x) * psix);
    if (!(a >= 0.0))
        a = phix / ((1.0 + x) * psix);

    double back = xi_of_a(sys, r, a);
    if (std::abs(back - x) > 1e-10) {
        std::ostringstream os;
        os << "param_of_x: round-trip defect " << std::abs(back - x) << " at x=" << x
           << " (r=" << r << ", a=" << a << ")";
        throw consistency_error(os.str());
    }
    return {r, a};
}

CanonicalRep rep_of_param(const CanonicalSystem& sys, const CanonicalParam& param) {
    CanonicalRep rep;
    rep.n = sys.n;
    rep.param = param;
    if (std::isinf(param.a)) {
        rep.nodes = sys.lobatto.nodes;
        return rep;
    }
    if (param.a == 0.0) {
        rep.nodes = sys.gaussian.nodes;
        return rep;
    }
    std::vector<double> nodes;
    std::vector<int> indices;
    if (param.a > 0.0) {
        nodes.push_back(-1.0);
        indices.push_back(1);
    }
    for (int i = 1; i <= sys.n; ++i) {
        nodes.push_back(xi_of_a(sys, i, param.a));
        indices.push_back(2);
    }
    if (param.a < 0.0) {
        nodes.push_back(1.0);
        indices.push_back(1);
    }
    std::vector<double> w = hermite_weights(sys.spec, nodes, indices);
    for (size_t i = 0; i < nodes.size(); ++i)
        rep.nodes.push_back({nodes[i], w[i], indices[i]});
    return rep;
}

CanonicalRep rep_of_x(const CanonicalSystem& sys, double x) {
    CanonicalParam param = param_of_x(sys, x);
    CanonicalRep rep = rep_of_param(sys, param);
    // position of the r-th root of P_a within the node list
    size_t pos;
    if (std::isinf(param.a))
        pos = static_cast<size_t>(param.r);
    else if (param.a > 0.0)
        pos = static_cast<size_t>(param.r);
    else
        pos = static_cast<size_t>(param.r - 1);
    if (pos >= rep.nodes.size() || std::abs(rep.nodes[pos].t - x) > 1e-9)
        throw consistency_error("rep_of_x: representation does not contain x");
    rep.nodes[pos].t = x;
    return rep;
}

double exactness_residual(const CanonicalSystem& sys, const CanonicalRep& rep) {
    const int D = 2 * rep.n - 1;
    if (D > sys.plain.max_degree())
        throw misuse_error("exactness_residual: table degree too small for 2n-1");
    double worst = 0.0;
    for (int k = 0; k <= D; ++k) {
        long double qsum = 0.0L, asum = 0.0L;
        for (const NodeEntry& e : rep.nodes) {
            double v = eval_phi(sys.plain, k, e.t).value;
            qsum += e.weight * v;
            asum += e.weight * std::abs(v);
        }
        double denom = std::max(1.0, static_cast<double>(asum));
        double res = std::abs(static_cast<double>(qsum) - sys.ortho_moments[k]) / denom;
        worst = std::max(worst, res);
    }
    return worst;
}

double truncate_to_gaussian_range(const CanonicalSystem& sys, double x) {
    return std::clamp(x, sys.gauss_nodes.front(), sys.gauss_nodes.back());
}

} // namespace cms
