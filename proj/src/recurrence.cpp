#include "cms/recurrence.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "cms/errors.hpp"
#include "cms/quadrule.hpp"

namespace cms {

int degree_cap() {
    static int cap = [] {
        const char* env = std::getenv("CMS_DEGREE_CAP");
        if (!env)
            return 64;
        int v = std::atoi(env);
        if (v < 1)
            v = 1;
        if (v > 256)
            v = 256;
        return v;
    }();
    return cap;
}

namespace {

struct DiscreteMeasure {
    std::vector<double> t;
    std::vector<double> w; // includes weight value, interval scaling, and (1-t^2) factor
};

// Piece-aligned quadrature whose polynomial exactness covers all inner
// products needed for degrees <= K (integrands of degree <= 2K+1 plus the
// piece polynomial degree plus 2 for the circle factor).
DiscreteMeasure discretize(const WeightSpec& spec, int K, WeightKind kind) {
    DiscreteMeasure dm;
    for (const Piece& piece : spec.pieces) {
        auto add_panel = [&](double a, double b, int q) {
            const auto& rule = gauss_legendre(q);
            double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (int i = 0; i < q; ++i) {
                double t = c + h * rule.node[i];
                double wv = eval_weight(spec, t);
                if (kind == WeightKind::circle_modified)
                    wv *= (1.0 - t) * (1.0 + t);
                dm.t.push_back(t);
                dm.w.push_back(rule.weight[i] * h * wv);
            }
        };
        switch (piece.kind) {
        case PieceKind::polynomial:
            add_panel(piece.lo, piece.hi, K + piece_degree(piece) / 2 + 4);
            break;
        case PieceKind::reciprocal_polynomial:
            for (int p = 0; p < 8; ++p) {
                double a = piece.lo + (piece.hi - piece.lo) * p / 8.0;
                double b = piece.lo + (piece.hi - piece.lo) * (p + 1) / 8.0;
                add_panel(a, b, K + 8);
            }
            break;
        case PieceKind::tabulated:
            for (size_t cell = 0; cell + 1 < piece.sample_t.size(); ++cell)
                add_panel(piece.sample_t[cell], piece.sample_t[cell + 1],
                          std::min(K + 4, 48));
            break;
        }
    }
    return dm;
}

} // namespace

RecurrenceTable compute_recurrence(const WeightSpec& spec, int K, WeightKind kind) {
    if (K < 1 || K > degree_cap())
        throw misuse_error("compute_recurrence: K out of range [1, " +
                           std::to_string(degree_cap()) + "]");
    DiscreteMeasure dm = discretize(spec, K, kind);
    const size_t npts = dm.t.size();

    RecurrenceTable table;
    table.kind = kind;
    table.alpha.resize(K + 1);
    table.beta.resize(K + 1);
    table.norm.resize(K + 1);

    // monic polynomial values at the quadrature points, kept for the
    // orthogonality audit below
    std::vector<std::vector<double>> p(K + 1, std::vector<double>(npts));
    std::vector<long double> sq(K + 1);

    long double mass = 0.0L, tmass = 0.0L;
    for (size_t i = 0; i < npts; ++i) {
        mass += dm.w[i];
        tmass += dm.w[i] * dm.t[i];
        p[0][i] = 1.0;
    }
    if (!(mass > 0.0L))
        throw ill_conditioned_error("recurrence: nonpositive measure mass", 0);
    sq[0] = mass;
    table.beta[0] = static_cast<double>(mass);
    table.alpha[0] = static_cast<double>(tmass / mass);
    table.norm[0] = std::sqrt(static_cast<double>(mass));

    for (int k = 0; k + 1 <= K; ++k) {
        const std::vector<double>& pk = p[k];
        const std::vector<double>* pkm1 = (k > 0) ? &p[k - 1] : nullptr;
        std::vector<double>& pk1 = p[k + 1];
        long double s2 = 0.0L, st = 0.0L;
        for (size_t i = 0; i < npts; ++i) {
            double v = (dm.t[i] - table.alpha[k]) * pk[i];
            if (pkm1)
                v -= table.beta[k] * (*pkm1)[i];
            pk1[i] = v;
            long double wv = dm.w[i] * v;
            s2 += wv * v;
            st += wv * v * dm.t[i];
        }
        sq[k + 1] = s2;
        double beta_next = static_cast<double>(s2 / sq[k]);
        if (!(beta_next > 0.0) || !std::isfinite(beta_next))
            throw ill_conditioned_error(
                "recurrence: nonpositive beta at degree " + std::to_string(k + 1), k + 1);
        table.beta[k + 1] = beta_next;
        table.alpha[k + 1] = static_cast<double>(st / s2);
        table.norm[k + 1] = std::sqrt(static_cast<double>(s2));
        // every alpha is a mean of the support [-1, 1]; escaping it means the
        // discrete inner products have lost orthogonality
        if (!(std::abs(table.alpha[k + 1]) < 1.0))
            throw ill_conditioned_error(
                "recurrence: alpha outside (-1, 1) at degree " + std::to_string(k + 1), k + 1);
    }

    // stochastic orthogonality audit on the same discrete measure
    std::mt19937 rng(0x5eedu + static_cast<unsigned>(K) * 7u +
                     (kind == WeightKind::circle_modified ? 1u : 0u));
    std::uniform_int_distribution<int> pick(0, K);
    int audits = std::min(4 * K, 128);
    for (int trial = 0; trial < audits; ++trial) {
        int i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        long double dot = 0.0L;
        for (size_t q = 0; q < npts; ++q)
            dot += dm.w[q] * p[i][q] * p[j][q];
        double rel = std::abs(static_cast<double>(dot)) / (table.norm[i] * table.norm[j]);
        if (rel > 1e-10)
            throw ill_conditioned_error("recurrence: orthogonality residual " +
                                            std::to_string(rel) + " between degrees " +
                                            std::to_string(i) + " and " + std::to_string(j),
                                        std::max(i, j));
    }
    return table;
}

PolyVal eval_orthonormal(const RecurrenceTable& table, int degree, double x) {
    if (degree < 0 || degree > table.max_degree())
        throw misuse_error("eval_orthonormal: degree " + std::to_string(degree) +
                           " outside table range [0, " + std::to_string(table.max_degree()) + "]");
    double vm1 = 0.0, dm1 = 0.0;
    double v = 1.0 / table.norm[0], d = 0.0;
    for (int k = 0; k < degree; ++k) {
        double sb1 = std::sqrt(table.beta[k + 1]);
        double sb0 = std::sqrt(table.beta[k]);
        double vnext = ((x - table.alpha[k]) * v - (k > 0 ? sb0 * vm1 : 0.0)) / sb1;
        double dnext = (v + (x - table.alpha[k]) * d - (k > 0 ? sb0 * dm1 : 0.0)) / sb1;
        vm1 = v;
        dm1 = d;
        v = vnext;
        d = dnext;
    }
    return {v, d};
}

PolyVal eval_P(const RecurrenceTable& plain, const RecurrenceTable& circle, int n,
               double a, double x) {
    if (!std::isfinite(a))
        throw misuse_error("eval_P: parameter a must be finite; the Lobatto family "
                           "is evaluated through psi");
    if (n < 1)
        throw misuse_error("eval_P: n must be >= 1");
    PolyVal phi = eval_phi(plain, n, x);
    PolyVal psi = eval_psi(circle, n - 1, x);
    double s = (a > 0.0) ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
    double lin = 1.0 - s * x;
    PolyVal out;
    out.value = phi.value - a * lin * psi.value;
    out.deriv = phi.deriv + a * s * psi.value - a * lin * psi.deriv;
    return out;
}

} // namespace cms
