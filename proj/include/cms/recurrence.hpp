#pragma once

#include <vector>

#include "cms/weight.hpp"

namespace cms {

enum class WeightKind {
    plain,          // measure w(t) dt
    circle_modified // measure (1 - t^2) w(t) dt
};

// Three-term recurrence data for monic orthogonal polynomials:
//   p_{k+1}(t) = (t - alpha[k]) p_k(t) - beta[k] p_{k-1}(t),  p_0 = 1
// beta[0] is the total mass of the measure; norm[k] = ||p_k||_L2(measure).
// Orthonormal evaluation is supported up to degree K = alpha.size() - 1.
struct RecurrenceTable {
    WeightKind kind = WeightKind::plain;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> norm;
    int max_degree() const { return static_cast<int>(alpha.size()) - 1; }
};

// Maximum supported polynomial degree; overridable via CMS_DEGREE_CAP.
int degree_cap();

// Stieltjes procedure with piece-aligned Gauss-Legendre inner products
// (exact on polynomial pieces). Validates beta positivity and orthogonality
// residuals on random index pairs (<= 1e-10), else throws ill_conditioned_error.
RecurrenceTable compute_recurrence(const WeightSpec& spec, int K, WeightKind kind);

struct PolyVal {
    double value = 0.0;
    double deriv = 0.0;
};

// Orthonormal polynomial of the table's measure, with derivative, by forward
// recurrence. Leading coefficients are positive.
PolyVal eval_orthonormal(const RecurrenceTable& table, int degree, double x);

// phi_n: degree-n orthonormal polynomial of w.
inline PolyVal eval_phi(const RecurrenceTable& plain, int n, double x) {
    return eval_orthonormal(plain, n, x);
}

// psi_k: degree-k orthonormal polynomial of (1 - t^2) w. The companion of
// phi_n in the parametrized family is psi_{n-1}.
inline PolyVal eval_psi(const RecurrenceTable& circle, int k, double x) {
    return eval_orthonormal(circle, k, x);
}

// P_a(x) = phi_n(x) - a (1 - sgn(a) x) psi_{n-1}(x), with derivative.
// a must be finite; the infinite-a (Lobatto) family is handled through psi.
PolyVal eval_P(const RecurrenceTable& plain, const RecurrenceTable& circle, int n,
               double a, double x);

} // namespace cms
