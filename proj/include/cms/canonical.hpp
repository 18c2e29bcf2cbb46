#pragma once

#include <vector>

#include "cms/recurrence.hpp"
#include "cms/weight.hpp"

namespace cms {

// Parameter of a canonical representation: the member x of the node set is the
// r-th root of P_a (1-based). a = 0 is the Gaussian family, a = +/-infinity the
// Lobatto family, a > 0 attaches the extra node -1, a < 0 the extra node +1.
struct CanonicalParam {
    int r = 0;
    double a = 0.0;
};

struct NodeEntry {
    double t = 0.0;
    double weight = 0.0;
    int index = 2; // 2 for interior nodes, 1 for t = +/-1
};

// Positive quadrature with index sum <= 2n+1, exact for degrees <= 2n-1.
struct CanonicalRep {
    int n = 0;
    CanonicalParam param;
    std::vector<NodeEntry> nodes; // ascending t
    double index_sum() const;
};

// Recurrence tables and cached node data for one (weight, n) pair.
struct CanonicalSystem {
    WeightSpec spec;
    int n = 0;
    double mass = 0.0;
    RecurrenceTable plain;   // measure w dt
    RecurrenceTable circle;  // measure (1 - t^2) w dt
    std::vector<double> gauss_nodes; // xi_i(0), i = 1..n
    std::vector<double> eta;         // eta_0 = -1 < eta_1 < ... < eta_n = 1
    CanonicalRep gaussian;
    CanonicalRep lobatto;
    std::vector<double> ortho_moments; // integral of phi_k w, k = 0..max table degree
};

// Builds tables to degree min(2n, degree_cap()) and the two endpoint-free reps.
CanonicalSystem make_system(const WeightSpec& spec, int n);

// Weights of a quadrature with the given nodes and indices (2 = double, 1 = simple),
// each obtained by integrating a cardinal polynomial that is 1 at its node, 0 at the
// others, with vanishing derivative at the other double nodes whenever that keeps
// the degree within the rep's exactness degree. Validates positivity and that the
// weights sum to the total mass.
std::vector<double> hermite_weights(const WeightSpec& spec, const std::vector<double>& nodes,
                                    const std::vector<int>& indices);

// r-th root of P_a (finite a), bracketed by (eta_{r-1}, eta_r); safeguarded Newton.
double xi_of_a(const CanonicalSystem& sys, int r, double a);

// Classifies x in (-1,1): Lobatto band when psi is negligible at the local scale,
// else the unique sign-consistent parameter. Round-trips through xi_of_a to 1e-10.
CanonicalParam param_of_x(const CanonicalSystem& sys, double x);

// Canonical representation whose node set contains x (snapped exactly onto x).
CanonicalRep rep_of_x(const CanonicalSystem& sys, double x);

CanonicalRep rep_of_param(const CanonicalSystem& sys, const CanonicalParam& param);

// Max relative defect of the rep on the orthonormal basis through degree 2n-1.
double exactness_residual(const CanonicalSystem& sys, const CanonicalRep& rep);

// Clamp into [xi_1(0), xi_n(0)].
double truncate_to_gaussian_range(const CanonicalSystem& sys, double x);

} // namespace cms
