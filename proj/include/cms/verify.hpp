#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cms/canonical.hpp"
#include "cms/extremal.hpp"
#include "cms/weight.hpp"

namespace cms {

struct Witness {
    double x = 0.0;
    int n = 0;
    double value = 0.0;
    std::string detail;
};

// Result of one empirical check: measured constants (named, usually per n),
// the worst witness, and a pass flag. Non-gating checks are informational and
// never decide an exit code.
struct CheckReport {
    std::string name;
    std::string weight_name;
    bool pass = false;
    bool gating = true;
    double tolerance = 0.0;
    std::vector<std::pair<std::string, double>> constants;
    Witness worst;
    std::vector<std::string> notes;
};

// Shared per-weight cache for the check suite: systems and profiles are built
// once per (n) / (n, grid) and reused across checks.
class VerifyInput {
public:
    VerifyInput(std::string weight_name, WeightSpec spec);

    const std::string& weight_name() const { return weight_name_; }
    const WeightSpec& spec() const { return spec_; }
    const CanonicalSystem& system(int n);
    const Profile& profile(int n, int grid);

private:
    std::string weight_name_;
    WeightSpec spec_;
    std::map<int, CanonicalSystem> systems_;
    std::map<std::pair<int, int>, Profile> profiles_;
};

// Quadrature exactness of Gaussian, Lobatto and sampled intermediate reps on
// the orthonormal basis through degree 2n-1.
CheckReport check_exactness(VerifyInput& in, const std::vector<int>& ns,
                            int xs_per_n, double tol);

// Sandwich pi_lower <= cumulative(w) <= pi, the identity pi - pi_lower = lambda,
// and monotonicity of both envelopes along the grid.
CheckReport check_cms(VerifyInput& in, const std::vector<int>& ns, int grid, double rel_tol);
CheckReport check_cms_on_profile(const WeightSpec& spec, const std::string& weight_name,
                                 const std::vector<const Profile*>& profiles, double rel_tol);

// pi' against a centered difference of pi at the non-excluded grid rows.
CheckReport check_pi_prime_fd(VerifyInput& in, const std::vector<int>& ns, int grid,
                              double h, double tol, double min_pass_fraction);

// Differential envelope for a Lipschitz weight:
//   pi' - w <= K+ lambda min{1/(1+x), n^2},  w - pi' <= K- lambda / (1-x).
// Measures K+/K- per n and requires stability across n.
CheckReport check_thm_lipschitz(VerifyInput& in, const std::vector<int>& ns, int grid,
                                double stability_factor);
CheckReport check_thm_lipschitz_on(const WeightSpec& spec, const std::string& weight_name,
                                   const std::vector<const Profile*>& profiles,
                                   double stability_factor);

// Same envelope with an extra lambda^(1-1/p) term for weights with derivative
// in L_p.
CheckReport check_thm_abs_cont(VerifyInput& in, const std::vector<int>& ns, int grid,
                               double stability_factor);

// For weights with jumps: |pi' - w| <= eps away from the singular set, where
// "away" means 1 - x^2 >= C/n^2 and distance >= C/n from each breakpoint;
// searches ns upward for a C whose region covers >= min_coverage of the rows,
// and measures the jump of pi' - w across each breakpoint.
CheckReport check_thm_discont(VerifyInput& in, const std::vector<int>& ns, int grid,
                              double eps, double min_coverage, int jump_n);

// lambda against M max{sqrt(1-x^2), 1/n} / n from above and below.
CheckReport check_lambda_bounds(VerifyInput& in, const std::vector<int>& ns, int grid,
                                double stability_factor);

// Root geometry: interlacing with the Lobatto nodes, monotonicity in a,
// neighbor spacing, movement under parameter separation, distance from the
// endpoints. legendre_reference adds fixed arccos-bracket bounds (unit weight).
CheckReport check_node_geometry(VerifyInput& in, const std::vector<int>& ns,
                                bool legendre_reference, double stability_factor);

// q_x: pointwise bound (M/m)(1 + sgn(x-t) x)/(1 + sgn(x-t) t) on sampled pairs,
// plus stability of the localization constants sup q_x and
// sup q_x n max{1, n sqrt(1-t^2)} (t-x)^2.
CheckReport check_qx_bounds(VerifyInput& in, const std::vector<int>& ns, int pairs,
                            double stability_factor);

// Endpoint masses: lambda_x(-1)(1+x) and lambda_x(1)(1-x) against m/n^2 and
// M/n^2 envelopes, measured over sampled x.
CheckReport check_endpoint_weights(VerifyInput& in, const std::vector<int>& ns,
                                   int xs_per_n, double stability_factor);

// |P_a'| at its roots against sqrt(n/lambda) max{|a|/(1+sgn(a)x), 1/sqrt(1-x^2)}
// from below.
CheckReport check_pa_prime(VerifyInput& in, const std::vector<int>& ns,
                           double stability_factor);

// sqrt(mass)-normalized envelope of |phi_n| + sqrt(1-x^2)|psi_{n-1}| against
// min{n, 1/sqrt(1-x^2)}^(1/2), and derivative growth against the same factor
// to powers 3/2 and 5/2.
CheckReport check_polynomial_bounds(VerifyInput& in, const std::vector<int>& ns, int grid,
                                    double stability_factor);

// Unit-circle consistency (informational, never gating): orthonormal Szego
// polynomial of w(cos t)|sin t| at even degree 2n against the phi_n/psi_{n-1}
// combination on sampled angles.
CheckReport check_circle_consistency(VerifyInput& in, int n, double tol);

// Named suites ("all" runs every applicable check). Unknown names throw
// misuse_error listing the valid ones.
std::vector<CheckReport> run_suite(VerifyInput& in, const std::vector<std::string>& suites);
std::vector<std::string> suite_names();

std::string reports_to_text(const std::vector<CheckReport>& reports);
std::string reports_to_csv(const std::vector<CheckReport>& reports);
bool all_gating_pass(const std::vector<CheckReport>& reports);

} // namespace cms
