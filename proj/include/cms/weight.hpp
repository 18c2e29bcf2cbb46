#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cms {

enum class PieceKind { polynomial, reciprocal_polynomial, tabulated };

// One piece of a piecewise weight on [lo, hi] within [-1, 1].
//   polynomial:            w(t) = sum_j coeffs[j] t^j
//   reciprocal_polynomial: w(t) = 1 / sum_j coeffs[j] t^j
//   tabulated:             monotone piecewise-cubic through (sample_t, sample_v)
struct Piece {
    PieceKind kind = PieceKind::polynomial;
    double lo = -1.0;
    double hi = 1.0;
    std::vector<double> coeffs;
    std::vector<double> sample_t;
    std::vector<double> sample_v;
    std::vector<double> slope; // tabulated only; filled by prepare()
};

enum class RegularityKind { lipschitz, sobolev, piecewise_abs_cont };

struct Regularity {
    RegularityKind kind = RegularityKind::lipschitz;
    double lip_constant = 0.0;    // lipschitz: bound on |w(s)-w(t)|/|s-t|
    double sobolev_p = 2.0;       // sobolev: exponent p in (1, inf)
    double sobolev_norm = 0.0;    // sobolev: ||w'||_p
};

// Piecewise weight function on [-1, 1], bounded between m and M.
// Pieces are ordered, contiguous, and cover [-1, 1]; their shared endpoints
// are the breakpoints, all strictly inside (-1, 1).
struct WeightSpec {
    std::vector<Piece> pieces;
    double m = 1.0;
    double M = 1.0;
    Regularity regularity;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> issues; // hard failures
    std::vector<std::string> notes;  // informational (breakpoint jumps, envelope stats)
};

// Computes derived data (tabulated slopes). Must run before evaluation.
void prepare(WeightSpec& spec);

// Structural and envelope diagnostics. Does not throw.
ValidationReport validate(const WeightSpec& spec);

// Throws validation_error listing the issues if validate() fails.
void require_valid(const WeightSpec& spec);

// Convenience constructor: prepare + require_valid.
WeightSpec make_weight_spec(std::vector<Piece> pieces, double m, double M,
                            Regularity regularity);

// Interior piece boundaries, ascending.
std::vector<double> breakpoints(const WeightSpec& spec);

enum class Side { left, right };

// Value at t in [-1, 1]; at a breakpoint returns the right limit.
double eval_weight(const WeightSpec& spec, double t);

// One-sided limit at t; Side::left gives the value carried by the piece ending at t.
double eval_weight_limit(const WeightSpec& spec, double t, Side side);

// Integral over [x0, x1] of p(t) w(t) dt, p given by ascending coefficients.
// Exact (closed form) on polynomial pieces; converged composite quadrature
// (1e-13 relative to the integrand's L1 mass) on reciprocal pieces;
// cell-exact on tabulated pieces. Never integrates across a breakpoint.
double integrate_poly(const WeightSpec& spec, const std::vector<double>& poly,
                      double x0, double x1);

// Integral over [x0, x1] of f(t) w(t) dt for a smooth f evaluated pointwise.
// degree_hint bounds the polynomial degree of f; on polynomial pieces the
// quadrature order is chosen so the result is exact for such f. On reciprocal
// pieces convergence is to 1e-13 relative to the L1 mass of the integrand;
// abs_floor is the absolute accuracy the caller actually needs, and keeps an
// integrand that is pure roundoff noise (for example the derivative of a
// numerically constant interpolant) from being refined forever.
double integrate_function(const WeightSpec& spec, const std::function<double(double)>& f,
                          int degree_hint, double x0, double x1, double abs_floor = 1e-15);

// Integral of w over [-1, 1].
double total_mass(const WeightSpec& spec);

// Degree of the piece polynomial, or -1 when the piece is not polynomial.
int piece_degree(const Piece& piece);

// The weight c*w with its bounds and regularity data scaled to match.
WeightSpec scaled_weight(const WeightSpec& spec, double c);

// The weight t -> w(-t).
WeightSpec reversed_weight(const WeightSpec& spec);

} // namespace cms
