#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "cms/errors.hpp"
#include "cms/recurrence.hpp"
#include "cms/weight.hpp"

using namespace cms;

namespace {

WeightSpec unit_weight() {
    Piece p;
    p.coeffs = {1.0};
    return make_weight_spec({p}, 1.0, 1.0, Regularity{});
}

WeightSpec ramp_weight() {
    Piece lo, hi;
    lo.hi = 0.0;
    lo.coeffs = {1.0};
    hi.lo = 0.0;
    hi.coeffs = {1.0, 4.0};
    Regularity reg;
    reg.lip_constant = 4.0;
    return make_weight_spec({lo, hi}, 1.0, 5.0, reg);
}

WeightSpec even_quadratic_weight() {
    Piece p;
    p.coeffs = {1.0, 0.0, 1.0}; // 1 + t^2
    Regularity reg;
    reg.lip_constant = 2.0;
    return make_weight_spec({p}, 1.0, 2.0, reg);
}

} // namespace

TEST_CASE("unit weight reproduces the Legendre recurrence") {
    RecurrenceTable t = compute_recurrence(unit_weight(), 12, WeightKind::plain);
    CHECK(t.beta[0] == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k <= 12; ++k)
        CHECK(std::abs(t.alpha[k]) < 1e-13);
    for (int k = 1; k <= 12; ++k) {
        double expected = double(k) * k / (4.0 * k * k - 1.0);
        CHECK(t.beta[k] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("circle-modified unit weight reproduces the Jacobi(1,1) recurrence") {
    RecurrenceTable t = compute_recurrence(unit_weight(), 10, WeightKind::circle_modified);
    CHECK(t.beta[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    for (int k = 0; k <= 10; ++k)
        CHECK(std::abs(t.alpha[k]) < 1e-13);
    for (int k = 1; k <= 10; ++k) {
        double expected = double(k) * (k + 2) / ((2.0 * k + 1) * (2.0 * k + 3));
        CHECK(t.beta[k] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("even weights have vanishing alpha") {
    RecurrenceTable t = compute_recurrence(even_quadratic_weight(), 14, WeightKind::plain);
    for (int k = 0; k <= 14; ++k)
        CHECK(std::abs(t.alpha[k]) < 1e-13);
    for (int k = 1; k <= 14; ++k)
        CHECK(t.beta[k] > 0.0);
}

TEST_CASE("orthonormal polynomials are orthonormal under the weight") {
    WeightSpec w = ramp_weight();
    const int K = 10;
    RecurrenceTable t = compute_recurrence(w, K, WeightKind::plain);
    for (int i = 0; i <= K; ++i)
        for (int j = i; j <= K; ++j) {
            double dot = integrate_function(
                w,
                [&](double x) {
                    return eval_orthonormal(t, i, x).value * eval_orthonormal(t, j, x).value;
                },
                i + j, -1.0, 1.0);
            CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
        }
}

TEST_CASE("orthonormal evaluation: normalization and derivative consistency") {
    WeightSpec w = ramp_weight();
    RecurrenceTable t = compute_recurrence(w, 9, WeightKind::plain);
    // degree 0 is 1/sqrt(mass)
    CHECK(eval_orthonormal(t, 0, 0.37).value ==
          doctest::Approx(1.0 / std::sqrt(4.0)).epsilon(1e-14));
    // leading coefficients positive: value at large argument of highest degree
    CHECK(eval_orthonormal(t, 9, 1.0).value > 0.0);
    // derivative against a centered difference
    const double h = 1e-6;
    for (int deg : {1, 4, 9})
        for (double x : {-0.83, -0.2, 0.41, 0.9}) {
            PolyVal pv = eval_orthonormal(t, deg, x);
            double fd = (eval_orthonormal(t, deg, x + h).value -
                         eval_orthonormal(t, deg, x - h).value) /
                        (2.0 * h);
            CHECK(pv.deriv == doctest::Approx(fd).epsilon(1e-6));
        }
}

TEST_CASE("parametrized family combines phi and psi") {
    WeightSpec w = ramp_weight();
    int n = 5;
    RecurrenceTable plain = compute_recurrence(w, n, WeightKind::plain);
    RecurrenceTable circle = compute_recurrence(w, n - 1, WeightKind::circle_modified);
    for (double a : {0.0, 0.7, 3.0, -0.7, -3.0})
        for (double x : {-0.6, 0.05, 0.83}) {
            PolyVal p = eval_P(plain, circle, n, a, x);
            double sgn = (a > 0.0) ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
            double expect = eval_phi(plain, n, x).value -
                            a * (1.0 - sgn * x) * eval_psi(circle, n - 1, x).value;
            CHECK(p.value == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
        }
    // a = 0 is the plain orthonormal polynomial
    PolyVal g = eval_P(plain, circle, n, 0.0, 0.3);
    CHECK(g.value == doctest::Approx(eval_phi(plain, n, 0.3).value).epsilon(1e-15));
}

TEST_CASE("degree cap is read from the environment with a sane default") {
    const char* env = std::getenv("CMS_DEGREE_CAP");
    int cap = degree_cap();
    if (env == nullptr)
        CHECK(cap == 64);
    CHECK(cap >= 1);
    CHECK(cap <= 256);
}
