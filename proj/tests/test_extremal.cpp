#include <doctest.h>

#include <cmath>
#include <vector>

#include "cms/errors.hpp"
#include "cms/extremal.hpp"

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

WeightSpec step_weight() {
    Piece lo, hi;
    lo.hi = 0.0;
    lo.coeffs = {1.0};
    hi.lo = 0.0;
    hi.coeffs = {5.0};
    Regularity reg;
    reg.kind = RegularityKind::piecewise_abs_cont;
    return make_weight_spec({lo, hi}, 1.0, 5.0, reg);
}

} // namespace

TEST_CASE("localized polynomial: normalization, positivity, integral") {
    CanonicalSystem sys = make_system(ramp_weight(), 5);
    for (double x : {-0.7, 0.05, 0.3, 0.81}) {
        CanonicalRep rep = rep_of_x(sys, x);
        Qx q(sys, rep, x);
        CHECK(q(x) == doctest::Approx(1.0).epsilon(1e-10));
        for (double t = -0.999; t <= 0.999; t += 0.031)
            CHECK(q(t) >= -1e-10);
        // vanishes at the other nodes
        for (const NodeEntry& e : rep.nodes)
            if (e.t != x)
                CHECK(q(e.t) == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
        double lam = pi_at(sys, rep, x).lambda;
        CHECK(q.integral(sys.spec) == doctest::Approx(lam).epsilon(1e-9));
    }
}

TEST_CASE("majorant and minorant bracket the indicator on the nodes") {
    CanonicalSystem sys = make_system(step_weight(), 4);
    double x = 0.37;
    CanonicalRep rep = rep_of_x(sys, x);
    HermiteInterpolant up = build_px(rep, x);
    HermiteInterpolant lo = build_px_lower(rep, x);
    for (const NodeEntry& e : rep.nodes) {
        double pu = up(e.t), pl = lo(e.t);
        if (e.t < x) {
            CHECK(pu == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(pl == doctest::Approx(1.0).epsilon(1e-10));
        } else if (e.t == x) {
            CHECK(pu == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(pl == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
        } else {
            CHECK(pu == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
            CHECK(pl == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("the difference of the two envelopes is the localized polynomial") {
    CanonicalSystem sys = make_system(ramp_weight(), 4);
    for (double x : {-0.52, 0.18, 0.66}) {
        CanonicalRep rep = rep_of_x(sys, x);
        HermiteInterpolant up = build_px(rep, x);
        HermiteInterpolant lo = build_px_lower(rep, x);
        Qx q(sys, rep, x);
        for (double t = -0.98; t <= 0.98; t += 0.049)
            CHECK(up(t) - lo(t) == doctest::Approx(q(t)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("extremal masses at a worked point") {
    // unit weight, one interior node: through x = 0 the representation is the
    // single Gaussian node carrying the whole mass
    CanonicalSystem sys = make_system(unit_weight(), 1);
    CanonicalRep rep = rep_of_x(sys, 0.0);
    PiValues v = pi_at(sys, rep, 0.0);
    CHECK(v.pi == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(v.pi_lower == doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
    CHECK(v.lambda == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("upper mass saturates past the last interior node") {
    CanonicalSystem sys = make_system(unit_weight(), 2);
    double mass = 2.0;
    double x = 0.9; // beyond xi_2(0) = 0.577
    CanonicalRep rep = rep_of_x(sys, x);
    PiValues v = pi_at(sys, rep, x);
    CHECK(v.pi == doctest::Approx(mass).epsilon(1e-12));
    CHECK(v.pi_lower == doctest::Approx(mass - v.lambda).epsilon(1e-12));
}

TEST_CASE("identity, sandwich and monotonicity along a coarse grid") {
    WeightSpec w = step_weight();
    CanonicalSystem sys = make_system(w, 6);
    double mass = total_mass(w);
    double prev_pi = 0.0, prev_lo = 0.0;
    for (double x = -0.9; x <= 0.91; x += 0.1) {
        CanonicalRep rep = rep_of_x(sys, x);
        PiValues v = pi_at(sys, rep, x);
        double cum = integrate_poly(w, {1.0}, -1.0, x);
        CHECK(v.pi - v.pi_lower == doctest::Approx(v.lambda).epsilon(1e-11));
        CHECK(v.pi_lower <= cum + 1e-10 * mass);
        CHECK(cum <= v.pi + 1e-10 * mass);
        CHECK(v.pi >= prev_pi - 1e-11 * mass);
        CHECK(v.pi_lower >= prev_lo - 1e-11 * mass);
        prev_pi = v.pi;
        prev_lo = v.pi_lower;
    }
}

TEST_CASE("reversal identity links the two envelopes") {
    WeightSpec w = ramp_weight();
    WeightSpec rev = reversed_weight(w);
    int n = 4;
    CanonicalSystem sys = make_system(w, n);
    CanonicalSystem rsys = make_system(rev, n);
    double mass = total_mass(w);
    for (double x : {-0.81, -0.35, 0.07, 0.42, 0.86}) {
        PiValues direct = pi_at(rsys, rep_of_x(rsys, x), x);
        PiValues mirror = pi_at(sys, rep_of_x(sys, -x), -x);
        CHECK(direct.pi == doctest::Approx(mass - mirror.pi_lower).epsilon(1e-10));
        CHECK(direct.pi_lower == doctest::Approx(mass - mirror.pi).epsilon(1e-10));
    }
}

TEST_CASE("even weights pair the envelopes across the origin") {
    CanonicalSystem sys = make_system(unit_weight(), 3);
    for (double x : {-0.6, -0.21, 0.33, 0.74}) {
        PiValues at = pi_at(sys, rep_of_x(sys, x), x);
        PiValues neg = pi_at(sys, rep_of_x(sys, -x), -x);
        CHECK(neg.pi + at.pi_lower == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("derivative of the upper envelope against a centered difference") {
    CanonicalSystem sys = make_system(ramp_weight(), 4);
    const double h = 1e-5;
    for (double x : {-0.63, 0.12, 0.57}) {
        CanonicalRep rep = rep_of_x(sys, x);
        double dp = pi_prime_at(sys, rep, x);
        double up = pi_at(sys, rep_of_x(sys, x + h), x + h).pi;
        double dn = pi_at(sys, rep_of_x(sys, x - h), x - h).pi;
        CHECK(dp == doctest::Approx((up - dn) / (2.0 * h)).epsilon(2e-4).scale(1.0));
    }
}

TEST_CASE("profile construction: grid bookkeeping and exclusions") {
    CanonicalSystem sys = make_system(unit_weight(), 2);

    SUBCASE("degenerate grids are rejected") {
        CHECK_THROWS_AS(make_profile(sys, 2), misuse_error);
        CHECK_THROWS_AS(make_profile(sys, 7), misuse_error);
    }
    SUBCASE("interior rows, exclusion near nodes only") {
        Profile p = make_profile(sys, 201);
        CHECK(p.rows.size() == 199);
        CHECK(p.step == doctest::Approx(0.01));
        std::vector<double> nodes = sys.gauss_nodes;
        for (const NodeEntry& e : sys.lobatto.nodes)
            nodes.push_back(e.t);
        int excluded = 0;
        for (const ProfileRow& row : p.rows) {
            REQUIRE(row.ok);
            double d = 2.0;
            for (double t : nodes)
                d = std::min(d, std::abs(row.x - t));
            if (row.excluded) {
                ++excluded;
                CHECK(d < 0.5 * p.step);
                CHECK(std::isnan(row.pi_prime));
            } else {
                CHECK(std::isfinite(row.pi_prime));
            }
            CHECK(row.w == 1.0);
        }
        CHECK(excluded <= 2 * 2 - 1);
        // rows ascend
        for (size_t i = 1; i < p.rows.size(); ++i)
            CHECK(p.rows[i].x > p.rows[i - 1].x);
    }
}
