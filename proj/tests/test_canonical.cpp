#include <doctest.h>

#include <cmath>
#include <vector>

#include "cms/canonical.hpp"
#include "cms/errors.hpp"

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

TEST_CASE("unit weight small systems match closed forms") {
    WeightSpec u = unit_weight();

    SUBCASE("n = 1") {
        CanonicalSystem sys = make_system(u, 1);
        REQUIRE(sys.gauss_nodes.size() == 1);
        CHECK(sys.gauss_nodes[0] == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
        REQUIRE(sys.gaussian.nodes.size() == 1);
        CHECK(sys.gaussian.nodes[0].weight == doctest::Approx(2.0).epsilon(1e-14));
        REQUIRE(sys.lobatto.nodes.size() == 2);
        CHECK(sys.lobatto.nodes[0].t == -1.0);
        CHECK(sys.lobatto.nodes[1].t == 1.0);
        CHECK(sys.lobatto.nodes[0].weight == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sys.lobatto.nodes[1].weight == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("n = 2") {
        CanonicalSystem sys = make_system(u, 2);
        double g = 1.0 / std::sqrt(3.0);
        REQUIRE(sys.gauss_nodes.size() == 2);
        CHECK(sys.gauss_nodes[0] == doctest::Approx(-g).epsilon(1e-13));
        CHECK(sys.gauss_nodes[1] == doctest::Approx(g).epsilon(1e-13));
        CHECK(sys.gaussian.nodes[0].weight == doctest::Approx(1.0).epsilon(1e-13));
        REQUIRE(sys.lobatto.nodes.size() == 3);
        CHECK(sys.lobatto.nodes[1].t == doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
        CHECK(sys.lobatto.nodes[0].weight == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
        CHECK(sys.lobatto.nodes[1].weight == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
        CHECK(sys.lobatto.nodes[2].weight == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    }
}

TEST_CASE("separators interlace the interior node families") {
    CanonicalSystem sys = make_system(ramp_weight(), 6);
    REQUIRE(sys.eta.size() == 7);
    CHECK(sys.eta.front() == -1.0);
    CHECK(sys.eta.back() == 1.0);
    for (size_t i = 1; i < sys.eta.size(); ++i)
        CHECK(sys.eta[i] > sys.eta[i - 1]);
    // each Gaussian node sits strictly between consecutive separators
    for (int r = 1; r <= 6; ++r) {
        CHECK(sys.gauss_nodes[r - 1] > sys.eta[r - 1]);
        CHECK(sys.gauss_nodes[r - 1] < sys.eta[r]);
    }
}

TEST_CASE("index data of the endpoint-free representations") {
    CanonicalSystem sys = make_system(step_weight(), 5);
    CHECK(sys.gaussian.index_sum() == 10); // n interior double nodes
    CHECK(sys.lobatto.index_sum() == 10);  // n-1 interior + two simple endpoints
    for (const NodeEntry& e : sys.gaussian.nodes)
        CHECK(e.index == 2);
    CHECK(sys.lobatto.nodes.front().index == 1);
    CHECK(sys.lobatto.nodes.back().index == 1);
}

TEST_CASE("representation through a point: the worked n = 1 example") {
    CanonicalSystem sys = make_system(unit_weight(), 1);
    CanonicalRep rep = rep_of_x(sys, 0.5);
    REQUIRE(rep.nodes.size() == 2);
    CHECK(rep.param.a > 0.0);
    CHECK(rep.nodes[0].t == -1.0);
    CHECK(rep.nodes[1].t == 0.5);
    CHECK(rep.nodes[0].weight == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rep.nodes[1].weight == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(rep.index_sum() == 3);
}

TEST_CASE("xi_of_a is increasing in a and approaches the separators") {
    CanonicalSystem sys = make_system(ramp_weight(), 3);
    for (int r = 1; r <= 3; ++r) {
        double prev = -2.0;
        for (double a : {-1e8, -50.0, -1.0, 0.0, 1.0, 50.0, 1e8}) {
            double x = xi_of_a(sys, r, a);
            CHECK(x > sys.eta[r - 1]);
            CHECK(x < sys.eta[r]);
            CHECK(x > prev);
            prev = x;
        }
        CHECK(xi_of_a(sys, r, 0.0) ==
              doctest::Approx(sys.gauss_nodes[r - 1]).epsilon(1e-12).scale(1.0));
        CHECK(xi_of_a(sys, r, 1e8) == doctest::Approx(sys.eta[r]).epsilon(1e-6).scale(1.0));
        CHECK(xi_of_a(sys, r, -1e8) ==
              doctest::Approx(sys.eta[r - 1]).epsilon(1e-6).scale(1.0));
    }
    CHECK_THROWS_AS(xi_of_a(sys, 0, 1.0), misuse_error);
    CHECK_THROWS_AS(xi_of_a(sys, 4, 1.0), misuse_error);
}

TEST_CASE("param_of_x round-trips through xi_of_a") {
    CanonicalSystem sys = make_system(step_weight(), 4);
    for (double x : {-0.95, -0.6, -0.33, -0.01, 0.22, 0.48, 0.77, 0.93}) {
        CanonicalParam p = param_of_x(sys, x);
        REQUIRE(p.r >= 1);
        REQUIRE(p.r <= 4);
        if (std::isinf(p.a)) {
            CHECK(std::abs(x - sys.eta[p.r]) < 1e-9);
        } else {
            CHECK(xi_of_a(sys, p.r, p.a) == doctest::Approx(x).epsilon(1e-10).scale(1.0));
        }
    }
    CHECK_THROWS_AS(param_of_x(sys, 1.0), misuse_error);
    CHECK_THROWS_AS(param_of_x(sys, -1.5), misuse_error);
}

TEST_CASE("representations through a point contain it and stay positive") {
    CanonicalSystem sys = make_system(ramp_weight(), 4);
    double mass = total_mass(sys.spec);
    for (double x : {-0.9, -0.44, 0.1, 0.52, 0.88}) {
        CanonicalRep rep = rep_of_x(sys, x);
        bool found = false;
        double sum = 0.0;
        for (size_t i = 0; i < rep.nodes.size(); ++i) {
            if (rep.nodes[i].t == x)
                found = true;
            CHECK(rep.nodes[i].weight > 0.0);
            if (i > 0)
                CHECK(rep.nodes[i].t > rep.nodes[i - 1].t);
            sum += rep.nodes[i].weight;
        }
        CHECK(found);
        CHECK(sum == doctest::Approx(mass).epsilon(1e-11));
        CHECK(rep.index_sum() <= 2 * 4 + 1);
    }
}

TEST_CASE("exactness residuals are tiny for genuine representations") {
    WeightSpec w = ramp_weight();
    for (int n = 1; n <= 8; ++n) {
        CanonicalSystem sys = make_system(w, n);
        CHECK(exactness_residual(sys, sys.gaussian) < 1e-9);
        CHECK(exactness_residual(sys, sys.lobatto) < 1e-9);
        CanonicalRep mid = rep_of_x(sys, 0.31);
        CHECK(exactness_residual(sys, mid) < 1e-9);
    }
}

TEST_CASE("perturbing a representation destroys exactness measurably") {
    CanonicalSystem sys = make_system(step_weight(), 4);

    SUBCASE("moved node, original weights") {
        CanonicalRep bad = sys.lobatto;
        bad.nodes[2].t += 1e-3;
        CHECK(exactness_residual(sys, bad) > 1e-4);
    }
    SUBCASE("perturbed weight") {
        CanonicalRep bad = sys.gaussian;
        bad.nodes[1].weight += 1e-3;
        CHECK(exactness_residual(sys, bad) > 1e-5);
    }
    SUBCASE("weights for off-root nodes do not integrate the mass") {
        std::vector<double> nodes;
        std::vector<int> indices;
        for (const NodeEntry& e : sys.lobatto.nodes) {
            nodes.push_back(e.t);
            indices.push_back(e.index);
        }
        nodes[2] += 1e-3;
        CHECK_THROWS_AS(hermite_weights(sys.spec, nodes, indices), consistency_error);
    }
}

TEST_CASE("hermite_weights validates its inputs") {
    WeightSpec w = unit_weight();
    CHECK_THROWS_AS(hermite_weights(w, {0.0, 0.5}, {2}), misuse_error);
    CHECK_THROWS_AS(hermite_weights(w, {0.5, 0.0}, {2, 2}), misuse_error);
}

TEST_CASE("clamping to the Gaussian range") {
    CanonicalSystem sys = make_system(unit_weight(), 3);
    double lo = sys.gauss_nodes.front(), hi = sys.gauss_nodes.back();
    CHECK(truncate_to_gaussian_range(sys, -0.99) == doctest::Approx(lo));
    CHECK(truncate_to_gaussian_range(sys, 0.99) == doctest::Approx(hi));
    CHECK(truncate_to_gaussian_range(sys, 0.1) == doctest::Approx(0.1));
}

TEST_CASE("system construction rejects bad arguments") {
    WeightSpec u = unit_weight();
    CHECK_THROWS_AS(make_system(u, 0), misuse_error);
    CHECK_THROWS_AS(make_system(u, degree_cap() + 1), misuse_error);
}
