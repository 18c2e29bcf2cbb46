#include <doctest.h>

#include <cmath>

#include "cms/quadrule.hpp"

using namespace cms;

namespace {

// int_{-1}^{1} t^k dt
double monomial_integral(int k) { return (k % 2) ? 0.0 : 2.0 / (k + 1); }

} // namespace

TEST_CASE("rules integrate monomials to their exactness degree") {
    for (int q : {1, 2, 5, 13, 20, 40, 64}) {
        const GaussLegendreRule& rule = gauss_legendre(q);
        REQUIRE(rule.node.size() == static_cast<size_t>(q));
        REQUIRE(rule.weight.size() == static_cast<size_t>(q));
        for (int k = 0; k <= 2 * q - 1; ++k) {
            long double acc = 0.0L;
            for (int i = 0; i < q; ++i) {
                long double p = 1.0L;
                for (int j = 0; j < k; ++j)
                    p *= rule.node[i];
                acc += rule.weight[i] * p;
            }
            CHECK(static_cast<double>(acc) ==
                  doctest::Approx(monomial_integral(k)).epsilon(5e-14).scale(1.0));
        }
    }
}

TEST_CASE("nodes are symmetric, ascending, interior; weights positive") {
    for (int q : {3, 8, 31, 64}) {
        const GaussLegendreRule& rule = gauss_legendre(q);
        for (int i = 0; i < q; ++i) {
            CHECK(rule.weight[i] > 0.0);
            CHECK(std::abs(rule.node[i]) < 1.0);
            CHECK(rule.node[i] == doctest::Approx(-rule.node[q - 1 - i]).epsilon(1e-14));
            if (i > 0)
                CHECK(rule.node[i] > rule.node[i - 1]);
        }
    }
}

TEST_CASE("small rules match closed forms") {
    const GaussLegendreRule& r1 = gauss_legendre(1);
    CHECK(r1.node[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r1.weight[0] == doctest::Approx(2.0).epsilon(1e-14));

    const GaussLegendreRule& r2 = gauss_legendre(2);
    CHECK(r2.node[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.node[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.weight[0] == doctest::Approx(1.0).epsilon(1e-14));

    const GaussLegendreRule& r3 = gauss_legendre(3);
    CHECK(r3.node[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r3.node[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
    CHECK(r3.weight[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
    CHECK(r3.weight[2] == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("rules are cached") {
    const GaussLegendreRule& a = gauss_legendre(17);
    const GaussLegendreRule& b = gauss_legendre(17);
    CHECK(&a == &b);
}
