#include <doctest.h>

#include <gmpxx.h>

#include <vector>

#include "cms/recurrence.hpp"
#include "cms/weight.hpp"

using namespace cms;

namespace {

// Exact rational three-term recurrence for monic orthogonal polynomials of a
// measure given by its exact moments, via moment-space Gram-Schmidt. All
// arithmetic is in mpq_class, so the result carries no floating-point error.
struct RationalRecurrence {
    std::vector<mpq_class> alpha, beta;
};

mpq_class inner(const std::vector<mpq_class>& p, const std::vector<mpq_class>& q,
                const std::vector<mpq_class>& moments) {
    mpq_class acc = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j)
            acc += p[i] * q[j] * moments[i + j];
    return acc;
}

std::vector<mpq_class> shift(const std::vector<mpq_class>& p) {
    std::vector<mpq_class> out(p.size() + 1, mpq_class(0));
    for (size_t i = 0; i < p.size(); ++i)
        out[i + 1] = p[i];
    return out;
}

RationalRecurrence rational_recurrence(const std::vector<mpq_class>& moments, int K) {
    RationalRecurrence rec;
    std::vector<mpq_class> pk = {mpq_class(1)}, pkm1;
    mpq_class sq_km1 = 0;
    for (int k = 0; k <= K; ++k) {
        mpq_class sq = inner(pk, pk, moments);
        mpq_class al = inner(shift(pk), pk, moments) / sq;
        rec.alpha.push_back(al);
        rec.beta.push_back(k == 0 ? moments[0] : sq / sq_km1);
        // p_{k+1} = (t - alpha_k) p_k - beta_k p_{k-1}
        std::vector<mpq_class> next = shift(pk);
        for (size_t i = 0; i < pk.size(); ++i)
            next[i] -= al * pk[i];
        if (k > 0)
            for (size_t i = 0; i < pkm1.size(); ++i)
                next[i] -= rec.beta.back() * pkm1[i];
        sq_km1 = sq;
        pkm1 = pk;
        pk = next;
    }
    return rec;
}

// moments of t^k over [a, b] against an exact-rational polynomial density
void add_piece_moments(std::vector<mpq_class>& m, const std::vector<mpq_class>& dens,
                       const mpq_class& a, const mpq_class& b) {
    for (size_t k = 0; k < m.size(); ++k)
        for (size_t j = 0; j < dens.size(); ++j) {
            unsigned long e = static_cast<unsigned long>(k + j + 1);
            mpq_class bp, ap;
            mpz_pow_ui(bp.get_num_mpz_t(), b.get_num().get_mpz_t(), e);
            mpz_pow_ui(bp.get_den_mpz_t(), b.get_den().get_mpz_t(), e);
            mpz_pow_ui(ap.get_num_mpz_t(), a.get_num().get_mpz_t(), e);
            mpz_pow_ui(ap.get_den_mpz_t(), a.get_den().get_mpz_t(), e);
            bp.canonicalize();
            ap.canonicalize();
            m[k] += dens[j] * (bp - ap) / mpq_class(e);
        }
}

std::vector<mpq_class> unit_moments(int count) {
    std::vector<mpq_class> m(count, mpq_class(0));
    add_piece_moments(m, {mpq_class(1)}, mpq_class(-1), mpq_class(1));
    return m;
}

std::vector<mpq_class> ramp_moments(int count) {
    std::vector<mpq_class> m(count, mpq_class(0));
    add_piece_moments(m, {mpq_class(1)}, mpq_class(-1), mpq_class(0));
    add_piece_moments(m, {mpq_class(1), mpq_class(4)}, mpq_class(0), mpq_class(1));
    return m;
}

// moments of the circle-modified measure (1 - t^2) dmu from those of dmu
std::vector<mpq_class> circle_moments(const std::vector<mpq_class>& m, int count) {
    std::vector<mpq_class> out(count);
    for (int k = 0; k < count; ++k)
        out[k] = m[k] - m[k + 2];
    return out;
}

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

} // namespace

TEST_CASE("rational recurrence of the unit weight matches the classical values exactly") {
    RationalRecurrence rec = rational_recurrence(unit_moments(2 * 8 + 2), 8);
    CHECK(rec.beta[0] == mpq_class(2));
    for (int k = 0; k <= 8; ++k)
        CHECK(rec.alpha[k] == mpq_class(0));
    for (int k = 1; k <= 8; ++k)
        CHECK(rec.beta[k] == mpq_class(k * k, 4 * k * k - 1));
}

TEST_CASE("floating recurrence agrees with the rational oracle: unit weight") {
    RationalRecurrence oracle = rational_recurrence(unit_moments(2 * 12 + 2), 12);
    RecurrenceTable table = compute_recurrence(unit_weight(), 12, WeightKind::plain);
    for (int k = 0; k <= 12; ++k) {
        CHECK(table.alpha[k] == doctest::Approx(oracle.alpha[k].get_d()).epsilon(1e-12).scale(1.0));
        CHECK(table.beta[k] == doctest::Approx(oracle.beta[k].get_d()).epsilon(1e-12));
    }
}

TEST_CASE("floating recurrence agrees with the rational oracle: piecewise ramp") {
    const int K = 10;
    std::vector<mpq_class> m = ramp_moments(2 * K + 4);
    RationalRecurrence oracle = rational_recurrence(m, K);
    RecurrenceTable table = compute_recurrence(ramp_weight(), K, WeightKind::plain);
    for (int k = 0; k <= K; ++k) {
        CHECK(table.alpha[k] == doctest::Approx(oracle.alpha[k].get_d()).epsilon(1e-10).scale(1.0));
        CHECK(table.beta[k] == doctest::Approx(oracle.beta[k].get_d()).epsilon(1e-10));
    }
}

TEST_CASE("floating recurrence agrees with the rational oracle: circle-modified ramp") {
    const int K = 10;
    std::vector<mpq_class> m = ramp_moments(2 * K + 4);
    RationalRecurrence oracle = rational_recurrence(circle_moments(m, 2 * K + 2), K);
    RecurrenceTable table = compute_recurrence(ramp_weight(), K, WeightKind::circle_modified);
    for (int k = 0; k <= K; ++k) {
        CHECK(table.alpha[k] == doctest::Approx(oracle.alpha[k].get_d()).epsilon(1e-10).scale(1.0));
        CHECK(table.beta[k] == doctest::Approx(oracle.beta[k].get_d()).epsilon(1e-10));
    }
}

TEST_CASE("orthogonality of the rational polynomials is exact") {
    const int K = 6;
    std::vector<mpq_class> m = ramp_moments(2 * K + 4);
    RationalRecurrence rec = rational_recurrence(m, K);
    // rebuild the monic family and verify <p_i, p_j> = 0 exactly for i != j
    std::vector<std::vector<mpq_class>> polys = {{mpq_class(1)}};
    for (int k = 0; k + 1 <= K; ++k) {
        std::vector<mpq_class> next = shift(polys[k]);
        for (size_t i = 0; i < polys[k].size(); ++i)
            next[i] -= rec.alpha[k] * polys[k][i];
        if (k > 0)
            for (size_t i = 0; i < polys[k - 1].size(); ++i)
                next[i] -= rec.beta[k] * polys[k - 1][i];
        polys.push_back(next);
    }
    for (int i = 0; i <= K; ++i)
        for (int j = 0; j < i; ++j)
            CHECK(inner(polys[i], polys[j], m) == mpq_class(0));
}
