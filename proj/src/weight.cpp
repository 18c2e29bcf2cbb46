#include "cms/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cms/errors.hpp"
#include "cms/quadrule.hpp"

namespace cms {

namespace {

double horner(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (size_t j = c.size(); j-- > 0;)
        v = v * t + c[j];
    return v;
}

int sign_of(double x) { return (x > 0) - (x < 0); }

// Fritsch-Carlson shape-preserving slopes for a cubic Hermite interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& t, const std::vector<double>& v) {
    const size_t n = t.size();
    std::vector<double> d(n - 1), s(n);
    for (size_t i = 0; i + 1 < n; ++i)
        d[i] = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
    if (n == 2) {
        s[0] = s[1] = d[0];
        return s;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] == 0.0 || d[i] == 0.0 || sign_of(d[i - 1]) != sign_of(d[i])) {
            s[i] = 0.0;
        } else {
            double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
            double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
            s[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto endpoint = [&](double h0, double h1, double d0, double d1) {
        double sl = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (sign_of(sl) != sign_of(d0))
            sl = 0.0;
        else if (sign_of(d0) != sign_of(d1) && std::abs(sl) > 3.0 * std::abs(d0))
            sl = 3.0 * d0;
        return sl;
    };
    s[0] = endpoint(t[1] - t[0], t[2] - t[1], d[0], d[1]);
    s[n - 1] = endpoint(t[n - 1] - t[n - 2], t[n - 2] - t[n - 3], d[n - 2], d[n - 3]);
    return s;
}

double eval_tabulated(const Piece& piece, double t) {
    if (piece.slope.size() != piece.sample_t.size())
        throw misuse_error("tabulated piece evaluated before prepare()");
    const auto& ts = piece.sample_t;
    const auto& vs = piece.sample_v;
    size_t i = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
    if (i > 0)
        --i;
    if (i + 1 >= ts.size())
        i = ts.size() - 2;
    double h = ts[i + 1] - ts[i];
    double u = (t - ts[i]) / h;
    double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    double h10 = u * (1.0 - u) * (1.0 - u);
    double h01 = u * u * (3.0 - 2.0 * u);
    double h11 = u * u * (u - 1.0);
    return h00 * vs[i] + h * h10 * piece.slope[i] + h01 * vs[i + 1] + h * h11 * piece.slope[i + 1];
}

double eval_piece(const Piece& piece, double t) {
    switch (piece.kind) {
    case PieceKind::polynomial:
        return horner(piece.coeffs, t);
    case PieceKind::reciprocal_polynomial:
        return 1.0 / horner(piece.coeffs, t);
    case PieceKind::tabulated:
        return eval_tabulated(piece, t);
    }
    throw misuse_error("eval_piece: bad kind");
}

// Piece whose half-open interval [lo, hi) contains t; t = 1 belongs to the last piece.
size_t piece_index(const WeightSpec& spec, double t) {
    if (!(t >= -1.0 && t <= 1.0))
        throw misuse_error("eval_weight: t outside [-1, 1]");
    size_t lo = 0, hi = spec.pieces.size();
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (t >= spec.pieces[mid].lo)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// Exact integral of p over [a, b] against a polynomial piece, in long double.
double integrate_segment_polynomial(const Piece& piece, const std::vector<double>& poly,
                                    double a, double b) {
    // coefficient convolution p * piece.coeffs
    std::vector<long double> prod(poly.size() + piece.coeffs.size() - 1, 0.0L);
    for (size_t i = 0; i < poly.size(); ++i)
        for (size_t j = 0; j < piece.coeffs.size(); ++j)
            prod[i + j] += static_cast<long double>(poly[i]) * piece.coeffs[j];
    long double pa = 1.0L, pb = 1.0L, acc = 0.0L;
    for (size_t k = 0; k < prod.size(); ++k) {
        pa *= a;
        pb *= b;
        acc += prod[k] * (pb - pa) / static_cast<long double>(k + 1);
    }
    return static_cast<double>(acc);
}

double gl_on(const std::function<double(double)>& f, double a, double b, int q) {
    const auto& rule = gauss_legendre(q);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    long double acc = 0.0L;
    for (int i = 0; i < q; ++i)
        acc += static_cast<long double>(rule.weight[i]) * f(c + h * rule.node[i]);
    return static_cast<double>(acc * h);
}

// Composite Gauss-Legendre with panel doubling until two successive
// refinements agree to 1e-13 relative to the L1 mass of the integrand
// (1e-15 absolute floor); the L1 scaling keeps cancelling integrals from
// chasing a roundoff floor below what summation can deliver. The order q
// should already resolve any polynomial factor of the integrand, so the
// remaining error decays geometrically for analytic integrands.
double doubling_integrate(const std::function<double(double)>& f, double a, double b, int q,
                          double abs_floor) {
    if (a == b)
        return 0.0;
    const auto& rule = gauss_legendre(q);
    double prev = 0.0;
    bool have_prev = false;
    for (int panels = 1; panels <= 4096; panels *= 2) {
        long double acc = 0.0L, l1 = 0.0L;
        const double h = (b - a) / panels;
        for (int i = 0; i < panels; ++i) {
            const double c = a + (i + 0.5) * h;
            for (int j = 0; j < q; ++j) {
                long double v = static_cast<long double>(rule.weight[j]) *
                                f(c + 0.5 * h * rule.node[j]) * (0.5 * h);
                acc += v;
                l1 += v < 0.0L ? -v : v;
            }
        }
        double cur = static_cast<double>(acc);
        double tol = std::max(abs_floor, 1e-13 * static_cast<double>(l1));
        if (have_prev && std::abs(cur - prev) <= tol)
            return cur;
        prev = cur;
        have_prev = true;
    }
    std::ostringstream os;
    os << "panel-doubling quadrature did not settle on [" << a << ", " << b
       << "], last estimate " << prev;
    throw convergence_error(os.str());
}

// Integral of f*w over [a, b] inside one piece; exact for polynomial f of
// degree <= degree_hint when the piece is polynomial or tabulated.
double integrate_segment_function(const Piece& piece, const std::function<double(double)>& f,
                                  int degree_hint, double a, double b, double abs_floor) {
    if (a >= b)
        return 0.0;
    switch (piece.kind) {
    case PieceKind::polynomial: {
        int q = (degree_hint + piece_degree(piece)) / 2 + 2;
        q = std::min(std::max(q, 2), 300);
        return gl_on([&](double t) { return f(t) * horner(piece.coeffs, t); }, a, b, q);
    }
    case PieceKind::reciprocal_polynomial: {
        int q = std::min(std::max(degree_hint / 2 + 8, 15), 300);
        return doubling_integrate([&](double t) { return f(t) / horner(piece.coeffs, t); },
                                  a, b, q, abs_floor);
    }
    case PieceKind::tabulated: {
        // cell-aligned panels; the interpolant is cubic on each cell
        int q = std::min(std::max((degree_hint + 3) / 2 + 2, 2), 300);
        const auto& ts = piece.sample_t;
        double acc = 0.0;
        for (size_t i = 0; i + 1 < ts.size(); ++i) {
            double ca = std::max(a, ts[i]), cb = std::min(b, ts[i + 1]);
            if (ca < cb)
                acc += gl_on([&](double t) { return f(t) * eval_tabulated(piece, t); }, ca, cb, q);
        }
        return acc;
    }
    }
    throw misuse_error("integrate_segment_function: bad kind");
}

} // namespace

int piece_degree(const Piece& piece) {
    if (piece.kind != PieceKind::polynomial)
        return -1;
    return static_cast<int>(piece.coeffs.size()) - 1;
}

void prepare(WeightSpec& spec) {
    for (auto& piece : spec.pieces)
        if (piece.kind == PieceKind::tabulated && piece.sample_t.size() >= 2)
            piece.slope = pchip_slopes(piece.sample_t, piece.sample_v);
}

ValidationReport validate(const WeightSpec& spec) {
    ValidationReport rep;
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        rep.issues.push_back(s);
    };
    if (spec.pieces.empty()) {
        fail("no pieces");
        return rep;
    }
    if (!(spec.m > 0.0))
        fail("lower envelope m must be strictly positive");
    if (!(spec.M >= spec.m) || !std::isfinite(spec.M))
        fail("upper envelope M must be finite and >= m");
    if (spec.pieces.front().lo != -1.0)
        fail("first piece must start at -1");
    if (spec.pieces.back().hi != 1.0)
        fail("last piece must end at 1");
    for (size_t k = 0; k < spec.pieces.size(); ++k) {
        const Piece& p = spec.pieces[k];
        std::string tag = "piece " + std::to_string(k) + ": ";
        if (!(p.lo < p.hi))
            fail(tag + "empty interval");
        if (k > 0 && p.lo != spec.pieces[k - 1].hi)
            fail(tag + "not contiguous with previous piece");
        if (k > 0 && !(p.lo > -1.0 && p.lo < 1.0))
            fail(tag + "breakpoint not strictly inside (-1, 1)");
        switch (p.kind) {
        case PieceKind::polynomial:
            if (p.coeffs.empty())
                fail(tag + "polynomial piece without coefficients");
            break;
        case PieceKind::reciprocal_polynomial: {
            if (p.coeffs.empty()) {
                fail(tag + "reciprocal piece without coefficients");
                break;
            }
            for (int i = 0; i <= 256; ++i) {
                double t = p.lo + (p.hi - p.lo) * i / 256.0;
                if (!(horner(p.coeffs, t) > 0.0)) {
                    fail(tag + "reciprocal denominator not positive on the piece");
                    break;
                }
            }
            break;
        }
        case PieceKind::tabulated: {
            if (p.sample_t.size() < 2 || p.sample_t.size() != p.sample_v.size()) {
                fail(tag + "tabulated piece needs matching t/v samples (>= 2)");
                break;
            }
            if (p.sample_t.front() != p.lo || p.sample_t.back() != p.hi)
                fail(tag + "tabulated samples must span [lo, hi]");
            for (size_t i = 0; i + 1 < p.sample_t.size(); ++i)
                if (!(p.sample_t[i] < p.sample_t[i + 1])) {
                    fail(tag + "tabulated abscissae not strictly ascending");
                    break;
                }
            for (double v : p.sample_v)
                if (!(v > 0.0)) {
                    fail(tag + "tabulated values must be positive");
                    break;
                }
            if (p.slope.size() != p.sample_t.size())
                fail(tag + "tabulated piece not prepared (missing slopes)");
            break;
        }
        }
    }
    if (!rep.ok)
        return rep;
    // envelope sampling and breakpoint continuity notes
    double tol = 1e-9 * spec.M;
    for (const Piece& p : spec.pieces) {
        for (int i = 0; i <= 400; ++i) {
            double t = p.lo + (p.hi - p.lo) * (i + 0.5) / 401.0;
            double v = eval_piece(p, t);
            if (v < spec.m - tol || v > spec.M + tol) {
                fail("envelope violation at t=" + std::to_string(t) + ": w=" + std::to_string(v) +
                     " outside [" + std::to_string(spec.m) + ", " + std::to_string(spec.M) + "]");
                break;
            }
        }
    }
    for (size_t k = 0; k + 1 < spec.pieces.size(); ++k) {
        double b = spec.pieces[k].hi;
        double left = eval_piece(spec.pieces[k], b);
        double right = eval_piece(spec.pieces[k + 1], b);
        if (std::abs(left - right) > 1e-12 * spec.M)
            rep.notes.push_back("jump at breakpoint t=" + std::to_string(b) + ": " +
                                std::to_string(right - left));
    }
    rep.notes.push_back("pieces cover [-1, 1] in " + std::to_string(spec.pieces.size()) +
                        " segment(s)");
    return rep;
}

void require_valid(const WeightSpec& spec) {
    ValidationReport rep = validate(spec);
    if (rep.ok)
        return;
    std::string msg = "invalid weight spec:";
    for (const auto& s : rep.issues)
        msg += "\n  - " + s;
    throw validation_error(msg);
}

WeightSpec make_weight_spec(std::vector<Piece> pieces, double m, double M,
                            Regularity regularity) {
    WeightSpec spec;
    spec.pieces = std::move(pieces);
    spec.m = m;
    spec.M = M;
    spec.regularity = regularity;
    prepare(spec);
    require_valid(spec);
    return spec;
}

std::vector<double> breakpoints(const WeightSpec& spec) {
    std::vector<double> b;
    for (size_t k = 0; k + 1 < spec.pieces.size(); ++k)
        b.push_back(spec.pieces[k].hi);
    return b;
}

double eval_weight(const WeightSpec& spec, double t) {
    return eval_piece(spec.pieces[piece_index(spec, t)], t);
}

double eval_weight_limit(const WeightSpec& spec, double t, Side side) {
    if (side == Side::right)
        return eval_weight(spec, t);
    for (size_t k = 0; k + 1 < spec.pieces.size(); ++k)
        if (spec.pieces[k].hi == t)
            return eval_piece(spec.pieces[k], t);
    return eval_weight(spec, t);
}

double integrate_poly(const WeightSpec& spec, const std::vector<double>& poly,
                      double x0, double x1) {
    if (!(x0 >= -1.0 && x1 <= 1.0 && x0 <= x1))
        throw misuse_error("integrate_poly: require -1 <= x0 <= x1 <= 1");
    if (poly.empty())
        return 0.0;
    double acc = 0.0;
    for (const Piece& piece : spec.pieces) {
        double a = std::max(x0, piece.lo), b = std::min(x1, piece.hi);
        if (a >= b)
            continue;
        if (piece.kind == PieceKind::polynomial)
            acc += integrate_segment_polynomial(piece, poly, a, b);
        else
            acc += integrate_segment_function(
                piece, [&](double t) { return horner(poly, t); },
                static_cast<int>(poly.size()) - 1, a, b, 1e-15);
    }
    return acc;
}

double integrate_function(const WeightSpec& spec, const std::function<double(double)>& f,
                          int degree_hint, double x0, double x1, double abs_floor) {
    if (!(x0 >= -1.0 && x1 <= 1.0 && x0 <= x1))
        throw misuse_error("integrate_function: require -1 <= x0 <= x1 <= 1");
    double acc = 0.0;
    for (const Piece& piece : spec.pieces) {
        double a = std::max(x0, piece.lo), b = std::min(x1, piece.hi);
        if (a < b)
            acc += integrate_segment_function(piece, f, degree_hint, a, b, abs_floor);
    }
    return acc;
}

double total_mass(const WeightSpec& spec) {
    return integrate_poly(spec, {1.0}, -1.0, 1.0);
}

WeightSpec scaled_weight(const WeightSpec& spec, double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw misuse_error("scaled_weight: scale must be finite and positive");
    std::vector<Piece> pieces = spec.pieces;
    for (Piece& piece : pieces) {
        switch (piece.kind) {
        case PieceKind::polynomial:
            for (double& a : piece.coeffs) a *= c;
            break;
        case PieceKind::reciprocal_polynomial:
            // 1/p scaled by c is 1/(p/c).
            for (double& a : piece.coeffs) a /= c;
            break;
        case PieceKind::tabulated:
            for (double& v : piece.sample_v) v *= c;
            piece.slope.clear();
            break;
        }
    }
    Regularity reg = spec.regularity;
    reg.lip_constant *= c;
    reg.sobolev_norm *= c;
    return make_weight_spec(std::move(pieces), spec.m * c, spec.M * c, reg);
}

WeightSpec reversed_weight(const WeightSpec& spec) {
    std::vector<Piece> pieces;
    pieces.reserve(spec.pieces.size());
    for (auto it = spec.pieces.rbegin(); it != spec.pieces.rend(); ++it) {
        Piece piece = *it;
        piece.lo = -it->hi;
        piece.hi = -it->lo;
        if (piece.kind == PieceKind::tabulated) {
            std::vector<double> st(it->sample_t.rbegin(), it->sample_t.rend());
            std::vector<double> sv(it->sample_v.rbegin(), it->sample_v.rend());
            for (double& t : st) t = -t;
            piece.sample_t = std::move(st);
            piece.sample_v = std::move(sv);
            piece.slope.clear();
        } else {
            // p(-t): flip the sign of odd-degree coefficients.
            for (std::size_t j = 1; j < piece.coeffs.size(); j += 2)
                piece.coeffs[j] = -piece.coeffs[j];
        }
        pieces.push_back(std::move(piece));
    }
    return make_weight_spec(std::move(pieces), spec.m, spec.M, spec.regularity);
}

} // namespace cms
