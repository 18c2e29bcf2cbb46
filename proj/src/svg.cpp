#include "cms/svg.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "cms/errors.hpp"
#include "cms/extremal.hpp"

namespace cms {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string f3g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> pts; // NaN y breaks the path
};

// largest of 1, 2, 5 times a power of ten not exceeding the raw step
double nice_step(double range, int target_ticks) {
    double raw = range / target_ticks;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {5.0, 2.0, 1.0})
        if (mult * mag <= raw)
            return mult * mag;
    return mag;
}

} // namespace

PlotKind plot_kind_from_name(const std::string& name) {
    if (name == "pi-family")
        return PlotKind::pi_family;
    if (name == "lambda")
        return PlotKind::lambda_curve;
    if (name == "pi-prime-minus-w")
        return PlotKind::pi_prime_minus_w;
    if (name == "phi-psi")
        return PlotKind::phi_psi;
    if (name == "qx")
        return PlotKind::qx;
    throw misuse_error("unknown plot kind \"" + name +
                       "\"; valid: pi-family lambda pi-prime-minus-w phi-psi qx");
}

std::string plot_kind_name(PlotKind kind) {
    switch (kind) {
    case PlotKind::pi_family: return "pi-family";
    case PlotKind::lambda_curve: return "lambda";
    case PlotKind::pi_prime_minus_w: return "pi-prime-minus-w";
    case PlotKind::phi_psi: return "phi-psi";
    case PlotKind::qx: return "qx";
    }
    return "pi-family";
}

std::string render_plot(const CanonicalSystem& sys, const Profile* prof,
                        const PlotConfig& cfg) {
    bool needs_profile = cfg.kind == PlotKind::pi_family ||
                         cfg.kind == PlotKind::lambda_curve ||
                         cfg.kind == PlotKind::pi_prime_minus_w;
    if (needs_profile && !prof)
        throw misuse_error("render_plot: this plot kind requires a profile");

    std::vector<Series> series;
    std::vector<double> triangle_nodes;
    std::string x_label = "x", y_label;

    switch (cfg.kind) {
    case PlotKind::pi_family: {
        Series top{"pi", "#1f77b4", {}}, mid{"integral of w", "#2ca02c", {}},
            bot{"pi_lower", "#d62728", {}};
        for (const ProfileRow& row : prof->rows) {
            top.pts.emplace_back(row.x, row.ok ? row.pi : kNaN);
            mid.pts.emplace_back(row.x, integrate_poly(sys.spec, {1.0}, -1.0, row.x));
            bot.pts.emplace_back(row.x, row.ok ? row.pi_lower : kNaN);
        }
        series = {top, mid, bot};
        y_label = "mass";
        break;
    }
    case PlotKind::lambda_curve: {
        Series s{"lambda", "#9467bd", {}};
        for (const ProfileRow& row : prof->rows)
            s.pts.emplace_back(row.x, row.ok ? row.lambda : kNaN);
        series = {s};
        y_label = "lambda";
        break;
    }
    case PlotKind::pi_prime_minus_w: {
        Series s{"pi' - w", "#ff7f0e", {}};
        for (const ProfileRow& row : prof->rows) {
            bool usable = row.ok && !row.excluded && std::isfinite(row.pi_prime);
            s.pts.emplace_back(row.x, usable ? row.pi_prime - row.w : kNaN);
        }
        series = {s};
        y_label = "pi' - w";
        break;
    }
    case PlotKind::phi_psi: {
        Series sphi{"phi", "#1f77b4", {}}, spsi{"psi", "#d62728", {}};
        for (int j = 0; j < cfg.curve_samples; ++j) {
            double t = -1.0 + 2.0 * j / (cfg.curve_samples - 1);
            sphi.pts.emplace_back(t, eval_phi(sys.plain, sys.n, t).value);
            spsi.pts.emplace_back(t, eval_psi(sys.circle, sys.n - 1, t).value);
        }
        series = {sphi, spsi};
        x_label = "t";
        y_label = "value";
        break;
    }
    case PlotKind::qx: {
        CanonicalRep rep = rep_of_x(sys, cfg.x0);
        Qx qx(sys, rep, cfg.x0);
        Series s{"q_x", "#2ca02c", {}};
        for (int j = 0; j < cfg.curve_samples; ++j) {
            double t = -1.0 + 2.0 * j / (cfg.curve_samples - 1);
            s.pts.emplace_back(t, qx(t));
        }
        series = {s};
        for (const NodeEntry& e : rep.nodes)
            triangle_nodes.push_back(e.t);
        x_label = "t";
        y_label = "q_x";
        break;
    }
    }

    // y-range over finite samples; include 0 so the marker axis is visible
    double y_min = 0.0, y_max = 0.0;
    for (const Series& s : series)
        for (const auto& [x, y] : s.pts)
            if (std::isfinite(y)) {
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
    if (y_max - y_min < 1e-12)
        y_max = y_min + 1.0;
    double pad = 0.08 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const double ml = 56, mr = 16, mt = 34, mb = 44;
    double pw = cfg.width - ml - mr, ph = cfg.height - mt - mb;
    auto X = [&](double x) { return ml + (x + 1.0) / 2.0 * pw; };
    auto Y = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cfg.width
        << "\" height=\"" << cfg.height << "\" viewBox=\"0 0 " << cfg.width << " "
        << cfg.height << "\">\n";
    out << "<rect width=\"" << cfg.width << "\" height=\"" << cfg.height
        << "\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"" << f2(ml) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
        << "fill=\"#222222\">" << plot_kind_name(cfg.kind) << ", n=" << sys.n << "</text>\n";

    // frame
    out << "<rect x=\"" << f2(ml) << "\" y=\"" << f2(mt) << "\" width=\"" << f2(pw)
        << "\" height=\"" << f2(ph)
        << "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\"/>\n";

    // ticks
    double xs = nice_step(2.0, 8);
    for (double x = std::ceil(-1.0 / xs) * xs; x <= 1.0 + 1e-9; x += xs) {
        out << "<line x1=\"" << f2(X(x)) << "\" y1=\"" << f2(mt + ph) << "\" x2=\""
            << f2(X(x)) << "\" y2=\"" << f2(mt + ph + 5)
            << "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << f2(X(x)) << "\" y=\"" << f2(mt + ph + 18)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\" "
            << "text-anchor=\"middle\">" << f3g(x) << "</text>\n";
    }
    double ys = nice_step(y_max - y_min, 6);
    for (double y = std::ceil(y_min / ys) * ys; y <= y_max + 1e-9 * ys; y += ys) {
        out << "<line x1=\"" << f2(ml - 5) << "\" y1=\"" << f2(Y(y)) << "\" x2=\"" << f2(ml)
            << "\" y2=\"" << f2(Y(y)) << "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << f2(ml - 8) << "\" y=\"" << f2(Y(y) + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\" "
            << "text-anchor=\"end\">" << f3g(std::abs(y) < 1e-12 ? 0.0 : y) << "</text>\n";
    }

    // axis labels
    out << "<text x=\"" << f2(ml + pw / 2) << "\" y=\"" << f2(cfg.height - 8)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\" "
        << "text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"14\" y=\"" << f2(mt + ph / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\" "
        << "text-anchor=\"middle\" transform=\"rotate(-90 14 " << f2(mt + ph / 2) << ")\">"
        << y_label << "</text>\n";

    // zero line when it is interior
    if (y_min < 0.0 && y_max > 0.0)
        out << "<line x1=\"" << f2(ml) << "\" y1=\"" << f2(Y(0.0)) << "\" x2=\""
            << f2(ml + pw) << "\" y2=\"" << f2(Y(0.0))
            << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";

    // curves; non-finite samples split the path
    for (const Series& s : series) {
        std::string d;
        bool open = false;
        for (const auto& [x, y] : s.pts) {
            if (!std::isfinite(y)) {
                open = false;
                continue;
            }
            d += open ? " L " : " M ";
            d += f2(X(x)) + " " + f2(Y(y));
            open = true;
        }
        if (!d.empty())
            out << "<path d=\"" << d.substr(1) << "\" fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\"/>\n";
    }

    // node markers sit on the zero level (or the bottom edge when 0 is outside)
    double axis_y = (y_min < 0.0 && y_max > 0.0) ? Y(0.0) : mt + ph;
    for (double t : sys.gauss_nodes)
        out << "<circle cx=\"" << f2(X(t)) << "\" cy=\"" << f2(axis_y)
            << "\" r=\"4\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.3\"/>\n";
    for (const NodeEntry& e : sys.lobatto.nodes)
        out << "<rect x=\"" << f2(X(e.t) - 3.5) << "\" y=\"" << f2(axis_y - 3.5)
            << "\" width=\"7\" height=\"7\" fill=\"none\" stroke=\"#d62728\" "
            << "stroke-width=\"1.3\"/>\n";
    for (double t : triangle_nodes)
        out << "<polygon points=\"" << f2(X(t)) << "," << f2(axis_y - 5) << " "
            << f2(X(t) - 4.5) << "," << f2(axis_y + 4) << " " << f2(X(t) + 4.5) << ","
            << f2(axis_y + 4)
            << "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.3\"/>\n";

    // legend
    double ly = mt + 16;
    for (const Series& s : series) {
        out << "<line x1=\"" << f2(ml + pw - 150) << "\" y1=\"" << f2(ly - 4) << "\" x2=\""
            << f2(ml + pw - 126) << "\" y2=\"" << f2(ly - 4) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << f2(ml + pw - 120) << "\" y=\"" << f2(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">" << s.label
            << "</text>\n";
        ly += 16;
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace cms
