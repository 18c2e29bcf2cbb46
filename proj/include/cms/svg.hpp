#pragma once

#include <string>

#include "cms/canonical.hpp"
#include "cms/extremal.hpp"

namespace cms {

enum class PlotKind {
    pi_family,        // pi, cumulative integral of w, pi_lower
    lambda_curve,     // lambda
    pi_prime_minus_w, // pi' - w, with gaps at excluded points
    phi_psi,          // the two orthonormal polynomials
    qx                // q_{x0} with its rep's nodes marked
};

PlotKind plot_kind_from_name(const std::string& name);
std::string plot_kind_name(PlotKind kind);

struct PlotConfig {
    PlotKind kind = PlotKind::pi_family;
    double x0 = 0.0; // qx only
    int width = 720;
    int height = 480;
    int curve_samples = 600; // phi_psi and qx curves
};

// Deterministic standalone SVG. Markers follow a fixed convention: circles at
// the Gaussian nodes, squares at the Lobatto nodes, triangles at the nodes of
// the rep through x0 (qx plots). Profile-backed kinds plot the profile rows
// as-is; prof may be null for phi_psi and qx.
std::string render_plot(const CanonicalSystem& sys, const Profile* prof,
                        const PlotConfig& cfg);

} // namespace cms
