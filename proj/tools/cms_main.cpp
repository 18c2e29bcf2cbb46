#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cms/canonical.hpp"
#include "cms/errors.hpp"
#include "cms/extremal.hpp"
#include "cms/io.hpp"
#include "cms/svg.hpp"
#include "cms/verify.hpp"
#include "cms/weight.hpp"

namespace {

// exit codes: 0 ok, 1 verify gating failure, 2 invalid input/usage, 3 numerical failure
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;

std::string weight_display_name(const std::string& path) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

int run_compute(const std::string& weight_path, int n, int grid, const std::string& out) {
    cms::WeightSpec spec = cms::read_weight_spec(weight_path);
    cms::CanonicalSystem sys = cms::make_system(spec, n);
    cms::Profile prof = cms::make_profile(sys, grid);
    cms::write_profile_csv(prof, out);
    int failed = 0;
    for (const auto& row : prof.rows)
        if (!row.ok)
            ++failed;
    std::fprintf(stderr, "wrote %s: %zu rows, %d failed\n", out.c_str(), prof.rows.size(),
                 failed);
    return failed == 0 ? kExitOk : kExitNumerical;
}

int run_verify(const std::string& weight_path, const std::vector<std::string>& suites,
               const std::string& out) {
    cms::WeightSpec spec = cms::read_weight_spec(weight_path);
    cms::VerifyInput input(weight_display_name(weight_path), spec);
    std::vector<cms::CheckReport> reports = cms::run_suite(input, suites);
    std::string text = cms::reports_to_text(reports);
    cms::write_text_file(out + ".txt", text);
    cms::write_text_file(out + ".csv", cms::reports_to_csv(reports));
    std::fputs(text.c_str(), stdout);
    return cms::all_gating_pass(reports) ? kExitOk : kExitCheckFailed;
}

int run_plot(const std::string& weight_path, int n, int grid, const std::string& kind,
             double x0, const std::string& out) {
    cms::WeightSpec spec = cms::read_weight_spec(weight_path);
    cms::PlotConfig cfg;
    cfg.kind = cms::plot_kind_from_name(kind);
    cfg.x0 = x0;
    cms::CanonicalSystem sys = cms::make_system(spec, n);
    bool needs_profile = cfg.kind == cms::PlotKind::pi_family ||
                         cfg.kind == cms::PlotKind::lambda_curve ||
                         cfg.kind == cms::PlotKind::pi_prime_minus_w;
    std::string svg;
    if (needs_profile) {
        cms::Profile prof = cms::make_profile(sys, grid);
        svg = cms::render_plot(sys, &prof, cfg);
    } else {
        svg = cms::render_plot(sys, nullptr, cfg);
    }
    cms::write_text_file(out, svg);
    std::fprintf(stderr, "wrote %s\n", out.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical quadrature representations and extremal functions on [-1,1]"};
    app.require_subcommand(1);

    std::string weight_path;
    int n = 5;
    int grid = 1000;
    double x0 = 0.2;
    std::string out;
    std::string plot_kind = "pi-family";
    std::vector<std::string> suites = {"all"};

    CLI::App* compute = app.add_subcommand("compute", "evaluate a profile and write CSV");
    compute->add_option("--weight", weight_path, "weight spec JSON path")->required();
    compute->add_option("--n", n, "number of interior nodes");
    compute->add_option("--grid", grid, "grid points including the endpoints");
    compute->add_option("--out", out, "output CSV path");

    CLI::App* verify = app.add_subcommand("verify", "run check suites and write reports");
    verify->add_option("--weight", weight_path, "weight spec JSON path")->required();
    verify->add_option("--suite", suites, "suite names (default: all)");
    verify->add_option("--out", out, "report path prefix (.txt/.csv appended)");

    CLI::App* plot = app.add_subcommand("plot", "render an SVG figure");
    plot->add_option("--weight", weight_path, "weight spec JSON path")->required();
    plot->add_option("--n", n, "number of interior nodes");
    plot->add_option("--grid", grid, "grid points for profile-backed plots");
    plot->add_option("--plot", plot_kind,
                     "pi-family | lambda | pi-prime-minus-w | phi-psi | qx");
    plot->add_option("--x0", x0, "where to anchor the qx plot");
    plot->add_option("--out", out, "output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (compute->parsed())
            return run_compute(weight_path, n, grid, out.empty() ? "profile.csv" : out);
        if (verify->parsed())
            return run_verify(weight_path, suites, out.empty() ? "report" : out);
        if (plot->parsed())
            return run_plot(weight_path, n, grid, plot_kind, x0, out.empty() ? "plot.svg" : out);
    } catch (const cms::validation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    } catch (const cms::misuse_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitBadInput;
}
