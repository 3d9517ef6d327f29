// Batch level-set segmentation CLI.
//
// Reads a PGM image (or renders a synthetic test shape), runs the selected
// scheme until the front freezes, and writes the artifacts into --out:
//   mask.pgm    final u <= 0 region as a binary PGM
//   front.pgm   input image with the final front marked at max gray
//   errors.csv  stopping-error series plus final metrics
//   report.txt  iteration count, convergence flag, wall time
//
// Exit codes: 0 converged, 2 not converged within --nmax, 1 usage/input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "lsseg/lsseg.hpp"

namespace fs = std::filesystem;
using namespace lsseg;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

GridSpec grid_for_image(int width, int height) {
    // Square pixels, longer axis spanning [-2, 2], centered at the origin.
    const double h = 4.0 / (std::max(width, height) - 1);
    const double hw = 0.5 * h * (width - 1), hh = 0.5 * h * (height - 1);
    return make_grid(-hw, hw, -hh, hh, width, height);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("short write to '" + path.string() + "'");
}

void emit_report(const RunReport& report, const IntensityImage& input, const fs::path& out_dir) {
    fs::create_directories(out_dir);

    const GridSpec& g = report.final_field.grid();
    IntensityImage mask;
    mask.width = g.nx;
    mask.height = g.ny;
    mask.max_value = 255;
    mask.samples.resize(g.size());
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j)
            mask.at(j, i) = report.final_field(j, i) <= 0.0 ? 255 : 0;
    save_pgm((out_dir / "mask.pgm").string(), mask);

    IntensityImage overlay = input;
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j)
            if (report.final_front(j, i)) overlay.at(j, i) = overlay.max_value;
    save_pgm((out_dir / "front.pgm").string(), overlay);

    std::string csv = "iter,E,P_err_rel,P_err_1,seconds\n";
    for (std::size_t k = 0; k < report.errors.size(); ++k)
        csv += std::to_string(k + 1) + "," + fmt17(report.errors[k]) + ",,,\n";
    const double last_err = report.errors.empty() ? 0.0 : report.errors.back();
    csv += std::to_string(report.iterations) + "," + fmt17(last_err) + "," +
           fmt17(report.p_err_rel) + "," + fmt17(report.p_err_1) + "," +
           fmt17(report.seconds) + "\n";
    write_text(out_dir / "errors.csv", csv);

    std::string txt = "iterations=" + std::to_string(report.iterations) + "\n";
    txt += std::string("converged=") + (report.converged ? "true" : "false") + "\n";
    txt += "P_err_rel=" + fmt17(report.p_err_rel) + "\n";
    txt += "P_err_1=" + fmt17(report.p_err_1) + "\n";
    txt += "seconds=" + fmt17(report.seconds) + "\n";
    write_text(out_dir / "report.txt", txt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-set image segmentation with the adaptive filtered scheme"};

    std::string image_path, synthetic, out_dir = ".";
    std::string scheme = "af-lw", velocity = "modified-c1", datum, mode = "expand";
    std::string norm = "inf", selection = "min-abs", polarity = "dark";
    int nodes = 102, k_reg = 0, n_max = 2000;
    double mu = 2.0, tol = 5e-4, lambda = 0.5, K = 1.0, M = 0.1, radius = 0.5;
    std::pair<double, double> seed_center{0.0, 0.0};

    auto* img_opt = app.add_option("--image", image_path, "input PGM image (P2 or P5)")
                        ->check(CLI::ExistingFile);
    auto* syn_opt = app.add_option("--synthetic", synthetic, "render a synthetic test image")
                        ->check(CLI::IsMember({"rhombus", "circle"}));
    img_opt->excludes(syn_opt);
    syn_opt->excludes(img_opt);

    app.add_option("--nodes", nodes, "nodes per axis of the synthetic grid")
        ->check(CLI::Range(5, 1 << 14));
    app.add_option("--scheme", scheme)->check(CLI::IsMember({"monotone", "af-lw"}));
    app.add_option("--velocity", velocity)
        ->check(CLI::IsMember({"c1", "c2", "modified-c1", "modified-c2"}));
    app.add_option("--datum", datum)
        ->check(CLI::IsMember({"paraboloid", "distance-circle", "pyramid", "distance-frame"}));
    app.add_option("--case", mode)->check(CLI::IsMember({"expand", "shrink"}));
    app.add_option("--mu", mu, "exponent of the c1 velocity")->check(CLI::Range(1.0, 64.0));
    app.add_option("--kreg", k_reg, "heat-equation smoothing iterations")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--tol", tol, "stopping tolerance")->check(CLI::PositiveNumber);
    app.add_option("--norm", norm)->check(CLI::IsMember({"inf", "l1"}));
    app.add_option("--nmax", n_max, "maximum iterations")->check(CLI::PositiveNumber);
    app.add_option("--lambda", lambda, "CFL number")->check(CLI::Range(1e-6, 0.5));
    app.add_option("--K", K, "threshold multiplier")->check(CLI::Range(0.5 + 1e-9, 1e6));
    app.add_option("--M", M, "indicator threshold")->check(CLI::Range(1e-9, 0.5 - 1e-9));
    app.add_option("--radius", radius, "seed radius")->check(CLI::PositiveNumber);
    app.add_option("--selection", selection, "foot-point reconstruction")
        ->check(CLI::IsMember({"bilinear", "min-abs"}));
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed-center", seed_center, "seed center X,Y")->delimiter(',');
    app.add_option("--polarity", polarity, "object gray polarity for the exact mask")
        ->check(CLI::IsMember({"dark", "light"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (image_path.empty() && synthetic.empty())
            throw std::invalid_argument("one of --image or --synthetic is required");

        IntensityImage image;
        GridSpec grid;
        if (!synthetic.empty()) {
            grid = make_grid(-2.0, 2.0, -2.0, 2.0, nodes, nodes);
            ShapeSpec shape;
            if (synthetic == "rhombus") {
                shape.kind = ShapeSpec::Kind::rhombus;  // |x|/2 + |y| <= 3/4
                shape.a = 1.5;
                shape.b = 0.75;
            } else {
                shape.kind = ShapeSpec::Kind::circle;
                shape.radius = 0.75;
            }
            image = render_synthetic(shape, grid);
        } else {
            image = load_pgm(image_path);
            grid = grid_for_image(image.width, image.height);
        }

        RunConfig config;
        config.grid = grid;
        config.mode = mode == "shrink" ? EvolutionCase::shrink : EvolutionCase::expand;
        config.scheme.scheme = scheme == "monotone" ? SchemeKind::monotone : SchemeKind::af_lw;
        config.scheme.lambda = lambda;
        config.scheme.K = K;
        config.scheme.M = M;
        config.velocity.base = (velocity == "c2" || velocity == "modified-c2")
                                   ? VelocityModel::Base::c2
                                   : VelocityModel::Base::c1;
        config.velocity.modified = velocity.rfind("modified-", 0) == 0;
        config.velocity.mu = mu;
        config.velocity.selection =
            selection == "bilinear" ? SelectionMode::bilinear : SelectionMode::min_abs_neighbor;
        config.k_reg = k_reg;
        config.tol = tol;
        config.norm = norm == "l1" ? Norm::l1 : Norm::inf;
        config.n_max = n_max;
        config.object_below_threshold = polarity == "dark";

        if (datum.empty())
            datum = config.mode == EvolutionCase::expand ? "paraboloid" : "distance-frame";
        static const std::map<std::string, InitialDatum::Kind> datum_kinds = {
            {"paraboloid", InitialDatum::Kind::paraboloid},
            {"distance-circle", InitialDatum::Kind::signed_distance_circle},
            {"pyramid", InitialDatum::Kind::truncated_pyramid},
            {"distance-frame", InitialDatum::Kind::signed_distance_frame},
        };
        config.datum.kind = datum_kinds.at(datum);
        config.datum.radius = radius;
        config.datum.cx = seed_center.first;
        config.datum.cy = seed_center.second;

        const RunReport report = run_segmentation(config, image);
        emit_report(report, image, out_dir);

        std::cout << "iterations=" << report.iterations
                  << " converged=" << (report.converged ? "true" : "false")
                  << " P_err_rel=" << fmt17(report.p_err_rel)
                  << " seconds=" << fmt17(report.seconds) << "\n";
        return report.converged ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "lsseg: " << e.what() << "\n";
        return 1;
    }
}
