// plmap: build, verify, perturb and analyze exact piecewise-linear
// measure-preserving maps of [0,1].
//
// Exit codes: 0 success, 1 verification failure, 2 parse error,
// 3 budget exceeded.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "plmaps/analyze.hpp"
#include "plmaps/entropy.hpp"
#include "plmaps/errors.hpp"
#include "plmaps/map_io.hpp"
#include "plmaps/measure.hpp"
#include "plmaps/perturb.hpp"
#include "plmaps/plmap.hpp"
#include "plmaps/svg.hpp"

namespace {

struct PipelineConfig {
    std::uint64_t seed = 0;
    std::int64_t lap_budget = plm::Budgets{}.laps;
    std::int64_t cut_budget = plm::Budgets{}.cuts;
    std::int64_t cell_budget = plm::Budgets{}.cells;
    int log_precision_digits = 50;
    std::string output_dir = ".";
    bool serial = false;

    plm::Budgets budgets() const { return {lap_budget, cut_budget, cell_budget}; }
    plm::Exec exec() const { return serial ? plm::Exec::serial : plm::Exec::parallel; }

    std::string resolve(const std::string& path) const {
        if (path.empty() || path.front() == '/' || output_dir.empty() || output_dir == ".")
            return path;
        return output_dir + "/" + path;
    }
};

void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw plm::Error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw plm::ParseError("expected key=value", lineno, 1);
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "seed")
                cfg.seed = std::stoull(value);
            else if (key == "lap_budget")
                cfg.lap_budget = std::stoll(value);
            else if (key == "cut_budget")
                cfg.cut_budget = std::stoll(value);
            else if (key == "cell_budget")
                cfg.cell_budget = std::stoll(value);
            else if (key == "log_precision_digits")
                cfg.log_precision_digits = std::stoi(value);
            else if (key == "output_dir")
                cfg.output_dir = value;
            else if (key == "serial")
                cfg.serial = value == "true" || value == "1";
            else
                throw plm::ParseError("unknown config key '" + key + "'", lineno, 1);
        } catch (const std::invalid_argument&) {
            throw plm::ParseError("bad value for '" + key + "'", lineno,
                                  static_cast<int>(eq) + 2);
        }
    }
}

void report_verdict(const plm::measure::PreservationVerdict& verdict) {
    if (verdict.preserving) {
        std::cout << "preserving: yes\n";
    } else {
        std::cout << "preserving: no\n";
        std::cout << "witness band: (" << verdict.witness->band_lo << ", "
                  << verdict.witness->band_hi << ")\n";
        std::cout << "weight sum: " << verdict.witness->weight_sum << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"exact piecewise-linear measure-preserving interval map toolkit"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "configuration file (key=value lines)");
    app.add_option("--seed", cfg.seed, "seed for randomized helpers");
    app.add_option("--lap-budget", cfg.lap_budget, "segment budget for map construction");
    app.add_option("--cut-budget", cfg.cut_budget, "cut budget per join refinement");
    app.add_option("--cell-budget", cfg.cell_budget, "cell budget for monotonicity checks");
    app.add_option("--digits", cfg.log_precision_digits, "decimal digits for entropy output");
    app.add_option("--output-dir", cfg.output_dir, "directory for relative output paths");
    app.add_flag("--serial", cfg.serial, "run the kernels on their serial reference paths");

    // build
    auto* build = app.add_subcommand("build", "construct a map and write it to a file");
    std::string build_kind, build_spec, build_out;
    int build_m = 3;
    bool build_force = false;
    build->add_option("kind", build_kind, "id | flip | tent | zigzag | skeleton | from-breakpoints")
        ->required();
    build->add_option("spec", build_spec, "breakpoint list \"x:y, x:y, ...\" for from-breakpoints");
    build->add_option("--m", build_m, "lap count for zigzag");
    build->add_option("-o,--output", build_out, "output map file")->required();
    build->add_flag("--force", build_force, "write the map even if it fails verification");

    // verify
    auto* verify = app.add_subcommand("verify", "check the branch-weight criterion");
    std::string verify_in;
    verify->add_option("map", verify_in, "map file")->required();

    // perturb
    auto* perturb_cmd = app.add_subcommand("perturb", "apply a perturbation to a map");
    std::string pt_in, pt_out, pt_cert_out, pt_mode, pt_window, pt_eps = "1/2";
    int pt_m = 3, pt_grid = 2, pt_n = 1;
    perturb_cmd->add_option("map", pt_in, "input map file")->required();
    perturb_cmd->add_option("--mode", pt_mode, "window | snap | nowhere-monotone")->required();
    perturb_cmd->add_option("--window", pt_window, "window \"a,b\" for window mode");
    perturb_cmd->add_option("--m", pt_m, "sawtooth lap count for window mode");
    perturb_cmd->add_option("--grid", pt_grid, "grid count for snap mode");
    perturb_cmd->add_option("--n", pt_n, "scale parameter for nowhere-monotone mode");
    perturb_cmd->add_option("--eps", pt_eps, "radius p/q for nowhere-monotone mode");
    perturb_cmd->add_option("-o,--output", pt_out, "output map file")->required();
    perturb_cmd->add_option("--certificate", pt_cert_out, "certificate output file");

    // entropy
    auto* entropy_cmd = app.add_subcommand("entropy", "join-partition entropy profile as CSV");
    std::string en_in, en_out, en_beta;
    int en_imax = 3, en_nmax = 8, en_k = 1;
    entropy_cmd->add_option("map", en_in, "map file")->required();
    entropy_cmd->add_option("--i-max", en_imax, "largest dyadic partition level");
    entropy_cmd->add_option("--n-max", en_nmax, "largest word length");
    entropy_cmd->add_option("--beta", en_beta, "entropy bound p/q for the witness search");
    entropy_cmd->add_option("--k", en_k, "witness search start index");
    entropy_cmd->add_option("-o,--output", en_out, "CSV output file")->required();

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "level sets and scale diagnostics");
    std::string an_in, an_diag_out;
    std::vector<std::string> an_levels;
    std::string an_radius = "1/10";
    int an_grid = 0;
    bool an_b0 = false;
    analyze_cmd->add_option("map", an_in, "map file")->required();
    analyze_cmd->add_option("--level", an_levels, "level values p/q (repeatable)");
    analyze_cmd->add_flag("--b0", an_b0, "report the set of values with multiple preimages");
    analyze_cmd->add_option("--diag-grid", an_grid,
                            "emit scale diagnostics on a uniform grid of this size");
    analyze_cmd->add_option("--diag-radius", an_radius, "window radius p/q for diagnostics");
    analyze_cmd->add_option("-o,--output", an_diag_out, "CSV file for the diagnostics grid");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render a map or an entropy CSV as SVG");
    std::string pl_in, pl_out, pl_cert;
    plot_cmd->add_option("input", pl_in, "map file or entropy CSV")->required();
    plot_cmd->add_option("--certificate", pl_cert, "certificate file for band/window guides");
    plot_cmd->add_option("-o,--output", pl_out, "SVG output file")->required();

    CLI11_PARSE(app, argc, argv);

    if (!config_path.empty()) load_config_file(cfg, config_path);
    if (const char* env_dir = std::getenv("PLMAP_OUTPUT_DIR")) cfg.output_dir = env_dir;

    const plm::Exec exec = cfg.exec();
    const plm::Budgets budgets = cfg.budgets();

    if (*build) {
        plm::PLMap f = [&]() -> plm::PLMap {
            if (build_kind == "id") return plm::maps::identity();
            if (build_kind == "flip") return plm::maps::one_minus_id();
            if (build_kind == "tent") return plm::maps::tent();
            if (build_kind == "zigzag") return plm::maps::zigzag(build_m);
            if (build_kind == "skeleton") return plm::maps::skeleton();
            if (build_kind == "from-breakpoints") {
                if (build_spec.empty())
                    throw plm::ParseError("from-breakpoints needs a breakpoint list", 1, 1);
                return plm::io::parse_breakpoint_spec(build_spec);
            }
            throw plm::ParseError("unknown build kind '" + build_kind + "'", 1, 1);
        }();
        auto verdict = plm::measure::check_measure_preserving(f, exec);
        plm::io::write_map_file(cfg.resolve(build_out), f);
        report_verdict(verdict);
        if (!verdict.preserving && !build_force) {
            std::cerr << "warning: map does not preserve measure\n";
            return 1;
        }
        return 0;
    }

    if (*verify) {
        plm::PLMap f = plm::io::read_map_file(verify_in);
        auto verdict = plm::measure::check_measure_preserving(f, exec);
        report_verdict(verdict);
        return verdict.preserving ? 0 : 1;
    }

    if (*perturb_cmd) {
        plm::PLMap f = plm::io::read_map_file(pt_in);
        auto verdict = plm::measure::check_measure_preserving(f, exec);
        if (!verdict.preserving) {
            std::cerr << "input map does not preserve measure\n";
            return 1;
        }
        if (pt_mode == "window") {
            std::size_t comma = pt_window.find(',');
            if (comma == std::string::npos)
                throw plm::ParseError("window needs the form a,b", 1, 1);
            plm::Interval window(plm::Rat::parse(pt_window.substr(0, comma)),
                                 plm::Rat::parse(pt_window.substr(comma + 1)));
            plm::PLMap g = plm::perturb::window_perturb(
                f, plm::perturb::regular_window_shape(window, pt_m), budgets.laps);
            plm::io::write_map_file(cfg.resolve(pt_out), g);
            return plm::measure::check_measure_preserving(g, exec).preserving ? 0 : 1;
        }
        if (pt_mode == "snap") {
            plm::PLMap g = plm::perturb::snap_determining_values(f, pt_grid, budgets.laps);
            plm::io::write_map_file(cfg.resolve(pt_out), g);
            return plm::measure::check_measure_preserving(g, exec).preserving ? 0 : 1;
        }
        if (pt_mode == "nowhere-monotone") {
            plm::perturb::PerturbOptions opts{budgets, exec};
            auto result =
                plm::perturb::nowhere_monotone_perturb(f, pt_n, plm::Rat::parse(pt_eps), opts);
            plm::io::write_map_file(cfg.resolve(pt_out), result.map);
            std::string cert_path =
                pt_cert_out.empty() ? cfg.resolve(pt_out) + ".cert" : cfg.resolve(pt_cert_out);
            plm::perturb::write_certificate_file(cert_path, result.certificate);
            std::cout << "band_width " << result.certificate.band_width << "\n";
            std::cout << "mark_radius " << result.certificate.mark_radius << "\n";
            std::cout << "min_abs_slope " << result.certificate.min_abs_slope << "\n";
            std::cout << "distance " << result.certificate.distance << "\n";
            if (!plm::perturb::validate_certificate(f, result.map, result.certificate, opts)) {
                std::cerr << "certificate failed validation\n";
                return 1;
            }
            return 0;
        }
        throw plm::ParseError("unknown perturb mode '" + pt_mode + "'", 1, 1);
    }

    if (*entropy_cmd) {
        plm::PLMap f = plm::io::read_map_file(en_in);
        plm::entropy::JoinOptions jopts{budgets.cuts, exec};
        auto profile =
            plm::entropy::entropy_profile(f, en_imax, en_nmax, cfg.log_precision_digits, jopts);
        std::ofstream out(cfg.resolve(en_out), std::ios::binary);
        if (!out) throw plm::Error("cannot open CSV output: " + en_out);
        plm::entropy::write_profile_csv(out, profile, cfg.log_precision_digits);
        if (!en_beta.empty()) {
            auto witness = plm::entropy::entropy_witness_search(
                f, plm::Rat::parse(en_beta), en_k, en_imax, en_nmax, cfg.log_precision_digits,
                jopts);
            if (witness) {
                std::cout << "witness i=" << witness->i << " n=" << witness->n
                          << " h=" << witness->value.decimal(12) << "\n";
            } else {
                std::cout << "no witness within budget\n";
            }
        }
        if (profile.truncated) {
            std::cerr << "profile truncated: cut budget exceeded\n";
            return 3;
        }
        return 0;
    }

    if (*analyze_cmd) {
        plm::PLMap f = plm::io::read_map_file(an_in);
        for (const auto& level : an_levels) {
            auto report = plm::analyze::level_set(f, plm::Rat::parse(level));
            std::cout << "level " << report.value << ": count " << report.count << ", points";
            for (const auto& p : report.points) std::cout << " " << p;
            std::cout << "\n";
        }
        if (an_b0) {
            auto b0 = plm::analyze::noninjective_values(f);
            std::cout << "b0 measure " << b0.measure() << "\n";
            std::cout << "b0 closure";
            for (const auto& part : b0.closure.parts())
                std::cout << " [" << part.lo << ", " << part.hi << "]";
            std::cout << "\n";
            if (!b0.excluded_points.empty()) {
                std::cout << "b0 excluded";
                for (const auto& p : b0.excluded_points) std::cout << " " << p;
                std::cout << "\n";
            }
        }
        if (an_grid > 0) {
            if (an_diag_out.empty())
                throw plm::ParseError("--diag-grid needs -o for the CSV output", 1, 1);
            std::ofstream out(cfg.resolve(an_diag_out), std::ios::binary);
            if (!out) throw plm::Error("cannot open CSV output: " + an_diag_out);
            plm::Rat radius = plm::Rat::parse(an_radius);
            out << "x,max_dq,min_dq\n";
            for (int k = 0; k <= an_grid; k++) {
                plm::Rat x(k, an_grid);
                auto diag = plm::analyze::scale_diagnostics(f, x, radius);
                out << x << "," << diag.max_dq << "," << diag.min_dq << "\n";
            }
        }
        return 0;
    }

    if (*plot_cmd) {
        std::ofstream out(cfg.resolve(pl_out), std::ios::binary);
        if (!out) throw plm::Error("cannot open SVG output: " + pl_out);
        if (pl_in.size() > 4 && pl_in.substr(pl_in.size() - 4) == ".csv") {
            std::ifstream in(pl_in, std::ios::binary);
            if (!in) throw plm::Error("cannot open CSV input: " + pl_in);
            plm::svg::plot_profile(out, plm::svg::read_profile_csv(in));
        } else {
            plm::PLMap f = plm::io::read_map_file(pl_in);
            std::optional<plm::perturb::PerturbCertificate> cert;
            if (!pl_cert.empty()) cert = plm::perturb::read_certificate_file(pl_cert);
            plm::svg::plot_map(out, f, cert);
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const plm::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const plm::BudgetError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const plm::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
