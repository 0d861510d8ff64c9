#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gaprenorm/errors.hpp"
#include "gaprenorm/json_io.hpp"
#include "gaprenorm/renorm.hpp"
#include "gaprenorm/search.hpp"
#include "gaprenorm/tangent.hpp"

namespace {

using namespace gaprenorm;

struct RunConfig {
    std::size_t m = 16;        // nonlinearity basis dimension
    double h = 1e-6;           // relative finite-difference step
    std::uint64_t seed = 1;    // Monte Carlo seed
    std::size_t samples = 1000;
    double r = 0.4;            // cone slope budget
    double delta = 0.1;        // cone nonlinearity budget
    std::string out_dir = ".";
    double search_tol = 1e-12;  // bisection bracket width
    double fit_tol = 1e-8;      // nonlinearity fit residual bound
};

void validate_config(const RunConfig& c) {
    if (c.m < 4 || c.m > 64)
        throw DomainError("config: m must lie in [4, 64]");
    if (!(c.h > 0) || !(c.search_tol > 0) || !(c.fit_tol > 0))
        throw DomainError("config: h and tolerances must be positive");
    if (!(c.r > 0 && c.r < 1))
        throw DomainError("config: r must lie in (0, 1)");
    if (!(c.delta > 0)) throw DomainError("config: delta must be positive");
    if (c.samples < 1) throw DomainError("config: samples must be >= 1");
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["m"] = c.m;
    j["h"] = c.h;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["r"] = c.r;
    j["delta"] = c.delta;
    j["out_dir"] = c.out_dir;
    j["tolerances"] = {{"search", c.search_tol}, {"fit", c.fit_tol}};
    return j;
}

void load_config_file(const std::string& path, RunConfig& c) {
    ordered_json j = load_json_file(path);
    if (!j.is_object()) throw DomainError(path + ": config must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "m") c.m = value.get<std::size_t>();
        else if (key == "h") c.h = value.get<double>();
        else if (key == "seed") c.seed = value.get<std::uint64_t>();
        else if (key == "samples") c.samples = value.get<std::size_t>();
        else if (key == "r") c.r = value.get<double>();
        else if (key == "delta") c.delta = value.get<double>();
        else if (key == "out_dir") c.out_dir = value.get<std::string>();
        else if (key == "tolerances") {
            if (!value.is_object())
                throw DomainError(path + ": tolerances must be an object");
            for (const auto& [tk, tv] : value.items()) {
                if (tk == "search") c.search_tol = tv.get<double>();
                else if (tk == "fit") c.fit_tol = tv.get<double>();
                else throw DomainError(path + ": unknown tolerance \"" + tk + "\"");
            }
        } else {
            throw DomainError(path + ": unknown config key \"" + key + "\"");
        }
    }
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(dir);
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw DomainError("cannot write file: " + p.string());
}

GapMap load_map(const std::string& path) {
    return gapmap_from_json(load_json_file(path));
}

// Renormalizes depth times and fails loudly when the trajectory stops early,
// so the caller's exit code reflects the stop reason.
GapMap map_at_depth(const GapMap& f, std::size_t depth, double fit_tol) {
    if (depth == 0) return f;
    Trajectory t = renormalize_n(f, depth, fit_tol);
    if (t.achieved_depth() < depth) {
        std::string msg = "requested depth " + std::to_string(depth) +
                          ", renormalizable only to depth " +
                          std::to_string(t.achieved_depth());
        if (t.stop == StopReason::cap) throw CapError(msg);
        throw NotRenormalizableError(msg, t.stop == StopReason::boundary);
    }
    return t.steps.back().renormalized;
}

std::string trajectory_csv(const Trajectory& t) {
    std::string csv = "depth,k,sigma,I_prime_len,affine_distance\n";
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const RenormStep& s = t.steps[i];
        csv += std::to_string(i + 1);
        csv += ',';
        csv += std::to_string(s.k);
        csv += ',';
        csv += s.sigma == Sign::minus ? '-' : '+';
        csv += ',';
        csv += format_g17(s.i_prime.length());
        csv += ',';
        csv += format_g17(affine_distance(s.renormalized));
        csv += '\n';
    }
    return csv;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
    std::string csv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) csv += ',';
            csv += format_g17(m(i, j));
        }
        csv += '\n';
    }
    return csv;
}

int cmd_renormalize(const RunConfig& cfg, const std::string& map_path,
                    std::size_t depth) {
    GapMap f = load_map(map_path);
    Trajectory t = renormalize_n(f, depth, cfg.fit_tol);
    write_file(cfg.out_dir, "trajectory.json", dump_17g(trajectory_to_json(t)));
    write_file(cfg.out_dir, "trajectory.csv", trajectory_csv(t));
    std::cout << "renormalize: depth " << t.achieved_depth() << " of " << depth
              << ", gamma " << combinatorics_to_string(t.gamma) << "\n";
    return t.achieved_depth() < depth ? 4 : 0;
}

int cmd_jacobian(const RunConfig& cfg, const std::string& map_path,
                 std::size_t depth, bool dense_csv) {
    GapMap f = map_at_depth(load_map(map_path), depth, cfg.fit_tol);
    Jacobian j = jacobian(f, cfg.m, cfg.h);
    std::vector<double> eig = spectrum(j);
    BlockReport br = block_report(j);
    write_file(cfg.out_dir, "block_report.json",
               dump_17g(block_report_to_json(br, eig)));
    if (dense_csv) {
        write_file(cfg.out_dir, "jacobian.csv", matrix_csv(j.matrix));
    } else {
        std::string csv = "index,magnitude\n";
        for (std::size_t i = 0; i < eig.size(); ++i) {
            csv += std::to_string(i);
            csv += ',';
            csv += format_g17(eig[i]);
            csv += '\n';
        }
        write_file(cfg.out_dir, "eigenvalues.csv", csv);
    }
    std::cout << (dense_csv ? "jacobian" : "spectrum") << ": size "
              << j.matrix.rows() << ", K3 " << format_g17(br.K3)
              << ", dominant " << format_g17(eig.front()) << "\n";
    return 0;
}

int cmd_cone_check(const RunConfig& cfg, const std::string& map_path,
                   std::size_t depth) {
    GapMap f = map_at_depth(load_map(map_path), depth, cfg.fit_tol);
    Jacobian j = jacobian(f, cfg.m, cfg.h);
    ConeParams p{cfg.r, cfg.delta};
    ConeReport rep = cone_invariance_test(j, p, cfg.samples, cfg.seed);
    write_file(cfg.out_dir, "cone_report.json",
               dump_17g(cone_report_to_json(rep, p, cfg.seed)));
    std::cout << "cone-check: contained " << format_g17(rep.contained_fraction)
              << ", min expansion " << format_g17(rep.min_expansion) << "\n";
    return 0;
}

int cmd_search(const RunConfig& cfg, const std::string& map_path,
               const std::string& target_text, std::size_t depth) {
    GapMap tmpl = load_map(map_path);
    Combinatorics target = combinatorics_from_string(target_text);
    if (depth == 0) depth = target.size();
    SearchResult r = bisect_b(tmpl.alpha(), tmpl.beta(), tmpl.phi_left(),
                              tmpl.phi_right(), target, depth, cfg.search_tol);
    write_file(cfg.out_dir, "search_result.json",
               dump_17g(search_result_to_json(r)));
    std::cout << "search: b_star " << format_g17(r.b_star) << ", depth "
              << r.achieved_depth << " of " << depth << "\n";
    return r.achieved_depth < depth ? 4 : 0;
}

int cmd_affine_demo(const RunConfig& cfg) {
    GapMap f(0.5, 0.5, 0.3, Diffeo::identity(4), Diffeo::identity(4));
    RenormStep s = renormalize(f, cfg.fit_tol);
    std::cout << "k = " << s.k << "\n"
              << "sigma = " << (s.sigma == Sign::minus ? '-' : '+') << "\n"
              << "I_prime = [" << format_g17(s.i_prime.lo) << ", "
              << format_g17(s.i_prime.hi) << "]\n"
              << "b_tilde = " << format_g17(s.renormalized.b()) << "\n"
              << "alpha_tilde = " << format_g17(s.renormalized.alpha()) << "\n"
              << "beta_tilde = " << format_g17(s.renormalized.beta()) << "\n";
    bool ok = s.k == 1 && s.sigma == Sign::minus &&
              std::abs(s.i_prime.lo + 0.05) <= 1e-12 &&
              std::abs(s.i_prime.hi - 0.025) <= 1e-12 &&
              std::abs(s.renormalized.b() - 1.0 / 3.0) <= 1e-9 &&
              std::abs(s.renormalized.alpha() - 0.125) <= 1e-9 &&
              std::abs(s.renormalized.beta() - 0.25) <= 1e-9;
    if (!ok) throw NumericError("affine-demo: computed values drifted");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        RunConfig cfg;
        if (const char* env = std::getenv("GAPRENORM_CONFIG"))
            load_config_file(env, cfg);

        CLI::App app{"renormalization toolkit for dissipative gap maps"};
        app.set_help_flag("--help", "print this help message and exit");
        app.require_subcommand(0, 1);
        bool print_config = false;
        app.add_flag("--print-config", print_config,
                     "print the effective configuration as JSON");
        app.add_option("--m", cfg.m, "nonlinearity basis dimension")
            ->check(CLI::Range(4, 64))
            ->capture_default_str();
        app.add_option("--h", cfg.h, "relative finite-difference step")
            ->capture_default_str();
        app.add_option("--seed", cfg.seed, "Monte Carlo seed")
            ->capture_default_str();
        app.add_option("--samples", cfg.samples, "Monte Carlo sample count")
            ->capture_default_str();
        app.add_option("--r", cfg.r, "cone slope budget")->capture_default_str();
        app.add_option("--delta", cfg.delta, "cone nonlinearity budget")
            ->capture_default_str();
        app.add_option("--tol", cfg.search_tol, "bisection bracket width")
            ->capture_default_str();
        app.add_option("--out-dir", cfg.out_dir, "output directory")
            ->capture_default_str();

        std::string map_path, target_text;
        std::size_t depth_renorm = 1, depth_analyze = 0, depth_search = 0;

        CLI::App* ren = app.add_subcommand(
            "renormalize", "iterate the operator, write trajectory JSON + CSV");
        ren->fallthrough();
        ren->add_option("--map", map_path, "gap map JSON file")->required();
        ren->add_option("--depth", depth_renorm, "levels to attempt")
            ->capture_default_str();

        CLI::App* jac = app.add_subcommand(
            "jacobian", "finite-difference derivative, dense CSV + block report");
        jac->fallthrough();
        jac->add_option("--map", map_path, "gap map JSON file")->required();
        jac->add_option("--depth", depth_analyze,
                        "renormalizations before differentiating")
            ->capture_default_str();

        CLI::App* spec = app.add_subcommand(
            "spectrum", "eigenvalue magnitudes CSV + block report");
        spec->fallthrough();
        spec->add_option("--map", map_path, "gap map JSON file")->required();
        spec->add_option("--depth", depth_analyze,
                         "renormalizations before differentiating")
            ->capture_default_str();

        CLI::App* cone = app.add_subcommand(
            "cone-check", "Monte Carlo cone invariance report");
        cone->fallthrough();
        cone->add_option("--map", map_path, "gap map JSON file")->required();
        cone->add_option("--depth", depth_analyze,
                         "renormalizations before differentiating")
            ->capture_default_str();

        CLI::App* sea = app.add_subcommand(
            "search", "bisect b for a target combinatorics, write the bracket");
        sea->fallthrough();
        sea->add_option("--map", map_path,
                        "template map JSON; its b is the search variable")
            ->required();
        sea->add_option("--target", target_text,
                        "combinatorics string, e.g. \"(-,1)(-,2)\"")
            ->required();
        sea->add_option("--depth", depth_search,
                        "levels to match (default: target length)");

        CLI::App* demo = app.add_subcommand(
            "affine-demo", "run the exactly solvable slope-1/2 example");
        demo->fallthrough();

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }

        validate_config(cfg);
        if (print_config) std::cout << dump_17g(config_to_json(cfg));

        if (ren->parsed()) return cmd_renormalize(cfg, map_path, depth_renorm);
        if (jac->parsed()) return cmd_jacobian(cfg, map_path, depth_analyze, true);
        if (spec->parsed())
            return cmd_jacobian(cfg, map_path, depth_analyze, false);
        if (cone->parsed()) return cmd_cone_check(cfg, map_path, depth_analyze);
        if (sea->parsed())
            return cmd_search(cfg, map_path, target_text, depth_search);
        if (demo->parsed()) return cmd_affine_demo(cfg);
        if (!print_config) std::cout << app.help();
        return 0;
    } catch (const gaprenorm::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gaprenorm::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const gaprenorm::NotRenormalizableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const gaprenorm::CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
