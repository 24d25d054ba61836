#include "finview/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "finview/cmaes.hpp"
#include "finview/svg.hpp"

namespace finview {

namespace {

constexpr double deg = std::numbers::pi / 180.0;

double fov_rad(const RunConfig& cfg) { return cfg.fov_deg * deg; }

void ensure_output_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) {
        throw ConfigError("output: cannot create directory '" + cfg.output_dir + "': " +
                          ec.message());
    }
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("output: cannot write '" + path + "'");
    }
    out << content;
}

/// Search-space adapter: CMA-ES runs in [0,1]^dim; layouts decode through the
/// configured bounds. Values outside the box map outside the bounds and pick
/// up the zero penalty in evaluate.
struct BoundsBox {
    std::vector<double> lo, hi;

    explicit BoundsBox(const Bounds& b, int n_mirrors) {
        for (int i = 0; i < n_mirrors; ++i) {
            lo.insert(lo.end(), {b.theta_min, b.offset_min, b.length_min});
            hi.insert(hi.end(), {b.theta_max, b.offset_max, b.length_max});
        }
        lo.insert(lo.end(), {b.u_min, b.phi_min});
        hi.insert(hi.end(), {b.u_max, b.phi_max});
    }

    std::vector<double> denormalize(const Eigen::VectorXd& v) const {
        std::vector<double> x(lo.size());
        for (size_t i = 0; i < lo.size(); ++i) {
            x[i] = lo[i] + v[static_cast<long>(i)] * (hi[i] - lo[i]);
        }
        return x;
    }
};

std::string serialize_result(const RunConfig& cfg, const OptimizeOutcome& outcome,
                             const DeformationSet& defset) {
    std::ostringstream out;
    out << "[result]\n";
    out << "tool_version = " << kToolVersion << "\n";
    out << "best_objective = " << format_double(outcome.best_objective) << "\n";
    out << "unique_coverage_fraction = " << format_double(outcome.unique_coverage_fraction)
        << "\n";
    out << "generations = " << outcome.generations << "\n";
    out << "evaluations = " << outcome.evaluations << "\n";
    out << "\n[coverage]\n";
    for (size_t s = 0; s < outcome.report.per_state_covered.size(); ++s) {
        const auto& mask = outcome.report.per_state_covered[s];
        long covered = 0;
        for (const bool c : mask) covered += c ? 1 : 0;
        const std::string tag = "state." + std::to_string(s + 1) + ".";
        out << tag << "load_n = " << format_double(defset.states[s].load) << "\n";
        out << tag << "covered_fraction = "
            << format_double(static_cast<double>(covered) / static_cast<double>(mask.size()))
            << "\n";
    }
    out << "\n[layout]\n";
    out << serialize_layout(outcome.best_layout);
    out << "\n[config_echo]\n";
    std::istringstream echo(serialize_config(cfg));
    std::string line;
    while (std::getline(echo, line)) {
        out << "# " << line << "\n";
    }
    return out.str();
}

}  // namespace

DeformationSet build_deformation_set(const RunConfig& cfg) {
    if (cfg.loads.table_path) {
        DeformationSet set = load_deformation_table(*cfg.loads.table_path);
        const auto& first = set.states.front();
        if (static_cast<int>(first.back_nodes.size()) != cfg.finger.n_back_nodes ||
            static_cast<int>(first.pad_points.size()) != cfg.finger.n_pad_points) {
            throw ConfigError("loads: table node counts do not match [finger] configuration");
        }
        return set;
    }
    return sample_loads(cfg.finger, cfg.loads.f_max, cfg.loads.k);
}

OptimizeOutcome cmd_optimize(const RunConfig& cfg, std::ostream& log) {
    ensure_output_dir(cfg);
    const DeformationSet defset = build_deformation_set(cfg);
    const Bounds bounds = resolve_bounds(cfg.bounds, cfg.finger);
    const int n_mirrors = cfg.finger.n_back_nodes - 1;
    const int dim = layout_dimension(cfg.finger.n_back_nodes);
    const BoundsBox box(bounds, n_mirrors);

    const auto decode = [&](const Eigen::VectorXd& v) {
        return decode_layout(box.denormalize(v), fov_rad(cfg), cfg.ray_count);
    };
    const cmaes::Objective objective = [&](const Eigen::VectorXd& v) {
        return evaluate(decode(v), defset, bounds).objective_value;
    };

    cmaes::Hyperparams hp;
    try {
        hp = cmaes::default_hyperparams(dim, cfg.cmaes.population);
        if (cfg.cmaes.parents) {
            hp = cmaes::make_hyperparams(dim, hp.population, *cfg.cmaes.parents);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[cmaes] ") + e.what());
    }

    cmaes::StopCriteria stop;
    stop.max_generations = cfg.cmaes.max_generations;
    stop.target_fitness = cfg.cmaes.target_objective;
    stop.sigma_tol = cfg.cmaes.sigma_tol;

    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(dim, 0.5);  // mid-bounds, feasible
    cmaes::RunOutcome run;
    try {
        run = cmaes::run(objective, x0, cfg.cmaes.sigma0, cfg.cmaes.seed, hp, stop);
    } catch (const std::runtime_error& e) {
        throw NumericalError(e.what());
    }

    OptimizeOutcome outcome;
    outcome.best_layout = decode(run.best_x);
    outcome.generations = run.history.empty() ? 0 : run.history.back().generation;
    outcome.evaluations = run.evaluations;
    outcome.report = evaluate(outcome.best_layout, defset, bounds);
    outcome.best_objective = outcome.report.objective_value;
    outcome.unique_coverage_fraction = outcome.report.unique_coverage_fraction;

    if (std::abs(outcome.best_objective - run.best_fitness) > 1e-9) {
        throw NumericalError("result self-consistency check failed: stored objective " +
                             format_double(run.best_fitness) + " vs re-evaluation " +
                             format_double(outcome.best_objective));
    }

    outcome.layout_path = out_path(cfg, "best_layout.txt");
    save_layout_file(outcome.best_layout, outcome.layout_path);

    std::ostringstream hist;
    hist << "generation,best_f,sigma\n";
    for (const cmaes::GenerationLog& g : run.history) {
        hist << g.generation << ',' << format_double(g.best_fitness) << ','
             << format_double(g.sigma) << "\n";
    }
    outcome.history_path = out_path(cfg, "history.csv");
    write_file(outcome.history_path, hist.str());

    outcome.result_path = out_path(cfg, "result.txt");
    write_file(outcome.result_path, serialize_result(cfg, outcome, defset));

    log << "optimize: objective " << format_double(outcome.best_objective)
        << ", unique coverage " << format_double(outcome.unique_coverage_fraction) << ", "
        << outcome.generations << " generations, " << outcome.evaluations << " evaluations\n";
    log << "optimize: wrote " << outcome.result_path << "\n";
    return outcome;
}

CoverageReport cmd_evaluate(const RunConfig& cfg, const std::string& layout_path,
                            std::ostream& log) {
    ensure_output_dir(cfg);
    const DeformationSet defset = build_deformation_set(cfg);
    const Bounds bounds = resolve_bounds(cfg.bounds, cfg.finger);
    const LayoutVector layout = load_layout_file(layout_path, fov_rad(cfg), cfg.ray_count);
    if (static_cast<int>(layout.mirrors.size()) != cfg.finger.n_back_nodes - 1) {
        throw ConfigError("layout: mirror count " + std::to_string(layout.mirrors.size()) +
                          " does not match finger with " +
                          std::to_string(cfg.finger.n_back_nodes) + " back nodes");
    }

    const auto violations = check_bounds(layout, bounds);
    const CoverageReport report = evaluate(layout, defset, bounds);

    std::ostringstream out;
    out << "objective_value = " << format_double(report.objective_value) << "\n";
    out << "unique_coverage_fraction = " << format_double(report.unique_coverage_fraction)
        << "\n";
    for (size_t s = 0; s < report.per_state_covered.size(); ++s) {
        const auto& mask = report.per_state_covered[s];
        long covered = 0;
        for (const bool c : mask) covered += c ? 1 : 0;
        out << "state." << (s + 1) << ".covered_fraction = "
            << format_double(static_cast<double>(covered) / static_cast<double>(mask.size()))
            << "\n";
    }
    for (const BoundsViolation& v : violations) {
        out << "violation: " << v.parameter << " = " << format_double(v.value) << " outside ["
            << format_double(v.min) << ", " << format_double(v.max) << "]\n";
    }
    const std::string text = out.str();
    write_file(out_path(cfg, "evaluation.txt"), text);
    log << text;
    return report;
}

std::string cmd_render(const RunConfig& cfg, const std::string& layout_path, int state_index,
                       std::ostream& log) {
    ensure_output_dir(cfg);
    const DeformationSet defset = build_deformation_set(cfg);
    if (state_index < 0 || state_index >= static_cast<int>(defset.states.size())) {
        throw ConfigError("render: state index " + std::to_string(state_index) +
                          " out of range [0, " + std::to_string(defset.states.size() - 1) + "]");
    }
    const Bounds bounds = resolve_bounds(cfg.bounds, cfg.finger);
    const LayoutVector layout = load_layout_file(layout_path, fov_rad(cfg), cfg.ray_count);
    const CoverageReport report = evaluate(layout, defset, bounds);

    const SceneInstance scene = make_scene(layout, defset.states[state_index]);
    std::vector<TraceResult> traces;
    if (check_bounds(layout, bounds).empty() && check_safety(scene)) {
        const auto rays = cast_fan(scene.camera_origin, scene.camera_axis, scene.fov,
                                   scene.ray_count);
        traces.reserve(rays.size());
        for (const Ray2& ray : rays) {
            traces.push_back(trace(ray, scene));
        }
    }

    const std::string path =
        out_path(cfg, "render_state" + std::to_string(state_index) + ".svg");
    write_file(path, render_scene_svg(scene, traces, report.per_state_covered[state_index]));
    log << "render: wrote " << path << "\n";
    return path;
}

std::string cmd_deform_gen(const RunConfig& cfg, std::ostream& log) {
    ensure_output_dir(cfg);
    const DeformationSet set = build_deformation_set(cfg);
    const std::string path = out_path(cfg, "deformation_table.txt");
    save_deformation_table(set, path);
    log << "deform-gen: wrote " << path << " with " << set.states.size() << " states\n";
    return path;
}

}  // namespace finview
