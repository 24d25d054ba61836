#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "finview/commands.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool quiet = false;
};

finview::RunConfig load(const CommonArgs& args) {
    finview::RunConfig cfg = finview::load_config(args.config_path);
    if (args.seed) cfg.cmaes.seed = *args.seed;
    if (args.out_dir) cfg.output_dir = *args.out_dir;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "run configuration file")->required();
    cmd->add_option("--seed", args.seed, "override [cmaes] seed");
    cmd->add_option("--out", args.out_dir, "override [output] dir");
    cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"camera and mirror layout optimizer for fin-ray tactile fingers"};
    app.require_subcommand(1);

    CommonArgs opt_args, eval_args, render_args, gen_args;
    std::string eval_layout, render_layout;
    int render_state = 0;

    CLI::App* optimize = app.add_subcommand("optimize", "run the layout optimization");
    add_common(optimize, opt_args);

    CLI::App* evaluate = app.add_subcommand("evaluate", "score a saved layout");
    add_common(evaluate, eval_args);
    evaluate->add_option("layout", eval_layout, "layout file")->required();

    CLI::App* render = app.add_subcommand("render", "draw a layout under one deformation state");
    add_common(render, render_args);
    render->add_option("layout", render_layout, "layout file")->required();
    render->add_option("--state", render_state, "deformation state index")->required();

    CLI::App* deform_gen = app.add_subcommand("deform-gen", "write the deformation table");
    add_common(deform_gen, gen_args);

    CLI11_PARSE(app, argc, argv);

    std::ostringstream devnull;
    try {
        if (optimize->parsed()) {
            finview::cmd_optimize(load(opt_args), opt_args.quiet ? devnull : std::cout);
        } else if (evaluate->parsed()) {
            finview::cmd_evaluate(load(eval_args), eval_layout,
                                  eval_args.quiet ? devnull : std::cout);
        } else if (render->parsed()) {
            finview::cmd_render(load(render_args), render_layout, render_state,
                                render_args.quiet ? devnull : std::cout);
        } else if (deform_gen->parsed()) {
            finview::cmd_deform_gen(load(gen_args), gen_args.quiet ? devnull : std::cout);
        }
    } catch (const finview::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const finview::TableFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const finview::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
