#include "wsim/core/error.hpp"
#include "wsim/core/parallel.hpp"
#include "wsim/policy/schedule_io.hpp"
#include "wsim/scenario/compare.hpp"
#include "wsim/scenario/config.hpp"
#include "wsim/scenario/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

int fail(const std::string &stage, const std::string &msg) {
    std::cerr << "wsim: error [" << stage << "]: " << msg << "\n";
    return 1;
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Wage subsidy and unemployment payment microsimulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", WSIM_VERSION);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

    std::string config_path, out_path, a_path, b_path, preset_dir;
    auto *run = app.add_subcommand("run", "Run a scenario and write its output bundle");
    run->add_option("config", config_path, "Scenario config or run manifest")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", out_path, "Output directory (overrides the config)");

    auto *cmp = app.add_subcommand("compare", "Compare two output bundles");
    cmp->add_option("a", a_path, "Bundle A")->required()->check(CLI::ExistingDirectory);
    cmp->add_option("b", b_path, "Bundle B")->required()->check(CLI::ExistingDirectory);
    cmp->add_option("-o,--output", out_path, "Write the report here instead of stdout");

    double from = -1, to = -1, step = -1;
    int children = -1;
    auto *curves = app.add_subcommand("curves", "Write budget-constraint curves for each configured design");
    curves->add_option("config", config_path, "Scenario config")->required()->check(CLI::ExistingFile);
    curves->add_option("-o,--output", out_path, "Output directory")->required();
    curves->add_option("--from", from, "First previous-gross grid point");
    curves->add_option("--to", to, "Last previous-gross grid point");
    curves->add_option("--step", step, "Grid step");
    curves->add_option("--children", children, "Number of children in the stylized household");

    auto *validate = app.add_subcommand("validate", "Check a scenario config without running it");
    validate->add_option("config", config_path, "Scenario config")->required()->check(CLI::ExistingFile);

    auto *presets = app.add_subcommand("presets", "Inspect shipped schedule presets");
    presets->require_subcommand(1);
    auto *list = presets->add_subcommand("list", "List CWS, PUP and design presets");
    list->add_option("--dir", preset_dir, "Preset directory");

    CLI11_PARSE(app, argc, argv);
    set_threads(threads);

    try {
        if (*run) {
            auto cfg = wsim::load_config(config_path);
            fs::path out = out_path.empty() ? (cfg.output_dir ? *cfg.output_dir : fs::path("out")) : fs::path(out_path);
            const auto res = wsim::run_scenario(cfg, out);
            for (const auto &w : res.warnings) std::cerr << "wsim: warning: " << w << "\n";
            for (const auto &wave : res.waves)
                for (const auto &w : wave.warnings) std::cerr << "wsim: warning [" << wave.wave.id << "]: " << w << "\n";
            std::cout << "wrote " << res.files.size() << " files to " << out.string() << "\n";
        } else if (*cmp) {
            const auto rep = wsim::compare_runs(a_path, b_path);
            if (out_path.empty()) {
                std::cout << rep.to_csv();
            } else {
                std::ofstream f(out_path, std::ios::binary);
                f << rep.to_csv();
                if (!f) return fail("compare", "cannot write " + out_path);
            }
            std::cerr << "wsim: " << rep.rows.size() << " indicators compared, " << rep.flagged << " flagged\n";
        } else if (*curves) {
            auto cfg = wsim::load_config(config_path);
            if (from >= 0) cfg.curves.from = from;
            if (to >= 0) cfg.curves.to = to;
            if (step > 0) cfg.curves.step = step;
            if (children >= 0) cfg.curves.children = children;
            for (const auto &p : wsim::emit_budget_constraints(cfg, out_path)) std::cout << p.string() << "\n";
        } else if (*validate) {
            const auto cfg = wsim::load_config(config_path);
            cfg.validate();
            std::cout << "ok: " << cfg.designs.size() << " designs, " << cfg.waves.size() << " waves\n";
        } else if (*list) {
            const wsim::policy::PresetRegistry reg(preset_dir.empty() ? wsim::policy::default_preset_dir()
                                                                      : fs::path(preset_dir));
            std::cout << "cws:";
            for (const auto &id : reg.cws_ids()) std::cout << " " << id;
            std::cout << "\npup:";
            for (const auto &id : reg.pup_ids()) std::cout << " " << id;
            std::cout << "\ndesigns:\n";
            for (const auto &d : reg.designs())
                std::cout << "  " << d.id << " (" << d.label << "): " << d.cws << " + " << d.pup << "\n";
        }
    } catch (const wsim::StageError &e) {
        std::cerr << "wsim: error " << e.what() << "\n";
        return 1;
    } catch (const wsim::ConfigError &e) {
        return fail("config", e.what());
    } catch (const std::exception &e) {
        return fail(run->parsed() ? "run" : "main", e.what());
    }
    return 0;
}
