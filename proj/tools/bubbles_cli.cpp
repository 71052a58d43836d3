#include "bubbles/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

int threads_from_env(int fallback)
{
    const char* env = std::getenv("BUBBLES_THREADS");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) {
        std::cerr << "bubbles: ignoring BUBBLES_THREADS='" << env << "' (expected a positive integer)\n";
        return fallback;
    }
    return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acoustic scattering by small bubble clusters: point-interaction solver and reference oracles"};
    app.require_subcommand(1, 1);

    std::string configPath, outDir;
    int threads = 0;
    const char* commands[][2] = {
        {"functionals", "Shape functionals and Minnaert frequencies per bubble"},
        {"solve", "Assemble and solve the point-interaction system; write diagnostics"},
        {"farfield", "Far-field pattern and cross-section"},
        {"sweep", "Frequency sweep of cross-section and inverse coefficients"},
        {"study", "Convergence study against a reference oracle"},
        {"oracle", "Reference far field from the partial-wave or boundary-element solver"},
    };
    for (auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c[0], c[1]);
        sub->add_option("--config", configPath, "JSON run configuration")->required();
        sub->add_option("--out", outDir, "Output directory (default: outputs.dir from the config)");
        sub->add_option("--threads", threads, "Worker threads (BUBBLES_THREADS overrides)")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    bubbles::set_threads(threads_from_env(threads));
    try {
        bubbles::RunConfig cfg = bubbles::load_config(configPath);
        bubbles::run_command(command, cfg, outDir.empty() ? cfg.outDir : outDir);
    } catch (const bubbles::Error& e) {
        std::cerr << "bubbles " << command << ": " << e.what() << "\n";
        return bubbles::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "bubbles " << command << ": " << e.what() << "\n";
        return 4;
    }
    return 0;
}
