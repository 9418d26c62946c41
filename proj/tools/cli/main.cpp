#include <chrono>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"
#include "pqd/errors.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kSolverExit = 3;
constexpr int kIoExit = 4;

const std::map<std::string, std::string> kAbout{
    {"dispersion", "trace plasmon branches of the wire and locate their band edges"},
    {"se-rate", "spontaneous-emission rate into the bound plasmon modes"},
    {"decay", "excitonic amplitude near a band edge"},
    {"noise", "shot-noise Fano factor for one detuning"},
    {"noise-map", "Fano factor over detuning and frequency"},
    {"retard", "two-dot noise with a retarded plasmon exchange"},
    {"phonon", "guided acoustic branches of a free elastic slab"},
};

}  // namespace

int main(int argc, char** argv)
{
    using namespace pqd::cli;

    CLI::App app{"Plasmon-coupled quantum-dot toolkit"};
    app.set_version_flag("--version", std::string(PQD_VERSION));
    app.require_subcommand(1);

    struct Sub {
        CLI::App* app;
        std::string config;
        std::map<std::string, std::string> raw;
    };
    std::map<std::string, Sub> subs;
    for (const auto& name : command_names()) {
        auto& s = subs[name];
        s.app = app.add_subcommand(name, kAbout.at(name));
        s.app->add_option("-c,--config", s.config, "JSON config or sidecar of an earlier run");
        for (const auto& f : schema(name)) s.app->add_option("--" + f.key, s.raw[f.key], f.help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigExit;
    }

    const auto start = std::chrono::steady_clock::now();
    for (auto& [name, s] : subs) {
        if (!s.app->parsed()) continue;
        std::map<std::string, std::string> overrides;
        for (const auto& f : schema(name))
            if (s.app->count("--" + f.key) > 0) overrides[f.key] = s.raw[f.key];
        try {
            const auto cfg = resolve_config(name, s.config, overrides);
            const auto written = run_command(name, cfg);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const auto sidecar = output_path(cfg, name, "json");
            write_sidecar(sidecar, name, cfg, wall);
            for (const auto& p : written) std::cout << p << '\n';
            std::cout << sidecar << '\n';
            return 0;
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kConfigExit;
        } catch (const IoError& e) {
            std::cerr << "i/o error: " << e.what() << '\n';
            return kIoExit;
        } catch (const pqd::Error& e) {
            std::cerr << "solver error: " << e.what() << '\n';
            return kSolverExit;
        } catch (const std::exception& e) {
            std::cerr << "solver error: " << e.what() << '\n';
            return kSolverExit;
        }
    }
    return kConfigExit;
}
