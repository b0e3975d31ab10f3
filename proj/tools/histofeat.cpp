#include "histofeat/errors.hpp"
#include "histofeat/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

// Failures print exactly one machine-parsable line: "error:<category>: <msg>".
std::string one_line(const char* what) {
    std::string msg(what);
    for (char& c : msg) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return msg;
}

int fail(const char* category, const char* what, int code) {
    std::fprintf(stderr, "error:%s: %s\n", category, one_line(what).c_str());
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"histogram feature toolkit for machine-condition signals"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string method;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    app.add_option("--config", config_path, "pipeline config JSON");
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out", out_dir, "override the config output directory");
    app.add_option("--method", method, "override the config method");
    app.add_option("--k", k, "override the config fold count");

    CLI::App* cmd_extract =
        app.add_subcommand("extract", "write per-state feature CSVs and the dataset CSV");
    CLI::App* cmd_evaluate =
        app.add_subcommand("evaluate", "cross-validate a classifier and write the report");
    CLI::App* cmd_project =
        app.add_subcommand("project", "write the 2D principal-component scatter");
    CLI::App* cmd_synth =
        app.add_subcommand("synth", "write the synthetic 4-state signal suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("config", e.what(), 2);
    }

    try {
        histofeat::PipelineConfig cfg;
        if (!config_path.empty()) {
            cfg = histofeat::load_pipeline_config(config_path);
        } else if (!cmd_synth->parsed()) {
            throw histofeat::ConfigError("--config is required for this command");
        }

        // Flags take precedence over config keys.
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--out")) cfg.output_dir = out_dir;
        if (app.count("--method")) cfg.method = histofeat::method_from_name(method);
        if (app.count("--k")) cfg.k = k;

        histofeat::validate_config(cfg, !cmd_synth->parsed());

        histofeat::PipelineCommand cmd = histofeat::PipelineCommand::synth;
        if (cmd_extract->parsed()) cmd = histofeat::PipelineCommand::extract;
        if (cmd_evaluate->parsed()) cmd = histofeat::PipelineCommand::evaluate;
        if (cmd_project->parsed()) cmd = histofeat::PipelineCommand::project;
        histofeat::run_pipeline(cmd, cfg);
        return 0;
    } catch (const histofeat::ConfigError& e) {
        return fail("config", e.what(), 2);
    } catch (const histofeat::IoError& e) {
        return fail("io", e.what(), 3);
    } catch (const histofeat::DataError& e) {
        return fail("data", e.what(), 4);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
