#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "disparity/config.hpp"
#include "disparity/csv.hpp"
#include "disparity/error.hpp"
#include "disparity/report.hpp"
#include "disparity/selfcheck.hpp"
#include "disparity/synthetic.hpp"

namespace {

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) throw disparity::Error(disparity::ErrorKind::Io, "cannot write '" + p.string() + "'");
    out << text;
}

int cmd_run(const std::string& config_path)
{
    using namespace disparity;
    const RunConfig cfg = load_config(config_path);
    validate_config(cfg);
    const Dataset d = prepare_dataset(cfg);
    const Report rep = execute(cfg, d);

    const std::string json = report_json(rep);
    const std::string table = report_table(rep);
    const auto json_path = cfg.json_output.value_or(std::filesystem::path(config_path).replace_extension(".report.json"));
    write_file(json_path, json);
    if (cfg.table_output) write_file(*cfg.table_output, table);
    std::cout << table;
    std::cout << "report written to " << json_path.string() << '\n';

    for (const auto& r : rep.runs) {
        if (r.failure) return 3;
    }
    return 0;
}

int cmd_generate(const std::string& params_path, const std::string& out_path)
{
    using namespace disparity;
    const auto g = load_generate_config(params_path);
    const Dataset d = generate(g.params, g.n, g.seed);
    save_csv(out_path, d);
    std::cout << "wrote " << d.n_rows() << " rows to " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Disparity decomposition under hypothetical equalizing interventions"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run every decomposition listed in a config file");
    run->add_option("config", config_path, "YAML or JSON run configuration")->required()->check(CLI::ExistingFile);

    auto* selfcheck = app.add_subcommand("selfcheck", "Check the cross-estimator identities on generated data");

    std::string params_path, out_path;
    auto* gen = app.add_subcommand("generate", "Simulate a dataset from structural parameters");
    gen->add_option("params", params_path, "YAML structural parameters")->required()->check(CLI::ExistingFile);
    gen->add_option("out", out_path, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path);
        if (*gen) return cmd_generate(params_path, out_path);
        if (*selfcheck) {
            const auto checks = disparity::run_selfcheck();
            std::cout << disparity::format_selfcheck(checks);
            return disparity::all_pass(checks) ? 0 : 1;
        }
    } catch (const disparity::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
