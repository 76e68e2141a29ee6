// Batch experiment runner: executes a JSON experiment config, writes the CSV
// results and a JSON summary, and prints one verdict line per check.
//
// Exit codes: 0 success, 1 internal error, 2 config error, 3 budget error,
// 4 at least one check failed.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdgame/bdgame.hpp"

namespace {

int run_config_file(const std::string& path) {
    nlohmann::json cfg;
    {
        std::ifstream in(path);
        if (!in) {
            std::cerr << "config error: cannot open " << path << "\n";
            return 2;
        }
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            std::cerr << "config error: invalid JSON: " << e.what() << "\n";
            return 2;
        }
    }

    std::string out_prefix = "bdgame-results";
    if (cfg.contains("output")) {
        if (!cfg["output"].is_string()) {
            std::cerr << "config error: \"output\" must be a path prefix string\n";
            return 2;
        }
        out_prefix = cfg["output"].get<std::string>();
    }

    bdgame::ExperimentOutput result;
    try {
        result = bdgame::run_from_config(cfg);
    } catch (const bdgame::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bdgame::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    }

    std::string csv_path = out_prefix + ".csv";
    std::string json_path = out_prefix + ".json";
    {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) {
            std::cerr << "cannot write " << csv_path << "\n";
            return 1;
        }
        csv << result.csv;
    }
    {
        nlohmann::json summary = result.summary;
        summary["config"] = cfg;
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : result.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        summary["checks"] = checks;
        std::ofstream js(json_path, std::ios::binary);
        if (!js) {
            std::cerr << "cannot write " << json_path << "\n";
            return 1;
        }
        js << summary.dump(2) << "\n";
    }

    bool all_pass = true;
    for (const auto& c : result.checks) {
        std::cout << "CHECK " << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " (" << c.detail
                  << ")\n";
        all_pass = all_pass && c.pass;
    }
    std::cout << "wrote " << csv_path << " and " << json_path << "\n";
    return all_pass ? 0 : 4;
}

int list_fixtures_cmd() {
    for (const bdgame::Fixture& f : bdgame::list_fixtures()) {
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(f.hash));
        std::cout << f.name << "  fnv1a64=" << hash << "  " << f.note << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"backdoor detection game simulator"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment config (JSON)");
    run->add_option("config", config_path, "path to the experiment config")->required();

    CLI::App* fixtures = app.add_subcommand("list-fixtures", "print named fixtures and hashes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return run_config_file(config_path);
        if (fixtures->parsed()) return list_fixtures_cmd();
    } catch (const bdgame::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
