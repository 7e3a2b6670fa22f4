#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "round/errors.hpp"
#include "round/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

roundsim::EmitFormat parse_format(const std::string& name) {
    if (name == "csv") {
        return roundsim::EmitFormat::Csv;
    }
    if (name == "json") {
        return roundsim::EmitFormat::Json;
    }
    throw roundsim::ConfigError("unknown format '" + name + "' (expected csv or json)");
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw roundsim::Error("cannot open output file: " + path);
    }
    out << text;
    if (!out) {
        throw roundsim::Error("failed writing output file: " + path);
    }
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string item =
            csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(item, &used);
            } catch (const std::exception&) {
                throw roundsim::ConfigError("--values: not a number: '" + item + "'");
            }
            if (used != item.size()) {
                throw roundsim::ConfigError("--values: not a number: '" + item + "'");
            }
            values.push_back(v);
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VANET beaconing simulator with statistical rogue-node detection"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format_name = "csv";
    std::optional<std::uint64_t> seed_override;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario");
    run_cmd->add_option("--config", config_path, "Scenario file (key = value)")->required();
    run_cmd->add_option("--seed", seed_override, "Override the config seed");
    run_cmd->add_option("--out", out_path, "Output path (default: stdout)");
    run_cmd->add_option("--format", format_name, "csv or json")->capture_default_str();

    std::string axis_name;
    std::string values_csv;
    int repeats = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario across a parameter axis");
    sweep_cmd->add_option("--config", config_path, "Scenario file (key = value)")->required();
    sweep_cmd->add_option("--axis", axis_name, "n_vehicles or rogue_fraction")->required();
    sweep_cmd->add_option("--values", values_csv, "Comma-separated axis values")->required();
    sweep_cmd->add_option("--repeats", repeats, "Seeded repeats per point, averaged")
        ->capture_default_str();
    sweep_cmd->add_option("--out", out_path, "Output path (default: stdout)");
    sweep_cmd->add_option("--format", format_name, "csv or json")->capture_default_str();

    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate_cmd->add_option("--config", config_path, "Scenario file (key = value)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (validate_cmd->parsed()) {
            roundsim::load_config(config_path);
            std::cout << "ok\n";
            return kExitOk;
        }

        const roundsim::EmitFormat format = parse_format(format_name);
        roundsim::ScenarioConfig config = roundsim::load_config(config_path);

        if (run_cmd->parsed()) {
            if (seed_override.has_value()) {
                config.seed = *seed_override;
            }
            const roundsim::RunResult result = roundsim::run_scenario(config);
            write_output(roundsim::run_to_string(result, format), out_path);
            return kExitOk;
        }

        const roundsim::SweepAxis axis = roundsim::sweep_axis_from_name(axis_name);
        const std::vector<double> values = parse_values(values_csv);
        const std::vector<roundsim::SweepPoint> points = roundsim::sweep(config, axis, values, repeats);
        write_output(roundsim::sweep_to_string(points, format), out_path);
        return kExitOk;
    } catch (const roundsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
}
