// Copyright 2026 The dzne Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dzne: noisy single-qubit trajectory sweeps and zero-noise extrapolation.
//
//   dzne exact       --out DIR
//   dzne sweep       --scheme type1 --n-values 0..10 --out DIR
//   dzne extrapolate --method richardson --axes z --out DIR
//   dzne report      --config run.cfg --out DIR
//
// Settings come from --config (flat key = value file) and are overridden by
// flags. Exit status: 0 on success, 1 on any unrecovered error, 2 on usage errors.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dzne/commands.hpp"
#include "dzne/config.hpp"

namespace {

void print_error(const std::string& command, const std::string& kind, const std::string& message) {
    nlohmann::json e;
    e["command"] = command;
    e["error"] = kind;
    e["message"] = message;
    std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy single-qubit trajectory sweeps and zero-noise extrapolation"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> overrides;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
        const auto flag = [&](const char* name, const char* key, const char* help) {
            sub->add_option_function<std::string>(
                name, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
        };
        flag("--scheme", "scheme", "type1, type2 or type3");
        flag("--n-values", "n_values", "injection strengths, e.g. 0..10 or 0,1,2");
        flag("--method", "method", "linear or richardson");
        flag("--axes", "axes", "all or z");
        flag("--shots", "shots", "sample each coordinate with this many shots");
        flag("--seed", "seed", "seed for shot sampling");
        flag("--out", "out", "output directory");
        flag("--format", "format", "csv, json or svg");
    };

    auto* exact = app.add_subcommand("exact", "write the noiseless trajectory");
    auto* sweep = app.add_subcommand("sweep", "simulate a delay-injection sweep");
    auto* extrapolate = app.add_subcommand("extrapolate", "extrapolate a sweep to zero noise");
    auto* report = app.add_subcommand("report", "compare schemes and extrapolation methods");
    for (auto* sub : {exact, sweep, extrapolate, report}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        dzne::RunConfig cfg;
        if (!config_path.empty()) dzne::apply_config_text(cfg, dzne::io::read_text(config_path));
        for (const auto& [key, value] : overrides) dzne::set_option(cfg, key, value);

        dzne::CommandResult result;
        if (command == "exact") result = dzne::cmd_exact(cfg);
        else if (command == "sweep") result = dzne::cmd_sweep(cfg);
        else if (command == "extrapolate") result = dzne::cmd_extrapolate(cfg);
        else result = dzne::cmd_report(cfg);

        for (const std::string& f : result.files) std::cout << cfg.out << "/" << f << "\n";
        for (const std::string& e : result.errors) print_error(command, "series", e);
        return result.ok() ? 0 : 1;
    } catch (const dzne::ConfigError& e) {
        print_error(command, "config", e.what());
    } catch (const dzne::ExtrapolationError& e) {
        print_error(command, "extrapolation", e.what());
    } catch (const std::exception& e) {
        print_error(command, "runtime", e.what());
    }
    return 1;
}
