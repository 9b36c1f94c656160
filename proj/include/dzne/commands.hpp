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

#pragma once

/**
 * The four tool commands. Each one runs from a RunConfig, writes its files
 * into `config.out` and returns the written file names plus any errors it
 * recovered from. Unrecoverable problems are thrown.
 *
 * Output layout
 *   exact        exact.csv, exact.json
 *   sweep        trajectory_n<N>.csv per n, sweep.json (durations manifest)
 *   extrapolate  exact.csv, control.csv, extrapolated.csv, extrapolation.json
 *   report       report.json, report.txt
 *
 * With format = json the trajectories are embedded in the manifest instead
 * of separate CSV files; format = svg adds a <command>.svg projection plot.
 * Every manifest carries the full effective configuration under "config".
 */

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dzne/analysis.hpp"
#include "dzne/config.hpp"
#include "dzne/extrapolate.hpp"
#include "dzne/io.hpp"
#include "dzne/trajectory.hpp"

namespace dzne {

struct CommandResult {
    std::vector<std::string> files;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
};

namespace cmd_detail {

using nlohmann::json;

inline json trajectory_json(const Trajectory& t) {
    json rows = json::array();
    for (const BlochVector& v : t) rows.push_back({v.x, v.y, v.z});
    return rows;
}

inline json report_json(const TrajectoryReport& r, const Trajectory& t) {
    json j;
    j["per_point_deviation"] = r.per_point_deviation;
    j["mean_deviation"] = r.mean_deviation;
    j["max_deviation"] = r.max_deviation;
    j["final_point_deviation"] = r.final_point_deviation;
    j["smoothness"] = smoothness_score(t);
    return j;
}

class Writer {
  public:
    Writer(const RunConfig& cfg, CommandResult& result) : dir_(cfg.out), format_(cfg.format), result_(result) {
        std::filesystem::create_directories(dir_);
    }

    void text(const std::string& name, std::string_view body) {
        io::write_text(dir_ / name, body);
        result_.files.push_back(name);
    }

    /// Writes a CSV unless trajectories are embedded in the manifest.
    void trajectory(const std::string& name, const Trajectory& t, json& manifest) {
        if (format_ == OutputFormat::Json) {
            manifest["trajectories"][name] = trajectory_json(t);
        } else {
            text(name + ".csv", io::trajectory_csv(t));
        }
    }

    void svg(const std::string& name, const std::vector<io::SvgSeries>& series) {
        if (format_ == OutputFormat::Svg) text(name + ".svg", io::projections_svg(series));
    }

    void manifest(const std::string& name, json& m) {
        m["files"] = result_.files;
        text(name + ".json", m.dump(2) + "\n");
    }

  private:
    std::filesystem::path dir_;
    OutputFormat format_;
    CommandResult& result_;
};

inline json header(const char* command, const RunConfig& cfg) {
    json m;
    m["command"] = command;
    m["config"] = to_json(cfg);
    return m;
}

inline SweepResult sweep_for(const RunConfig& cfg, SchemeKind kind, const std::vector<std::int64_t>& n_values) {
    return run_sweep(cfg.spec, kind, n_values, cfg.noise, cfg.sampling());
}

inline std::string method_label(const ExtrapolationConfig& c) {
    return std::holds_alternative<LinearConfig>(c.method) ? "linear" : "richardson";
}

}  // namespace cmd_detail

inline CommandResult cmd_exact(const RunConfig& cfg) {
    using namespace cmd_detail;
    cfg.validate();
    CommandResult result;
    Writer w(cfg, result);
    const Trajectory exact = exact_trajectory(cfg.spec);
    json m = header("exact", cfg);
    m["points"] = exact.size();
    w.trajectory("exact", exact, m);
    w.svg("exact", {{"exact", exact}});
    w.manifest("exact", m);
    return result;
}

inline CommandResult cmd_sweep(const RunConfig& cfg) {
    using namespace cmd_detail;
    cfg.validate();
    CommandResult result;
    Writer w(cfg, result);
    const SweepResult sweep = sweep_for(cfg, cfg.scheme, cfg.n_values);
    const Trajectory exact = exact_trajectory(cfg.spec);

    json m = header("sweep", cfg);
    m["scheme"] = std::string(to_string(sweep.kind));
    m["n_values"] = sweep.n_values;
    m["durations_ns"] = sweep.durations;
    m["full_circuit_delay_units"] = json::array();
    const Circuit full = circuit_for_step(cfg.spec.n_steps, cfg.spec);
    for (std::int64_t n : sweep.n_values) m["full_circuit_delay_units"].push_back(delay_units(inject(full, {sweep.kind, n})));

    std::vector<io::SvgSeries> plot{{"exact", exact}};
    for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
        const std::string name = "trajectory_n" + std::to_string(sweep.n_values[i]);
        w.trajectory(name, sweep.trajectories[i], m);
        if (plot.size() < static_cast<std::size_t>(cfg.svg_max_trajectories))
            plot.push_back({"n = " + std::to_string(sweep.n_values[i]), sweep.trajectories[i]});
    }
    w.svg("sweep", plot);
    w.manifest("sweep", m);
    return result;
}

inline CommandResult cmd_extrapolate(const RunConfig& cfg) {
    using namespace cmd_detail;
    cfg.validate();
    CommandResult result;
    Writer w(cfg, result);
    const SweepResult sweep = sweep_for(cfg, cfg.scheme, cfg.n_values);
    const Trajectory exact = exact_trajectory(cfg.spec);
    const ExtrapolationConfig ecfg = cfg.extrapolation();
    const ExtrapolationResult ex = extrapolate_trajectory(sweep, ecfg, exact);

    json m = header("extrapolate", cfg);
    m["method"] = method_label(ecfg);
    m["axes"] = std::string(to_string(ecfg.axes));
    m["target_n"] = ex.target_n ? json(*ex.target_n) : json(nullptr);
    json series = json::array();
    for (const SeriesDiagnostic& d : ex.series) {
        json s;
        s["step"] = d.step;
        s["axis"] = std::string(kAxisNames[d.axis]);
        s["ok"] = d.ok;
        if (!d.ok) {
            s["error"] = d.error;
            result.errors.push_back("step " + std::to_string(d.step) + " axis " + std::string(kAxisNames[d.axis]) +
                                    ": " + d.error + " (point fell back to control)");
        } else {
            s["value"] = d.value;
        }
        if (std::holds_alternative<LinearConfig>(ecfg.method)) {
            s["intercept"] = d.intercept;
            s["slope"] = d.slope;
            s["residual_rms"] = d.residual_rms;
        } else {
            s["k0"] = d.k0;
            s["levels"] = d.levels;
            s["k_fallback"] = d.fallback;
            s["used_n"] = d.used_n;
        }
        series.push_back(std::move(s));
    }
    m["series"] = std::move(series);
    m["flags"] = ex.flags;

    const TrajectoryReport control = deviation_report(ex.control, exact);
    const TrajectoryReport extrapolated = deviation_report(ex.trajectory, exact, ex.flags);
    m["control_report"] = report_json(control, ex.control);
    m["extrapolated_report"] = report_json(extrapolated, ex.trajectory);
    m["improvement_ratio"] =
        control.mean_deviation > 0.0 ? json(improvement_ratio(extrapolated, control)) : json(nullptr);

    w.trajectory("exact", exact, m);
    w.trajectory("control", ex.control, m);
    w.trajectory("extrapolated", ex.trajectory, m);
    w.svg("extrapolation", {{"exact", exact}, {"control (n = 0)", ex.control}, {"extrapolated", ex.trajectory}});
    w.manifest("extrapolation", m);
    return result;
}

inline CommandResult cmd_report(const RunConfig& cfg) {
    using namespace cmd_detail;
    using io::shortest;
    cfg.validate();
    CommandResult result;
    Writer w(cfg, result);
    const Trajectory exact = exact_trajectory(cfg.spec);
    const Circuit full = circuit_for_step(cfg.spec.n_steps, cfg.spec);

    std::vector<SchemeKind> kinds{cfg.scheme};
    if (cfg.compare_schemes)
        for (SchemeKind k : {SchemeKind::Type1, SchemeKind::Type2, SchemeKind::Type3})
            if (k != cfg.scheme) kinds.push_back(k);

    std::vector<std::int64_t> budgets;
    const auto base_sites = static_cast<std::int64_t>(insertion_sites(cfg.scheme, full));
    for (std::int64_t n : cfg.n_values) budgets.push_back(n * base_sites);

    std::vector<ExtrapolationConfig> methods;
    for (AxisMask axes : {AxisMask::All, AxisMask::ZOnly}) {
        ExtrapolationConfig lin;
        lin.method = LinearConfig{cfg.target_n, cfg.calibrate};
        lin.axes = axes;
        methods.push_back(lin);
    }
    for (AxisMask axes : {AxisMask::All, AxisMask::ZOnly}) {
        ExtrapolationConfig rich;
        rich.method = cfg.richardson;
        rich.axes = axes;
        methods.push_back(rich);
    }

    json m = header("report", cfg);
    m["exact_smoothness"] = smoothness_score(exact);
    m["schemes"] = json::array();
    std::string txt = "trajectory report\n";
    txt += "exact smoothness " + shortest(smoothness_score(exact)) + "\n";

    for (SchemeKind kind : kinds) {
        std::vector<std::int64_t> n_values;
        for (std::int64_t b : budgets) n_values.push_back(equivalent_budget(b, kind, full).n);
        const SweepResult sweep = sweep_for(cfg, kind, n_values);

        json s;
        s["scheme"] = std::string(to_string(kind));
        s["n_values"] = n_values;
        s["full_circuit_delay_units"] = budgets;
        txt += "\nscheme " + std::string(to_string(kind)) + "\n";

        if (sweep.n_values.size() >= 2) {
            s["monotonicity_score"] = monotonicity_score(sweep, exact);
            txt += "  monotonicity_score " + shortest(s["monotonicity_score"].get<double>()) + "\n";
        } else {
            s["monotonicity_score"] = nullptr;
            txt += "  monotonicity_score n/a\n";
        }

        txt += "  n  delay_units  mean_deviation  smoothness\n";
        s["levels"] = json::array();
        for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
            const TrajectoryReport r = deviation_report(sweep.trajectories[i], exact);
            json l;
            l["n"] = sweep.n_values[i];
            l["mean_deviation"] = r.mean_deviation;
            l["smoothness"] = smoothness_score(sweep.trajectories[i]);
            txt += "  " + std::to_string(sweep.n_values[i]) + "  " + std::to_string(budgets[i]) + "  " +
                   shortest(r.mean_deviation) + "  " + shortest(l["smoothness"].get<double>()) + "\n";
            s["levels"].push_back(std::move(l));
        }

        const TrajectoryReport control = deviation_report(sweep.control(), exact);
        const bool has_noise = control.mean_deviation > 0.0;
        txt += "  method  axes  mean_deviation  max_deviation  final_point_deviation  smoothness  improvement_ratio\n";
        const auto row = [&](const std::string& method, const std::string& axes, const TrajectoryReport& r,
                             const Trajectory& t, json& e) {
            e["method"] = method;
            e["axes"] = axes;
            e["mean_deviation"] = r.mean_deviation;
            e["max_deviation"] = r.max_deviation;
            e["final_point_deviation"] = r.final_point_deviation;
            e["smoothness"] = smoothness_score(t);
            e["improvement_ratio"] = has_noise ? json(improvement_ratio(r, control)) : json(nullptr);
            txt += "  " + method + "  " + axes + "  " + shortest(r.mean_deviation) + "  " +
                   shortest(r.max_deviation) + "  " + shortest(r.final_point_deviation) + "  " +
                   shortest(e["smoothness"].get<double>()) + "  " +
                   (has_noise ? shortest(e["improvement_ratio"].get<double>()) : std::string("n/a")) + "\n";
        };

        s["methods"] = json::array();
        {
            json e;
            row("control", "-", control, sweep.control(), e);
            s["methods"].push_back(std::move(e));
        }
        for (const ExtrapolationConfig& ec : methods) {
            json e;
            const std::string label = method_label(ec);
            const std::string axes(to_string(ec.axes));
            try {
                const ExtrapolationResult ex = extrapolate_trajectory(sweep, ec, exact);
                std::size_t flagged = 0;
                for (const std::string& f : ex.flags) flagged += f.empty() ? 0 : 1;
                for (const SeriesDiagnostic& d : ex.series)
                    if (!d.ok)
                        result.errors.push_back(std::string(to_string(kind)) + " " + label + "/" + axes + " step " +
                                                std::to_string(d.step) + ": " + d.error);
                row(label, axes, deviation_report(ex.trajectory, exact, ex.flags), ex.trajectory, e);
                e["flagged_points"] = flagged;
                e["target_n"] = ex.target_n ? json(*ex.target_n) : json(nullptr);
            } catch (const std::exception& err) {
                e["method"] = label;
                e["axes"] = axes;
                e["error"] = err.what();
                txt += "  " + label + "  " + axes + "  error: " + err.what() + "\n";
                result.errors.push_back(std::string(to_string(kind)) + " " + label + "/" + axes + ": " + err.what());
            }
            s["methods"].push_back(std::move(e));
        }
        m["schemes"].push_back(std::move(s));
    }

    w.text("report.txt", txt);
    w.manifest("report", m);
    return result;
}

}  // namespace dzne
