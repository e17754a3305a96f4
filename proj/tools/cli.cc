// Copyright 2026 The phasewitness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "phasewitness/errors.h"
#include "phasewitness/montecarlo.h"
#include "phasewitness/optimize.h"
#include "phasewitness/witness.h"

namespace phasewitness::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
    std::string state = "sp";
    double r = 0.4;
    std::string state_file;
    double trace_tol = kDefaultTraceTol;
    std::optional<double> eta;
    std::optional<double> epsilon;
    std::vector<double> settings;
    bool optimize = false;
    bool complex_settings = false;
    int budget = SearchOptions{}.budget;
    int grid_points = SearchOptions{}.grid_points;
    double grid_half_width = SearchOptions{}.grid_half_width;
    std::string source = "closed";
    long long shots = 100000;
    std::uint64_t seed = 1;
    double k_sigma = 3.0;
    std::string ingest;
    std::string dump_histograms;
    std::string output;
    std::string format = "json";
    std::optional<int> jobs;
    std::optional<double> eta_min, eta_max, eta_step;
    double r_min = 0.0, r_max = 2.0, r_step = 0.05;
    double eps_min = 0.51, eps_max = 1.0, eps_step = 0.01;
    double tol = 1e-3;
    std::string config;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// --- option registration ---------------------------------------------------

void add_state_options(CLI::App* app, RunConfig& c) {
    app->add_option("--state", c.state, "State family: sp (single photon split between modes), tmss, custom")
        ->check(CLI::IsMember({"sp", "tmss", "custom"}))
        ->capture_default_str();
    app->add_option("--r", c.r, "Squeezing parameter r for tmss (dimensionless, >= 0)")
        ->capture_default_str();
    app->add_option("--state-file", c.state_file, "Density matrix JSON for --state custom (default none)");
    app->add_option("--trace-tol", c.trace_tol, "Allowed trace deficit of truncated states (probability)")
        ->capture_default_str();
}

void add_search_options(CLI::App* app, RunConfig& c) {
    app->add_option("--budget", c.budget, "Objective evaluations per maximization, grid included")
        ->capture_default_str();
    app->add_option("--grid-points", c.grid_points, "Seeding grid points per settings axis")
        ->capture_default_str();
    app->add_option("--grid-half-width", c.grid_half_width,
                    "Seeding grid spans [-w, w] in displacement amplitude units")
        ->capture_default_str();
    app->add_flag("--complex-settings", c.complex_settings,
                  "Search complex displacements (8 real parameters) instead of real ones (default off)");
    app->add_option("--source", c.source, "Wigner values from: closed (closed forms) or fock (truncated Fock basis)")
        ->check(CLI::IsMember({"closed", "fock"}))
        ->capture_default_str();
    app->add_option("--jobs", c.jobs, "Worker threads; 0 uses every core (default: $PHASEWITNESS_JOBS, else 0)");
}

void add_settings_options(CLI::App* app, RunConfig& c) {
    app->add_option("--settings", c.settings,
                    "Displacements a1re a1im a2re a2im b1re b1im b2re b2im (amplitude units, default all 0)")
        ->expected(8)
        ->delimiter(',');
    app->add_flag("--optimize", c.optimize, "Maximize |witness| over the settings first (default off)");
}

void add_output_options(CLI::App* app, RunConfig& c, const std::string& what) {
    app->add_option("--output,-o", c.output, what);
    app->add_option("--format", c.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app->add_option("--config", c.config, "JSON file of option values; command-line flags take precedence (default none)");
}

// --- config file expansion ---------------------------------------------------

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(std::string("cannot read ") + what + " '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::string& path, const char* what) {
    try {
        return json::parse(read_file(path, what));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + " '" + path + "' is not valid JSON: " + e.what());
    }
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
    for (const auto& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) {
            return true;
        }
    }
    return false;
}

std::string scalar_token(const json& v, const std::string& key) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_unsigned()) {
        return std::to_string(v.get<std::uint64_t>());
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<long long>());
    }
    if (v.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    throw ConfigError("config key \"" + key + "\" must be a number or string");
}

// Turns config-file entries into command-line tokens placed ahead of the
// user's own arguments. Keys the user also passed as flags are dropped.
std::vector<std::string> expand_config(const json& cfg, const CLI::App& root, const CLI::App& sub,
                                       const std::vector<std::string>& user_args) {
    if (!cfg.is_object()) {
        throw ConfigError("config file must hold a JSON object");
    }
    std::vector<std::string> tokens;
    for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (flag == "--config") {
            throw ConfigError("config files cannot include other config files");
        }
        const CLI::Option* opt = sub.get_option_no_throw(flag);
        if (opt == nullptr) {
            bool elsewhere = false;
            for (const CLI::App* other : root.get_subcommands({})) {
                elsewhere = elsewhere || other->get_option_no_throw(flag) != nullptr;
            }
            if (!elsewhere) {
                throw ConfigError("unknown config key \"" + key + "\"");
            }
            continue;
        }
        if (flag_given(user_args, flag) || value.is_null()) {
            continue;
        }
        if (opt->get_expected_max() == 0) {
            if (!value.is_boolean()) {
                throw ConfigError("config key \"" + key + "\" must be true or false");
            }
            if (value.get<bool>()) {
                tokens.push_back(flag);
            }
        } else if (value.is_array()) {
            tokens.push_back(flag);
            for (const auto& v : value) {
                tokens.push_back(scalar_token(v, key));
            }
        } else {
            tokens.push_back(flag + "=" + scalar_token(value, key));
        }
    }
    return tokens;
}

// --- shared helpers ----------------------------------------------------------

StateModel make_model(const RunConfig& c) {
    if (c.state == "sp") {
        return SinglePhotonEntangled{};
    }
    if (c.state == "tmss") {
        return TwoModeSqueezed{SqueezingParameter(c.r)};
    }
    if (c.state_file.empty()) {
        throw ConfigError("--state custom needs --state-file");
    }
    return CustomState{std::make_shared<const TwoModeDensityMatrix>(load_density_matrix(c.state_file, c.trace_tol))};
}

int resolve_jobs(const RunConfig& c) {
    int jobs = 0;
    if (c.jobs) {
        jobs = *c.jobs;
    } else if (const char* env = std::getenv("PHASEWITNESS_JOBS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (*end != '\0') {
            throw ConfigError(std::string("PHASEWITNESS_JOBS must be an integer, got '") + env + "'");
        }
        jobs = static_cast<int>(v);
    }
    if (jobs < 0) {
        throw ConfigError("--jobs must be >= 0");
    }
    return jobs;
}

SearchOptions search_options(const RunConfig& c, const StateModel& model) {
    SearchOptions o;
    o.budget = c.budget;
    o.grid_points = c.grid_points;
    o.grid_half_width = c.grid_half_width;
    o.complex_settings = c.complex_settings;
    o.source = c.source == "fock" || std::holds_alternative<CustomState>(model) ? WignerSource::kFockOracle
                                                                               : WignerSource::kClosedForm;
    o.jobs = resolve_jobs(c);
    if (o.grid_points < 2) {
        throw ConfigError("--grid-points must be at least 2");
    }
    if (!(o.grid_half_width > 0.0) || !std::isfinite(o.grid_half_width)) {
        throw ConfigError("--grid-half-width must be positive");
    }
    return o;
}

MeasurementSettings fixed_settings(const RunConfig& c) {
    if (c.settings.empty()) {
        return {0.0, 0.0, 0.0, 0.0};
    }
    if (c.settings.size() != 8) {
        throw ConfigError("--settings needs 8 numbers");
    }
    const auto& v = c.settings;
    return {PhasePoint(v[0], v[1]), PhasePoint(v[2], v[3]), PhasePoint(v[4], v[5]), PhasePoint(v[6], v[7])};
}

std::optional<EstimatedEfficiency> estimated(const RunConfig& c) {
    if (!c.epsilon) {
        return std::nullopt;
    }
    return EstimatedEfficiency(*c.epsilon);
}

// Refuses to overwrite anything the command reads.
void check_not_input(const RunConfig& c, const std::string& path) {
    for (const std::string& in : {c.config, c.state_file, c.ingest}) {
        if (in.empty() || path.empty()) continue;
        std::error_code ec;
        if (fs::equivalent(in, path, ec) || fs::weakly_canonical(in, ec) == fs::weakly_canonical(path, ec)) {
            throw ConfigError("output '" + path + "' would overwrite input '" + in + "'");
        }
    }
}

void write_text(const RunConfig& c, const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    check_not_input(c, path);
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot write '" + path + "'");
    }
    f << text;
}

std::string settings_csv(const MeasurementSettings& s) {
    std::string row;
    for (const PhasePoint& p : {s.alpha1, s.alpha2, s.beta1, s.beta2}) {
        row += "," + fmt(p.value().real()) + "," + fmt(p.value().imag());
    }
    return row;
}

constexpr const char* kSettingsCsvColumns =
    "alpha1_re,alpha1_im,alpha2_re,alpha2_im,beta1_re,beta1_im,beta2_re,beta2_im";

std::string outcome_csv_header() {
    return std::string("state,value,separable_bound,lr_bound,regime,entangled_witnessed,nonlocality_witnessed,"
                       "valid,eta,epsilon,") +
           kSettingsCsvColumns;
}

std::string outcome_csv_row(const std::string& state, const WitnessOutcome& o) {
    auto b = [](bool v) { return v ? std::string("true") : std::string("false"); };
    return state + "," + fmt(o.value) + "," + fmt(o.separable_bound) + "," + fmt(o.lr_bound) + "," +
           std::string(to_string(o.regime)) + "," + b(o.entangled_witnessed) + "," + b(o.nonlocality_witnessed) +
           "," + b(o.valid) + "," + fmt(o.eta.value()) + "," + (o.epsilon_used ? fmt(o.epsilon_used->value()) : "") +
           settings_csv(o.settings);
}

// --- commands ---------------------------------------------------------------

int cmd_evaluate(const RunConfig& c, std::ostream& out) {
    StateModel model = make_model(c);
    Efficiency eta(c.eta.value_or(1.0));
    auto eps = estimated(c);
    SearchOptions search = search_options(c, model);
    MeasurementSettings settings = fixed_settings(c);
    std::optional<OptimizationResult> opt;
    if (c.optimize) {
        opt = maximize_witness(model, eta, eps, search);
        settings = opt->best_settings;
    }
    WitnessOutcome outcome = evaluate(model, settings, eta, eps, search.source);
    if (c.format == "csv") {
        write_text(c, c.output, outcome_csv_header() + "\n" + outcome_csv_row(describe(model), outcome) + "\n", out);
        return 0;
    }
    json j = to_json(outcome);
    j["state"] = describe(model);
    if (const auto* t = std::get_if<TwoModeSqueezed>(&model)) {
        j["r"] = t->r.value();
    }
    j["source"] = c.source == "fock" || std::holds_alternative<CustomState>(model) ? "fock" : "closed";
    if (opt) {
        j["optimization"] = to_json(*opt);
    }
    write_text(c, c.output, j.dump(2) + "\n", out);
    return 0;
}

struct CurveFile {
    std::string stem;
    std::string title;
    SweepCurve curve;
};

std::string gnuplot_stub(const std::vector<CurveFile>& files, const std::string& xlabel) {
    std::string s =
        "# Plot with: gnuplot -p <this file>\n"
        "set datafile separator ','\n"
        "set xlabel '" + xlabel + "'\n"
        "set ylabel 'max |<W>|'\n"
        "set key left top\n"
        "plot \\\n";
    for (const auto& f : files) {
        s += "  '" + f.stem + ".csv' using 1:2 with linespoints title '" + f.title + "', \\\n";
    }
    s += "  '" + files.front().stem + ".csv' using 1:13 with lines dashtype 2 title 'separable bound'\n";
    return s;
}

void write_curves(const RunConfig& c, const std::string& dir, const std::string& name,
                  const std::vector<CurveFile>& files, const std::string& gnuplot, std::ostream& out) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    }
    json manifest = {{"command", name}, {"directory", dir}, {"files", json::array()}};
    for (const auto& f : files) {
        std::string path = (fs::path(dir) / (f.stem + "." + c.format)).string();
        if (c.format == "csv") {
            std::ostringstream ss;
            write_csv(ss, f.curve);
            write_text(c, path, ss.str(), out);
        } else {
            json j = to_json(f.curve);
            j["title"] = f.title;
            write_text(c, path, j.dump(2) + "\n", out);
        }
        manifest["files"].push_back(path);
    }
    if (c.format == "csv") {
        std::string path = (fs::path(dir) / (name + ".gp")).string();
        write_text(c, path, gnuplot, out);
        manifest["files"].push_back(path);
    }
    out << manifest.dump(2) << "\n";
}

std::string r_label(double r) { return "r" + fmt(r); }

int cmd_fig1(const RunConfig& c, std::ostream& out) {
    SearchOptions search = search_options(c, SinglePhotonEntangled{});
    auto eta_grid = linear_grid(c.eta_min.value_or(0.3), c.eta_max.value_or(1.0), c.eta_step.value_or(0.01));
    for (double e : eta_grid) (void)Efficiency(e);
    auto r_grid = linear_grid(c.r_min, c.r_max, c.r_step);
    for (double r : r_grid) (void)SqueezingParameter(r);

    std::vector<CurveFile> eta_files;
    eta_files.push_back({"fig1a_single_photon", "single photon", sweep_eta(SinglePhotonEntangled{}, eta_grid, search)});
    for (double r : {0.4, 0.8}) {
        eta_files.push_back({"fig1b_tmss_" + r_label(r), "two-mode squeezed r=" + fmt(r),
                             sweep_eta(TwoModeSqueezed{SqueezingParameter(r)}, eta_grid, search)});
    }
    const std::vector<double> eta_list = {1.0, 0.99, 0.7, 0.5};
    auto r_curves = sweep_r(eta_list, r_grid, search);
    std::vector<CurveFile> r_files;
    for (std::size_t i = 0; i < eta_list.size(); ++i) {
        r_files.push_back({"fig1c_eta" + fmt(eta_list[i]), "eta=" + fmt(eta_list[i]), r_curves[i]});
    }
    const std::string dir = c.output.empty() ? "fig1" : c.output;
    std::vector<CurveFile> all = eta_files;
    all.insert(all.end(), r_files.begin(), r_files.end());
    write_curves(c, dir, "fig1", all,
                 gnuplot_stub(eta_files, "efficiency eta") + "pause -1\n" + gnuplot_stub(r_files, "squeezing r"), out);
    return 0;
}

int cmd_fig2(const RunConfig& c, std::ostream& out) {
    SearchOptions search = search_options(c, SinglePhotonEntangled{});
    Efficiency eta(c.eta.value_or(0.55));
    if (eta.regime() != Regime::kHigh) {
        throw ConfigError("fig2 needs --eta above 0.5");
    }
    auto eps_grid = linear_grid(c.eps_min, c.eps_max, c.eps_step);
    for (double e : eps_grid) (void)EstimatedEfficiency(e);
    std::vector<CurveFile> files;
    files.push_back({"fig2a_single_photon", "single photon", sweep_epsilon(SinglePhotonEntangled{}, eta, eps_grid, search)});
    for (double r : {0.4, 0.8}) {
        files.push_back({"fig2b_tmss_" + r_label(r), "two-mode squeezed r=" + fmt(r),
                         sweep_epsilon(TwoModeSqueezed{SqueezingParameter(r)}, eta, eps_grid, search)});
    }
    write_curves(c, c.output.empty() ? "fig2" : c.output, "fig2", files,
                 gnuplot_stub(files, "estimated efficiency epsilon"), out);
    return 0;
}

int cmd_threshold(const RunConfig& c, std::ostream& out) {
    StateModel model = make_model(c);
    SearchOptions search = search_options(c, model);
    if (!(c.tol > 0.0)) {
        throw ConfigError("--tol must be positive");
    }
    json j = {{"state", describe(model)}, {"tol", c.tol}};
    if (const auto* t = std::get_if<TwoModeSqueezed>(&model)) {
        j["r"] = t->r.value();
    }
    std::optional<ThresholdResult> res;
    try {
        res = threshold_efficiency(model, c.tol, search);
    } catch (const NoViolation& e) {
        j["threshold"] = nullptr;
        j["note"] = e.what();
    }
    if (res) {
        j["threshold"] = round_sig12(res->eta);
        j["lower"] = round_sig12(res->lower);
        j["upper"] = round_sig12(res->upper);
        json scan = json::array();
        for (const auto& [e, v] : res->scan) scan.push_back({round_sig12(e), round_sig12(v)});
        j["scan"] = scan;
    }
    if (c.format == "csv") {
        std::string row = j["state"].get<std::string>() + ",";
        row += res ? fmt(res->eta) + "," + fmt(res->lower) + "," + fmt(res->upper) : std::string(",,");
        write_text(c, c.output, "state,threshold,lower,upper\n" + row + "\n", out);
        return 0;
    }
    write_text(c, c.output, j.dump(2) + "\n", out);
    return 0;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
    if (!(c.k_sigma >= 0.0) || !std::isfinite(c.k_sigma)) {
        throw ConfigError("--k-sigma must be a non-negative number");
    }
    auto eps = estimated(c);
    SampledWitness sw;
    std::string state = "ingested";
    if (!c.ingest.empty()) {
        sw = witness_from_histograms(histograms_from_json(parse_json_file(c.ingest, "histogram file")), eps);
    } else {
        StateModel model = make_model(c);
        state = describe(model);
        Efficiency eta(c.eta.value_or(1.0));
        SampleSpec spec(c.shots, c.seed, eta);
        SearchOptions search = search_options(c, model);
        MeasurementSettings settings = fixed_settings(c);
        if (c.optimize) {
            settings = maximize_witness(model, eta, eps, search).best_settings;
        }
        sw = witness_from_samples(model, settings, spec, eps, search.jobs);
    }
    if (!c.dump_histograms.empty()) {
        write_text(c, c.dump_histograms, histograms_to_json(sw.histograms).dump(2) + "\n", out);
    }
    json j = to_json(sw, c.k_sigma);
    if (c.format == "csv") {
        write_text(c, c.output,
                   outcome_csv_header() + ",std_error,k_sigma,entangled_at_k_sigma,shots\n" +
                       outcome_csv_row(state, sw.outcome) + "," + fmt(sw.std_error) + "," + fmt(c.k_sigma) + "," +
                       (j["entangled_at_k_sigma"].get<bool>() ? "true" : "false") + "," +
                       std::to_string(sw.histograms[0].shots) + "\n",
                   out);
        return 0;
    }
    j["state"] = state;
    if (c.ingest.empty()) {
        j["seed"] = c.seed;
    }
    j["shots"] = sw.histograms[0].shots;
    write_text(c, c.output, j.dump(2) + "\n", out);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Phase-space entanglement witness under inefficient photon counting.\n"
                 "Efficiencies are probabilities in (0, 1]; displacements are complex amplitudes."};
    app.name("phasewitness");
    app.require_subcommand(1);
    app.get_formatter()->column_width(44);

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate the witness at given or optimized settings");
    add_state_options(evaluate, c);
    evaluate->add_option("--eta", c.eta, "Detector efficiency eta in (0, 1] (default 1)");
    evaluate->add_option("--epsilon", c.epsilon, "Estimated efficiency in (0.5, 1] used in the witness coefficients (default none)");
    add_settings_options(evaluate, c);
    add_search_options(evaluate, c);
    add_output_options(evaluate, c, "Result file (default: stdout)");

    auto* fig1 = app.add_subcommand("fig1", "Maximized witness against efficiency and against squeezing");
    fig1->add_option("--eta-min", c.eta_min, "Efficiency grid start (default 0.3)");
    fig1->add_option("--eta-max", c.eta_max, "Efficiency grid end (default 1)");
    fig1->add_option("--eta-step", c.eta_step, "Efficiency grid step (default 0.01)");
    fig1->add_option("--r-min", c.r_min, "Squeezing grid start")->capture_default_str();
    fig1->add_option("--r-max", c.r_max, "Squeezing grid end")->capture_default_str();
    fig1->add_option("--r-step", c.r_step, "Squeezing grid step")->capture_default_str();
    add_search_options(fig1, c);
    add_output_options(fig1, c, "Output directory (default: fig1)");

    auto* fig2 = app.add_subcommand("fig2", "Maximized witness against the estimated efficiency at fixed eta");
    fig2->add_option("--eta", c.eta, "True detector efficiency, above 0.5 (default 0.55)");
    fig2->add_option("--eps-min", c.eps_min, "Estimated-efficiency grid start")->capture_default_str();
    fig2->add_option("--eps-max", c.eps_max, "Estimated-efficiency grid end")->capture_default_str();
    fig2->add_option("--eps-step", c.eps_step, "Estimated-efficiency grid step")->capture_default_str();
    add_search_options(fig2, c);
    add_output_options(fig2, c, "Output directory (default: fig2)");

    auto* threshold = app.add_subcommand("threshold", "Lowest efficiency at which the optimized witness exceeds 2");
    add_state_options(threshold, c);
    threshold->add_option("--tol", c.tol, "Width of the final efficiency bracket (efficiency units)")->capture_default_str();
    add_search_options(threshold, c);
    add_output_options(threshold, c, "Result file (default: stdout)");

    auto* sample = app.add_subcommand("sample", "Monte Carlo photon-counting estimate of the witness");
    add_state_options(sample, c);
    sample->add_option("--eta", c.eta, "Detector efficiency eta in (0, 1] (default 1)");
    sample->add_option("--epsilon", c.epsilon, "Estimated efficiency in (0.5, 1] used in the witness coefficients (default none)");
    add_settings_options(sample, c);
    add_search_options(sample, c);
    sample->add_option("--shots", c.shots, "Shots per Wigner value, 6 values per witness (count)")->capture_default_str();
    sample->add_option("--seed", c.seed, "64-bit RNG seed")->capture_default_str();
    sample->add_option("--k-sigma", c.k_sigma, "Report entanglement when |W| - k sigma > 2")->capture_default_str();
    sample->add_option("--ingest", c.ingest, "Histogram JSON to analyze instead of simulating (default none)");
    sample->add_option("--dump-histograms", c.dump_histograms, "Write the six count histograms to this file (default none)");
    add_output_options(sample, c, "Result file (default: stdout)");

    std::vector<std::string> argv = args;
    try {
        // Expand --config before parsing so flags and file share validation.
        if (!args.empty()) {
            const CLI::App* sub = nullptr;
            for (const CLI::App* s : app.get_subcommands({})) {
                if (s->get_name() == args[0]) sub = s;
            }
            std::string config_path;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--config" && i + 1 < args.size()) {
                    config_path = args[i + 1];
                } else if (args[i].rfind("--config=", 0) == 0) {
                    config_path = args[i].substr(9);
                }
            }
            if (sub != nullptr && !config_path.empty()) {
                auto tokens = expand_config(parse_json_file(config_path, "config file"), app, *sub, args);
                argv.insert(argv.begin() + 1, tokens.begin(), tokens.end());
            }
        }
        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (evaluate->parsed()) return cmd_evaluate(c, out);
        if (fig1->parsed()) return cmd_fig1(c, out);
        if (fig2->parsed()) return cmd_fig2(c, out);
        if (threshold->parsed()) return cmd_threshold(c, out);
        if (sample->parsed()) return cmd_sample(c, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace phasewitness::cli
