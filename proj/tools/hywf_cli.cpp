// Copyright 2026 The hywf Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Command-line driver: run, md, grid, validate, catalog show.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hywf/hywf.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitExecution = 4;

struct Failure {
    int exit_code;
    std::string message;
};

int exit_code_for(hywf_status s) {
    switch (s) {
    case HYWF_OK:
        return kExitOk;
    case HYWF_ERR_IO:
    case HYWF_ERR_PARSE:
        return kExitParse;
    case HYWF_ERR_VALIDATION:
    case HYWF_ERR_INVALID_ARGUMENT:
    case HYWF_ERR_MISSING_PARAMETER:
        return kExitValidation;
    default:
        return kExitExecution;
    }
}

void check(hywf_status s) {
    if (s != HYWF_OK) {
        throw Failure{exit_code_for(s),
                      std::string(hywf_status_name(s)) + ": " + hywf_last_error()};
    }
}

struct CString {
    char *p = nullptr;
    ~CString() { hywf_string_free(p); }
    [[nodiscard]] std::string str() const { return p != nullptr ? p : ""; }
};

template <typename T, void (*Free)(T *)> struct Handle {
    T *p = nullptr;
    Handle() = default;
    Handle(const Handle &) = delete;
    Handle &operator=(const Handle &) = delete;
    ~Handle() { Free(p); }
};

using Workflow = Handle<hywf_workflow, hywf_workflow_free>;
using Catalog = Handle<hywf_catalog, hywf_catalog_free>;
using Engine = Handle<hywf_engine, hywf_engine_free>;

std::uint64_t fnv1a(const std::string &bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw Failure{kExitParse, "io: cannot open '" + p.string() + "'"};
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Failure{kExitExecution, "io: cannot write '" + p.string() + "'"};
    }
    out << text;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Common {
    std::string out = "hywf-out";
    std::optional<std::uint64_t> seed;
    std::uint64_t resolved_seed = 0;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv("HYWF_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
            throw Failure{kExitParse, "HYWF_SEED is not an unsigned integer"};
        }
    }
    return 0;
}

void write_manifest(const Common &c, const std::string &command, const json &config,
                    const std::vector<std::string> &inputs) {
    json files = json::object();
    for (const auto &p : inputs) {
        if (p.empty()) {
            continue;
        }
        const auto bytes = read_file(p);
        files[p] = {{"fnv1a64", hex64(fnv1a(bytes))}, {"bytes", bytes.size()}};
    }
    const json manifest = {{"command", command},
                           {"config", config},
                           {"seed", c.resolved_seed},
                           {"inputs", files},
                           {"library_version", hywf_version()}};
    write_file(fs::path(c.out) / "manifest.json", manifest.dump(2) + "\n");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

hywf_vqe_settings load_settings(const std::string &path) {
    hywf_vqe_settings s;
    hywf_vqe_settings_default(&s);
    if (path.empty()) {
        return s;
    }
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw Failure{kExitParse, "parse: " + path + ": " + e.what()};
    }
    if (j.is_array()) {
        if (j.size() != 1) {
            throw Failure{kExitValidation, "expected a single settings object in " + path};
        }
        j = j[0];
    }
    auto get = [&](const char *k, auto &field) {
        if (j.contains(k)) {
            field = j.at(k).get<std::decay_t<decltype(field)>>();
        }
    };
    try {
        get("ansatz_layers", s.ansatz_layers);
        get("learning_rate", s.learning_rate);
        get("max_iters", s.max_iters);
        get("shots", s.shots);
        get("seed", s.seed);
        get("restarts", s.restarts);
        get("readout_flip", s.readout_flip);
        if (j.contains("entangler")) {
            s.entangler = j.at("entangler") == "ring" ? HYWF_RING : HYWF_LINEAR_CHAIN;
        }
        if (j.contains("optimizer")) {
            const auto o = j.at("optimizer").get<std::string>();
            s.optimizer = o == "gradient-descent" ? HYWF_GRADIENT_DESCENT : HYWF_SPSA;
        }
    } catch (const json::exception &e) {
        throw Failure{kExitValidation, "settings " + path + ": " + e.what()};
    }
    return s;
}

// ---- run --------------------------------------------------------------------

struct RunOptions {
    std::string workflow;
    std::string catalog;
    std::string trajectory;
    std::string segments;
    std::optional<double> intensity_threshold;
    double score_floor = 0.0;
    bool concurrent = false;
};

int cmd_run(const Common &c, const RunOptions &o) {
    Workflow wf;
    check(hywf_workflow_load(o.workflow.c_str(), &wf.p));
    Catalog cat;
    check(hywf_catalog_load(o.catalog.c_str(), &cat.p));
    if (o.intensity_threshold) {
        check(hywf_workflow_set_intensity_threshold(wf.p, *o.intensity_threshold));
    }
    int hybrid = 0;
    check(hywf_workflow_is_hybrid(wf.p, &hybrid));
    Workflow transformed;
    const hywf_workflow *target = wf.p;
    if (hybrid == 0) {
        check(hywf_workflow_to_hybrid(wf.p, &transformed.p));
        target = transformed.p;
    } else {
        int ok = 0;
        CString report;
        check(hywf_workflow_validate(wf.p, &ok, &report.p));
        if (ok == 0) {
            throw Failure{kExitValidation, "validation: " + report.str()};
        }
    }

    fs::create_directories(c.out);
    CString hybrid_json;
    check(hywf_workflow_to_json(target, &hybrid_json.p));
    write_file(fs::path(c.out) / "hybrid_workflow.json", hybrid_json.str() + "\n");

    json run_context = {{"base_dir", fs::absolute(o.workflow).parent_path().string()},
                        {"out_dir", c.out}};
    if (!o.trajectory.empty()) {
        run_context["trajectory"] = fs::absolute(o.trajectory).string();
    }
    if (!o.segments.empty()) {
        run_context["segments"] = o.segments;
    }
    const auto log_path = (fs::path(c.out) / "execution_log.jsonl").string();
    fs::remove(log_path);
    const auto ctx_text = run_context.dump();
    hywf_engine_config cfg;
    hywf_engine_config_default(&cfg);
    cfg.seed = c.resolved_seed;
    cfg.score_floor = o.score_floor;
    cfg.concurrent = o.concurrent ? 1 : 0;
    cfg.log_path = log_path.c_str();
    cfg.run_context_json = ctx_text.c_str();
    Engine engine;
    check(hywf_engine_create(cat.p, &cfg, &engine.p));
    CString result_text;
    check(hywf_engine_run(engine.p, target, &result_text.p));
    const auto result = json::parse(result_text.str());

    const auto nodes_dir = fs::path(c.out) / "nodes";
    fs::create_directories(nodes_dir);
    int quantum_decisions = 0;
    for (const auto &rec : result.at("records")) {
        write_file(nodes_dir / (rec.at("node").get<std::string>() + ".json"),
                   rec.at("payload").dump(2) + "\n");
        if (rec.contains("decision")) {
            const auto &d = rec.at("decision");
            std::cout << "decision " << rec.at("node").get<std::string>() << ": "
                      << d.at("chosen").get<std::string>() << " ("
                      << d.at("reason").get<std::string>() << ")\n";
            quantum_decisions += d.at("chosen") == "quantum" ? 1 : 0;
        }
    }
    std::cout << "executed " << result.at("records").size() << " nodes, " << quantum_decisions
              << " quantum decisions\n";

    json config = {{"workflow", o.workflow},
                   {"catalog", o.catalog},
                   {"trajectory", o.trajectory},
                   {"segments", o.segments},
                   {"score_floor", o.score_floor},
                   {"concurrent", o.concurrent},
                   {"out", c.out}};
    if (o.intensity_threshold) {
        config["intensity_threshold"] = *o.intensity_threshold;
    }
    write_manifest(c, "run", config, {o.workflow, o.catalog, o.trajectory});
    if (!result.at("ok").get<bool>()) {
        throw Failure{kExitExecution, "execution: " + result.at("error").get<std::string>()};
    }
    return kExitOk;
}

// ---- md ---------------------------------------------------------------------

struct MdOptions {
    std::string trajectory;
    std::string segments;
    std::string mode = "classic";
    std::uint64_t shots = 0;
    std::string settings;
};

int cmd_md(const Common &c, const MdOptions &o) {
    if (o.mode != "classic" && o.mode != "quantum" && o.mode != "both") {
        throw Failure{kExitValidation, "--mode must be classic, quantum or both"};
    }
    fs::create_directories(c.out);
    const auto cv_path = fs::path(c.out) / "cv.csv";
    if (o.mode == "classic") {
        CString csv;
        check(hywf_cv_series(o.trajectory.c_str(), o.segments.c_str(), &csv.p));
        write_file(cv_path, csv.str());
    } else {
        auto settings = load_settings(o.settings);
        CString rows_text;
        check(hywf_md_pipeline(o.trajectory.c_str(), o.segments.c_str(), o.mode == "both" ? 1 : 0,
                               1, o.shots, c.resolved_seed, &settings, &rows_text.p));
        const auto rows = json::parse(rows_text.str());
        std::string cv = "frame,time,lebm\n";
        std::string cmp =
            "frame,time,lebm_classic,lebm_vqe,abs_err,rel_err,swap_max_abs_err,swap_max_rel_err\n";
        double worst_rel = 0.0;
        double worst_swap = 0.0;
        for (const auto &r : rows) {
            const auto frame = std::to_string(r.at("frame").get<long>());
            char t[32];
            std::snprintf(t, sizeof t, "%.6f", r.at("time").get<double>());
            const double q = r.at("lebm_vqe").get<double>();
            cv += frame + "," + t + "," + fmt(q) + "\n";
            worst_swap = std::max(worst_swap, r.at("swap_max_rel_err").get<double>());
            if (o.mode == "both") {
                const double cl = r.at("lebm_classic").get<double>();
                const double abs_err = std::abs(cl - q);
                const double rel = cl != 0.0 ? abs_err / std::abs(cl) : abs_err;
                worst_rel = std::max(worst_rel, rel);
                cmp += frame + "," + t + "," + fmt(cl) + "," + fmt(q) + "," + fmt(abs_err) + "," +
                       fmt(rel) + "," + fmt(r.at("swap_max_abs_err").get<double>()) + "," +
                       fmt(r.at("swap_max_rel_err").get<double>()) + "\n";
            }
        }
        write_file(cv_path, cv);
        if (o.mode == "both") {
            write_file(fs::path(c.out) / "comparison.csv", cmp);
            std::cout << "max LEBM relative deviation " << fmt(worst_rel) << "\n";
        }
        std::cout << "max SWAP distance relative error " << fmt(worst_swap) << "\n";
    }
    write_manifest(c, "md",
                   {{"trajectory", o.trajectory},
                    {"segments", o.segments},
                    {"mode", o.mode},
                    {"shots", o.shots},
                    {"settings", o.settings},
                    {"out", c.out}},
                   {o.trajectory, o.settings});
    return kExitOk;
}

// ---- grid -------------------------------------------------------------------

struct GridOptions {
    std::string settings;
    std::string matrices;
    std::string generate; ///< k=<segment length>,count=<n>
};

json generate_matrices(const std::string &spec, std::uint64_t seed) {
    std::size_t k = 0;
    std::size_t count = 0;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) {
            throw Failure{kExitParse, "--generate expects k=<n>,count=<n>"};
        }
        const auto key = part.substr(0, eq);
        const auto value = std::stoull(part.substr(eq + 1));
        if (key == "k") {
            k = value;
        } else if (key == "count") {
            count = value;
        } else {
            throw Failure{kExitParse, "--generate: unknown key '" + key + "'"};
        }
    }
    if (k == 0 || count == 0) {
        throw Failure{kExitValidation, "--generate needs k >= 1 and count >= 1"};
    }
    json out = json::array();
    const std::size_t dim = 2 * k;
    std::vector<double> buf(dim * dim);
    for (std::size_t i = 0; i < count; ++i) {
        check(hywf_random_bipartite(k, seed + i, buf.data()));
        json m = json::array();
        for (std::size_t r = 0; r < dim; ++r) {
            m.push_back(std::vector<double>(buf.begin() + static_cast<long>(r * dim),
                                            buf.begin() + static_cast<long>((r + 1) * dim)));
        }
        out.push_back(std::move(m));
    }
    return out;
}

int cmd_grid(const Common &c, const GridOptions &o) {
    json settings;
    try {
        settings = json::parse(read_file(o.settings));
    } catch (const json::parse_error &e) {
        throw Failure{kExitParse, "parse: " + o.settings + ": " + e.what()};
    }
    if (!settings.is_array() || settings.empty()) {
        throw Failure{kExitValidation, "settings file must hold a nonempty array"};
    }
    json matrices;
    if (!o.matrices.empty()) {
        try {
            matrices = json::parse(read_file(o.matrices));
        } catch (const json::parse_error &e) {
            throw Failure{kExitParse, "parse: " + o.matrices + ": " + e.what()};
        }
    } else if (!o.generate.empty()) {
        matrices = generate_matrices(o.generate, c.resolved_seed);
    } else {
        throw Failure{kExitValidation, "give --matrices or --generate"};
    }
    CString result_text;
    check(hywf_grid_search(matrices.dump().c_str(), settings.dump().c_str(), &result_text.p));
    const auto result = json::parse(result_text.str());

    fs::create_directories(c.out);
    std::string summary = "setting,label,mse\n";
    const auto &reports = result.at("reports");
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto &r = reports[i];
        summary += std::to_string(i) + ",\"" + r.at("label").get<std::string>() + "\"," +
                   fmt(r.at("mse").get<double>()) + "\n";
        std::string csv = "matrix_id,lambda_classic,lambda_vqe,abs_err\n";
        std::size_t m = 0;
        for (const auto &e : r.at("entries")) {
            const double cl = e.at("lambda_classic").get<double>();
            const double q = e.at("lambda_vqe").get<double>();
            csv += std::to_string(m++) + "," + fmt(cl) + "," + fmt(q) + "," +
                   fmt(std::abs(cl - q)) + "\n";
        }
        write_file(fs::path(c.out) / ("report_" + std::to_string(i) + ".csv"), csv);
    }
    write_file(fs::path(c.out) / "grid.csv", summary);
    write_file(fs::path(c.out) / "best.json",
               json{{"best_index", result.at("best_index")}, {"best", result.at("best")}}.dump(2) +
                   "\n");

    // Cost trace of the winning setting on the first matrix.
    const auto &first = matrices.at(0);
    const std::size_t dim = first.size();
    std::vector<double> flat;
    for (const auto &row : first) {
        for (const auto &v : row) {
            flat.push_back(v.get<double>());
        }
    }
    auto best = settings.at(result.at("best_index").get<std::size_t>());
    const auto best_path = fs::path(c.out) / "best_settings.json";
    write_file(best_path, best.dump() + "\n");
    auto pi = load_settings(best_path.string());
    hywf_vqe_result vr;
    CString trace;
    check(hywf_vqe_lebm_trace(flat.data(), dim, &pi, &vr, &trace.p));
    write_file(fs::path(c.out) / "trace_best.csv", trace.str());

    std::cout << "best setting " << result.at("best_index").get<std::size_t>() << ": "
              << reports.at(result.at("best_index").get<std::size_t>()).at("label").get<std::string>()
              << "\n";
    write_manifest(c, "grid",
                   {{"settings", o.settings},
                    {"matrices", o.matrices},
                    {"generate", o.generate},
                    {"out", c.out}},
                   {o.settings, o.matrices});
    return kExitOk;
}

// ---- validate / catalog show ------------------------------------------------

int cmd_validate(const Common &c, const std::string &workflow,
                 const std::optional<double> &threshold) {
    Workflow wf;
    check(hywf_workflow_load(workflow.c_str(), &wf.p));
    if (threshold) {
        check(hywf_workflow_set_intensity_threshold(wf.p, *threshold));
    }
    int ok = 0;
    CString report;
    check(hywf_workflow_validate(wf.p, &ok, &report.p));
    std::cout << json::parse(report.str()).dump(2) << "\n";
    fs::create_directories(c.out);
    json config = {{"workflow", workflow}, {"out", c.out}};
    if (threshold) {
        config["intensity_threshold"] = *threshold;
    }
    write_manifest(c, "validate", config, {workflow});
    return ok != 0 ? kExitOk : kExitValidation;
}

int cmd_catalog_show(const Common &c, const std::string &catalog) {
    Catalog cat;
    check(hywf_catalog_load(catalog.c_str(), &cat.p));
    CString text;
    check(hywf_catalog_to_json(cat.p, &text.p));
    std::cout << text.str() << "\n";
    fs::create_directories(c.out);
    write_manifest(c, "catalog show", {{"catalog", catalog}, {"out", c.out}}, {catalog});
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"hywf: hybrid classic/quantum workflow toolkit"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--out", common.out, "Output directory")->capture_default_str();
        sub->add_option("--seed", common.seed, "Random seed (falls back to HYWF_SEED)");
    };

    RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "Validate, hybridize and execute a workflow");
    run_cmd->add_option("--workflow", run.workflow, "Workflow JSON")->required();
    run_cmd->add_option("--catalog", run.catalog, "Hardware catalog JSON")->required();
    run_cmd->add_option("--trajectory", run.trajectory, "Trajectory for MD actions");
    run_cmd->add_option("--segments", run.segments, "Segments, e.g. I=1,2;J=3,4");
    run_cmd->add_option("--intensity-threshold", run.intensity_threshold,
                        "Quantum-candidate compute-intensity threshold");
    run_cmd->add_option("--score-floor", run.score_floor, "Minimum quantum score")
        ->capture_default_str();
    run_cmd->add_flag("--concurrent", run.concurrent, "Run ready nodes in parallel");
    add_common(run_cmd);

    MdOptions md;
    auto *md_cmd = app.add_subcommand("md", "MD collective-variable pipeline");
    md_cmd->add_option("--trajectory", md.trajectory, "Trajectory file")->required();
    md_cmd->add_option("--segments", md.segments, "Segments, e.g. I=1,2;J=3,4")->required();
    md_cmd->add_option("--mode", md.mode, "classic, quantum or both")->capture_default_str();
    md_cmd->add_option("--shots", md.shots, "SWAP-test shots, 0 = exact")->capture_default_str();
    md_cmd->add_option("--settings", md.settings, "VQE settings JSON object");
    add_common(md_cmd);

    GridOptions grid;
    auto *grid_cmd = app.add_subcommand("grid", "VQE hyperparameter grid search");
    grid_cmd->add_option("--settings", grid.settings, "JSON array of settings")->required();
    grid_cmd->add_option("--matrices", grid.matrices, "JSON array of matrices");
    grid_cmd->add_option("--generate", grid.generate,
                         "Random bipartite matrices, k=<atoms per segment>,count=<n>");
    add_common(grid_cmd);

    std::string validate_wf;
    std::optional<double> validate_threshold;
    auto *validate_cmd = app.add_subcommand("validate", "Validate a workflow file");
    validate_cmd->add_option("--workflow", validate_wf, "Workflow JSON")->required();
    validate_cmd->add_option("--intensity-threshold", validate_threshold,
                             "Quantum-candidate compute-intensity threshold");
    add_common(validate_cmd);

    std::string catalog_path;
    auto *catalog_cmd = app.add_subcommand("catalog", "Hardware catalog commands");
    catalog_cmd->require_subcommand(1);
    auto *show_cmd = catalog_cmd->add_subcommand("show", "Print a hardware catalog");
    show_cmd->add_option("--catalog", catalog_path, "Hardware catalog JSON")->required();
    add_common(show_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        common.resolved_seed = resolve_seed(common.seed);
        if (run_cmd->parsed()) {
            return cmd_run(common, run);
        }
        if (md_cmd->parsed()) {
            return cmd_md(common, md);
        }
        if (grid_cmd->parsed()) {
            return cmd_grid(common, grid);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(common, validate_wf, validate_threshold);
        }
        if (show_cmd->parsed()) {
            return cmd_catalog_show(common, catalog_path);
        }
    } catch (const Failure &f) {
        std::cerr << "hywf: " << f.message << "\n";
        return f.exit_code;
    } catch (const std::exception &e) {
        std::cerr << "hywf: " << e.what() << "\n";
        return kExitExecution;
    }
    return kExitOk;
}
