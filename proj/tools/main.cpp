// borell-lab: scenario-driven front end over the C API.  All numeric work
// happens behind borell_lab.h; this file only parses configs, resolves paths,
// and formats CSV.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "borell_lab.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(bl_status st) {
    if (st != BL_OK) throw CliError(bl_last_error());
}

using GridPtr = std::unique_ptr<bl_grid, decltype(&bl_grid_free)>;
using BodyPtr = std::unique_ptr<bl_body, decltype(&bl_body_free)>;
using MeasurePtr = std::unique_ptr<bl_measure, decltype(&bl_measure_free)>;
using TransportPtr = std::unique_ptr<bl_transport, decltype(&bl_transport_free)>;

GridPtr load_grid(const std::string& path) {
    bl_grid* g = nullptr;
    check(bl_grid_load(path.c_str(), &g));
    return GridPtr(g, &bl_grid_free);
}

BodyPtr load_body(const std::string& path, std::int64_t planar_m) {
    bl_body* b = nullptr;
    check(bl_body_load(path.c_str(), planar_m, &b));
    return BodyPtr(b, &bl_body_free);
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// One CSV report row; witness text is kept comma-free.
struct Row {
    std::string check;
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    std::string witness;
    std::int64_t samples = 0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    bool satisfied = true;
};

Row from_report(const std::string& check_name, const bl_report& r, std::uint64_t seed) {
    Row row;
    row.check = check_name;
    row.lhs = r.lhs;
    row.rhs = r.rhs;
    row.margin = r.margin;
    row.witness = r.witness;
    row.samples = r.samples;
    row.tolerance = r.tolerance;
    row.seed = seed;
    row.satisfied = r.satisfied != 0;
    return row;
}

class ReportSink {
public:
    void add(Row row) {
        std::replace(row.witness.begin(), row.witness.end(), ',', ';');
        rows_.push_back(std::move(row));
    }

    bool all_satisfied() const {
        for (const Row& r : rows_)
            if (!r.satisfied) return false;
        return true;
    }
    double min_margin_since(std::size_t start) const {
        double m = HUGE_VAL;
        for (std::size_t i = start; i < rows_.size(); ++i) m = std::min(m, rows_[i].margin);
        return m;
    }
    bool satisfied_since(std::size_t start) const {
        for (std::size_t i = start; i < rows_.size(); ++i)
            if (!rows_[i].satisfied) return false;
        return true;
    }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }

    std::string to_csv() const {
        std::string out = "check,lhs,rhs,margin,witness,samples,tolerance,seed\n";
        for (const Row& r : rows_) {
            out += r.check + ',' + num(r.lhs) + ',' + num(r.rhs) + ',' + num(r.margin) + ',' +
                   r.witness + ',' + std::to_string(r.samples) + ',' + num(r.tolerance) + ',' +
                   std::to_string(r.seed) + '\n';
        }
        return out;
    }

private:
    std::vector<Row> rows_;
};

double parse_ext_arg(const std::string& s) {
    std::string t = s;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "inf" || t == "+inf") return HUGE_VAL;
    if (t == "-inf") return -HUGE_VAL;
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw CliError("bad extended real: '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw CliError("bad extended real: '" + s + "'");
    }
}

json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(path + ": cannot open");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t at = e.byte > 0 ? std::min(text.size(), static_cast<std::size_t>(e.byte - 1))
                                    : std::size_t{0};
        std::size_t line = 1 + static_cast<std::size_t>(
                                   std::count(text.begin(), text.begin() + at, '\n'));
        throw CliError(path + ":" + std::to_string(line) + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(path + ": cannot open for writing");
    out << text;
}

// ---- shared check drivers (used by both direct subcommands and scenarios) ----

void run_means(ReportSink& sink, double s, double lambda, double a, double b) {
    double v = 0.0;
    check(bl_mean(s, lambda, a, b, &v));
    Row row;
    row.check = "means";
    row.lhs = row.rhs = v;
    row.witness = "value=" + num(v);
    row.samples = 1;
    sink.add(row);
}

void run_holder(ReportSink& sink, double alpha, double beta, double gamma, double lambda, double a,
                double b, double c, double d, double tolerance) {
    bl_report r;
    check(bl_holder_check(alpha, beta, gamma, lambda, a, b, c, d, tolerance, &r));
    sink.add(from_report("holder", r, 0));
}

void run_borell(ReportSink& sink, const std::string& f_path, const std::string& g_path,
                const std::string& h_path, const std::string& phi, const std::string& Phi,
                std::int64_t pairs, std::int64_t scales, std::uint64_t seed, double tol_hyp,
                double tol_con) {
    GridPtr f = load_grid(f_path), g = load_grid(g_path), h = load_grid(h_path);
    bl_report r;
    check(bl_check_hypothesis(f.get(), g.get(), h.get(), phi.c_str(), Phi.c_str(), pairs, scales,
                              seed, tol_hyp, &r));
    sink.add(from_report("borell-hypothesis", r, seed));
    check(bl_check_conclusion(f.get(), g.get(), h.get(), Phi.c_str(), tol_con, &r));
    sink.add(from_report("borell-conclusion", r, seed));
}

void run_bbl(ReportSink& sink, const std::string& f_path, const std::string& g_path, double p,
             double gamma, double lambda, double tolerance) {
    GridPtr f = load_grid(f_path), g = load_grid(g_path);
    bl_report r;
    if (p == 1.0) {
        check(bl_check_bbl(f.get(), g.get(), gamma, lambda, tolerance, &r));
        sink.add(from_report("bbl", r, 0));
    } else {
        check(bl_check_nonlinear(f.get(), g.get(), p, gamma, lambda, tolerance, &r));
        sink.add(from_report("nonlinear", r, 0));
    }
}

void run_transport(ReportSink& sink, const std::string& f_path, const std::string& g_path,
                   const std::string& out_csv, const std::string& phi, const std::string& Phi,
                   double tolerance) {
    GridPtr f = load_grid(f_path), g = load_grid(g_path);
    bl_transport* traw = nullptr;
    check(bl_transport_compute(f.get(), g.get(), &traw));
    TransportPtr t(traw, &bl_transport_free);

    double residual = 0.0;
    check(bl_transport_residual(f.get(), g.get(), t.get(), &residual));
    std::size_t n = 0;
    check(bl_transport_size(t.get(), &n));

    Row row;
    row.check = "transport";
    row.lhs = residual;
    row.rhs = 0.0;
    row.margin = -residual;  // satisfied iff residual <= tolerance
    row.witness = "residual=" + num(residual);
    row.samples = static_cast<std::int64_t>(n);
    row.tolerance = tolerance;
    row.satisfied = residual <= tolerance;
    sink.add(row);

    if (!out_csv.empty()) {
        std::string text = "x,T,Tprime\n";
        for (std::size_t i = 0; i < n; ++i) {
            double x, tx, dtx;
            check(bl_transport_row(t.get(), i, &x, &tx, &dtx));
            text += num(x) + ',' + num(tx) + ',' + num(dtx) + '\n';
        }
        write_text_file(out_csv, text);
    }
    if (!phi.empty() || !Phi.empty()) {
        if (phi.empty() || Phi.empty())
            throw CliError("transport certify needs both --phi and --Phi");
        bl_report r;
        check(bl_transport_certify(f.get(), g.get(), phi.c_str(), Phi.c_str(), tolerance, &r));
        sink.add(from_report("transport-certify", r, 0));
    }
}

void run_logbm(ReportSink& sink, const std::string& k_path, const std::string& l_path,
               double lambda, std::int64_t m, double tolerance) {
    BodyPtr k = load_body(k_path, m), l = load_body(l_path, m);
    bl_report r;
    check(bl_check_lp_planar(k.get(), l.get(), lambda, 0.0, m, tolerance, &r));
    sink.add(from_report("logbm", r, 0));
}

void run_lp_bm(ReportSink& sink, const std::string& density_path, double alpha,
               double alpha_tolerance, bool symmetric, const std::string& k_path,
               const std::string& l_path, double lambda, double p, bool pipeline,
               std::int64_t thresholds, std::int64_t planar_m, double tolerance) {
    GridPtr density = load_grid(density_path);
    bl_measure* mraw = nullptr;
    check(bl_measure_create(density.get(), alpha, symmetric ? 1 : 0, alpha_tolerance, &mraw));
    MeasurePtr mu(mraw, &bl_measure_free);
    BodyPtr k = load_body(k_path, planar_m), l = load_body(l_path, planar_m);
    bl_report r;
    check(bl_check_lp_bm(mu.get(), k.get(), l.get(), lambda, p, tolerance, &r));
    sink.add(from_report("lpbm", r, 0));
    if (pipeline) {
        check(bl_check_pipeline(mu.get(), k.get(), l.get(), lambda, p, thresholds, tolerance, &r));
        sink.add(from_report("pipeline", r, 0));
    }
}

void run_pipeline_only(ReportSink& sink, const std::string& density_path, double alpha,
                       double alpha_tolerance, bool symmetric, const std::string& k_path,
                       const std::string& l_path, double lambda, double p,
                       std::int64_t thresholds, std::int64_t planar_m, double tolerance) {
    GridPtr density = load_grid(density_path);
    bl_measure* mraw = nullptr;
    check(bl_measure_create(density.get(), alpha, symmetric ? 1 : 0, alpha_tolerance, &mraw));
    MeasurePtr mu(mraw, &bl_measure_free);
    BodyPtr k = load_body(k_path, planar_m), l = load_body(l_path, planar_m);
    bl_report r;
    check(bl_check_pipeline(mu.get(), k.get(), l.get(), lambda, p, thresholds, tolerance, &r));
    sink.add(from_report("pipeline", r, 0));
}

void run_inclusion(ReportSink& sink, const std::string& k_path, const std::string& l_path,
                   double lambda, double p, std::int64_t points, std::uint64_t seed,
                   std::int64_t planar_m) {
    BodyPtr k = load_body(k_path, planar_m), l = load_body(l_path, planar_m);
    bl_report r;
    check(bl_check_inclusion(k.get(), l.get(), lambda, p, points, seed, &r));
    sink.add(from_report("inclusion", r, seed));
}

void run_sweep(ReportSink& sink, std::int64_t trials, std::uint64_t seed, double p, double lambda,
               std::int64_t m) {
    if (trials < 1) throw CliError("sweep: trials must be >= 1");
    std::vector<bl_report> rows(static_cast<std::size_t>(trials));
    check(bl_sweep_planar(trials, seed, p, lambda, m, rows.data()));
    for (const bl_report& r : rows) sink.add(from_report("sweep", r, seed));
}

// ---- scenario files ----

// Parameter lookup with scenario-level diagnostics.  Extended reals may be
// JSON numbers or the strings "inf" / "-inf".
class Params {
public:
    Params(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {}

    bool has(const std::string& key) const { return j_.contains(key); }

    double ext(const std::string& key) const {
        const json& v = at(key);
        if (v.is_string()) return parse_ext_arg(v.get<std::string>());
        if (v.is_number()) return v.get<double>();
        throw CliError(scope_ + ": parameter '" + key + "' must be a number or inf string");
    }
    double ext_or(const std::string& key, double fallback) const {
        return has(key) ? ext(key) : fallback;
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_number_integer()) throw CliError(scope_ + ": parameter '" + key + "' must be an integer");
        return v.get<std::int64_t>();
    }
    std::uint64_t seed(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        return at(key).get<std::uint64_t>();
    }
    bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_boolean()) throw CliError(scope_ + ": parameter '" + key + "' must be a boolean");
        return v.get<bool>();
    }
    std::string str(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_string()) throw CliError(scope_ + ": parameter '" + key + "' must be a string");
        return v.get<std::string>();
    }

private:
    const json& at(const std::string& key) const {
        if (!j_.contains(key)) throw CliError(scope_ + ": missing parameter '" + key + "'");
        return j_[key];
    }
    const json& j_;
    std::string scope_;
};

struct ScenarioOutcome {
    std::string name;
    bool ok = false;         // parsed and executed without input errors
    bool satisfied = false;  // all rows satisfied
    double min_margin = std::nan("");
    double runtime_s = 0.0;
};

struct Defaults {
    double tolerance = -1.0;  // <0: per-check default
    std::uint64_t seed = 1;
};

double tol_or(const json& scenario, const Defaults& defaults, double check_default) {
    if (scenario.contains("tolerance")) return scenario["tolerance"].get<double>();
    if (defaults.tolerance >= 0.0) return defaults.tolerance;
    return check_default;
}

// Executes one scenario, appending its rows to the sink.  Input paths resolve
// relative to the scenario file.
ScenarioOutcome run_scenario_file(const std::string& path, ReportSink& sink,
                                  const Defaults& defaults) {
    namespace fs = std::filesystem;
    ScenarioOutcome outcome;
    outcome.name = fs::path(path).stem().string();
    const std::size_t first_row = sink.size();
    const auto started = std::chrono::steady_clock::now();

    try {
        json scenario = parse_json_file(path);
        if (!scenario.is_object()) throw CliError(path + ": scenario must be a JSON object");
        if (scenario.contains("name")) outcome.name = scenario["name"].get<std::string>();
        if (!scenario.contains("check")) throw CliError(path + ": missing 'check'");
        const std::string check_name = scenario["check"].get<std::string>();

        json inputs_json = scenario.value("inputs", json::object());
        json params_json = scenario.value("parameters", json::object());
        Params inputs(inputs_json, outcome.name + " inputs");
        Params params(params_json, outcome.name);

        auto input_path = [&](const std::string& key) {
            std::string rel = inputs.str(key);
            fs::path p(rel);
            if (p.is_relative()) p = fs::path(path).parent_path() / p;
            return p.string();
        };
        std::uint64_t seed = params.seed("seed", defaults.seed);

        if (check_name == "means") {
            run_means(sink, params.ext("s"), params.ext("lambda"), params.ext("a"),
                      params.ext("b"));
        } else if (check_name == "holder") {
            run_holder(sink, params.ext("alpha"), params.ext("beta"), params.ext("gamma"),
                       params.ext("lambda"), params.ext("a"), params.ext("b"), params.ext("c"),
                       params.ext("d"), tol_or(scenario, defaults, 1e-10));
        } else if (check_name == "borell") {
            run_borell(sink, input_path("f"), input_path("g"), input_path("h"), params.str("phi"),
                       params.str("Phi"), params.integer("pairs", 1000),
                       params.integer("scales", 4), seed, tol_or(scenario, defaults, 1e-9),
                       params.ext_or("conclusion_tolerance", 1e-3));
        } else if (check_name == "bbl") {
            run_bbl(sink, input_path("f"), input_path("g"), 1.0, params.ext("gamma"),
                    params.ext("lambda"), tol_or(scenario, defaults, 1e-3));
        } else if (check_name == "nonlinear") {
            run_bbl(sink, input_path("f"), input_path("g"), params.ext("p"), params.ext("gamma"),
                    params.ext("lambda"), tol_or(scenario, defaults, 1e-3));
        } else if (check_name == "transport") {
            std::string phi = params.has("phi") ? params.str("phi") : "";
            std::string Phi = params.has("Phi") ? params.str("Phi") : "";
            run_transport(sink, input_path("f"), input_path("g"), "", phi, Phi,
                          tol_or(scenario, defaults, 1e-3));
        } else if (check_name == "logbm") {
            run_logbm(sink, input_path("K"), input_path("L"), params.ext("lambda"),
                      params.integer("m", 720), tol_or(scenario, defaults, 1e-9));
        } else if (check_name == "lpbm" || check_name == "pipeline") {
            const bool with_pipeline = check_name == "pipeline" || params.flag("pipeline", false);
            const double alpha = params.ext("alpha");
            const double alpha_tol = params.ext_or("alpha_tolerance", 2e-3);
            const bool symmetric = params.flag("symmetric", true);
            const double lambda = params.ext("lambda");
            const double p = params.ext("p");
            const std::int64_t thresholds = params.integer("thresholds", 32);
            const std::int64_t m = params.integer("m", 720);
            const double tol = tol_or(scenario, defaults, 1e-3);
            if (check_name == "pipeline")
                run_pipeline_only(sink, input_path("density"), alpha, alpha_tol, symmetric,
                                  input_path("K"), input_path("L"), lambda, p, thresholds, m, tol);
            else
                run_lp_bm(sink, input_path("density"), alpha, alpha_tol, symmetric,
                          input_path("K"), input_path("L"), lambda, p, with_pipeline, thresholds,
                          m, tol);
        } else if (check_name == "inclusion") {
            run_inclusion(sink, input_path("K"), input_path("L"), params.ext("lambda"),
                          params.ext("p"), params.integer("points", 1000), seed,
                          params.integer("m", 720));
        } else if (check_name == "sweep") {
            run_sweep(sink, params.integer("trials", 10), seed, params.ext("p"),
                      params.ext_or("lambda", 0.5), params.integer("m", 720));
        } else {
            throw CliError(path + ": unknown check '" + check_name + "'");
        }
        outcome.ok = true;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
    } catch (const CliError& e) {
        std::fprintf(stderr, "%s\n", e.what());
    }

    outcome.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (outcome.ok) {
        outcome.satisfied = sink.satisfied_since(first_row);
        outcome.min_margin = sink.min_margin_since(first_row);
    }
    return outcome;
}

std::string summary_csv(const std::vector<ScenarioOutcome>& outcomes) {
    std::string out = "scenario,satisfied,margin,runtime\n";
    for (const ScenarioOutcome& o : outcomes) {
        out += o.name + ',' + (o.ok && o.satisfied ? "1" : "0") + ',' + num(o.min_margin) + ',' +
               num(o.runtime_s) + '\n';
    }
    return out;
}

int exit_code(bool any_error, bool all_satisfied) {
    if (any_error) return 1;
    return all_satisfied ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"checks for weighted-mean convexity inequalities"};
    app.require_subcommand(1);
    app.fallthrough();

    double g_tolerance = -1.0;
    std::uint64_t g_seed = 1;
    std::string g_report;
    app.add_option("--tolerance", g_tolerance, "check tolerance (per-check default when omitted)");
    app.add_option("--seed", g_seed, "RNG seed for sampled checks")->default_val(1);
    app.add_option("--report", g_report, "also write the report CSV to this path");

    ReportSink sink;
    bool input_error = false;
    bool suite_mode = false;
    std::string suite_summary_text;
    std::string suite_summary_path;

    // means --s <ext> --lambda <w> --a <x> --b <y>
    {
        CLI::App* cmd = app.add_subcommand("means", "weighted power mean of two values");
        auto s = std::make_shared<std::string>();
        auto lambda = std::make_shared<double>();
        auto a = std::make_shared<double>();
        auto b = std::make_shared<double>();
        cmd->add_option("--s", *s, "exponent (decimal, inf, -inf)")->required();
        cmd->add_option("--lambda", *lambda, "weight in [0,1]")->required();
        cmd->add_option("--a", *a)->required();
        cmd->add_option("--b", *b)->required();
        cmd->callback([&, s, lambda, a, b] {
            run_means(sink, parse_ext_arg(*s), *lambda, *a, *b);
        });
    }

    // body volume / body combine
    {
        CLI::App* body = app.add_subcommand("body", "symmetric convex body operations");
        body->require_subcommand(1);

        CLI::App* vol = body->add_subcommand("volume", "volume (exact planar or Monte Carlo)");
        auto vin = std::make_shared<std::string>();
        auto vsamples = std::make_shared<std::int64_t>(0);
        auto vm = std::make_shared<std::int64_t>(720);
        vol->add_option("--in", *vin, "body JSON file")->required();
        vol->add_option("--mc-samples", *vsamples, "Monte Carlo sample count (0 = exact planar)");
        vol->add_option("--m", *vm, "direction count for polygon files")->default_val(720);
        vol->callback([&, vin, vsamples, vm] {
            BodyPtr b = load_body(*vin, *vm);
            Row row;
            row.check = "volume";
            if (*vsamples > 0) {
                double est = 0.0, se = 0.0;
                check(bl_body_mc_volume(b.get(), *vsamples, g_seed, &est, &se));
                row.lhs = row.rhs = est;
                row.witness = "stderr=" + num(se);
                row.samples = *vsamples;
                row.seed = g_seed;
            } else {
                double area = 0.0;
                check(bl_body_planar_area(b.get(), &area));
                row.lhs = row.rhs = area;
                row.witness = "exact=1";
                row.samples = 0;
            }
            sink.add(row);
        });

        CLI::App* comb = body->add_subcommand("combine", "weighted p-combination of two bodies");
        auto cp = std::make_shared<std::string>();
        auto clambda = std::make_shared<double>();
        auto cin = std::make_shared<std::vector<std::string>>();
        auto cout_path = std::make_shared<std::string>();
        auto cm = std::make_shared<std::int64_t>(720);
        comb->add_option("--p", *cp, "exponent in [0,1]")->required();
        comb->add_option("--lambda", *clambda, "weight in [0,1]")->required();
        comb->add_option("--in", *cin, "the two body files")->expected(2)->required();
        comb->add_option("--out", *cout_path, "output body file")->required();
        comb->add_option("--m", *cm, "direction count for polygon files")->default_val(720);
        comb->callback([&, cp, clambda, cin, cout_path, cm] {
            BodyPtr k = load_body((*cin)[0], *cm), l = load_body((*cin)[1], *cm);
            bl_body* craw = nullptr;
            check(bl_body_combine(k.get(), l.get(), *clambda, parse_ext_arg(*cp), &craw));
            BodyPtr c(craw, &bl_body_free);
            check(bl_body_save(c.get(), cout_path->c_str()));
        });
    }

    // func integrate / func concavity
    {
        CLI::App* func = app.add_subcommand("func", "grid function operations");
        func->require_subcommand(1);

        CLI::App* integ = func->add_subcommand("integrate", "mass of a grid function");
        auto iin = std::make_shared<std::string>();
        integ->add_option("--in", *iin, "grid JSON file")->required();
        integ->callback([&, iin] {
            GridPtr f = load_grid(*iin);
            double mass = 0.0;
            check(bl_grid_integrate(f.get(), &mass));
            Row row;
            row.check = "integrate";
            row.lhs = row.rhs = mass;
            row.witness = "mass=" + num(mass);
            sink.add(row);
        });

        CLI::App* conc = func->add_subcommand("concavity", "sampled alpha-concavity check");
        auto calpha = std::make_shared<std::string>();
        auto cin = std::make_shared<std::string>();
        auto cpairs = std::make_shared<std::int64_t>(1000);
        conc->add_option("--alpha", *calpha, "concavity class (decimal, inf, -inf)")->required();
        conc->add_option("--in", *cin, "grid JSON file")->required();
        conc->add_option("--pairs", *cpairs, "sampled pairs")->default_val(1000);
        conc->callback([&, calpha, cin, cpairs] {
            GridPtr f = load_grid(*cin);
            bl_report r;
            double tol = g_tolerance >= 0.0 ? g_tolerance : 1e-6;
            check(bl_grid_concavity_check(f.get(), parse_ext_arg(*calpha), *cpairs, g_seed, tol,
                                          &r));
            sink.add(from_report("concavity", r, g_seed));
        });
    }

    // transport [certify]
    {
        CLI::App* tr = app.add_subcommand("transport", "1-d monotone transport table and residual");
        auto tf = std::make_shared<std::string>();
        auto tg = std::make_shared<std::string>();
        auto tout = std::make_shared<std::string>();
        tr->add_option("--f", *tf, "source density grid")->required();
        tr->add_option("--g", *tg, "target density grid")->required();
        tr->add_option("--out", *tout, "write the table CSV (columns x, T, Tprime)");
        auto tphi = std::make_shared<std::string>();
        auto tPhi = std::make_shared<std::string>();
        CLI::App* cert = tr->add_subcommand("certify", "mass lower bound along the transport");
        cert->add_option("--phi", *tphi, "coordinate map spec")->required();
        cert->add_option("--Phi", *tPhi, "combination spec")->required();
        tr->callback([&, tf, tg, tout, tphi, tPhi] {
            double tol = g_tolerance >= 0.0 ? g_tolerance : 1e-3;
            run_transport(sink, *tf, *tg, *tout, *tphi, *tPhi, tol);
        });
    }

    // check borell / check bbl
    {
        CLI::App* chk = app.add_subcommand("check", "inequality verifiers");
        chk->require_subcommand(1);

        CLI::App* bor = chk->add_subcommand("borell", "pointwise hypothesis and mass conclusion");
        bor->set_help_flag("--help", "print help");  // frees -h for the h input below
        auto bf = std::make_shared<std::string>();
        auto bg = std::make_shared<std::string>();
        auto bh = std::make_shared<std::string>();
        auto bphi = std::make_shared<std::string>();
        auto bPhi = std::make_shared<std::string>();
        auto bpairs = std::make_shared<std::int64_t>(1000);
        auto bscales = std::make_shared<std::int64_t>(4);
        bor->add_option("--f", *bf)->required();
        bor->add_option("--g", *bg)->required();
        bor->add_option("--h", *bh)->required();
        bor->add_option("--phi", *bphi, "coordinate map spec")->required();
        bor->add_option("--Phi", *bPhi, "combination spec")->required();
        bor->add_option("--pairs", *bpairs, "sampled support pairs")->default_val(1000);
        bor->add_option("--scales", *bscales, "scale tuples per pair")->default_val(4);
        bor->callback([&, bf, bg, bh, bphi, bPhi, bpairs, bscales] {
            double tol = g_tolerance >= 0.0 ? g_tolerance : 1e-9;
            run_borell(sink, *bf, *bg, *bh, *bphi, *bPhi, *bpairs, *bscales, g_seed, tol, 1e-3);
        });

        CLI::App* bbl = chk->add_subcommand("bbl", "minimal sup-convolution mass conclusion");
        auto lf = std::make_shared<std::string>();
        auto lg = std::make_shared<std::string>();
        auto lgamma = std::make_shared<std::string>();
        auto llambda = std::make_shared<double>();
        auto lp = std::make_shared<std::string>("1");
        bbl->add_option("--f", *lf)->required();
        bbl->add_option("--g", *lg)->required();
        bbl->add_option("--gamma", *lgamma, "pointwise mean exponent")->required();
        bbl->add_option("--lambda", *llambda, "weight in [0,1]")->required();
        bbl->add_option("--p", *lp, "coordinate exponent (1 = straight combination)");
        bbl->callback([&, lf, lg, lgamma, llambda, lp] {
            double tol = g_tolerance >= 0.0 ? g_tolerance : 1e-3;
            run_bbl(sink, *lf, *lg, parse_ext_arg(*lp), parse_ext_arg(*lgamma), *llambda, tol);
        });
    }

    // conjecture lp-bm / conjecture sweep
    {
        CLI::App* conj = app.add_subcommand("conjecture", "planar combination conjecture checks");
        conj->require_subcommand(1);

        CLI::App* lpbm = conj->add_subcommand("lp-bm", "measure inequality for a p-combination");
        auto ddensity = std::make_shared<std::string>();
        auto dalpha = std::make_shared<std::string>();
        auto dK = std::make_shared<std::string>();
        auto dL = std::make_shared<std::string>();
        auto dlambda = std::make_shared<double>();
        auto dp = std::make_shared<std::string>();
        auto dpipeline = std::make_shared<bool>(false);
        auto dthresholds = std::make_shared<std::int64_t>(32);
        auto dm = std::make_shared<std::int64_t>(720);
        auto datol = std::make_shared<double>(2e-3);
        lpbm->add_option("--density", *ddensity, "density grid JSON")->required();
        lpbm->add_option("--alpha", *dalpha, "declared concavity class")->required();
        lpbm->add_option("--K", *dK)->required();
        lpbm->add_option("--L", *dL)->required();
        lpbm->add_option("--lambda", *dlambda, "weight in [0,1]")->required();
        lpbm->add_option("--p", *dp, "combination exponent in [0,1]")->required();
        lpbm->add_flag("--pipeline", *dpipeline, "also run the level-set reduction");
        lpbm->add_option("--thresholds", *dthresholds, "level-set thresholds")->default_val(32);
        lpbm->add_option("--m", *dm, "direction count for polygon files")->default_val(720);
        lpbm->add_option("--alpha-tolerance", *datol, "construction validation tolerance")
            ->default_val(2e-3);
        lpbm->callback([&, ddensity, dalpha, dK, dL, dlambda, dp, dpipeline, dthresholds, dm,
                        datol] {
            double tol = g_tolerance >= 0.0 ? g_tolerance : 1e-3;
            run_lp_bm(sink, *ddensity, parse_ext_arg(*dalpha), *datol, true, *dK, *dL, *dlambda,
                      parse_ext_arg(*dp), *dpipeline, *dthresholds, *dm, tol);
        });

        CLI::App* sweep = conj->add_subcommand("sweep", "random polygon pair margins");
        auto strials = std::make_shared<std::int64_t>(10);
        auto sdim = std::make_shared<std::int64_t>(2);
        auto sp = std::make_shared<std::string>();
        auto slambda = std::make_shared<double>(0.5);
        auto sm = std::make_shared<std::int64_t>(720);
        sweep->add_option("--trials", *strials)->required();
        sweep->add_option("--dim", *sdim, "only 2 is implemented")->default_val(2);
        sweep->add_option("--p", *sp, "combination exponent in [0,1]")->required();
        sweep->add_option("--lambda", *slambda)->default_val(0.5);
        sweep->add_option("--m", *sm)->default_val(720);
        sweep->callback([&, strials, sdim, sp, slambda, sm] {
            if (*sdim != 2) throw CliError("sweep: only --dim 2 is implemented");
            run_sweep(sink, *strials, g_seed, parse_ext_arg(*sp), *slambda, *sm);
        });
    }

    // run scenario.json...  /  suite dir
    {
        CLI::App* run = app.add_subcommand("run", "run scenario files in order");
        auto files = std::make_shared<std::vector<std::string>>();
        run->add_option("scenarios", *files, "scenario JSON files")->required();
        run->callback([&, files] {
            Defaults d{g_tolerance, g_seed};
            for (const std::string& f : *files) {
                ScenarioOutcome o = run_scenario_file(f, sink, d);
                if (!o.ok) input_error = true;
            }
        });

        CLI::App* suite = app.add_subcommand("suite", "run every scenario in a directory");
        auto dir = std::make_shared<std::string>();
        auto summary = std::make_shared<std::string>();
        suite->add_option("dir", *dir, "directory of scenario JSON files")->required();
        suite->add_option("--summary", *summary, "write the summary CSV to this path");
        suite->callback([&, dir, summary] {
            namespace fs = std::filesystem;
            suite_mode = true;
            suite_summary_path = *summary;
            if (!fs::is_directory(*dir)) throw CliError(*dir + ": not a directory");
            std::vector<std::string> files;
            for (const auto& entry : fs::directory_iterator(*dir))
                if (entry.is_regular_file() && entry.path().extension() == ".json")
                    files.push_back(entry.path().string());
            std::sort(files.begin(), files.end());
            Defaults d{g_tolerance, g_seed};
            std::vector<ScenarioOutcome> outcomes;
            for (const std::string& f : files) {
                outcomes.push_back(run_scenario_file(f, sink, d));
                if (!outcomes.back().ok) input_error = true;
            }
            suite_summary_text = summary_csv(outcomes);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const CliError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }

    // Suites put the summary on stdout and detail rows behind --report; every
    // other command streams its rows to stdout.
    if (suite_mode) {
        std::fputs(suite_summary_text.c_str(), stdout);
        if (!suite_summary_path.empty()) write_text_file(suite_summary_path, suite_summary_text);
        if (!g_report.empty()) write_text_file(g_report, sink.to_csv());
    } else if (!sink.empty()) {
        std::fputs(sink.to_csv().c_str(), stdout);
        if (!g_report.empty()) write_text_file(g_report, sink.to_csv());
    } else if (!g_report.empty()) {
        write_text_file(g_report, sink.to_csv());
    }
    return exit_code(input_error, sink.all_satisfied());
}
