// normlab command line front end: norm computation, bound evaluation, Monte
// Carlo estimation, tail experiments, sandwich sweeps and scenario
// generation, all with reproducible seeding and machine-readable output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "normlab/normlab.hpp"
#include "normlab/serialize.hpp"

namespace {

using normlab::json;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("NORMLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw normlab::InputError("NORMLAB_SEED is not a decimal 64-bit integer");
        }
    }
    return 12345;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw normlab::InputError("cannot write output file '" + out_path + "'");
    out << text;
}

void emit_json(json j, const std::string& out_path) {
    j["schema_version"] = normlab::kSchemaVersion;
    emit(j.dump(2) + "\n", out_path);
}

std::vector<normlab::Exponent> parse_exponent_list(const std::string& csv) {
    std::vector<normlab::Exponent> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(normlab::Exponent::parse(tok));
    if (out.empty()) throw normlab::InputError("empty exponent list '" + csv + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

struct MatrixSource {
    std::string matrix_path;
    std::string scenario_json;
    bool transpose = false;

    void attach(CLI::App* cmd) {
        auto* mat = cmd->add_option("--matrix", matrix_path, "matrix CSV file (no header)");
        auto* scen = cmd->add_option("--scenario", scenario_json, "inline scenario JSON");
        mat->excludes(scen);
        cmd->add_flag("--transpose", transpose, "use the transposed matrix");
    }

    normlab::DenseMatrix load() const {
        normlab::DenseMatrix A = [&] {
            if (!matrix_path.empty()) return normlab::DenseMatrix::load_csv(matrix_path);
            if (!scenario_json.empty())
                return normlab::scenario_matrix(normlab::parse_scenario(scenario_json));
            throw normlab::InputError("exactly one of --matrix / --scenario is required");
        }();
        return transpose ? A.transpose() : A;
    }
};

json bound_report_entry(const std::string& formula, double value) {
    json j;
    j["formula"] = formula;
    j["value"] = value;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator norms of structured random matrices"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags (--out, --threads) may follow the subcommand

    std::string out_path;
    app.add_option("--out", out_path, "output file (default stdout)")->capture_default_str();
    unsigned threads = 1;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    normlab::OpNormOptions norm_opts;

    // ---- norm ----------------------------------------------------------
    auto* norm_cmd = app.add_subcommand("norm", "compute ||B: l_p -> l_q||");
    MatrixSource norm_src;
    norm_src.attach(norm_cmd);
    std::string p_str = "2", q_str = "2";
    norm_cmd->add_option("--p", p_str, "source exponent (decimal or 'inf')");
    norm_cmd->add_option("--q", q_str, "target exponent (decimal or 'inf')");
    norm_cmd->add_option("--restarts", norm_opts.restarts, "heuristic restarts");
    norm_cmd->add_option("--iterations", norm_opts.max_iter, "heuristic iteration cap");

    // ---- bounds --------------------------------------------------------
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate bound formulas");
    MatrixSource bounds_src;
    bounds_src.attach(bounds_cmd);
    std::string formula = "all";
    std::string model_str = "gaussian";
    std::string grid_str;
    std::string emax_str = "surrogate";
    std::size_t trials = 2000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t big_m = 0, big_n = 0;
    double calibration = 1.0;
    bounds_cmd->add_option("--p", p_str, "source exponent");
    bounds_cmd->add_option("--q", q_str, "target exponent");
    bounds_cmd->add_option("--formula", formula,
                           "one of: all,d1d2,lower,conjectured,boundary,thm_1_4,cor_1_5,thm_3_2,"
                           "prop_1_8,prop_bdd_p2q,psi_main,psi_cutoff,psi_coupled,bgn,"
                           "bgn_extended,seginer,latala,lvhy,ghlp,matlak");
    bounds_cmd->add_option("--model", model_str, "entry model (shorthand or JSON)");
    bounds_cmd->add_option("--grid", grid_str, "exponent grid; emits CSV over the (p,q) grid");
    bounds_cmd->add_option("--emax", emax_str, "third-term mode: surrogate|mc");
    bounds_cmd->add_option("--trials", trials, "Monte Carlo trials for mc terms");
    bounds_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_given = true; });
    bounds_cmd->add_option("--M", big_m, "ambient row count for thm_1_4");
    bounds_cmd->add_option("--N", big_n, "ambient column count for thm_1_4");
    bounds_cmd->add_option("--calibration", calibration, "psi_r rate calibration constant");
    std::string format = "json";
    bounds_cmd->add_option("--format", format, "json|csv");

    // ---- estimate ------------------------------------------------------
    auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of E||X_A: l_p -> l_q||");
    MatrixSource est_src;
    est_src.attach(est_cmd);
    bool keep_samples = false, allow_heuristic = false;
    est_cmd->add_option("--p", p_str, "source exponent");
    est_cmd->add_option("--q", q_str, "target exponent");
    est_cmd->add_option("--model", model_str, "entry model");
    est_cmd->add_option("--trials", trials, "trial count");
    est_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_given = true; });
    est_cmd->add_flag("--keep-samples", keep_samples, "include per-trial norms in the output");
    est_cmd->add_flag("--allow-heuristic", allow_heuristic,
                      "accept certified-heuristic per-trial norms");

    // ---- tail ----------------------------------------------------------
    auto* tail_cmd = app.add_subcommand("tail", "empirical tail of the norm");
    MatrixSource tail_src;
    tail_src.attach(tail_cmd);
    std::string thresholds_str = "1.5,2,3";
    std::string reference_str = "median";
    double d_value = 0.0;
    tail_cmd->add_option("--p", p_str, "source exponent");
    tail_cmd->add_option("--q", q_str, "target exponent");
    tail_cmd->add_option("--model", model_str, "entry model");
    tail_cmd->add_option("--trials", trials, "trial count");
    tail_cmd->add_option("--thresholds", thresholds_str, "comma-separated t >= 1");
    tail_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_given = true; });
    tail_cmd->add_option("--reference", reference_str, "median|mean");
    tail_cmd->add_option("--d", d_value, "override the D >= d1 level");
    std::string dat_path;
    tail_cmd->add_option("--dat", dat_path, "also write gnuplot-ready (t, -ln P) pairs");
    bool tail_allow_heuristic = false;
    tail_cmd->add_flag("--allow-heuristic", tail_allow_heuristic,
                       "accept certified-heuristic per-trial norms");

    // ---- sweep ---------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "sandwich verification over a (p,q) grid");
    std::string scenarios_path;
    std::vector<std::string> scenario_inline;
    std::string sweep_grid = "1,1.5,2,3,inf";
    std::string out_csv, out_json_path, reproducer_dir;
    std::size_t sweep_trials = 200;
    sweep_cmd->add_option("--scenarios", scenarios_path, "JSON file with an array of scenarios");
    sweep_cmd->add_option("--scenario", scenario_inline, "inline scenario JSON (repeatable)");
    sweep_cmd->add_option("--model", model_str, "entry model");
    sweep_cmd->add_option("--grid", sweep_grid, "exponent grid (cartesian product)");
    sweep_cmd->add_option("--trials", sweep_trials, "trials per cell");
    sweep_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_given = true; });
    sweep_cmd->add_option("--out-csv", out_csv, "per-cell CSV path");
    sweep_cmd->add_option("--out-json", out_json_path, "summary JSON path");
    sweep_cmd->add_option("--reproducer-dir", reproducer_dir, "directory for violation reproducers");

    // ---- scenario ------------------------------------------------------
    auto* scen_cmd = app.add_subcommand("scenario", "materialize a scenario matrix to CSV");
    std::string scen_spec;
    scen_cmd->add_option("--spec", scen_spec, "scenario JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (!seed_given) seed = default_seed();
        norm_opts.seed = normlab::derive_stream(seed, 0x6f70);

        if (norm_cmd->parsed()) {
            const auto A = norm_src.load();
            const auto p = normlab::Exponent::parse(p_str);
            const auto q = normlab::Exponent::parse(q_str);
            emit_json(normlab::to_json(normlab::op_norm(A, p, q, norm_opts)), out_path);
            return 0;
        }

        if (bounds_cmd->parsed()) {
            const auto A = bounds_src.load();
            const auto model = normlab::parse_entry_model(model_str);
            const normlab::EmaxMode emax =
                emax_str == "mc" ? normlab::EmaxMode::monte_carlo(trials, seed, threads)
                                 : normlab::EmaxMode::surrogate();

            const auto evaluate = [&](const normlab::Exponent& p, const normlab::Exponent& q,
                                      const std::string& name) -> json {
                using normlab::ClassicalRate;
                using normlab::PsiVariant;
                if (name == "d1d2") {
                    const auto d = normlab::d1_d2(A, p, q, norm_opts);
                    json j = bound_report_entry(name, 0.0);
                    j.erase("value");
                    j["d1"] = d.d1();
                    j["d2"] = d.d2();
                    j["certificates"] = d.certificates();
                    return j;
                }
                if (name == "lower") {
                    json j = normlab::to_json(
                        normlab::lower_bound_gaussian(A, p, q, emax, model, norm_opts));
                    j["value"] = j["lower"];
                    return j;
                }
                if (name == "conjectured") {
                    return bound_report_entry(
                        name, normlab::conjectured_rate(A, p, q, emax, norm_opts));
                }
                if (name == "boundary") {
                    const auto b = normlab::boundary_two_sided(A, p, q, norm_opts);
                    json j = bound_report_entry(name, b.upper);
                    j["lower"] = b.lower;
                    j["upper"] = b.upper;
                    j["case"] = b.case_label;
                    return j;
                }
                if (name == "thm_1_4")
                    return bound_report_entry(
                        name, normlab::upper_main_gaussian(A, p, q, big_m, big_n, norm_opts));
                if (name == "cor_1_5") {
                    const auto d = normlab::d1_d2(A, p, q, norm_opts);
                    return bound_report_entry(
                        name, normlab::formulas::cor_main_gauss(
                                  static_cast<double>(A.rows()), static_cast<double>(A.cols()),
                                  normlab::conjugate(p).inv(), q.inv(), d.d1_upper(), d.d2_upper()));
                }
                if (name == "thm_3_2")
                    return bound_report_entry(name,
                                              normlab::upper_bounded_main(A, p, q, norm_opts));
                if (name == "prop_1_8")
                    return bound_report_entry(name, normlab::upper_gauss_p_le2(A, p, q, norm_opts));
                if (name == "prop_bdd_p2q")
                    return bound_report_entry(name, normlab::upper_bdd_p2q(A, p, q, norm_opts));
                if (name == "psi_main" || name == "psi_cutoff" || name == "psi_coupled") {
                    if (model.kind != normlab::EntryLaw::WeibullPsiR)
                        throw normlab::RegimeError("psi formulas need --model weibull:r[,K[,L]]");
                    const PsiVariant v = name == "psi_main"
                                             ? PsiVariant::Main
                                             : (name == "psi_cutoff" ? PsiVariant::PLe2Cutoff
                                                                     : PsiVariant::PLe2Coupled);
                    return bound_report_entry(
                        name, normlab::upper_psi(A, p, q, model.r, model.K, model.L, v,
                                                 calibration, norm_opts));
                }
                const auto classical = [&](ClassicalRate which) {
                    return bound_report_entry(
                        name, normlab::classical_rate(which, A, model, p, q, trials, {seed},
                                                      threads));
                };
                if (name == "bgn") return classical(ClassicalRate::Bgn);
                if (name == "bgn_extended") return classical(ClassicalRate::BgnExtended);
                if (name == "seginer") return classical(ClassicalRate::Seginer);
                if (name == "latala") return classical(ClassicalRate::Latala);
                if (name == "lvhy") return classical(ClassicalRate::Lvhy);
                if (name == "ghlp") return classical(ClassicalRate::Ghlp);
                if (name == "matlak") return classical(ClassicalRate::Matlak);
                throw normlab::InputError("unknown formula '" + name + "'");
            };

            if (!grid_str.empty()) {
                // CSV over the exponent grid: p,q,formula,value,certificate.
                const auto grid = parse_exponent_list(grid_str);
                std::ostringstream csv;
                csv << "p,q,formula,value,certificate\n";
                for (const auto& p : grid) {
                    for (const auto& q : grid) {
                        const auto d = normlab::d1_d2(A, p, q, norm_opts);
                        const std::string cert = d.exact() ? "Exact"
                                                 : d.upper_certified() ? "Bracket"
                                                                       : "HeuristicLowerBound";
                        const auto rep =
                            normlab::lower_bound_gaussian(A, p, q, emax, model, norm_opts);
                        csv << p.str() << ',' << q.str() << ",lower," << rep.lower << ',' << cert
                            << '\n';
                        csv << p.str() << ',' << q.str() << ",thm_1_4,"
                            << normlab::upper_main_gaussian(A, p, q, 0, 0, norm_opts) << ',' << cert
                            << '\n';
                    }
                }
                emit(csv.str(), out_path);
                return 0;
            }

            const auto p = normlab::Exponent::parse(p_str);
            const auto q = normlab::Exponent::parse(q_str);
            if (formula != "all") {
                json j = evaluate(p, q, formula);
                j["p"] = p.str();
                j["q"] = q.str();
                if (!j.contains("d1")) {
                    const auto d = normlab::d1_d2(A, p, q, norm_opts);
                    j["d1"] = d.d1();
                    j["d2"] = d.d2();
                    j["certificates"] = d.certificates();
                }
                if (format == "csv") {
                    const auto d = normlab::d1_d2(A, p, q, norm_opts);
                    const std::string cert = d.exact() ? "Exact"
                                             : d.upper_certified() ? "Bracket"
                                                                   : "HeuristicLowerBound";
                    std::ostringstream csv;
                    csv << "p,q,formula,value,certificate\n"
                        << p.str() << ',' << q.str() << ',' << formula << ','
                        << j.value("value", 0.0) << ',' << cert << '\n';
                    emit(csv.str(), out_path);
                    return 0;
                }
                emit_json(std::move(j), out_path);
                return 0;
            }
            json reports = json::array();
            for (const char* name : {"d1d2", "lower", "conjectured", "thm_1_4", "cor_1_5"})
                reports.push_back(evaluate(p, q, name));
            if (p <= 2.0 && !q.is_infinite())
                reports.push_back(evaluate(p, q, "prop_1_8"));
            json j;
            j["p"] = p.str();
            j["q"] = q.str();
            j["model"] = normlab::to_json(model);
            j["reports"] = std::move(reports);
            emit_json(std::move(j), out_path);
            return 0;
        }

        if (est_cmd->parsed()) {
            const auto A = est_src.load();
            const auto p = normlab::Exponent::parse(p_str);
            const auto q = normlab::Exponent::parse(q_str);
            normlab::McOptions mc;
            mc.keep_samples = keep_samples;
            mc.allow_heuristic = allow_heuristic;
            mc.threads = threads;
            mc.norm = norm_opts;
            const auto est = normlab::mc_norm_estimate(A, normlab::parse_entry_model(model_str), p,
                                                       q, trials, {seed}, mc);
            emit_json(normlab::to_json(est, keep_samples), out_path);
            return 0;
        }

        if (tail_cmd->parsed()) {
            const auto A = tail_src.load();
            const auto p = normlab::Exponent::parse(p_str);
            const auto q = normlab::Exponent::parse(q_str);
            normlab::TailOptions topt;
            topt.d_value = d_value;
            topt.reference = reference_str == "mean" ? normlab::TailReference::Mean
                                                     : normlab::TailReference::Median;
            topt.mc.threads = threads;
            topt.mc.allow_heuristic = tail_allow_heuristic;
            topt.mc.norm = norm_opts;
            const auto res =
                normlab::tail_experiment(A, normlab::parse_entry_model(model_str), p, q, trials,
                                         parse_double_list(thresholds_str), {seed}, topt);
            if (!dat_path.empty()) {
                std::ostringstream dat;
                dat << "# t  -ln(P)\n";
                for (const auto& row : res.rows)
                    dat << row.t << "  "
                        << (row.prob > 0.0 ? -std::log(row.prob)
                                           : std::numeric_limits<double>::infinity())
                        << "\n";
                emit(dat.str(), dat_path);
            }
            emit_json(normlab::to_json(res), out_path);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            std::vector<normlab::ScenarioSpec> scenarios;
            if (!scenarios_path.empty()) {
                std::ifstream in(scenarios_path);
                if (!in) throw normlab::InputError("cannot read '" + scenarios_path + "'");
                for (const auto& item : json::parse(in))
                    scenarios.push_back(normlab::scenario_from_json(item));
            }
            for (const auto& s : scenario_inline)
                scenarios.push_back(normlab::parse_scenario(s));
            if (scenarios.empty())
                throw normlab::InputError("sweep needs --scenarios or --scenario");

            const auto grid = parse_exponent_list(sweep_grid);
            std::vector<std::pair<normlab::Exponent, normlab::Exponent>> pq;
            for (const auto& p : grid)
                for (const auto& q : grid) pq.emplace_back(p, q);

            normlab::SweepOptions sopt;
            sopt.mc.threads = threads;
            sopt.mc.norm = norm_opts;
            const auto model = normlab::parse_entry_model(model_str);
            const auto result =
                normlab::sandwich_sweep(scenarios, model, pq, sweep_trials, {seed}, sopt);

            if (!out_csv.empty()) {
                std::ofstream csv(out_csv);
                if (!csv) throw normlab::InputError("cannot write '" + out_csv + "'");
                normlab::sweep_to_csv(result, csv);
            } else {
                std::ostringstream csv;
                normlab::sweep_to_csv(result, csv);
                emit(csv.str(), out_path);
            }
            emit(normlab::summary_json(result).dump(2) + "\n",
                 out_json_path.empty() ? std::string("-") : out_json_path);
            if (!reproducer_dir.empty()) {
                std::size_t idx = 0;
                for (const auto& v : result.violations) {
                    std::ofstream rep(reproducer_dir + "/violation_" + std::to_string(idx++) +
                                      ".json");
                    rep << normlab::violation_reproducer_json(v, model, sweep_trials).dump(2)
                        << "\n";
                }
            }
            return result.summary.violations == 0 ? 0 : 2;
        }

        if (scen_cmd->parsed()) {
            const auto A = normlab::scenario_matrix(normlab::parse_scenario(scen_spec));
            if (out_path.empty() || out_path == "-")
                A.to_csv(std::cout);
            else
                A.save_csv(out_path);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
