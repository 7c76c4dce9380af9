#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "normlab/experiments.hpp"

namespace normlab {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

inline json to_json(const NormResult& r) {
    json j;
    j["value"] = r.value;
    j["kind"] = to_string(r.kind);
    j["lower"] = r.lower;
    if (std::isfinite(r.upper))
        j["upper"] = r.upper;
    else
        j["upper"] = nullptr;
    j["strategy"] = r.strategy;
    j["witness"] = r.witness;
    return j;
}

inline json to_json(const EntryModel& m) {
    json j;
    j["kind"] = m.kind_name();
    if (m.kind == EntryLaw::WeibullPsiR) {
        j["r"] = m.r;
        j["K"] = m.K;
        j["L"] = m.L;
    }
    return j;
}

inline EntryModel entry_model_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return EntryModel::gaussian();
    if (kind == "rademacher") return EntryModel::rademacher();
    if (kind == "bounded_uniform") return EntryModel::bounded_uniform();
    if (kind == "weibull_psi_r")
        return EntryModel::weibull_psi_r(j.at("r").get<double>(), j.value("K", 1.0),
                                         j.value("L", 1.0));
    throw InputError("unknown entry model kind '" + kind + "'");
}

/// Accepts a shorthand name ("gaussian", "rademacher", "bounded_uniform",
/// "weibull:r[,K[,L]]") or an inline JSON object.
inline EntryModel parse_entry_model(const std::string& text) {
    if (!text.empty() && text.front() == '{') return entry_model_from_json(json::parse(text));
    if (text == "gaussian") return EntryModel::gaussian();
    if (text == "rademacher") return EntryModel::rademacher();
    if (text == "bounded_uniform" || text == "uniform") return EntryModel::bounded_uniform();
    if (text.rfind("weibull:", 0) == 0) {
        double vals[3] = {1.0, 1.0, 1.0};
        std::size_t pos = 8;
        for (int k = 0; k < 3 && pos <= text.size(); ++k) {
            const std::size_t comma = text.find(',', pos);
            const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
            if (!tok.empty()) vals[k] = std::stod(tok);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return EntryModel::weibull_psi_r(vals[0], vals[1], vals[2]);
    }
    throw InputError("unknown entry model '" + text + "'");
}

inline json to_json(const ScenarioSpec& s) {
    json j;
    switch (s.kind) {
        case ScenarioSpec::Kind::Identity:
            j["kind"] = "identity";
            j["n"] = s.n;
            break;
        case ScenarioSpec::Kind::Ones:
            j["kind"] = "ones";
            j["m"] = s.m;
            j["n"] = s.n;
            break;
        case ScenarioSpec::Kind::BlockOnes:
            j["kind"] = "block_ones";
            j["k"] = s.k;
            j["N"] = s.blocks;
            break;
        case ScenarioSpec::Kind::Diag:
            j["kind"] = "diag";
            j["weights"] = s.weights;
            break;
        case ScenarioSpec::Kind::SeededRandom:
            j["kind"] = "seeded_random";
            j["m"] = s.m;
            j["n"] = s.n;
            j["law"] = s.law == CoefficientLaw::Uniform01
                           ? "uniform01"
                           : (s.law == CoefficientLaw::UniformSym ? "uniform_sym" : "gaussian");
            j["seed"] = s.seed;
            break;
    }
    return j;
}

inline ScenarioSpec scenario_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return ScenarioSpec::identity(j.at("n").get<std::size_t>());
    if (kind == "ones")
        return ScenarioSpec::ones(j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>());
    if (kind == "block_ones")
        return ScenarioSpec::block_ones(j.at("k").get<std::size_t>(), j.at("N").get<std::size_t>());
    if (kind == "diag") return ScenarioSpec::diag(j.at("weights").get<std::vector<double>>());
    if (kind == "seeded_random") {
        const std::string law = j.value("law", "uniform01");
        CoefficientLaw cl = CoefficientLaw::Uniform01;
        if (law == "uniform_sym")
            cl = CoefficientLaw::UniformSym;
        else if (law == "gaussian")
            cl = CoefficientLaw::Gaussian;
        else if (law != "uniform01")
            throw InputError("unknown coefficient law '" + law + "'");
        return ScenarioSpec::seeded_random(j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>(),
                                           cl, j.value("seed", std::uint64_t{0}));
    }
    throw InputError("unknown scenario kind '" + kind + "'");
}

inline ScenarioSpec parse_scenario(const std::string& text) {
    return scenario_from_json(json::parse(text));
}

inline json to_json(const McEstimate& e, bool include_samples = false) {
    json j;
    j["mean"] = e.mean;
    j["stderr"] = e.stderr_;
    j["trials"] = e.trials;
    j["norm_certificate"] = to_string(e.norm_certificate);
    if (include_samples) j["samples"] = e.samples;
    return j;
}

inline json to_json(const BoundReport& r) {
    json j;
    j["formula"] = r.formula;
    j["regime"] = r.regime;
    j["d1"] = r.d1;
    j["d2"] = r.d2;
    j["b_term"] = r.b_term ? json(*r.b_term) : json(nullptr);
    j["d_term"] = r.d_term ? json(*r.d_term) : json(nullptr);
    j["emax_term"] = r.emax_term ? json(*r.emax_term) : json(nullptr);
    j["lower"] = r.lower;
    j["lower_certified"] = r.lower_certified;
    j["upper"] = r.upper ? json(*r.upper) : json(nullptr);
    j["certificates"] = r.certificates;
    return j;
}

inline json to_json(const TailResult& t) {
    json j;
    j["d"] = t.d_value;
    j["gamma"] = t.gamma;
    j["reference"] = t.reference;
    j["median"] = t.median;
    j["mean"] = t.mean;
    j["trials"] = t.trials;
    j["norm_certificate"] = to_string(t.norm_certificate);
    json rows = json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"t", row.t}, {"prob", row.prob}, {"halfwidth", row.halfwidth}});
    j["rows"] = rows;
    return j;
}

inline json summary_json(const SweepResult& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["cells"] = r.summary.cells;
    j["violations"] = r.summary.violations;
    j["runtime_seconds"] = r.summary.runtime_seconds;
    return j;
}

inline void sweep_to_csv(const SweepResult& r, std::ostream& out) {
    out << "scenario,p,q,trials,lower_certified,lower,mc_mean,mc_stderr,upper,"
           "exact_trials,bounds_certified,violation\n";
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& c : r.cells) {
        out << c.scenario << ',' << c.p << ',' << c.q << ',' << c.trials << ','
            << num(c.lower_certified) << ',' << num(c.lower) << ',' << num(c.mc_mean) << ','
            << num(c.mc_stderr) << ',' << num(c.upper) << ',' << (c.exact_trials ? 1 : 0) << ','
            << (c.bounds_certified ? 1 : 0) << ',' << (c.violation ? 1 : 0) << '\n';
    }
}

inline json violation_reproducer_json(const ViolationRecord& v, const EntryModel& model,
                                      std::size_t trials) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["scenario"] = to_json(v.scenario);
    j["model"] = to_json(model);
    j["p"] = v.p;
    j["q"] = v.q;
    j["seed"] = v.seed;
    j["trial"] = v.trial;
    j["trials"] = trials;
    return j;
}

inline json growth_table_json(const std::vector<GrowthRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"k", r.k},
                       {"log_lower", r.log_lower},
                       {"log_upper", r.log_upper},
                       {"ratio", r.ratio}});
    return arr;
}

}  // namespace normlab
