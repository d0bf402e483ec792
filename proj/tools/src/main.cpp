// mlc — command-line front end: formula parsing/printing/evaluation, group
// tooling, matching numbers, Følner certificate search, schema evaluation,
// and unitary-representation checks. Every subcommand emits one JSON report
// that embeds its semantic configuration, any seed, and the library version;
// reports are byte-identical across worker counts.

#include "mlc/amenability.hpp"
#include "mlc/dsl.hpp"
#include "mlc/errors.hpp"
#include "mlc/eval.hpp"
#include "mlc/group.hpp"
#include "mlc/hilbert.hpp"
#include "mlc/json_io.hpp"
#include "mlc/matching.hpp"
#include "mlc/parallel.hpp"
#include "mlc/unitary.hpp"
#include "mlc/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using mlc::Json;
using mlc::Rat;

// ------------------------------------------------------------- utilities --

struct Output {
    std::string path; // empty → stdout
    void emit(const Json& report) const {
        if (path.empty())
            std::cout << report.dump(2) << '\n';
        else
            mlc::save_json_file(path, report);
    }
};

Json envelope(const std::string& command) {
    Json j;
    j["version"] = mlc::kVersion;
    j["command"] = command;
    return j;
}

Rat parse_rat(const std::string& text) {
    const auto r = mlc::rat_parse(text);
    if (!r) throw mlc::Error("not a rational number", text);
    return *r;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

std::vector<std::size_t> resolve_elements(const mlc::MetricGroup& g, const std::string& csv) {
    std::vector<std::size_t> out;
    for (const auto& label : split_list(csv, ',')) {
        const auto idx = g.find(label);
        if (!idx) throw mlc::Error("unknown group element", label);
        out.push_back(*idx);
    }
    return out;
}

std::vector<std::vector<std::size_t>> resolve_tuples(const mlc::MetricGroup& g,
                                                     const std::string& text) {
    std::vector<std::vector<std::size_t>> out;
    if (text.empty()) return out;
    for (const auto& tup : split_list(text, ';')) out.push_back(resolve_elements(g, tup));
    return out;
}

Json labels_of(const mlc::MetricGroup& g, const std::vector<std::size_t>& idx) {
    Json out = Json::array();
    for (const std::size_t i : idx) out.push_back(g.label(i));
    return out;
}

mlc::MetricGroup load_group(const std::string& path) {
    return mlc::group_from_json(mlc::load_json_file(path));
}

Json certificate_to_json(const mlc::MetricGroup& g, const mlc::Certificate& c) {
    Json j;
    j["E"] = labels_of(g, c.E);
    j["theta"] = mlc::rat_to_json(c.theta);
    j["q"] = mlc::rat_to_json(c.q);
    j["ball"] = c.closed ? "closed" : "open";
    j["F"] = labels_of(g, c.F);
    Json margins = Json::array();
    for (const auto& m : c.margins) margins.push_back(mlc::rat_to_json(m));
    j["margins"] = std::move(margins);
    j["min_margin"] = mlc::rat_to_json(c.min_margin);
    switch (c.status) {
    case mlc::CertificateStatus::Valid: j["status"] = "valid"; break;
    case mlc::CertificateStatus::Invalid: j["status"] = "invalid"; break;
    case mlc::CertificateStatus::Inconclusive: j["status"] = "inconclusive"; break;
    }
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

// ----------------------------------------------------------- subcommands --

struct CommonFormula {
    std::string file;
    std::string expr;
    std::string name;
};

std::vector<mlc::NamedFormula> load_formulas(const CommonFormula& cf) {
    if (cf.file.empty() == cf.expr.empty())
        throw mlc::Error("pass exactly one of --file or --expr");
    if (!cf.expr.empty()) {
        const mlc::ParsedFormula p = mlc::parse_formula(cf.expr);
        mlc::NamedFormula nf;
        nf.name = "-";
        nf.formula = p.formula;
        nf.has_condition = p.has_condition;
        nf.threshold = p.threshold;
        nf.eq_zero = p.eq_zero;
        return {nf};
    }
    std::ifstream in(cf.file);
    if (!in) throw mlc::Error("cannot open file", cf.file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return mlc::parse_formula_file(text);
}

int cmd_parse(const CommonFormula& cf, const Output& out) {
    const auto formulas = load_formulas(cf);
    Json report = envelope("parse");
    Json list = Json::array();
    for (const auto& nf : formulas) {
        Json f;
        f["name"] = nf.name;
        f["text"] = mlc::print_formula(*nf.formula);
        f["nodes"] = nf.formula->node_count();
        if (nf.has_condition) {
            f["condition"] = nf.eq_zero ? Json("= 0")
                                        : Json("<= " + mlc::rat_to_string(nf.threshold));
        }
        Json vars = Json::array();
        for (const auto& v : nf.formula->free_vars()) vars.push_back(v);
        f["free_vars"] = std::move(vars);
        list.push_back(std::move(f));
    }
    report["formulas"] = std::move(list);
    out.emit(report);
    return 0;
}

int cmd_fmt(const CommonFormula& cf, const Output& out) {
    const auto formulas = load_formulas(cf);
    std::string text;
    for (const auto& nf : formulas) {
        text += nf.name;
        text += " := ";
        text += mlc::print_formula(*nf.formula);
        if (nf.has_condition)
            text += nf.eq_zero ? " = 0" : (" <= " + mlc::rat_to_string(nf.threshold));
        text += ";\n";
    }
    if (out.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream o(out.path);
        if (!o) throw mlc::Error("cannot write file", out.path);
        o << text;
    }
    return 0;
}

int cmd_eval(const std::string& structure_path, const std::string& group_path,
             const CommonFormula& cf, const std::string& assign_csv, bool float_mode,
             const Output& out) {
    if (structure_path.empty() == group_path.empty())
        throw mlc::Error("pass exactly one of --structure or --group");
    std::optional<mlc::MetricGroup> group;
    mlc::Structure st;
    if (!group_path.empty()) {
        group = load_group(group_path);
        st = group->as_structure();
    } else {
        st = mlc::structure_from_json(mlc::load_json_file(structure_path));
    }

    const auto formulas = load_formulas(cf);
    const mlc::NamedFormula* chosen = nullptr;
    if (!cf.name.empty()) {
        for (const auto& nf : formulas)
            if (nf.name == cf.name) chosen = &nf;
        if (!chosen) throw mlc::Error("no formula with that name", cf.name);
    } else {
        if (formulas.size() != 1)
            throw mlc::Error("file defines several formulas; pick one with --name");
        chosen = &formulas.front();
    }

    mlc::Assignment assignment;
    if (!assign_csv.empty()) {
        const auto sorts = mlc::infer_sorts(st, *chosen->formula);
        for (const auto& pair : split_list(assign_csv, ',')) {
            const auto eq = pair.find('=');
            if (eq == std::string::npos)
                throw mlc::Error("assignment entries look like var=element", pair);
            const std::string var = pair.substr(0, eq), label = pair.substr(eq + 1);
            const auto it = sorts.find(var);
            int sort = 0;
            if (it != sorts.end() && !it->second.empty()) sort = st.sort_id(it->second);
            const auto idx = st.element_index(sort, label);
            if (!idx)
                throw mlc::Error("unknown element in sort " + st.sorts[std::size_t(sort)].name,
                                 label);
            assignment[var] = mlc::ElemRef{sort, *idx};
        }
    }

    Json report = envelope("eval");
    report["formula"] = mlc::print_formula(*chosen->formula);
    report["name"] = chosen->name;
    report["mode"] = float_mode ? "float" : "exact";
    if (!group_path.empty()) report["group"] = group_path;
    if (!structure_path.empty()) report["structure"] = structure_path;
    Json asg = Json::object();
    for (const auto& [var, ref] : assignment)
        asg[var] = st.sorts[std::size_t(ref.sort)].elements[ref.index];
    report["assignment"] = std::move(asg);

    int exit_code = 0;
    if (float_mode) {
        const double v = mlc::eval<double>(st, *chosen->formula, assignment);
        report["value"] = v;
        if (chosen->has_condition) {
            const bool holds = chosen->eq_zero ? v <= mlc::kFloatTolerance
                                               : v <= mlc::rat_to_double(chosen->threshold) +
                                                          mlc::kFloatTolerance;
            report["holds"] = holds;
            exit_code = holds ? 0 : 1;
        }
    } else {
        const Rat v = mlc::eval<Rat>(st, *chosen->formula, assignment);
        report["value"] = mlc::rat_to_json(v);
        report["value_float"] = mlc::rat_to_double(v);
        if (chosen->has_condition) {
            const bool holds = chosen->eq_zero ? v == 0 : v <= chosen->threshold;
            report["holds"] = holds;
            exit_code = holds ? 0 : 1;
        }
    }
    out.emit(report);
    return exit_code;
}

bool has_collisions(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> s = v;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
}

std::vector<std::size_t> dedupe_stable(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out;
    for (const std::size_t x : v)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
}

int cmd_mu(const std::string& group_path, const std::string& f1_csv, const std::string& f2_csv,
           const std::string& q_text, bool open_ball, const std::string& method_name,
           int workers, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const auto F1 = resolve_elements(g, f1_csv);
    const auto F2 = resolve_elements(g, f2_csv);
    const Rat q = parse_rat(q_text);
    mlc::MuMethod method = mlc::MuMethod::Both;
    if (method_name == "deficiency") method = mlc::MuMethod::Deficiency;
    else if (method_name == "augmenting") method = mlc::MuMethod::Augmenting;
    else if (method_name != "both") throw mlc::Error("unknown method", method_name);

    const mlc::BallSpec u{q, !open_ball};
    const mlc::BipartiteInstance inst = mlc::build_RU(g, F1, F2, u);
    const mlc::MatchingResult r = mlc::matching_mu(inst, method, workers);

    Json report = envelope("mu");
    report["group"] = group_path;
    report["F1"] = labels_of(g, F1);
    report["F2"] = labels_of(g, F2);
    report["q"] = mlc::rat_to_json(q);
    report["ball"] = open_ball ? "open" : "closed";
    report["method"] = method_name;
    // Repeated labels inside a part: mu is index-level; flag it.
    report["collisions"] = has_collisions(F1) || has_collisions(F2);
    report["mu"] = r.mu;
    Json wit = Json::array();
    for (const std::size_t i : r.witness_S) wit.push_back(g.label(F1[i]));
    report["witness_S"] = std::move(wit);
    Json matching = Json::array();
    for (const auto& [i, j] : r.matching)
        matching.push_back(Json::array({g.label(F1[i]), g.label(F2[j])}));
    report["matching"] = std::move(matching);
    out.emit(report);
    return 0;
}

int cmd_phi(const std::string& group_path, const std::string& variant, int k,
            const std::string& q_text, const std::string& theta_text, const std::string& f_csv,
            const std::string& y_label, bool emit_dsl, bool check_ast, bool multiset,
            std::size_t budget, const Output& out) {
    mlc::PhiSpec spec;
    spec.k = k;
    spec.q = parse_rat(q_text);
    spec.theta = parse_rat(theta_text);
    if (variant == "pos") spec.positive = true;
    else if (variant == "neg") spec.positive = false;
    else throw mlc::Error("variant must be pos or neg", variant);

    Json report = envelope("phi");
    report["variant"] = variant;
    report["k"] = k;
    report["q"] = mlc::rat_to_json(spec.q);
    report["theta"] = mlc::rat_to_json(spec.theta);

    if (emit_dsl) {
        const mlc::FormulaPtr phi = mlc::build_phi(spec, budget);
        report["dsl"] = mlc::print_formula(*phi);
        report["nodes"] = phi->node_count();
        out.emit(report);
        return 0;
    }

    if (group_path.empty() || f_csv.empty() || y_label.empty())
        throw mlc::Error("evaluation needs --group, --F and --y (or use --emit-dsl)");
    const mlc::MetricGroup g = load_group(group_path);
    auto F = resolve_elements(g, f_csv);
    if (!multiset) F = dedupe_stable(F); // tuples are read as sets by default
    if (F.size() != std::size_t(k))
        throw mlc::Error("--F must list exactly k distinct elements",
                         "got " + std::to_string(F.size()) + ", k=" + std::to_string(k) +
                             (multiset ? "" : " (after deduplication)"));
    const auto y = g.find(y_label);
    if (!y) throw mlc::Error("unknown group element", y_label);

    report["group"] = group_path;
    report["F"] = labels_of(g, F);
    report["y"] = y_label;
    const Rat value = mlc::phi_value_fast(g, F, *y, spec);
    const bool holds = mlc::phi_holds_fast(g, F, *y, spec);
    report["value"] = mlc::rat_to_json(value);
    report["holds"] = holds;
    if (check_ast) {
        const mlc::LemmaCheck lc = mlc::lemma_equivalence_check(g, F, *y, spec);
        report["ast_value"] = mlc::rat_to_json(lc.ast_value);
        report["ast_agrees"] = lc.agree;
        if (!lc.agree) {
            out.emit(report);
            return 2;
        }
    }
    out.emit(report);
    return holds ? 0 : 1;
}

int cmd_folner(const std::string& group_path, const std::string& e_csv,
               const std::string& theta_text, const std::string& q_text, bool open_ball,
               const std::string& strategy_name, const std::string& ground_csv,
               std::size_t size_cap, std::uint64_t budget, int workers, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const auto E = resolve_elements(g, e_csv);
    mlc::SearchConfig config;
    config.budget = budget;
    config.size_cap = size_cap;
    config.workers = workers;
    if (!ground_csv.empty()) config.ground = resolve_elements(g, ground_csv);
    if (strategy_name == "exhaustive") config.strategy = mlc::SearchStrategy::Exhaustive;
    else if (strategy_name == "ball") config.strategy = mlc::SearchStrategy::BallGrowing;
    else if (strategy_name == "greedy") config.strategy = mlc::SearchStrategy::GreedyLocal;
    else throw mlc::Error("unknown strategy", strategy_name);

    const Rat theta = parse_rat(theta_text);
    const Rat q = parse_rat(q_text);
    const mlc::SearchOutcome res = mlc::folner_search(g, E, theta, q, !open_ball, config);

    Json report = envelope("folner-search");
    report["group"] = group_path;
    report["E"] = labels_of(g, E);
    report["theta"] = mlc::rat_to_json(theta);
    report["q"] = mlc::rat_to_json(q);
    report["ball"] = open_ball ? "open" : "closed";
    report["strategy"] = strategy_name;
    report["budget"] = budget;
    if (!ground_csv.empty()) report["ground"] = labels_of(g, config.ground);
    if (size_cap) report["size_cap"] = size_cap;
    switch (res.status) {
    case mlc::SearchStatus::Found: report["status"] = "found"; break;
    case mlc::SearchStatus::NotFound: report["status"] = "not-found"; break;
    case mlc::SearchStatus::BudgetExhausted: report["status"] = "budget-exhausted"; break;
    }
    report["examined"] = res.examined;
    report["skipped_undefined"] = res.skipped_undefined;
    report["exhaustive"] = res.exhaustive;
    if (res.certificate) report["certificate"] = certificate_to_json(g, *res.certificate);
    if (!res.closest.empty()) {
        Json closest = Json::array();
        for (const auto& c : res.closest) {
            Json e;
            e["F"] = labels_of(g, c.F);
            e["margin"] = mlc::rat_to_json(c.margin);
            closest.push_back(std::move(e));
        }
        report["closest"] = std::move(closest);
    }
    out.emit(report);
    return res.status == mlc::SearchStatus::Found ? 0 : 1;
}

int cmd_schema(const std::string& group_path, const std::string& variant,
               const std::string& q_text, const std::string& theta_text, int k_max,
               const std::string& ground_csv, const std::string& tuples_text, int tuple_len,
               std::size_t tuple_samples, std::uint64_t seed, std::uint64_t budget_per_k,
               const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    mlc::PhiSpec base;
    base.q = parse_rat(q_text);
    base.theta = parse_rat(theta_text);
    if (variant == "amen") base.positive = true;
    else if (variant == "nonamen") base.positive = false;
    else throw mlc::Error("schema variant must be amen or nonamen", variant);

    mlc::SchemaConfig config;
    config.k_max = k_max;
    config.tuple_len = tuple_len;
    config.tuple_samples = tuple_samples;
    config.seed = seed;
    config.budget_per_k = budget_per_k;
    if (!ground_csv.empty()) config.ground = dedupe_stable(resolve_elements(g, ground_csv));
    config.y_tuples = resolve_tuples(g, tuples_text);

    const mlc::SchemaReport res = mlc::schema_value(g, base, config);

    Json report = envelope("schema");
    report["group"] = group_path;
    report["variant"] = variant;
    report["q"] = mlc::rat_to_json(res.q);
    report["theta"] = mlc::rat_to_json(res.theta);
    report["k_max"] = k_max;
    report["seed"] = seed;
    report["budget_per_k"] = budget_per_k;
    if (!ground_csv.empty()) report["ground"] = labels_of(g, config.ground);
    Json tuples = Json::array();
    for (const auto& tr : res.tuples) {
        Json t;
        t["y"] = labels_of(g, tr.y);
        Json per_k = Json::array();
        for (const auto& e : tr.per_k) {
            Json ek;
            ek["k"] = e.k;
            ek["value"] = mlc::rat_to_json(e.value);
            ek["best_F"] = labels_of(g, e.best_F);
            ek["exhaustive"] = e.exhaustive;
            ek["examined"] = e.examined;
            ek["bound"] = e.bound_kind;
            per_k.push_back(std::move(ek));
        }
        t["per_k"] = std::move(per_k);
        switch (tr.status) {
        case mlc::TupleStatus::HoldsCertified: t["status"] = "holds-certified"; break;
        case mlc::TupleStatus::FailsCertified: t["status"] = "fails-certified"; break;
        case mlc::TupleStatus::Undetermined: t["status"] = "undetermined"; break;
        }
        tuples.push_back(std::move(t));
    }
    report["tuples"] = std::move(tuples);
    switch (res.verdict) {
    case mlc::SchemaVerdict::CertifiedForSamples: report["verdict"] = "certified-for-samples"; break;
    case mlc::SchemaVerdict::RefutedForSample: report["verdict"] = "refuted-for-sample"; break;
    case mlc::SchemaVerdict::Inconclusive: report["verdict"] = "inconclusive"; break;
    }
    out.emit(report);
    return res.verdict == mlc::SchemaVerdict::CertifiedForSamples ? 0 : 1;
}

int cmd_group_validate(const std::string& group_path, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path); // throws on axiom failure
    Json report = envelope("group-validate");
    report["group"] = group_path;
    report["kind"] = g.kind() == mlc::MetricGroup::Kind::FiniteTable ? "table" : "enumerated";
    report["size"] = g.size();
    report["identity"] = g.label(g.identity());
    report["bound"] = mlc::rat_to_json(g.bound());
    std::string witness;
    const bool biinv = g.check_biinvariance(&witness);
    report["biinvariant"] = biinv;
    if (!biinv) report["biinvariance_witness"] = witness;
    const bool abelian = g.check_abelian(&witness);
    report["abelian"] = abelian;
    bool assertions_ok = true;
    if (!g.assertions.empty()) {
        Json checked;
        for (const auto& [key, expected] : g.assertions) {
            bool actual = false;
            if (key == "biinvariant") actual = biinv;
            else if (key == "abelian") actual = abelian;
            else throw mlc::Error("unknown assertion", key);
            checked[key] = Json{{"declared", expected}, {"actual", actual}};
            if (expected != actual) assertions_ok = false;
        }
        report["assertions"] = std::move(checked);
    }
    report["assertions_ok"] = assertions_ok;
    out.emit(report);
    return assertions_ok ? 0 : 1;
}

int cmd_group_dstar(const std::string& group_path, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const mlc::MetricGroup gstar = g.biinvariantized();
    Json report = envelope("group-dstar");
    report["group"] = group_path;
    report["result"] = mlc::group_to_json(gstar);
    out.emit(report);
    return 0;
}

int cmd_group_ball(const std::string& group_path, const std::string& radius_text, bool open_ball,
                   const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const mlc::BallSpec spec{parse_rat(radius_text), !open_ball};
    const auto ball = g.ball(spec);
    Json report = envelope("group-ball");
    report["group"] = group_path;
    report["radius"] = mlc::rat_to_json(spec.radius);
    report["ball"] = open_ball ? "open" : "closed";
    report["size"] = ball.size();
    report["elements"] = labels_of(g, ball);
    out.emit(report);
    return 0;
}

// ------------------------------------------------------------------- rep --

mlc::UnitaryRep load_rep(const std::string& rep_path, const mlc::MetricGroup& g) {
    return mlc::rep_from_json(mlc::load_json_file(rep_path), g);
}

int cmd_rep_check(const std::string& group_path, const std::string& rep_path, double tol,
                  std::size_t samples, std::uint64_t seed, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const mlc::UnitaryRep rep = load_rep(rep_path, g);
    const mlc::RepCheckReport rc = mlc::check_rep(rep, tol);
    const mlc::FContinuityReport fc = mlc::check_F_continuity(rep, samples, {}, seed);
    Json report = envelope("rep-check");
    report["group"] = group_path;
    report["rep"] = rep_path;
    report["dim"] = rep.dim();
    report["tol"] = tol;
    report["seed"] = seed;
    Json axioms;
    axioms["pass"] = rc.pass;
    axioms["worst_unitarity"] = rc.worst_unitarity;
    if (!rc.worst_unitarity_at.empty()) axioms["worst_unitarity_at"] = rc.worst_unitarity_at;
    axioms["worst_homomorphism"] = rc.worst_hom;
    if (!rc.worst_hom_at.empty()) axioms["worst_homomorphism_at"] = rc.worst_hom_at;
    axioms["identity_residual"] = rc.identity_residual;
    report["axioms"] = std::move(axioms);
    Json cont;
    cont["pass"] = fc.pass;
    cont["worst_excess"] = fc.worst_excess;
    if (!fc.witness.empty()) cont["witness"] = fc.witness;
    cont["eps_grid"] = fc.eps_grid;
    cont["samples"] = fc.samples;
    cont["extension_pass"] = fc.extension_pass;
    report["f_continuity"] = std::move(cont);
    const bool pass = rc.pass && fc.pass;
    report["pass"] = pass;
    out.emit(report);
    return pass ? 0 : 1;
}

Json invariance_to_json(const mlc::MetricGroup& g, const mlc::InvarianceReport& r) {
    Json j;
    j["Q"] = labels_of(g, r.Q);
    j["lo"] = r.lo;
    j["hi"] = r.hi;
    j["fixed_space_dim"] = r.fixed_space_dim;
    j["method"] = r.method;
    Json w = Json::array();
    for (long i = 0; i < r.witness.size(); ++i)
        w.push_back(Json::array({r.witness[i].real(), r.witness[i].imag()}));
    j["witness"] = std::move(w);
    return j;
}

int cmd_rep_radius(const std::string& group_path, const std::string& rep_path,
                   const std::string& q_csv, bool no_refine, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const mlc::UnitaryRep rep = load_rep(rep_path, g);
    const auto Q = resolve_elements(g, q_csv);
    const mlc::InvarianceReport r = mlc::epsilon_invariant_radius(rep, Q, !no_refine);
    Json report = envelope("rep-radius");
    report["group"] = group_path;
    report["rep"] = rep_path;
    report["radius"] = invariance_to_json(g, r);
    out.emit(report);
    return 0;
}

int cmd_rep_niv(const std::string& group_path, const std::string& rep_path, std::size_t samples,
                std::uint64_t seed, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const mlc::UnitaryRep rep = load_rep(rep_path, g);
    const mlc::NivReport r = mlc::niv_value(rep, samples, seed);
    Json report = envelope("rep-niv");
    report["group"] = group_path;
    report["rep"] = rep_path;
    report["samples"] = samples;
    report["seed"] = seed;
    report["value"] = r.value;
    report["tag"] = r.tag;
    report["sampled_estimate"] = r.sampled_estimate;
    out.emit(report);
    return r.value == 0 ? 0 : 1;
}

int cmd_rep_kdelta(const std::string& group_path, const std::string& rep_path,
                   const std::string& delta_text, int k, int m, int n,
                   const std::string& tuples_text, std::size_t tuple_samples, std::uint64_t seed,
                   std::uint64_t budget, bool net_refine, const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    const mlc::UnitaryRep rep = load_rep(rep_path, g);
    mlc::KDeltaConfig config;
    config.delta = parse_rat(delta_text);
    config.k = k;
    config.m = m;
    config.n = n;
    config.tuples = resolve_tuples(g, tuples_text);
    config.tuple_samples = tuple_samples;
    config.seed = seed;
    config.budget = budget;
    config.net_refine = net_refine;
    const mlc::KDeltaReport r = mlc::kdelta_axiom_check(rep, config);
    Json report = envelope("rep-kdelta");
    report["group"] = group_path;
    report["rep"] = rep_path;
    report["delta"] = mlc::rat_to_json(r.delta);
    report["k"] = r.k;
    report["m"] = r.m;
    report["n"] = r.n;
    report["seed"] = seed;
    report["budget"] = budget;
    report["exhaustive"] = r.exhaustive;
    report["method"] = r.method;
    Json tuples = Json::array();
    for (const auto& t : r.tuples) {
        Json e;
        e["x"] = labels_of(g, t.x);
        e["residual"] = t.residual;
        tuples.push_back(std::move(e));
    }
    report["tuples"] = std::move(tuples);
    report["worst_residual"] = r.worst_residual;
    report["worst_tuple"] = labels_of(g, r.worst_tuple);
    report["holds"] = r.holds;
    out.emit(report);
    return r.holds ? 0 : 1;
}

int cmd_rep_refute(const std::string& group_path, const std::string& q_csv, double eps,
                   const std::vector<std::string>& rep_paths, const std::string& family_dir,
                   const Output& out) {
    const mlc::MetricGroup g = load_group(group_path);
    std::vector<std::string> paths = rep_paths;
    if (!family_dir.empty()) {
        std::vector<std::string> found;
        for (const auto& entry : std::filesystem::directory_iterator(family_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                found.push_back(entry.path().string());
        std::sort(found.begin(), found.end());
        paths.insert(paths.end(), found.begin(), found.end());
    }
    if (paths.empty()) throw mlc::Error("no representation files given");
    std::vector<mlc::UnitaryRep> reps;
    for (const auto& p : paths) reps.push_back(load_rep(p, g));
    const auto Q = resolve_elements(g, q_csv);
    const mlc::RefuteOutcome r = mlc::refute_kazhdan_set(reps, Q, eps);
    Json report = envelope("rep-refute");
    report["group"] = group_path;
    report["Q"] = labels_of(g, Q);
    report["eps"] = eps;
    report["family"] = paths;
    report["found"] = r.found;
    if (r.found) {
        report["witness_rep"] = paths[r.rep_index];
        report["radius"] = invariance_to_json(g, r.report);
    }
    out.emit(report);
    return r.found ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-logic toolkit for metric groups"};
    app.require_subcommand(1);
    app.fallthrough(); // --out/--workers may trail the subcommand arguments

    std::string out_path;
    int workers = 0;
    app.add_option("--out", out_path, "write the JSON report to this file instead of stdout");
    app.add_option("--workers", workers, "worker threads (0 = auto, ML_WORKERS env respected)");

    // parse/fmt/eval ---------------------------------------------------------
    CommonFormula cf;
    auto* parse = app.add_subcommand("parse", "parse formulas and report their canonical form");
    parse->add_option("--file", cf.file, "formula file");
    parse->add_option("--expr", cf.expr, "inline formula text");

    auto* fmt = app.add_subcommand("fmt", "reprint formulas in canonical form");
    fmt->add_option("--file", cf.file, "formula file");
    fmt->add_option("--expr", cf.expr, "inline formula text");

    std::string structure_path, group_path, assign_csv, formula_name;
    bool float_mode = false;
    auto* eval = app.add_subcommand("eval", "evaluate a formula on a structure");
    eval->add_option("--structure", structure_path, "structure JSON file");
    eval->add_option("--group", group_path, "group JSON file (evaluated on its structure)");
    eval->add_option("--file", cf.file, "formula file");
    eval->add_option("--expr", cf.expr, "inline formula text");
    eval->add_option("--name", formula_name, "formula name within the file");
    eval->add_option("--assign", assign_csv, "variable assignment var=element,...");
    eval->add_flag("--float", float_mode, "evaluate in double precision (default exact)");

    // mu ---------------------------------------------------------------------
    std::string f1_csv, f2_csv, q_text = "1/2", method_name = "both";
    bool open_ball = false;
    auto* mu = app.add_subcommand("mu", "matching number of R_U(F1, F2)");
    mu->add_option("--group", group_path, "group JSON file")->required();
    mu->add_option("--F1", f1_csv, "left set, comma-separated labels")->required();
    mu->add_option("--F2", f2_csv, "right set, comma-separated labels")->required();
    mu->add_option("--q", q_text, "ball radius (rational)");
    bool closed_ball = false;
    auto* mu_open = mu->add_flag("--open", open_ball, "open ball");
    mu->add_flag("--closed", closed_ball, "closed ball (the default)")->excludes(mu_open);
    mu->add_option("--method", method_name, "deficiency | augmenting | both");

    // phi ----------------------------------------------------------------------
    std::string variant = "pos", theta_text = "1/2", f_csv, y_label;
    int phi_k = 1;
    bool emit_dsl = false, check_ast = false;
    std::size_t node_budget = 2'000'000;
    auto* phi = app.add_subcommand("phi", "matching formula value on concrete data");
    phi->add_option("--group", group_path, "group JSON file");
    phi->add_option("--variant", variant, "pos | neg");
    phi->add_option("--k", phi_k, "tuple size k");
    phi->add_option("--q", q_text, "radius parameter q (rational)");
    phi->add_option("--theta", theta_text, "density parameter theta (rational)");
    phi->add_option("--F", f_csv, "k elements, comma-separated labels");
    phi->add_option("--y", y_label, "translating element");
    phi->add_flag("--emit-dsl", emit_dsl, "print the literal formula instead of evaluating");
    phi->add_flag("--check-ast", check_ast, "cross-check against exact AST evaluation");
    bool multiset = false;
    phi->add_flag("--multiset", multiset, "keep repeated --F entries instead of deduplicating");
    phi->add_option("--budget", node_budget, "node budget for the literal formula");

    // folner-search -------------------------------------------------------------
    std::string e_csv, strategy_name = "exhaustive", ground_csv;
    std::size_t size_cap = 0;
    std::uint64_t search_budget = 1'000'000;
    auto* folner = app.add_subcommand("folner-search", "search for a certificate set F");
    folner->add_option("--group", group_path, "group JSON file")->required();
    folner->add_option("--E", e_csv, "translation set, comma-separated labels")->required();
    folner->add_option("--theta", theta_text, "density threshold (rational)");
    folner->add_option("--q", q_text, "ball radius (rational)");
    auto* folner_open = folner->add_flag("--open", open_ball, "open ball");
    folner->add_flag("--closed", closed_ball, "closed ball (the default)")->excludes(folner_open);
    folner->add_option("--strategy", strategy_name, "exhaustive | ball | greedy");
    folner->add_option("--ground", ground_csv, "candidate pool (default: all elements)");
    folner->add_option("--size-cap", size_cap, "max |F| (0 = no cap)");
    folner->add_option("--budget", search_budget, "candidate budget");

    // schema ---------------------------------------------------------------------
    int k_max = 4, tuple_len = 1;
    std::size_t tuple_samples = 4;
    std::uint64_t seed = 0, budget_per_k = 1'000'000;
    std::string tuples_text;
    std::string schema_variant = "amen";
    auto* schema = app.add_subcommand("schema", "truncated schema value over sampled tuples");
    schema->add_option("--group", group_path, "group JSON file")->required();
    schema->add_option("--variant", schema_variant, "amen | nonamen");
    schema->add_option("--q", q_text, "radius parameter q (rational)");
    schema->add_option("--theta", theta_text, "density parameter theta (rational)");
    schema->add_option("--k-max", k_max, "largest k in the truncation");
    schema->add_option("--ground", ground_csv, "F candidate pool (default: all elements)");
    schema->add_option("--tuples", tuples_text, "explicit y tuples 'a,b;c,d' (default: sampled)");
    schema->add_option("--tuple-len", tuple_len, "sampled tuple length");
    schema->add_option("--tuple-samples", tuple_samples, "number of sampled tuples");
    schema->add_option("--seed", seed, "sampling seed");
    schema->add_option("--budget-per-k", budget_per_k, "candidate budget per k");

    // group ------------------------------------------------------------------------
    auto* group = app.add_subcommand("group", "group tooling");
    group->require_subcommand(1);
    auto* gvalidate = group->add_subcommand("validate", "check axioms, metric, and assertions");
    gvalidate->add_option("--group", group_path, "group JSON file")->required();
    auto* gdstar = group->add_subcommand("dstar", "bi-invariantize the metric (d*)");
    gdstar->add_option("--group", group_path, "group JSON file")->required();
    std::string radius_text = "1";
    auto* gball = group->add_subcommand("ball", "metric ball around the identity");
    gball->add_option("--group", group_path, "group JSON file")->required();
    gball->add_option("--radius", radius_text, "ball radius (rational)");
    gball->add_flag("--open", open_ball, "open ball (default closed)");

    // rep --------------------------------------------------------------------------
    auto* rep = app.add_subcommand("rep", "unitary representation checks");
    rep->require_subcommand(1);
    std::string rep_path, q_set_csv, delta_text = "1/2";
    double tol = 1e-6, eps = 0.1;
    std::size_t rep_samples = 16;
    bool no_refine = false, net_refine = false;
    int kd_k = 1, kd_m = 1, kd_n = 4;
    std::uint64_t kd_budget = 100'000;
    std::vector<std::string> rep_paths;
    std::string family_dir;

    auto* rcheck = rep->add_subcommand("check", "unitarity, homomorphism, F-continuity");
    rcheck->add_option("--group", group_path, "group JSON file")->required();
    rcheck->add_option("--rep", rep_path, "representation JSON file")->required();
    rcheck->add_option("--tol", tol, "axiom tolerance");
    rcheck->add_option("--samples", rep_samples, "continuity sample vectors");
    rcheck->add_option("--seed", seed, "sampling seed");

    auto* rradius = rep->add_subcommand("radius", "epsilon-invariance radius interval");
    rradius->add_option("--group", group_path, "group JSON file")->required();
    rradius->add_option("--rep", rep_path, "representation JSON file")->required();
    rradius->add_option("--Q", q_set_csv, "element set, comma-separated labels")->required();
    rradius->add_flag("--no-refine", no_refine, "skip witness refinement of hi");

    auto* rniv = rep->add_subcommand("niv", "no-invariant-vectors value");
    rniv->add_option("--group", group_path, "group JSON file")->required();
    rniv->add_option("--rep", rep_path, "representation JSON file")->required();
    rniv->add_option("--samples", rep_samples, "estimate sample count");
    rniv->add_option("--seed", seed, "sampling seed");

    auto* rkdelta = rep->add_subcommand("kdelta", "truncated K_delta axiom residuals");
    rkdelta->add_option("--group", group_path, "group JSON file")->required();
    rkdelta->add_option("--rep", rep_path, "representation JSON file")->required();
    rkdelta->add_option("--delta", delta_text, "K_delta ball radius (rational)");
    rkdelta->add_option("--k", kd_k, "tuple arity");
    rkdelta->add_option("--m", kd_m, "ball sort of the inf");
    rkdelta->add_option("--n", kd_n, "invariance level 1/n");
    rkdelta->add_option("--tuples", tuples_text, "explicit tuples 'a,b;c,d'");
    rkdelta->add_option("--tuple-samples", tuple_samples, "sampled tuples when not exhaustive");
    rkdelta->add_option("--seed", seed, "sampling seed");
    rkdelta->add_option("--budget", kd_budget, "max enumerated tuples");
    rkdelta->add_flag("--net", net_refine, "add lattice-net candidates");

    auto* rrefute = rep->add_subcommand("refute", "search a family for a Kazhdan counterexample");
    rrefute->add_option("--group", group_path, "group JSON file")->required();
    rrefute->add_option("--Q", q_set_csv, "element set, comma-separated labels")->required();
    rrefute->add_option("--eps", eps, "claimed Kazhdan constant");
    rrefute->add_option("--rep", rep_paths, "representation JSON files");
    rrefute->add_option("--family", family_dir, "directory of representation JSON files");

    CLI11_PARSE(app, argc, argv);

    const Output out{out_path};
    try {
        if (*parse) return cmd_parse(cf, out);
        if (*fmt) return cmd_fmt(cf, out);
        if (*eval) {
            cf.name = formula_name;
            return cmd_eval(structure_path, group_path, cf, assign_csv, float_mode, out);
        }
        if (*mu) return cmd_mu(group_path, f1_csv, f2_csv, q_text, open_ball, method_name,
                               workers, out);
        if (*phi) return cmd_phi(group_path, variant, phi_k, q_text, theta_text, f_csv, y_label,
                                 emit_dsl, check_ast, multiset, node_budget, out);
        if (*folner) return cmd_folner(group_path, e_csv, theta_text, q_text, open_ball,
                                       strategy_name, ground_csv, size_cap, search_budget,
                                       workers, out);
        if (*schema) return cmd_schema(group_path, schema_variant, q_text, theta_text, k_max,
                                       ground_csv, tuples_text, tuple_len, tuple_samples, seed,
                                       budget_per_k, out);
        if (*group) {
            if (*gvalidate) return cmd_group_validate(group_path, out);
            if (*gdstar) return cmd_group_dstar(group_path, out);
            if (*gball) return cmd_group_ball(group_path, radius_text, open_ball, out);
        }
        if (*rep) {
            if (*rcheck) return cmd_rep_check(group_path, rep_path, tol, rep_samples, seed, out);
            if (*rradius) return cmd_rep_radius(group_path, rep_path, q_set_csv, no_refine, out);
            if (*rniv) return cmd_rep_niv(group_path, rep_path, rep_samples, seed, out);
            if (*rkdelta)
                return cmd_rep_kdelta(group_path, rep_path, delta_text, kd_k, kd_m, kd_n,
                                      tuples_text, tuple_samples, seed, kd_budget, net_refine,
                                      out);
            if (*rrefute)
                return cmd_rep_refute(group_path, q_set_csv, eps, rep_paths, family_dir, out);
        }
        throw mlc::Error("no subcommand selected");
    } catch (const mlc::Error& e) {
        Json err{{"error", e.what()}};
        if (!e.detail().empty()) err["detail"] = e.detail();
        std::cerr << err.dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        Json err{{"error", e.what()}};
        std::cerr << err.dump() << '\n';
        return 2;
    }
}
