#include "mlc/json_io.hpp"

#include "mlc/errors.hpp"

#include <fstream>
#include <sstream>

namespace mlc {

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& detail = {}) {
    throw Error("invalid JSON input: " + what, detail);
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

} // namespace

Json rat_to_json(const Rat& r) { return rat_to_string(r); }

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        const auto r = rat_parse(j.get<std::string>());
        if (!r) bad("malformed rational", j.get<std::string>());
        return *r;
    }
    bad("expected a rational (string \"p/q\" or integer)", j.dump());
}

Json modulus_to_json(const Modulus& m) {
    if (m.is_identity()) return "identity";
    Json points = Json::array();
    for (const auto& p : m.points())
        points.push_back(Json::array({rat_to_json(p.eps), rat_to_json(p.delta)}));
    return Json{{"points", points}, {"tail_slope", rat_to_json(m.tail_slope())}};
}

Modulus modulus_from_json(const Json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "identity") return Modulus::identity();
        bad("unknown modulus name", j.get<std::string>());
    }
    std::vector<Modulus::Point> points;
    for (const auto& p : field(j, "points")) {
        if (!p.is_array() || p.size() != 2) bad("modulus point must be [eps, delta]", p.dump());
        points.push_back({rat_from_json(p[0]), rat_from_json(p[1])});
    }
    return Modulus::table(std::move(points), rat_from_json(field(j, "tail_slope")));
}

// ------------------------------------------------------------- structures --

namespace {

Json metric_to_json(const MetricTable& m, std::size_t n) {
    if (m.discrete) return "discrete";
    Json rows = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(rat_to_json(m.dist(n, i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

MetricTable metric_from_json(const Json& j, std::size_t n) {
    MetricTable m;
    if (j.is_string()) {
        if (j.get<std::string>() != "discrete") bad("unknown metric name", j.get<std::string>());
        return m;
    }
    if (!j.is_array() || j.size() != n) bad("metric table must have one row per element");
    m.discrete = false;
    m.table.reserve(n * n);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != n) bad("metric row has wrong length");
        for (const auto& v : row) m.table.push_back(rat_from_json(v));
    }
    return m;
}

Json moduli_to_json(const std::vector<Modulus>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) out.push_back(modulus_to_json(m));
    return out;
}

std::vector<Modulus> moduli_from_json(const Json& j, std::size_t arity) {
    std::vector<Modulus> out;
    if (j.is_null()) {
        out.assign(arity, Modulus::identity());
        return out;
    }
    for (const auto& m : j) out.push_back(modulus_from_json(m));
    if (out.size() != arity) bad("arg_moduli length must match arg_sorts");
    return out;
}

} // namespace

Json structure_to_json(const Structure& st) {
    Json j;
    j["bound"] = rat_to_json(st.bound);
    Json sorts = Json::array();
    for (const auto& s : st.sorts)
        sorts.push_back(Json{{"name", s.name},
                             {"elements", s.elements},
                             {"metric", metric_to_json(s.metric, s.size())}});
    j["sorts"] = std::move(sorts);
    Json preds = Json::array();
    for (const auto& p : st.predicates) {
        Json table = Json::array();
        for (const auto& v : p.table) table.push_back(rat_to_json(v));
        Json arg_sorts = Json::array();
        for (const int s : p.arg_sorts) arg_sorts.push_back(st.sorts[std::size_t(s)].name);
        preds.push_back(Json{{"name", p.name},
                             {"arg_sorts", arg_sorts},
                             {"arg_moduli", moduli_to_json(p.arg_moduli)},
                             {"table", table}});
    }
    j["predicates"] = std::move(preds);
    Json funcs = Json::array();
    for (const auto& f : st.functions) {
        Json arg_sorts = Json::array();
        for (const int s : f.arg_sorts) arg_sorts.push_back(st.sorts[std::size_t(s)].name);
        funcs.push_back(Json{{"name", f.name},
                             {"arg_sorts", arg_sorts},
                             {"result_sort", st.sorts[std::size_t(f.result_sort)].name},
                             {"arg_moduli", moduli_to_json(f.arg_moduli)},
                             {"table", f.table}});
    }
    j["functions"] = std::move(funcs);
    return j;
}

Structure structure_from_json(const Json& j) {
    Structure st;
    st.bound = rat_from_json(field(j, "bound"));
    for (const auto& s : field(j, "sorts")) {
        SortDef sd;
        sd.name = field(s, "name").get<std::string>();
        for (const auto& e : field(s, "elements")) sd.elements.push_back(e.get<std::string>());
        sd.metric = metric_from_json(field(s, "metric"), sd.elements.size());
        st.sorts.push_back(std::move(sd));
    }
    auto sort_of = [&](const Json& name) {
        return st.sort_id(name.get<std::string>());
    };
    if (j.contains("predicates"))
        for (const auto& p : j.at("predicates")) {
            PredicateDef pd;
            pd.name = field(p, "name").get<std::string>();
            for (const auto& s : field(p, "arg_sorts")) pd.arg_sorts.push_back(sort_of(s));
            pd.arg_moduli = moduli_from_json(p.contains("arg_moduli") ? p.at("arg_moduli")
                                                                      : Json(nullptr),
                                             pd.arg_sorts.size());
            for (const auto& v : field(p, "table")) pd.table.push_back(rat_from_json(v));
            st.predicates.push_back(std::move(pd));
        }
    if (j.contains("functions"))
        for (const auto& f : j.at("functions")) {
            FunctionDef fd;
            fd.name = field(f, "name").get<std::string>();
            for (const auto& s : field(f, "arg_sorts")) fd.arg_sorts.push_back(sort_of(s));
            fd.result_sort = sort_of(field(f, "result_sort"));
            fd.arg_moduli = moduli_from_json(f.contains("arg_moduli") ? f.at("arg_moduli")
                                                                      : Json(nullptr),
                                             fd.arg_sorts.size());
            for (const auto& v : field(f, "table"))
                fd.table.push_back(v.get<std::int32_t>());
            st.functions.push_back(std::move(fd));
        }
    st.validate();
    return st;
}

// ----------------------------------------------------------------- groups --

Json group_to_json(const MetricGroup& g) {
    if (g.kind() != MetricGroup::Kind::FiniteTable)
        throw Error("enumerated groups are defined by their spec file; nothing to serialize");
    Json j;
    j["kind"] = "table";
    j["labels"] = g.labels();
    j["identity"] = g.label(g.identity());
    Json mul = Json::array();
    for (std::size_t x = 0; x < g.size(); ++x) {
        Json row = Json::array();
        for (std::size_t y = 0; y < g.size(); ++y)
            row.push_back(static_cast<std::int64_t>(*g.mul(x, y)));
        mul.push_back(std::move(row));
    }
    j["mul"] = std::move(mul);
    j["metric"] = metric_to_json(g.metric(), g.size());
    j["bound"] = rat_to_json(g.bound());
    if (!g.assertions.empty()) j["assertions"] = g.assertions;
    return j;
}

MetricGroup group_from_json(const Json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "table") {
        std::vector<std::string> labels;
        for (const auto& l : field(j, "labels")) labels.push_back(l.get<std::string>());
        const std::size_t n = labels.size();
        std::vector<std::int32_t> mul;
        mul.reserve(n * n);
        const Json& rows = field(j, "mul");
        if (!rows.is_array() || rows.size() != n) bad("mul table must have one row per element");
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != n) bad("mul row has wrong length");
            for (const auto& v : row) mul.push_back(v.get<std::int32_t>());
        }
        MetricTable metric = metric_from_json(field(j, "metric"), n);
        Rat bound = j.contains("bound") ? rat_from_json(j.at("bound")) : Rat(1);
        MetricGroup g = MetricGroup::make_finite(std::move(labels), std::move(mul),
                                                 field(j, "identity").get<std::string>(),
                                                 std::move(metric), std::move(bound));
        if (j.contains("assertions"))
            for (const auto& [k, v] : j.at("assertions").items()) g.assertions[k] = v.get<bool>();
        return g;
    }
    if (kind == "enumerated") {
        BallFamilySpec spec;
        const std::string family = field(j, "family").get<std::string>();
        if (family == "free") {
            spec.family = BallFamilySpec::Family::Free;
            if (j.contains("rank")) spec.rank = j.at("rank").get<int>();
        } else if (family == "zpow") {
            spec.family = BallFamilySpec::Family::ZPow;
            if (j.contains("dim")) spec.dim = j.at("dim").get<int>();
        } else if (family == "matrix") {
            spec.family = BallFamilySpec::Family::MatrixGen;
            for (const auto& g : field(j, "generators")) {
                const auto m = IntMatrix::parse(g.get<std::string>());
                if (!m) bad("cannot parse generator matrix", g.get<std::string>());
                spec.generators.push_back(*m);
            }
        } else {
            bad("unknown enumerated family", family);
        }
        spec.radius = field(j, "radius").get<int>();
        if (j.contains("cap")) spec.cap = j.at("cap").get<std::size_t>();
        return MetricGroup::enumerate_ball(spec);
    }
    bad("unknown group kind", kind);
}

// ------------------------------------------------------------------- reps --

namespace {

Json matrix_to_json(const Eigen::MatrixXcd& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& j, int dim, const std::string& where) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
        bad("matrix must have " + std::to_string(dim) + " rows", where);
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
            bad("matrix row has wrong length", where);
        for (int c = 0; c < dim; ++c) {
            const Json& e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2) bad("matrix entry must be [re, im]", where);
            m(r, c) = std::complex<double>(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

} // namespace

Json rep_to_json(const UnitaryRep& rep, const std::string& group_ref) {
    Json j;
    if (!group_ref.empty()) j["group"] = group_ref;
    j["dim"] = rep.dim();
    Json ms;
    for (const std::size_t g : rep.defined_elements())
        ms[rep.group().label(g)] = matrix_to_json(rep.matrix(g));
    j["matrices"] = std::move(ms);
    j["modulus"] = modulus_to_json(rep.modulus());
    return j;
}

UnitaryRep rep_from_json(const Json& j, const MetricGroup& group) {
    const int dim = field(j, "dim").get<int>();
    Modulus f = j.contains("modulus") ? modulus_from_json(j.at("modulus")) : Modulus::identity();
    const bool has_matrices = j.contains("matrices");
    const bool has_generators = j.contains("generators");
    if (has_matrices == has_generators)
        bad("a representation needs exactly one of 'matrices' or 'generators'");
    std::map<std::string, Eigen::MatrixXcd> ms;
    const Json& src = has_matrices ? j.at("matrices") : j.at("generators");
    if (!src.is_object()) bad("matrices/generators must map labels to matrices");
    for (const auto& [label, m] : src.items()) ms[label] = matrix_from_json(m, dim, label);
    return has_matrices ? UnitaryRep::from_matrices(group, dim, ms, std::move(f))
                        : UnitaryRep::from_generators(group, dim, ms, std::move(f));
}

// -------------------------------------------------------------------- I/O --

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file", path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw Error("JSON parse failure", path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file", path);
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed", path);
}

} // namespace mlc
