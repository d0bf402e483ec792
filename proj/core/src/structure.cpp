#include "mlc/structure.hpp"

#include "mlc/errors.hpp"

namespace mlc {

int Structure::sort_id(const std::string& name) const {
    auto s = find_sort(name);
    if (!s) throw StructureError("unknown sort", name);
    return *s;
}

std::optional<int> Structure::find_sort(const std::string& name) const {
    for (std::size_t i = 0; i < sorts.size(); ++i)
        if (sorts[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

const PredicateDef* Structure::find_predicate(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

const FunctionDef* Structure::find_function(const std::string& name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

std::optional<std::size_t> Structure::element_index(int sort, const std::string& label) const {
    const auto& els = sorts[static_cast<std::size_t>(sort)].elements;
    for (std::size_t i = 0; i < els.size(); ++i)
        if (els[i] == label) return i;
    return std::nullopt;
}

std::size_t Structure::tuple_index(const std::vector<int>& arg_sorts,
                                   const std::vector<std::size_t>& args) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::size_t n = sorts[static_cast<std::size_t>(arg_sorts[i])].size();
        idx = idx * n + args[i];
    }
    return idx;
}

void Structure::validate(const Rat& tol) const {
    if (bound <= 0) throw StructureError("structure bound D must be positive", rat_to_string(bound));

    for (const auto& s : sorts) {
        if (s.elements.empty())
            throw StructureError("sort has empty carrier", s.name);
        for (std::size_t i = 0; i < s.elements.size(); ++i)
            for (std::size_t j = i + 1; j < s.elements.size(); ++j)
                if (s.elements[i] == s.elements[j])
                    throw StructureError("duplicate element label in sort " + s.name, s.elements[i]);
        if (s.metric.discrete) {
            if (bound < 1)
                throw StructureError("discrete metric needs D >= 1 on sort " + s.name);
            continue;
        }
        const std::size_t n = s.size();
        if (s.metric.table.size() != n * n)
            throw StructureError("metric table size mismatch on sort " + s.name);
        for (std::size_t i = 0; i < n; ++i) {
            if (rat_abs(s.dist(i, i)) > tol)
                throw StructureError("metric not reflexive on sort " + s.name, s.elements[i]);
            for (std::size_t j = 0; j < n; ++j) {
                const Rat dij = s.dist(i, j);
                if (dij < 0)
                    throw StructureError("negative distance on sort " + s.name,
                                         s.elements[i] + "," + s.elements[j]);
                if (dij > bound)
                    throw StructureError("distance exceeds bound D on sort " + s.name,
                                         s.elements[i] + "," + s.elements[j]);
                if (i != j && dij <= tol)
                    throw StructureError("distinct elements at distance 0 on sort " + s.name,
                                         s.elements[i] + "," + s.elements[j]);
                if (rat_abs(dij - s.dist(j, i)) > tol)
                    throw StructureError("metric not symmetric on sort " + s.name,
                                         s.elements[i] + "," + s.elements[j]);
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (s.dist(i, k) > s.dist(i, j) + s.dist(j, k) + tol)
                        throw StructureError(
                            "triangle inequality fails on sort " + s.name,
                            s.elements[i] + "," + s.elements[j] + "," + s.elements[k]);
    }

    for (const auto& p : predicates) {
        if (p.arg_moduli.size() != p.arg_sorts.size())
            throw StructureError("predicate moduli arity mismatch", p.name);
        std::size_t cells = 1;
        for (int sid : p.arg_sorts) {
            if (sid < 0 || sid >= static_cast<int>(sorts.size()))
                throw StructureError("predicate argument sort out of range", p.name);
            cells *= sorts[static_cast<std::size_t>(sid)].size();
        }
        if (p.table.size() != cells)
            throw StructureError("predicate table size mismatch", p.name);
        for (const auto& v : p.table)
            if (v < 0 || v > bound)
                throw StructureError("predicate value outside [0, D]", p.name);
    }

    for (const auto& f : functions) {
        if (f.arg_moduli.size() != f.arg_sorts.size())
            throw StructureError("function moduli arity mismatch", f.name);
        if (f.result_sort < 0 || f.result_sort >= static_cast<int>(sorts.size()))
            throw StructureError("function result sort out of range", f.name);
        std::size_t cells = 1;
        for (int sid : f.arg_sorts) {
            if (sid < 0 || sid >= static_cast<int>(sorts.size()))
                throw StructureError("function argument sort out of range", f.name);
            cells *= sorts[static_cast<std::size_t>(sid)].size();
        }
        if (f.table.size() != cells)
            throw StructureError("function table size mismatch", f.name);
        const auto result_size = static_cast<std::int32_t>(sorts[static_cast<std::size_t>(f.result_sort)].size());
        for (const auto& v : f.table)
            if (v < -1 || v >= result_size)
                throw StructureError("function table entry out of range", f.name);
    }
}

} // namespace mlc
