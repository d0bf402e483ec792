#pragma once

#include "mlc/modulus.hpp"
#include "mlc/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlc {

// Metric on one sort: either the discrete 0/1 metric (stored implicitly) or
// a dense n×n table of exact rationals.
struct MetricTable {
    bool discrete = true;
    std::vector<Rat> table; // row-major n×n when !discrete

    Rat dist(std::size_t n, std::size_t i, std::size_t j) const {
        if (discrete) return Rat(i == j ? 0 : 1);
        return table[i * n + j];
    }
};

struct SortDef {
    std::string name;
    std::vector<std::string> elements;
    MetricTable metric;

    std::size_t size() const { return elements.size(); }
    Rat dist(std::size_t i, std::size_t j) const { return metric.dist(elements.size(), i, j); }
};

// [0, D]-valued predicate with declared per-argument continuity moduli.
struct PredicateDef {
    std::string name;
    std::vector<int> arg_sorts;
    std::vector<Modulus> arg_moduli;
    std::vector<Rat> table; // row-major over argument tuples
};

// Possibly partial function; table entries are element indices into the
// result sort, or -1 where undefined (e.g. products leaving an enumerated
// ball). Arity 0 = constant (table has one entry).
struct FunctionDef {
    std::string name;
    std::vector<int> arg_sorts;
    int result_sort = 0;
    std::vector<Modulus> arg_moduli;
    std::vector<std::int32_t> table;
};

// Finite many-sorted metric structure with [0, D]-valued predicates.
class Structure {
public:
    Rat bound{1}; // D: common bound for the metric(s), predicates, constants
    std::vector<SortDef> sorts;
    std::vector<PredicateDef> predicates;
    std::vector<FunctionDef> functions;

    int sort_id(const std::string& name) const;          // throws StructureError
    std::optional<int> find_sort(const std::string& name) const;
    const PredicateDef* find_predicate(const std::string& name) const;
    const FunctionDef* find_function(const std::string& name) const;

    std::optional<std::size_t> element_index(int sort, const std::string& label) const;

    // Row-major index of an argument tuple for a predicate/function symbol.
    std::size_t tuple_index(const std::vector<int>& arg_sorts,
                            const std::vector<std::size_t>& args) const;

    // Structural and metric-axiom validation. `tol` is the slack allowed on
    // reflexivity / symmetry / triangle violations: 0 for exact rational
    // tables, kFloatTolerance for tables derived from floating-point data.
    void validate(const Rat& tol = Rat(0)) const;
};

// A point of a structure: element `index` of sort `sort`.
struct ElemRef {
    int sort = 0;
    std::size_t index = 0;
    bool operator==(const ElemRef&) const = default;
};

using Assignment = std::map<std::string, ElemRef>;

} // namespace mlc
