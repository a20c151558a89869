#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "masp/ast.hpp"

namespace masp {

struct Domain {
    std::vector<std::string> constants;  // sorted, unique, non-empty for evaluation

    static Domain of(std::vector<std::string> cs);
    bool contains(const std::string& c) const;
    size_t size() const { return constants.size(); }

    friend bool operator==(const Domain& a, const Domain& b) {
        return a.constants == b.constants;
    }
};

using Tuple = std::vector<std::string>;

struct Interpretation {
    Domain domain;
    std::map<PredicateSymbol, std::set<Tuple>> extents;  // absent symbol = empty extent

    bool holds(const PredicateSymbol& p, const Tuple& t) const;
    void add(const PredicateSymbol& p, Tuple t);

    /// Ground atoms in canonical order.
    std::vector<Atom> atoms() const;
    /// Space-separated canonical atom text ("in(a,b) in(b,c)").
    std::string to_text() const;
    size_t atom_count() const;

    friend bool operator==(const Interpretation& a, const Interpretation& b);
    friend bool operator!=(const Interpretation& a, const Interpretation& b) { return !(a == b); }
    friend bool operator<(const Interpretation& a, const Interpretation& b);
};

using SOAssignment = std::map<PredicateVariable, std::set<Tuple>>;

struct SolveOptions {
    enum class Strategy { splitting, naive };
    Strategy strategy = Strategy::splitting;
    std::optional<Domain> domain_override;
    std::uint64_t max_branch = 1u << 20;  // cap on candidate subsets per def-module
    std::optional<std::vector<PredicateSymbol>> show_override;
    int jobs = 1;
};

}  // namespace masp
