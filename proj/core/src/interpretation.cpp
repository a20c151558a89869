#include "masp/interpretation.hpp"

#include <algorithm>

#include "masp/ast.hpp"

namespace masp {

Domain Domain::of(std::vector<std::string> cs) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    return Domain{std::move(cs)};
}

bool Domain::contains(const std::string& c) const {
    return std::binary_search(constants.begin(), constants.end(), c);
}

bool Interpretation::holds(const PredicateSymbol& p, const Tuple& t) const {
    auto it = extents.find(p);
    return it != extents.end() && it->second.count(t) > 0;
}

void Interpretation::add(const PredicateSymbol& p, Tuple t) {
    if (static_cast<int>(t.size()) != p.arity)
        throw error("tuple arity does not match " + p.to_string());
    extents[p].insert(std::move(t));
}

std::vector<Atom> Interpretation::atoms() const {
    std::vector<Atom> out;
    for (const auto& [p, tuples] : extents) {
        for (const auto& t : tuples) {
            Atom a;
            a.pred = p;
            for (const auto& c : t) a.args.push_back(Term::constant(c));
            out.push_back(std::move(a));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string Interpretation::to_text() const {
    std::string s;
    bool first = true;
    for (const auto& a : atoms()) {
        if (!first) s += " ";
        s += a.to_string();
        first = false;
    }
    return s;
}

size_t Interpretation::atom_count() const {
    size_t n = 0;
    for (const auto& [p, tuples] : extents) n += tuples.size();
    return n;
}

bool operator==(const Interpretation& a, const Interpretation& b) {
    if (!(a.domain == b.domain)) return false;
    // compare modulo empty extents
    auto nonempty = [](const Interpretation& i) {
        std::map<PredicateSymbol, std::set<Tuple>> out;
        for (const auto& [p, ts] : i.extents)
            if (!ts.empty()) out.emplace(p, ts);
        return out;
    };
    return nonempty(a) == nonempty(b);
}

bool operator<(const Interpretation& a, const Interpretation& b) {
    size_t ca = a.atom_count(), cb = b.atom_count();
    if (ca != cb) return ca < cb;
    return a.atoms() < b.atoms();
}

}  // namespace masp
