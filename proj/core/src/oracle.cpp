#include "masp/oracle.hpp"

#include <algorithm>
#include <vector>

namespace masp {

GraphOracle GraphOracle::from_edges(std::set<std::pair<std::string, std::string>> es) {
    GraphOracle g;
    for (const auto& [a, b] : es) {
        g.vertices.insert(a);
        g.vertices.insert(b);
    }
    g.edges = std::move(es);
    return g;
}

std::set<EdgeSet> hamiltonian_cycles(const GraphOracle& g) {
    std::set<EdgeSet> out;
    std::vector<std::string> vs(g.vertices.begin(), g.vertices.end());
    if (vs.empty()) return out;
    std::sort(vs.begin(), vs.end());
    do {
        EdgeSet cycle;
        bool ok = true;
        for (size_t i = 0; i < vs.size(); ++i) {
            auto e = std::make_pair(vs[i], vs[(i + 1) % vs.size()]);
            if (!g.edges.count(e)) {
                ok = false;
                break;
            }
            cycle.insert(std::move(e));
        }
        if (ok) out.insert(std::move(cycle));
    } while (std::next_permutation(vs.begin(), vs.end()));
    return out;
}

}  // namespace masp
