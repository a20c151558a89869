// Independent Hamiltonian-cycle checker: permutation enumeration over the
// vertex set, no ASP machinery involved.  Used by the test suites to
// cross-check the solver.

#pragma once

#include <set>
#include <string>
#include <utility>

namespace masp {

struct GraphOracle {
    std::set<std::string> vertices;
    std::set<std::pair<std::string, std::string>> edges;

    /// Vertices occurring in the edge set.
    static GraphOracle from_edges(std::set<std::pair<std::string, std::string>> es);
};

using EdgeSet = std::set<std::pair<std::string, std::string>>;

/// All Hamiltonian cycles of g as edge sets: arrangements v1..vn of the
/// distinct vertices with every (vi, vi+1) and (vn, v1) an edge.  A single
/// vertex needs its self-loop; an empty graph has none.
std::set<EdgeSet> hamiltonian_cycles(const GraphOracle& g);

}  // namespace masp
