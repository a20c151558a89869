// Internal grounding machinery.  A GroundSpace interns ground atoms over a
// fixed domain: every predicate symbol (and every second-order binder
// occurrence) gets a contiguous block of atom ids, and interpretations
// become bit vectors.  Formulas ground to a propositional DAG whose only
// remaining quantifiers are second-order; those are evaluated by subset
// enumeration in increasing cardinality with early exit.
//
// Ground-time rewrites, all classical-equivalence preserving:
//   - constant folding of connectives,
//   - n-ary flattening of conjunction/disjunction,
//   - conjunct ordering: SO-quantifier-free children first, then by size,
//   - miniscoping of SO quantifiers over conjunctions.
//
// A quantifier node's value is a function of its free atoms only, so
// repeated evaluations under the same outer assignment are answered from a
// per-thread cache (EvalCache) keyed by those bits.

#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "masp/ast.hpp"
#include "masp/evaluator.hpp"
#include "masp/interpretation.hpp"

namespace masp::detail {

struct Bits {
    std::vector<std::uint64_t> w;
    Bits() = default;
    explicit Bits(size_t n) : w((n + 63) / 64, 0) {}
    void resize(size_t n) { w.assign((n + 63) / 64, 0); }
    bool test(std::uint32_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    void set(std::uint32_t i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::uint32_t i) { w[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
};

struct Slot {
    int arity = 0;
    std::uint32_t base = 0;
    std::uint32_t count = 0;
};

class GroundSpace {
public:
    explicit GroundSpace(Domain dom);

    const Domain& domain() const { return dom_; }
    int num_consts() const { return static_cast<int>(dom_.constants.size()); }
    int const_id(const std::string& c) const;  // -1 when not in the domain

    int pred_slot(const PredicateSymbol& p);             // interned
    int find_pred_slot(const PredicateSymbol& p) const;  // -1 when unknown
    int new_var_slot(int arity);                         // one per binder occurrence
    const Slot& slot(int s) const { return slots_[static_cast<size_t>(s)]; }
    std::uint32_t atom_count() const { return next_atom_; }

    std::uint32_t atom_id(int slot, const std::vector<int>& tuple) const;
    std::vector<int> atom_tuple(int slot, std::uint32_t id) const;

    /// Writes an interpretation's extents into bits (tuples outside the
    /// domain are ignored; unknown predicates create no slot).
    void load(Bits& bits, const Interpretation& i) const;

    /// Reads a slot block back into tuples of constants.
    std::set<Tuple> extract(const Bits& bits, int slot) const;

private:
    Domain dom_;
    std::map<std::string, int> const_ids_;
    std::map<PredicateSymbol, int> pred_slots_;
    std::vector<Slot> slots_;
    std::uint32_t next_atom_ = 0;

    int add_slot(int arity);
};

// ── ground formula DAG ──────────────────────────────────────────────────────

struct GNode {
    enum class Kind : std::uint8_t {
        ffalse,
        ttrue,
        atom,
        band,
        bor,
        implies,
        exists_so,
        forall_so
    };
    Kind kind = Kind::ffalse;
    std::uint32_t atom = 0;
    int slot = -1;  // exists_so / forall_so
    const GNode* a = nullptr;
    const GNode* b = nullptr;
    std::vector<const GNode*> kids;
    std::vector<int> free_so;  // sorted free SO slots of the subtree
    std::uint32_t size = 1;
    bool has_so_quant = false;
    int cache_id = -1;                     // quantifier nodes with few free atoms
    std::vector<std::uint32_t> free_atoms;  // key atoms for cached nodes
};

/// Per-thread memo for quantifier nodes; reusable across evaluations of the
/// same GroundFormula.
struct EvalCache {
    std::vector<std::unordered_map<std::uint64_t, bool>> memo;
};

class GroundFormula {
public:
    /// Grounds f over the shared space.  preset_slots supplies slots for
    /// free predicate variables (the caller manages their bits directly).
    GroundFormula(std::shared_ptr<GroundSpace> space, const FormulaPtr& f,
                  const std::map<PredicateVariable, int>& preset_slots = {});

    bool eval(Bits& bits) const;                    // uncached
    bool eval(Bits& bits, EvalCache& cache) const;  // memoized across calls
    const GroundSpace& space() const { return *space_; }
    int cache_slots() const { return next_cache_id_; }

private:
    struct Env;
    const GNode* build(const FormulaPtr& f, Env& env);
    GNode* mk(GNode n);
    const GNode* mk_const(bool v);
    const GNode* mk_nary(GNode::Kind k, std::vector<const GNode*> kids);
    const GNode* mk_implies(const GNode* a, const GNode* b);
    const GNode* mk_exists_so(int slot, const GNode* body);
    const GNode* mk_forall_so(int slot, const GNode* body);
    const GNode* mk_quant(GNode::Kind kind, int slot, const GNode* body);

    std::shared_ptr<GroundSpace> space_;
    std::deque<GNode> arena_;
    const GNode* root_ = nullptr;
    int next_cache_id_ = 0;
};

// Enumerates all 2^m masks in increasing popcount (Gosper's hack inside each
// cardinality class); visit returns true to stop.  m <= 63.
template <typename Visit>
bool masks_by_popcount(int m, Visit&& visit) {
    if (m < 0 || m > 63)
        throw resource_limit_error("second-order block of " + std::to_string(m) +
                                   " atoms exceeds the enumeration limit");
    for (int k = 0; k <= m; ++k) {
        if (k == 0) {
            if (visit(std::uint64_t(0))) return true;
            continue;
        }
        std::uint64_t mask = (std::uint64_t(1) << k) - 1;
        const std::uint64_t limit = std::uint64_t(1) << m;
        while (true) {
            if (visit(mask)) return true;
            std::uint64_t c = mask & (~mask + 1);
            std::uint64_t r = mask + c;
            std::uint64_t next = (((r ^ mask) >> 2) / c) | r;
            if (next >= limit) break;
            mask = next;
        }
    }
    return false;
}

}  // namespace masp::detail
