#include "masp/evaluator.hpp"

#include <algorithm>
#include <thread>

#include "ground.hpp"
#include "masp/transform.hpp"

namespace masp {

using detail::Bits;
using detail::GroundFormula;
using detail::GroundSpace;

Domain herbrand_universe(const ModularProgram& p, const std::optional<DefModule>& inst) {
    std::set<std::string> cs = constants_of(p);
    if (inst) {
        auto more = constants_of(*inst);
        cs.insert(more.begin(), more.end());
    }
    if (cs.empty())
        throw error(
            "the program mentions no constants; supply a domain override (--domain-bound)");
    return Domain::of(std::vector<std::string>(cs.begin(), cs.end()));
}

ModularProgram join_instance(const ModularProgram& p, const std::optional<DefModule>& inst,
                             const std::optional<std::vector<PredicateSymbol>>& show) {
    ModularProgram joined = p;
    if (inst) {
        Member m;
        m.node = *inst;
        joined.members.push_back(std::move(m));
    }
    if (show) joined.public_preds = canonical_predicates(*show);
    return joined;
}

// ── evaluate ─────────────────────────────────────────────────────────────────

bool evaluate(const FormulaPtr& f, const Interpretation& i, const SOAssignment& so) {
    for (const auto& v : free_predicate_variables(f))
        if (!so.count(v)) throw error("unbound predicate variable " + v.to_string());

    auto space = std::make_shared<GroundSpace>(i.domain);
    // slots for assigned predicate variables
    std::map<PredicateVariable, int> preset;
    for (const auto& [v, tuples] : so) preset[v] = space->new_var_slot(v.arity);
    GroundFormula g(space, f, preset);

    Bits bits(space->atom_count());
    space->load(bits, i);
    for (const auto& [v, tuples] : so) {
        int slot = preset.at(v);
        for (const auto& t : tuples) {
            std::vector<int> ids;
            bool ok = true;
            for (const auto& c : t) {
                int id = space->const_id(c);
                if (id < 0) {
                    ok = false;
                    break;
                }
                ids.push_back(id);
            }
            if (ok) bits.set(space->atom_id(slot, ids));
        }
    }
    return g.eval(bits);
}

// ── model enumeration ────────────────────────────────────────────────────────

namespace {

struct SignatureBlocks {
    std::shared_ptr<GroundSpace> space;
    std::vector<std::pair<PredicateSymbol, int>> slots;  // signature order
    std::vector<std::uint32_t> atom_ids;                 // concatenated blocks
};

SignatureBlocks signature_blocks(const Domain& dom, const std::vector<PredicateSymbol>& sig) {
    SignatureBlocks b;
    b.space = std::make_shared<GroundSpace>(dom);
    for (const auto& p : sig) {
        int slot = b.space->pred_slot(p);
        b.slots.emplace_back(p, slot);
        const auto& s = b.space->slot(slot);
        for (std::uint32_t i = 0; i < s.count; ++i) b.atom_ids.push_back(s.base + i);
    }
    return b;
}

void write_scattered(Bits& bits, const std::vector<std::uint32_t>& ids, std::uint64_t mask) {
    for (size_t i = 0; i < ids.size(); ++i) {
        if ((mask >> i) & 1u)
            bits.set(ids[i]);
        else
            bits.reset(ids[i]);
    }
}

Interpretation interp_from_bits(const GroundSpace& space, const Bits& bits, const Domain& dom,
                                const std::vector<std::pair<PredicateSymbol, int>>& slots) {
    Interpretation out;
    out.domain = dom;
    for (const auto& [p, slot] : slots) {
        auto ts = space.extract(bits, slot);
        if (!ts.empty()) out.extents[p] = std::move(ts);
    }
    return out;
}

}  // namespace

std::vector<Interpretation> herbrand_models(const FormulaPtr& f,
                                            const std::vector<PredicateSymbol>& signature,
                                            const Domain& dom, int jobs) {
    auto sig = canonical_predicates(signature);
    SignatureBlocks b = signature_blocks(dom, sig);
    if (b.atom_ids.size() > 63)
        throw resource_limit_error("signature spans more than 63 ground atoms");
    GroundFormula g(b.space, f, {});

    const std::uint64_t total = std::uint64_t(1) << b.atom_ids.size();
    jobs = std::max(1, jobs);
    std::vector<std::vector<Interpretation>> found(static_cast<size_t>(jobs));

    auto worker = [&](int w) {
        Bits bits(b.space->atom_count());
        detail::EvalCache cache;
        for (std::uint64_t mask = static_cast<std::uint64_t>(w); mask < total;
             mask += static_cast<std::uint64_t>(jobs)) {
            write_scattered(bits, b.atom_ids, mask);
            if (g.eval(bits, cache))
                found[static_cast<size_t>(w)].push_back(
                    interp_from_bits(*b.space, bits, dom, b.slots));
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
        for (auto& t : threads) t.join();
    }

    std::vector<Interpretation> out;
    for (auto& part : found) out.insert(out.end(), part.begin(), part.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ── naive stable models ──────────────────────────────────────────────────────

std::vector<Interpretation> naive_stable_models(const FormulaPtr& f,
                                                const std::vector<PredicateSymbol>& p,
                                                const Domain& dom, const Interpretation& fixed) {
    auto ps = canonical_predicates(p);
    if (contains_so(f)) throw error("naive_stable_models requires a first-order formula");

    // fixed must cover exactly pred(f) \ p
    auto preds = predicates_of(f);
    for (const auto& q : preds) {
        bool intensional = std::binary_search(ps.begin(), ps.end(), q);
        bool covered = fixed.extents.count(q) > 0;
        if (!intensional && !covered)
            throw error("extensional predicate " + q.to_string() + " has no fixed extent");
        if (intensional && covered)
            throw error("intensional predicate " + q.to_string() + " must not be fixed");
    }

    SignatureBlocks b = signature_blocks(dom, ps);
    if (b.atom_ids.size() > 63)
        throw resource_limit_error("intensional signature spans more than 63 ground atoms");
    GroundFormula gf(b.space, f, {});

    // star transform shares the space; each intensional symbol gets a
    // predicate-variable slot holding the candidate sub-extent
    StarContext ctx;
    std::map<PredicateVariable, int> preset;
    std::vector<std::uint32_t> u_atom_ids;
    for (const auto& q : ps) {
        PredicateVariable u = fresh_predicate_variable(q);
        ctx.mapping[q] = u;
        int slot = b.space->new_var_slot(q.arity);
        preset[u] = slot;
        const auto& s = b.space->slot(slot);
        for (std::uint32_t i = 0; i < s.count; ++i) u_atom_ids.push_back(s.base + i);
    }
    GroundFormula gstar(b.space, star(f, ctx), preset);

    Bits bits(b.space->atom_count());
    b.space->load(bits, fixed);
    detail::EvalCache fcache, scache;

    std::vector<Interpretation> out;
    const std::uint64_t total = std::uint64_t(1) << b.atom_ids.size();
    for (std::uint64_t candidate = 0; candidate < total; ++candidate) {
        write_scattered(bits, b.atom_ids, candidate);
        if (!gf.eval(bits, fcache)) continue;

        // search for a smaller witness among proper sub-extents
        std::vector<int> set_positions;
        for (size_t i = 0; i < b.atom_ids.size(); ++i)
            if ((candidate >> i) & 1u) set_positions.push_back(static_cast<int>(i));
        const std::uint64_t full_sub =
            (std::uint64_t(1) << set_positions.size()) - 1;
        bool witness = detail::masks_by_popcount(
            static_cast<int>(set_positions.size()), [&](std::uint64_t sub) {
                if (sub == full_sub) return false;  // not a proper sub-extent
                std::uint64_t scattered = 0;
                for (size_t i = 0; i < set_positions.size(); ++i)
                    if ((sub >> i) & 1u) scattered |= std::uint64_t(1) << set_positions[i];
                write_scattered(bits, u_atom_ids, scattered);
                return gstar.eval(bits, scache);
            });
        if (!witness) {
            Interpretation model = interp_from_bits(*b.space, bits, dom, b.slots);
            for (const auto& [q, ts] : fixed.extents)
                if (!ts.empty()) model.extents[q] = ts;
            out.push_back(std::move(model));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ── projection ───────────────────────────────────────────────────────────────

Interpretation project(const Interpretation& i, const std::vector<PredicateSymbol>& s) {
    Interpretation out;
    out.domain = i.domain;
    for (const auto& p : s) {
        auto it = i.extents.find(p);
        if (it != i.extents.end() && !it->second.empty()) out.extents[p] = it->second;
    }
    return out;
}

}  // namespace masp
