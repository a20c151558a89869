#include "masp/equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "ground.hpp"
#include "masp/evaluator.hpp"
#include "masp/transform.hpp"

namespace masp {

// ── replacement ──────────────────────────────────────────────────────────────

namespace {

ModularProgram replace_walk(const ModularProgram& p, const ModularProgram& old_mod,
                            const ModularProgram& new_mod, int& count) {
    if (p == old_mod) {
        ++count;
        return new_mod;
    }
    ModularProgram out;
    out.name = p.name;
    out.public_preds = p.public_preds;
    for (const auto& m : p.members) {
        Member nm;
        if (m.is_def())
            nm.node = m.def();
        else
            nm.node = replace_walk(m.sub(), old_mod, new_mod, count);
        out.members.push_back(std::move(nm));
    }
    return out;
}

}  // namespace

ModularProgram replace(const ModularProgram& p, const ModularProgram& old_mod,
                       const ModularProgram& new_mod) {
    int count = 0;
    ModularProgram out = replace_walk(p, old_mod, new_mod, count);
    if (count == 0) throw error("module to replace does not occur in the program");
    return out;
}

// ── bounded strong equivalence ───────────────────────────────────────────────

EquivVerdict strong_equiv_bounded(const ModularProgram& a, const ModularProgram& b,
                                  const ContextTheory& gamma, const Domain& bound, int jobs) {
    for (const auto& s : gamma.sentences) {
        if (contains_so(s)) throw error("context sentences must be first-order");
        if (!free_fo_variables(s).empty()) throw error("context sentences must be closed");
    }
    if (bound.constants.empty()) throw error("domain bound must be non-empty");

    auto sig_a = free_predicates(a);
    auto sig_b = free_predicates(b);
    if (sig_a != sig_b) {
        std::string msg = "public signatures differ:";
        for (const auto& s : sig_a) msg += " " + s.to_string();
        msg += " vs";
        for (const auto& s : sig_b) msg += " " + s.to_string();
        throw error(msg);
    }

    auto space = std::make_shared<detail::GroundSpace>(bound);
    std::vector<std::pair<PredicateSymbol, int>> slots;
    std::vector<std::uint32_t> sig_atoms;
    for (const auto& p : sig_a) {
        int slot = space->pred_slot(p);
        slots.emplace_back(p, slot);
        const auto& s = space->slot(slot);
        for (std::uint32_t i = 0; i < s.count; ++i) sig_atoms.push_back(s.base + i);
    }
    if (sig_atoms.size() > 62)
        throw resource_limit_error("shared signature spans more than 62 ground atoms");

    detail::GroundFormula ga(space, phi(a), {});
    detail::GroundFormula gb(space, phi(b), {});
    detail::GroundFormula ggamma(space, mk_conjunction(gamma.sentences), {});

    const int m = static_cast<int>(sig_atoms.size());
    jobs = std::max(1, jobs);

    struct Found {
        std::uint64_t order = ~std::uint64_t(0);  // position in the enumeration
        std::uint64_t mask = 0;
        bool a_holds = false;
    };

    // popcount-first enumeration; workers stride over the shared stream and
    // the lowest enumeration index wins, so the result is independent of
    // scheduling
    std::vector<Found> found(static_cast<size_t>(jobs));
    auto worker = [&](int w) {
        detail::Bits bits(space->atom_count());
        detail::EvalCache ca, cb, cg;
        std::uint64_t index = 0;
        detail::masks_by_popcount(m, [&](std::uint64_t mask) {
            std::uint64_t my = index++;
            if (jobs > 1 && my % static_cast<std::uint64_t>(jobs) != static_cast<std::uint64_t>(w))
                return false;
            for (size_t i = 0; i < sig_atoms.size(); ++i) {
                if ((mask >> i) & 1u)
                    bits.set(sig_atoms[i]);
                else
                    bits.reset(sig_atoms[i]);
            }
            if (!ggamma.eval(bits, cg)) return false;
            bool va = ga.eval(bits, ca);
            bool vb = gb.eval(bits, cb);
            if (va == vb) return false;
            found[static_cast<size_t>(w)] = {my, mask, va};
            return true;  // stop this worker
        });
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
        for (auto& t : threads) t.join();
    }

    Found best;
    for (const auto& f : found)
        if (f.order < best.order) best = f;

    EquivVerdict verdict;
    verdict.bound = bound;
    if (best.order == ~std::uint64_t(0)) {
        verdict.status = EquivVerdict::Status::equivalent_up_to_bound;
        return verdict;
    }
    verdict.status = EquivVerdict::Status::counterexample;
    verdict.direction = best.a_holds ? EquivVerdict::Direction::holds_in_first_only
                                     : EquivVerdict::Direction::holds_in_second_only;
    detail::Bits bits(space->atom_count());
    for (size_t i = 0; i < sig_atoms.size(); ++i)
        if ((best.mask >> i) & 1u) bits.set(sig_atoms[i]);
    Interpretation w;
    w.domain = bound;
    for (const auto& [p, slot] : slots) {
        auto ts = space->extract(bits, slot);
        if (!ts.empty()) w.extents[p] = std::move(ts);
    }
    verdict.witness = std::move(w);
    return verdict;
}

// ── answer-set equivalence ───────────────────────────────────────────────────

EquivVerdict same_answer_sets(const ModularProgram& a, const ModularProgram& b,
                              const std::optional<DefModule>& inst, const SolveOptions& opts) {
    auto as_a = answer_sets(a, inst, opts);
    auto as_b = answer_sets(b, inst, opts);

    EquivVerdict verdict;
    verdict.bound = opts.domain_override
                        ? *opts.domain_override
                        : herbrand_universe(join_instance(a, inst, opts.show_override),
                                            std::nullopt);
    auto key = [](const Interpretation& i) { return i.to_text(); };
    std::set<std::string> ka, kb;
    for (const auto& i : as_a) ka.insert(key(i));
    for (const auto& i : as_b) kb.insert(key(i));
    if (ka == kb) {
        verdict.status = EquivVerdict::Status::equivalent_up_to_bound;
        return verdict;
    }
    verdict.status = EquivVerdict::Status::counterexample;
    // smallest answer set in the symmetric difference
    const Interpretation* best = nullptr;
    bool best_in_a = false;
    for (const auto& i : as_a)
        if (!kb.count(key(i)) && (!best || i < *best)) {
            best = &i;
            best_in_a = true;
        }
    for (const auto& i : as_b)
        if (!ka.count(key(i)) && (!best || i < *best)) {
            best = &i;
            best_in_a = false;
        }
    verdict.witness = *best;
    verdict.direction = best_in_a ? EquivVerdict::Direction::holds_in_first_only
                                  : EquivVerdict::Direction::holds_in_second_only;
    return verdict;
}

}  // namespace masp
