// answer_sets: the splitting-ordered enumeration for coherent programs and
// the brute-force oracle strategy.
//
// The splitting strategy alpha-normalizes, flattens, and orders def-modules
// by the SCC condensation of their dependency structure (all body literal
// polarities count for scheduling).  Each unit in that order contributes its
// stable extents given the already-fixed predicates:
//
//   - candidate head atoms come from a possible-atom fixpoint (ground
//     instances whose positive body is satisfiable),
//   - definite units have a unique extent, computed as a least fixpoint,
//   - otherwise candidate subsets are checked classically and minimality is
//     decided through the reduct (least fixpoint for non-disjunctive rules,
//     subset search for disjunctive ones),
//   - denial-only def-modules act as filters and are scheduled eagerly.
//
// The naive oracle ignores all of this and runs naive_stable_models on the
// whole rule conjunction.

#include <algorithm>
#include <functional>

#include "ground.hpp"
#include "masp/analysis.hpp"
#include "masp/evaluator.hpp"
#include "masp/transform.hpp"

namespace masp {

using detail::Bits;
using detail::GroundSpace;

namespace {

struct GroundRule {
    size_t mod = 0;  // flat defmod index
    bool choice = false;
    std::vector<std::uint32_t> heads;  // empty = denial
    std::vector<std::uint32_t> pos, neg, nn;
};

class FlatSolver {
public:
    FlatSolver(const std::vector<DefModule>& mods, const Domain& dom, std::uint64_t max_branch)
        : mods_(mods), space_(dom), max_branch_(max_branch) {
        ground_all();
        schedule();
        prepare_units();
    }

    GroundSpace& space() { return space_; }
    const std::vector<std::uint32_t>& ext_atoms() const { return ext_atoms_; }
    size_t unit_count() const { return units_.size(); }

    /// All stable extents of unit ui given the fixed bits; each extent is
    /// the list of own atoms to set.
    std::vector<std::vector<std::uint32_t>> unit_extents(size_t ui, Bits& bits) const;

private:
    // ── grounding ──────────────────────────────────────────────────────────

    void ground_all() {
        std::vector<PredicateSymbol> all;
        for (const auto& d : mods_) {
            auto ps = predicates_of(d);
            all.insert(all.end(), ps.begin(), ps.end());
        }
        all = canonical_predicates(std::move(all));
        for (const auto& p : all) space_.pred_slot(p);

        own_atoms_.resize(mods_.size());
        owner_.assign(space_.atom_count(), -1);
        for (size_t i = 0; i < mods_.size(); ++i) {
            for (const auto& p : mods_[i].intensional) {
                const auto& s = space_.slot(space_.pred_slot(p));
                for (std::uint32_t a = 0; a < s.count; ++a) {
                    own_atoms_[i].push_back(s.base + a);
                    owner_[s.base + a] = static_cast<int>(i);
                }
            }
            for (const auto& r : mods_[i].rules) ground_rule(i, r);
        }
        for (const auto& p : all) {
            const auto& s = space_.slot(space_.pred_slot(p));
            if (s.count > 0 && owner_[s.base] < 0)
                for (std::uint32_t a = 0; a < s.count; ++a) ext_atoms_.push_back(s.base + a);
        }
    }

    void ground_rule(size_t mod, const Rule& r) {
        auto vars = rule_variables(r);
        std::uint64_t instances = 1;
        for (size_t i = 0; i < vars.size(); ++i) {
            instances *= space_.domain().size();
            if (instances > (std::uint64_t(1) << 22))
                throw resource_limit_error("too many ground instances for one rule");
        }
        std::map<std::string, int> env;
        std::function<void(size_t)> rec = [&](size_t vi) {
            if (vi == vars.size()) {
                emit_instance(mod, r, env);
                return;
            }
            for (int c = 0; c < space_.num_consts(); ++c) {
                env[vars[vi]] = c;
                rec(vi + 1);
            }
        };
        rec(0);
    }

    bool resolve(const Atom& a, const std::map<std::string, int>& env,
                 std::vector<int>& tuple) const {
        tuple.clear();
        for (const auto& t : a.args) {
            int id = t.is_constant() ? space_.const_id(t.text) : env.at(t.text);
            if (id < 0) return false;  // constant outside the domain
            tuple.push_back(id);
        }
        return true;
    }

    void emit_instance(size_t mod, const Rule& r, const std::map<std::string, int>& env) {
        for (const auto& c : r.comparisons) {
            bool eq;
            if (c.lhs.is_constant() && c.rhs.is_constant()) {
                eq = c.lhs.text == c.rhs.text;
            } else {
                int a = c.lhs.is_constant() ? space_.const_id(c.lhs.text) : env.at(c.lhs.text);
                int b = c.rhs.is_constant() ? space_.const_id(c.rhs.text) : env.at(c.rhs.text);
                eq = a >= 0 && a == b;  // an out-of-domain constant equals no domain element
            }
            if ((c.op == Comparison::Op::eq) != eq) return;  // body falsified
        }
        GroundRule g;
        g.mod = mod;
        g.choice = r.choice;
        std::vector<int> tuple;
        for (const auto& a : r.head) {
            // a head atom over an out-of-domain constant is false and drops
            // out of the disjunction; losing every head leaves a denial
            if (!resolve(a, env, tuple)) continue;
            g.heads.push_back(space_.atom_id(space_.pred_slot(a.pred), tuple));
        }
        if (g.choice && g.heads.empty()) return;  // vacuous choice instance
        for (const auto& a : r.positive_body) {
            if (!resolve(a, env, tuple)) return;  // positive literal is false
            g.pos.push_back(space_.atom_id(space_.pred_slot(a.pred), tuple));
        }
        for (const auto& a : r.negative_body) {
            if (!resolve(a, env, tuple)) continue;  // "not p(c)" with c outside: true
            g.neg.push_back(space_.atom_id(space_.pred_slot(a.pred), tuple));
        }
        for (const auto& a : r.double_negated_body) {
            if (!resolve(a, env, tuple)) return;
            g.nn.push_back(space_.atom_id(space_.pred_slot(a.pred), tuple));
        }
        rules_.push_back(std::move(g));
    }

    // ── scheduling ─────────────────────────────────────────────────────────

    void schedule() {
        std::vector<std::set<size_t>> deps(mods_.size());
        for (const auto& g : rules_) {
            auto add = [&](std::uint32_t atom) {
                int o = owner_[atom];
                if (o >= 0 && static_cast<size_t>(o) != g.mod) deps[g.mod].insert(static_cast<size_t>(o));
            };
            for (auto a : g.pos) add(a);
            for (auto a : g.neg) add(a);
            for (auto a : g.nn) add(a);
        }

        std::vector<int> index(mods_.size(), -1), low(mods_.size(), 0), on(mods_.size(), 0);
        std::vector<size_t> stack;
        std::vector<std::vector<size_t>> comps;
        int counter = 0;
        std::function<void(size_t)> visit = [&](size_t v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on[v] = 1;
            for (size_t w : deps[v]) {
                if (index[w] < 0) {
                    visit(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
            if (low[v] == index[v]) {
                std::vector<size_t> comp;
                while (true) {
                    size_t w = stack.back();
                    stack.pop_back();
                    on[w] = 0;
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        };
        for (size_t v = 0; v < mods_.size(); ++v)
            if (index[v] < 0) visit(v);

        // Kahn order over components; denial-only units go first among the
        // available ones (they only prune), then document order.
        std::map<size_t, size_t> comp_of;
        for (size_t c = 0; c < comps.size(); ++c)
            for (size_t v : comps[c]) comp_of[v] = c;
        std::vector<std::set<size_t>> cdeps(comps.size());
        for (size_t v = 0; v < mods_.size(); ++v)
            for (size_t w : deps[v])
                if (comp_of[v] != comp_of[w]) cdeps[comp_of[v]].insert(comp_of[w]);

        auto denial_only = [&](size_t c) {
            for (size_t v : comps[c])
                if (!mods_[v].intensional.empty()) return false;
            return true;
        };
        std::vector<bool> done(comps.size(), false);
        for (size_t emitted = 0; emitted < comps.size(); ++emitted) {
            size_t best = comps.size();
            for (size_t c = 0; c < comps.size(); ++c) {
                if (done[c]) continue;
                bool ready = std::all_of(cdeps[c].begin(), cdeps[c].end(),
                                         [&](size_t d) { return done[d]; });
                if (!ready) continue;
                if (best == comps.size()) {
                    best = c;
                    continue;
                }
                bool bd = denial_only(best), cd = denial_only(c);
                if (bd != cd) {
                    if (cd) best = c;
                } else if (comps[c].front() < comps[best].front()) {
                    best = c;
                }
            }
            done[best] = true;
            units_.push_back(comps[best]);
        }
    }

    void prepare_units() {
        unit_rules_.resize(units_.size());
        unit_own_.resize(units_.size());
        unit_definite_.resize(units_.size());
        unit_disjunctive_.resize(units_.size());
        for (size_t ui = 0; ui < units_.size(); ++ui) {
            const auto& unit = units_[ui];
            for (const auto& g : rules_)
                if (std::find(unit.begin(), unit.end(), g.mod) != unit.end())
                    unit_rules_[ui].push_back(&g);
            for (size_t m : unit)
                unit_own_[ui].insert(own_atoms_[m].begin(), own_atoms_[m].end());

            bool definite = unit.size() == 1;
            bool disjunctive = false;
            for (const auto* g : unit_rules_[ui]) {
                if (g->heads.empty()) continue;  // denials are filters
                if (g->heads.size() > 1) disjunctive = true;
                if (g->choice || g->heads.size() > 1) definite = false;
                for (auto a : g->neg)
                    if (unit_own_[ui].count(a)) definite = false;
                for (auto a : g->nn)
                    if (unit_own_[ui].count(a)) definite = false;
            }
            unit_definite_[ui] = definite;
            unit_disjunctive_[ui] = disjunctive;
        }
    }

    // ── checks against a bit assignment ────────────────────────────────────

    bool body_true(const GroundRule& g, const Bits& bits) const {
        for (auto a : g.pos)
            if (!bits.test(a)) return false;
        for (auto a : g.neg)
            if (bits.test(a)) return false;
        for (auto a : g.nn)
            if (!bits.test(a)) return false;
        return true;
    }

    bool rules_satisfied(size_t ui, const Bits& bits) const {
        for (const auto* g : unit_rules_[ui]) {
            if (g->choice) continue;  // classically vacuous
            if (!body_true(*g, bits)) continue;
            if (g->heads.empty()) return false;  // violated denial
            bool some = std::any_of(g->heads.begin(), g->heads.end(),
                                    [&](std::uint32_t h) { return bits.test(h); });
            if (!some) return false;
        }
        return true;
    }

    // Least model of the reduct w.r.t. bits over module m's own atoms;
    // stability of a non-disjunctive module is equality with the current
    // extent.
    bool reduct_lfp_matches(size_t ui, size_t m, Bits& bits) const {
        std::set<std::uint32_t> derived;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto* g : unit_rules_[ui]) {
                if (g->mod != m || g->heads.empty()) continue;
                std::uint32_t h = g->heads[0];
                if (derived.count(h)) continue;
                bool dropped = false;
                for (auto a : g->neg)
                    if (bits.test(a)) {
                        dropped = true;
                        break;
                    }
                if (!dropped)
                    for (auto a : g->nn)
                        if (!bits.test(a)) {
                            dropped = true;
                            break;
                        }
                if (!dropped && g->choice && !bits.test(h)) dropped = true;
                if (dropped) continue;
                bool fires = true;
                for (auto a : g->pos) {
                    if (owner_[a] == static_cast<int>(m)) {
                        if (!derived.count(a)) {
                            fires = false;
                            break;
                        }
                    } else if (!bits.test(a)) {
                        fires = false;
                        break;
                    }
                }
                if (fires) {
                    derived.insert(h);
                    changed = true;
                }
            }
        }
        for (auto a : own_atoms_[m])
            if (bits.test(a) != (derived.count(a) > 0)) return false;
        return true;
    }

    bool disjunctive_minimal(size_t ui, size_t m, Bits& bits) const {
        std::vector<std::uint32_t> set_own;
        for (auto a : own_atoms_[m])
            if (bits.test(a)) set_own.push_back(a);

        struct RRule {
            std::vector<std::uint32_t> body_own, heads;
        };
        std::vector<RRule> reduct;
        for (const auto* g : unit_rules_[ui]) {
            if (g->mod != m || g->heads.empty()) continue;
            bool dropped = false;
            for (auto a : g->neg)
                if (bits.test(a)) dropped = true;
            for (auto a : g->nn)
                if (!bits.test(a)) dropped = true;
            if (g->choice && !bits.test(g->heads[0])) dropped = true;
            if (dropped) continue;
            RRule rr;
            bool ok = true;
            for (auto a : g->pos) {
                if (owner_[a] == static_cast<int>(m))
                    rr.body_own.push_back(a);
                else if (!bits.test(a))
                    ok = false;
            }
            if (!ok) continue;
            rr.heads = g->heads;
            reduct.push_back(std::move(rr));
        }

        const std::uint64_t full = (std::uint64_t(1) << set_own.size()) - 1;
        bool witness = detail::masks_by_popcount(
            static_cast<int>(set_own.size()), [&](std::uint64_t sub) {
                if (sub == full) return false;
                auto in_sub = [&](std::uint32_t a) {
                    for (size_t i = 0; i < set_own.size(); ++i)
                        if (set_own[i] == a) return ((sub >> i) & 1u) != 0;
                    return false;  // own atom outside the current extent
                };
                for (const auto& rr : reduct) {
                    if (!std::all_of(rr.body_own.begin(), rr.body_own.end(), in_sub)) continue;
                    bool some = false;
                    for (auto h : rr.heads)
                        if (in_sub(h)) some = true;
                    if (!some) return false;  // sub fails the reduct
                }
                return true;  // proper sub-model found
            });
        return !witness;
    }

    std::vector<std::uint32_t> candidates(size_t ui, const Bits& bits) const {
        const auto& own = unit_own_[ui];
        std::set<std::uint32_t> c;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto* g : unit_rules_[ui]) {
                if (g->heads.empty()) continue;
                bool fire = true;
                for (auto a : g->pos) {
                    if (own.count(a)) {
                        if (!c.count(a)) {
                            fire = false;
                            break;
                        }
                    } else if (!bits.test(a)) {
                        fire = false;
                        break;
                    }
                }
                if (!fire) continue;
                for (auto a : g->neg)
                    if (!own.count(a) && bits.test(a)) {
                        fire = false;
                        break;
                    }
                if (!fire) continue;
                for (auto a : g->nn)
                    if (!own.count(a) && !bits.test(a)) {
                        fire = false;
                        break;
                    }
                if (fire && g->choice && !own.count(g->heads[0]) && !bits.test(g->heads[0]))
                    fire = false;
                if (!fire) continue;
                for (auto h : g->heads)
                    if (c.insert(h).second) changed = true;
            }
        }
        return std::vector<std::uint32_t>(c.begin(), c.end());
    }

    const std::vector<DefModule>& mods_;
    GroundSpace space_;
    std::uint64_t max_branch_;
    std::vector<GroundRule> rules_;
    std::vector<std::vector<std::uint32_t>> own_atoms_;
    std::vector<int> owner_;  // atom -> owning module, -1 extensional
    std::vector<std::uint32_t> ext_atoms_;
    std::vector<std::vector<size_t>> units_;
    std::vector<std::vector<const GroundRule*>> unit_rules_;
    std::vector<std::set<std::uint32_t>> unit_own_;
    std::vector<bool> unit_definite_, unit_disjunctive_;
};

std::vector<std::vector<std::uint32_t>> FlatSolver::unit_extents(size_t ui, Bits& bits) const {
    std::vector<std::vector<std::uint32_t>> out;
    const auto& unit = units_[ui];

    if (unit_definite_[ui]) {
        size_t m = unit[0];
        std::set<std::uint32_t> derived;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto* g : unit_rules_[ui]) {
                if (g->heads.empty()) continue;
                std::uint32_t h = g->heads[0];
                if (derived.count(h)) continue;
                bool fire = true;
                for (auto a : g->pos) {
                    if (owner_[a] == static_cast<int>(m)) {
                        if (!derived.count(a)) {
                            fire = false;
                            break;
                        }
                    } else if (!bits.test(a)) {
                        fire = false;
                        break;
                    }
                }
                if (!fire) continue;
                for (auto a : g->neg)
                    if (bits.test(a)) {
                        fire = false;
                        break;
                    }
                if (!fire) continue;
                for (auto a : g->nn)
                    if (owner_[a] != static_cast<int>(m) && !bits.test(a)) {
                        fire = false;
                        break;
                    }
                if (fire) {
                    derived.insert(h);
                    changed = true;
                }
            }
        }
        std::vector<std::uint32_t> extent(derived.begin(), derived.end());
        for (auto a : extent) bits.set(a);
        bool ok = rules_satisfied(ui, bits);
        for (auto a : extent) bits.reset(a);
        if (ok) out.push_back(std::move(extent));
        return out;
    }

    auto cand = candidates(ui, bits);
    if (cand.size() > 62 || (std::uint64_t(1) << cand.size()) > max_branch_)
        throw resource_limit_error("candidate space of a def-module exceeds max_branch (" +
                                   std::to_string(cand.size()) +
                                   " candidate atoms); raise --max-branch or use the naive "
                                   "strategy on a smaller domain");

    const std::uint64_t total = std::uint64_t(1) << cand.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::vector<std::uint32_t> extent;
        for (size_t i = 0; i < cand.size(); ++i)
            if ((mask >> i) & 1u) extent.push_back(cand[i]);
        for (auto a : extent) bits.set(a);
        bool ok = rules_satisfied(ui, bits);
        if (ok) {
            for (size_t m : unit) {
                bool minimal = unit_disjunctive_[ui] ? disjunctive_minimal(ui, m, bits)
                                                     : reduct_lfp_matches(ui, m, bits);
                if (!minimal) {
                    ok = false;
                    break;
                }
            }
        }
        for (auto a : extent) bits.reset(a);
        if (ok) out.push_back(std::move(extent));
    }
    return out;
}

}  // namespace

std::vector<Interpretation> answer_sets(const ModularProgram& p,
                                        const std::optional<DefModule>& inst,
                                        const SolveOptions& opts) {
    ModularProgram joined = join_instance(p, inst, opts.show_override);
    Domain dom =
        opts.domain_override ? *opts.domain_override : herbrand_universe(joined, std::nullopt);

    if (opts.strategy == SolveOptions::Strategy::naive) {
        FormulaPtr f = rules_conjunction(joined);
        auto intensional = intensional_predicates(joined);
        auto preds = predicates_of(joined);
        std::vector<PredicateSymbol> extensional;
        for (const auto& q : preds)
            if (!std::binary_search(intensional.begin(), intensional.end(), q))
                extensional.push_back(q);

        std::uint64_t ext_count = 0;
        for (const auto& q : extensional) {
            std::uint64_t block = 1;
            for (int i = 0; i < q.arity; ++i) block *= dom.size();
            ext_count += block;
        }
        if (ext_count > 62 || (std::uint64_t(1) << ext_count) > opts.max_branch)
            throw resource_limit_error("extensional predicate space is too large to enumerate");

        std::vector<Interpretation> ext_worlds;
        if (extensional.empty()) {
            Interpretation none;
            none.domain = dom;
            ext_worlds.push_back(std::move(none));
        } else {
            ext_worlds = herbrand_models(mk_top(), extensional, dom);
            for (auto& w : ext_worlds)
                for (const auto& q : extensional)
                    w.extents.emplace(q, std::set<Tuple>{});  // mark fixed even when empty
        }
        std::vector<Interpretation> projected;
        for (const auto& w : ext_worlds)
            for (const auto& m : naive_stable_models(f, intensional, dom, w))
                projected.push_back(project(m, joined.public_preds));
        std::sort(projected.begin(), projected.end(),
                  [](const Interpretation& a, const Interpretation& b) {
                      return a.to_text() < b.to_text();
                  });
        projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
        return projected;
    }

    // splitting strategy
    ModularProgram norm = alpha_normalize(joined);
    CoherenceReport rep = is_coherent(norm);
    if (!rep.coherent) {
        std::string why;
        for (const auto& d : rep.violations) why += "\n  " + d.message;
        throw error(
            "program is not coherent; the splitting strategy does not apply (use --strategy "
            "naive)" +
            why);
    }
    ModularProgram flat = flatten(norm);
    std::vector<DefModule> mods = defmods(flat);

    FlatSolver solver(mods, dom, opts.max_branch);
    if (solver.ext_atoms().size() > 62 ||
        (std::uint64_t(1) << solver.ext_atoms().size()) > opts.max_branch)
        throw resource_limit_error("extensional predicate space is too large to enumerate");

    std::vector<std::pair<PredicateSymbol, int>> public_slots;
    for (const auto& q : flat.public_preds)
        public_slots.emplace_back(q, solver.space().find_pred_slot(q));

    std::set<std::string> seen;
    std::vector<Interpretation> out;
    Bits bits(solver.space().atom_count());

    std::function<void(size_t)> dfs = [&](size_t ui) {
        if (ui == solver.unit_count()) {
            Interpretation model;
            model.domain = dom;
            for (const auto& [q, slot] : public_slots) {
                if (slot < 0) continue;
                auto ts = solver.space().extract(bits, slot);
                if (!ts.empty()) model.extents[q] = std::move(ts);
            }
            if (seen.insert(model.to_text()).second) out.push_back(std::move(model));
            return;
        }
        for (const auto& extent : solver.unit_extents(ui, bits)) {
            for (auto a : extent) bits.set(a);
            dfs(ui + 1);
            for (auto a : extent) bits.reset(a);
        }
    };

    const std::uint64_t ext_total = std::uint64_t(1) << solver.ext_atoms().size();
    for (std::uint64_t ext = 0; ext < ext_total; ++ext) {
        for (size_t i = 0; i < solver.ext_atoms().size(); ++i) {
            if ((ext >> i) & 1u)
                bits.set(solver.ext_atoms()[i]);
            else
                bits.reset(solver.ext_atoms()[i]);
        }
        dfs(0);
    }

    std::sort(out.begin(), out.end(), [](const Interpretation& a, const Interpretation& b) {
        return a.to_text() < b.to_text();
    });
    return out;
}

}  // namespace masp
