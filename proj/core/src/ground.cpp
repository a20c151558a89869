#include "ground.hpp"

#include <algorithm>

namespace masp::detail {

// ── GroundSpace ──────────────────────────────────────────────────────────────

GroundSpace::GroundSpace(Domain dom) : dom_(std::move(dom)) {
    if (dom_.constants.empty()) throw error("grounding requires a non-empty domain");
    for (size_t i = 0; i < dom_.constants.size(); ++i)
        const_ids_[dom_.constants[i]] = static_cast<int>(i);
}

int GroundSpace::const_id(const std::string& c) const {
    auto it = const_ids_.find(c);
    return it == const_ids_.end() ? -1 : it->second;
}

int GroundSpace::add_slot(int arity) {
    std::uint64_t count = 1;
    for (int i = 0; i < arity; ++i) {
        count *= dom_.constants.size();
        if (count > (std::uint64_t(1) << 24))
            throw resource_limit_error("ground atom block too large (arity " +
                                       std::to_string(arity) + " over " +
                                       std::to_string(dom_.constants.size()) + " constants)");
    }
    Slot s;
    s.arity = arity;
    s.base = next_atom_;
    s.count = static_cast<std::uint32_t>(count);
    next_atom_ += s.count;
    slots_.push_back(s);
    return static_cast<int>(slots_.size()) - 1;
}

int GroundSpace::pred_slot(const PredicateSymbol& p) {
    auto it = pred_slots_.find(p);
    if (it != pred_slots_.end()) return it->second;
    int s = add_slot(p.arity);
    pred_slots_[p] = s;
    return s;
}

int GroundSpace::find_pred_slot(const PredicateSymbol& p) const {
    auto it = pred_slots_.find(p);
    return it == pred_slots_.end() ? -1 : it->second;
}

int GroundSpace::new_var_slot(int arity) { return add_slot(arity); }

std::uint32_t GroundSpace::atom_id(int slot, const std::vector<int>& tuple) const {
    const Slot& s = slots_[static_cast<size_t>(slot)];
    std::uint32_t rank = 0;
    for (int c : tuple)
        rank = rank * static_cast<std::uint32_t>(num_consts()) + static_cast<std::uint32_t>(c);
    return s.base + rank;
}

std::vector<int> GroundSpace::atom_tuple(int slot, std::uint32_t id) const {
    const Slot& s = slots_[static_cast<size_t>(slot)];
    std::uint32_t rank = id - s.base;
    std::vector<int> tuple(static_cast<size_t>(s.arity));
    for (int i = s.arity - 1; i >= 0; --i) {
        tuple[static_cast<size_t>(i)] =
            static_cast<int>(rank % static_cast<std::uint32_t>(num_consts()));
        rank /= static_cast<std::uint32_t>(num_consts());
    }
    return tuple;
}

void GroundSpace::load(Bits& bits, const Interpretation& i) const {
    for (const auto& [pred, tuples] : i.extents) {
        int slot = find_pred_slot(pred);
        if (slot < 0) continue;
        for (const auto& t : tuples) {
            std::vector<int> ids;
            ids.reserve(t.size());
            bool ok = true;
            for (const auto& c : t) {
                int id = const_id(c);
                if (id < 0) {
                    ok = false;
                    break;
                }
                ids.push_back(id);
            }
            if (ok) bits.set(atom_id(slot, ids));
        }
    }
}

std::set<Tuple> GroundSpace::extract(const Bits& bits, int slot) const {
    const Slot& s = slots_[static_cast<size_t>(slot)];
    std::set<Tuple> out;
    for (std::uint32_t i = 0; i < s.count; ++i) {
        if (!bits.test(s.base + i)) continue;
        auto ids = atom_tuple(slot, s.base + i);
        Tuple t;
        t.reserve(ids.size());
        for (int c : ids) t.push_back(dom_.constants[static_cast<size_t>(c)]);
        out.insert(std::move(t));
    }
    return out;
}

// ── grounding ────────────────────────────────────────────────────────────────

struct GroundFormula::Env {
    std::map<std::string, int> fo;                     // variable -> constant id
    std::map<PredicateVariable, std::vector<int>> so;  // binder stack per variable
    const std::map<PredicateVariable, int>* preset = nullptr;

    int lookup_fo(const std::string& name) const {
        auto it = fo.find(name);
        if (it == fo.end())
            throw error("free first-order variable " + name + "; evaluation needs a sentence");
        return it->second;
    }

    int lookup_so(const PredicateVariable& v) const {
        auto it = so.find(v);
        if (it != so.end() && !it->second.empty()) return it->second.back();
        if (preset) {
            auto pit = preset->find(v);
            if (pit != preset->end()) return pit->second;
        }
        return -1;
    }
};

GNode* GroundFormula::mk(GNode n) {
    arena_.push_back(std::move(n));
    return &arena_.back();
}

const GNode* GroundFormula::mk_const(bool v) {
    GNode n;
    n.kind = v ? GNode::Kind::ttrue : GNode::Kind::ffalse;
    return mk(std::move(n));
}

namespace {

std::vector<int> merge_slots(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool mentions(const GNode* n, int slot) {
    return std::binary_search(n->free_so.begin(), n->free_so.end(), slot);
}

}  // namespace

const GNode* GroundFormula::mk_nary(GNode::Kind k, std::vector<const GNode*> kids) {
    const bool is_and = k == GNode::Kind::band;
    std::vector<const GNode*> flat;
    for (const GNode* kid : kids) {
        if (kid->kind == (is_and ? GNode::Kind::ttrue : GNode::Kind::ffalse)) continue;
        if (kid->kind == (is_and ? GNode::Kind::ffalse : GNode::Kind::ttrue))
            return mk_const(!is_and);
        if (kid->kind == k) {
            flat.insert(flat.end(), kid->kids.begin(), kid->kids.end());
        } else {
            flat.push_back(kid);
        }
    }
    if (flat.empty()) return mk_const(is_and);
    if (flat.size() == 1) return flat[0];
    // cheap children first: SO-quantifier-free before SO-bearing, smaller first
    std::stable_sort(flat.begin(), flat.end(), [](const GNode* x, const GNode* y) {
        if (x->has_so_quant != y->has_so_quant) return !x->has_so_quant;
        return x->size < y->size;
    });
    GNode n;
    n.kind = k;
    n.kids = std::move(flat);
    for (const GNode* kid : n.kids) {
        n.free_so = merge_slots(n.free_so, kid->free_so);
        n.size += kid->size;
        n.has_so_quant = n.has_so_quant || kid->has_so_quant;
    }
    return mk(std::move(n));
}

const GNode* GroundFormula::mk_implies(const GNode* a, const GNode* b) {
    if (a->kind == GNode::Kind::ffalse || b->kind == GNode::Kind::ttrue) return mk_const(true);
    if (a->kind == GNode::Kind::ttrue) return b;
    GNode n;
    n.kind = GNode::Kind::implies;
    n.a = a;
    n.b = b;
    n.free_so = merge_slots(a->free_so, b->free_so);
    n.size = 1 + a->size + b->size;
    n.has_so_quant = a->has_so_quant || b->has_so_quant;
    return mk(std::move(n));
}

namespace {

// atoms of the subtree whose slot is still free at this node (used as the
// memo key of quantifier nodes)
void collect_free_atoms(const GNode* n, const GroundSpace& space, std::vector<int>& bound_slots,
                        std::vector<std::uint32_t>& out) {
    switch (n->kind) {
        case GNode::Kind::ffalse:
        case GNode::Kind::ttrue: return;
        case GNode::Kind::atom: {
            for (int s : bound_slots) {
                const Slot& slot = space.slot(s);
                if (n->atom >= slot.base && n->atom < slot.base + slot.count) return;
            }
            out.push_back(n->atom);
            return;
        }
        case GNode::Kind::band:
        case GNode::Kind::bor:
            for (const GNode* kid : n->kids) collect_free_atoms(kid, space, bound_slots, out);
            return;
        case GNode::Kind::implies:
            collect_free_atoms(n->a, space, bound_slots, out);
            collect_free_atoms(n->b, space, bound_slots, out);
            return;
        case GNode::Kind::exists_so:
        case GNode::Kind::forall_so:
            bound_slots.push_back(n->slot);
            collect_free_atoms(n->a, space, bound_slots, out);
            bound_slots.pop_back();
            return;
    }
}

}  // namespace

const GNode* GroundFormula::mk_quant(GNode::Kind kind, int slot, const GNode* body) {
    GNode n;
    n.kind = kind;
    n.slot = slot;
    n.a = body;
    for (int s : body->free_so)
        if (s != slot) n.free_so.push_back(s);
    n.size = 1 + body->size;
    n.has_so_quant = true;

    GNode* node = mk(std::move(n));
    // memoize when the key fits one word; atoms bound below (including this
    // slot) are excluded from the key
    std::vector<int> bound;
    std::vector<std::uint32_t> frees;
    collect_free_atoms(node, *space_, bound, frees);
    std::sort(frees.begin(), frees.end());
    frees.erase(std::unique(frees.begin(), frees.end()), frees.end());
    if (frees.size() <= 48) {
        node->cache_id = next_cache_id_++;
        node->free_atoms = std::move(frees);
    }
    return node;
}

const GNode* GroundFormula::mk_exists_so(int slot, const GNode* body) {
    if (!mentions(body, slot)) return body;
    if (body->kind == GNode::Kind::band) {
        std::vector<const GNode*> in, out;
        for (const GNode* kid : body->kids) (mentions(kid, slot) ? in : out).push_back(kid);
        if (!out.empty()) {
            out.push_back(mk_exists_so(slot, mk_nary(GNode::Kind::band, std::move(in))));
            return mk_nary(GNode::Kind::band, std::move(out));
        }
    }
    return mk_quant(GNode::Kind::exists_so, slot, body);
}

const GNode* GroundFormula::mk_forall_so(int slot, const GNode* body) {
    if (!mentions(body, slot)) return body;
    if (body->kind == GNode::Kind::band) {
        // forall distributes over conjunction
        std::vector<const GNode*> kids;
        for (const GNode* kid : body->kids) kids.push_back(mk_forall_so(slot, kid));
        return mk_nary(GNode::Kind::band, std::move(kids));
    }
    return mk_quant(GNode::Kind::forall_so, slot, body);
}

const GNode* GroundFormula::build(const FormulaPtr& f, Env& env) {
    switch (f->kind) {
        case FormulaKind::bottom: return mk_const(false);
        case FormulaKind::atom: {
            std::vector<int> tuple;
            tuple.reserve(f->args.size());
            for (const auto& t : f->args) {
                int id = t.is_constant() ? space_->const_id(t.text) : env.lookup_fo(t.text);
                if (id < 0) return mk_const(false);  // constant outside the domain
                tuple.push_back(id);
            }
            GNode n;
            n.kind = GNode::Kind::atom;
            n.atom = space_->atom_id(space_->pred_slot(f->pred), tuple);
            return mk(std::move(n));
        }
        case FormulaKind::predvar_atom: {
            int slot = env.lookup_so(f->var);
            if (slot < 0) throw error("unbound predicate variable " + f->var.to_string());
            std::vector<int> tuple;
            tuple.reserve(f->args.size());
            for (const auto& t : f->args) {
                int id = t.is_constant() ? space_->const_id(t.text) : env.lookup_fo(t.text);
                if (id < 0) return mk_const(false);
                tuple.push_back(id);
            }
            GNode n;
            n.kind = GNode::Kind::atom;
            n.atom = space_->atom_id(slot, tuple);
            n.free_so = {slot};
            return mk(std::move(n));
        }
        case FormulaKind::equal: {
            const Term& a = f->args[0];
            const Term& b = f->args[1];
            int ia = a.is_constant() ? space_->const_id(a.text) : env.lookup_fo(a.text);
            int ib = b.is_constant() ? space_->const_id(b.text) : env.lookup_fo(b.text);
            if (ia < 0 || ib < 0) return mk_const(false);
            return mk_const(ia == ib);
        }
        case FormulaKind::conj:
        case FormulaKind::disj: {
            auto k = f->kind == FormulaKind::conj ? GNode::Kind::band : GNode::Kind::bor;
            return mk_nary(k, {build(f->lhs, env), build(f->rhs, env)});
        }
        case FormulaKind::implies: return mk_implies(build(f->lhs, env), build(f->rhs, env));
        case FormulaKind::forall:
        case FormulaKind::exists: {
            auto k = f->kind == FormulaKind::forall ? GNode::Kind::band : GNode::Kind::bor;
            std::vector<const GNode*> kids;
            kids.reserve(space_->domain().size());
            auto saved = env.fo.count(f->bound) ? std::optional<int>(env.fo[f->bound])
                                                : std::nullopt;
            for (int c = 0; c < space_->num_consts(); ++c) {
                env.fo[f->bound] = c;
                kids.push_back(build(f->lhs, env));
            }
            if (saved)
                env.fo[f->bound] = *saved;
            else
                env.fo.erase(f->bound);
            return mk_nary(k, std::move(kids));
        }
        case FormulaKind::forall_so:
        case FormulaKind::exists_so: {
            int slot = space_->new_var_slot(f->var.arity);
            env.so[f->var].push_back(slot);
            const GNode* body = build(f->lhs, env);
            env.so[f->var].pop_back();
            return f->kind == FormulaKind::exists_so ? mk_exists_so(slot, body)
                                                     : mk_forall_so(slot, body);
        }
    }
    return mk_const(false);
}

GroundFormula::GroundFormula(std::shared_ptr<GroundSpace> space, const FormulaPtr& f,
                             const std::map<PredicateVariable, int>& preset_slots)
    : space_(std::move(space)) {
    Env env;
    env.preset = &preset_slots;
    root_ = build(f, env);
}

// ── evaluation ───────────────────────────────────────────────────────────────

namespace {

void write_block(Bits& bits, const Slot& s, std::uint64_t mask) {
    for (std::uint32_t i = 0; i < s.count; ++i) {
        if ((mask >> i) & 1u)
            bits.set(s.base + i);
        else
            bits.reset(s.base + i);
    }
}

void clear_block(Bits& bits, const Slot& s) {
    for (std::uint32_t i = 0; i < s.count; ++i) bits.reset(s.base + i);
}

constexpr size_t kMaxMemoEntries = size_t(1) << 22;

bool eval_node(const GNode* n, Bits& bits, const GroundSpace& space, EvalCache* cache) {
    switch (n->kind) {
        case GNode::Kind::ffalse: return false;
        case GNode::Kind::ttrue: return true;
        case GNode::Kind::atom: return bits.test(n->atom);
        case GNode::Kind::band:
            for (const GNode* kid : n->kids)
                if (!eval_node(kid, bits, space, cache)) return false;
            return true;
        case GNode::Kind::bor:
            for (const GNode* kid : n->kids)
                if (eval_node(kid, bits, space, cache)) return true;
            return false;
        case GNode::Kind::implies:
            return !eval_node(n->a, bits, space, cache) || eval_node(n->b, bits, space, cache);
        case GNode::Kind::exists_so:
        case GNode::Kind::forall_so: {
            std::unordered_map<std::uint64_t, bool>* memo = nullptr;
            std::uint64_t key = 0;
            if (cache && n->cache_id >= 0) {
                memo = &cache->memo[static_cast<size_t>(n->cache_id)];
                for (size_t i = 0; i < n->free_atoms.size(); ++i)
                    if (bits.test(n->free_atoms[i])) key |= std::uint64_t(1) << i;
                auto it = memo->find(key);
                if (it != memo->end()) return it->second;
            }
            const Slot& s = space.slot(n->slot);
            const bool is_exists = n->kind == GNode::Kind::exists_so;
            bool stopped = masks_by_popcount(static_cast<int>(s.count), [&](std::uint64_t mask) {
                write_block(bits, s, mask);
                bool v = eval_node(n->a, bits, space, cache);
                return is_exists ? v : !v;
            });
            clear_block(bits, s);
            bool result = is_exists ? stopped : !stopped;
            if (memo && memo->size() < kMaxMemoEntries) memo->emplace(key, result);
            return result;
        }
    }
    return false;
}

}  // namespace

bool GroundFormula::eval(Bits& bits) const {
    if (bits.w.size() * 64 < space_->atom_count())
        bits.w.resize((space_->atom_count() + 63) / 64, 0);
    return eval_node(root_, bits, *space_, nullptr);
}

bool GroundFormula::eval(Bits& bits, EvalCache& cache) const {
    if (bits.w.size() * 64 < space_->atom_count())
        bits.w.resize((space_->atom_count() + 63) / 64, 0);
    if (cache.memo.size() < static_cast<size_t>(next_cache_id_))
        cache.memo.resize(static_cast<size_t>(next_cache_id_));
    return eval_node(root_, bits, *space_, &cache);
}

}  // namespace masp::detail
