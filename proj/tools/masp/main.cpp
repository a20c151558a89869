// masp — command line front end.
//
// Subcommands: solve, oracle-solve, smf, flatten, check, depgraph, reduce,
// equiv, replace.  Exit codes are a stable contract: 0 success (solve: at
// least one answer set; equiv: equivalent up to the bound), 1 no answer set
// / counterexample, 2 any error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "masp/analysis.hpp"
#include "masp/ast.hpp"
#include "masp/equivalence.hpp"
#include "masp/evaluator.hpp"
#include "masp/parser.hpp"
#include "masp/printer.hpp"
#include "masp/reductions.hpp"
#include "masp/transform.hpp"

using json = nlohmann::json;

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::string instance;
    std::string context;
    std::string domain_bound;
    std::string show;
    std::string format = "text";
    std::string strategy = "splitting";
    std::string module_sel;
    std::uint64_t max_branch = 1u << 20;
    int jobs = 0;  // 0: use MASP_JOBS or 1
    long seed = -1;
};

int effective_jobs(const Options& o) {
    if (o.jobs > 0) return o.jobs;
    if (const char* env = std::getenv("MASP_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

masp::ModularProgram load_program(const std::string& path) {
    auto src = masp::load_source(path, masp::SourceUnit::Kind::program);
    auto res = masp::parse_program(src);
    for (const auto& d : res.diagnostics) std::cerr << path << ":" << d.to_string() << "\n";
    if (!res.ok()) throw masp::error("parse failed: " + path);
    return *res.program;
}

std::optional<masp::DefModule> load_instance(const Options& o) {
    if (o.instance.empty()) return std::nullopt;
    auto src = masp::load_source(o.instance, masp::SourceUnit::Kind::instance);
    auto res = masp::parse_instance(src);
    for (const auto& d : res.diagnostics) std::cerr << o.instance << ":" << d.to_string() << "\n";
    if (!res.ok()) throw masp::error("parse failed: " + o.instance);
    return *res.instance;
}

std::vector<masp::PredicateSymbol> parse_predlist(const std::string& text) {
    std::vector<masp::PredicateSymbol> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        size_t slash = item.find('/');
        if (slash == std::string::npos)
            throw masp::error("bad predicate '" + item + "' (expected name/arity)");
        out.push_back({item.substr(0, slash), std::stoi(item.substr(slash + 1))});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// --domain-bound: an integer n adds fresh constants c1..cn to the program
// constants; an explicit comma-separated list is used as-is.
std::optional<masp::Domain> parse_domain_bound(const std::string& text,
                                               const std::set<std::string>& program_consts) {
    if (text.empty()) return std::nullopt;
    bool numeric = text.find_first_not_of("0123456789") == std::string::npos;
    std::vector<std::string> cs;
    if (numeric) {
        cs.assign(program_consts.begin(), program_consts.end());
        int n = std::stoi(text);
        for (int i = 1; i <= n; ++i) cs.push_back("c" + std::to_string(i));
    } else {
        size_t pos = 0;
        while (pos < text.size()) {
            size_t comma = text.find(',', pos);
            cs.push_back(
                text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return masp::Domain::of(std::move(cs));
}

masp::SolveOptions solve_options(const Options& o, const masp::ModularProgram& p,
                                 const std::optional<masp::DefModule>& inst) {
    masp::SolveOptions s;
    if (o.strategy != "naive" && o.strategy != "splitting")
        throw masp::error("unknown strategy '" + o.strategy + "'");
    s.strategy = o.strategy == "naive" ? masp::SolveOptions::Strategy::naive
                                       : masp::SolveOptions::Strategy::splitting;
    std::set<std::string> consts = masp::constants_of(p);
    if (inst) {
        auto more = masp::constants_of(*inst);
        consts.insert(more.begin(), more.end());
    }
    s.domain_override = parse_domain_bound(o.domain_bound, consts);
    s.max_branch = o.max_branch;
    if (!o.show.empty()) s.show_override = parse_predlist(o.show);
    s.jobs = effective_jobs(o);
    return s;
}

void print_answer_sets(const std::vector<masp::Interpretation>& models, const Options& o) {
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& m : models) {
            json as = json::array();
            for (const auto& a : m.atoms()) as.push_back(a.to_string());
            arr.push_back(std::move(as));
        }
        std::cout << arr.dump() << "\n";
        return;
    }
    int k = 0;
    for (const auto& m : models) std::cout << "Answer: " << ++k << "\n" << m.to_text() << "\n";
    std::cout << (models.empty() ? "UNSATISFIABLE" : "SATISFIABLE") << "\n";
}

int cmd_solve(const Options& o, bool force_naive) {
    Options opts = o;
    if (force_naive) opts.strategy = "naive";
    auto program = load_program(opts.inputs.at(0));
    auto inst = load_instance(opts);
    auto models = masp::answer_sets(program, inst, solve_options(opts, program, inst));
    print_answer_sets(models, opts);
    return models.empty() ? 1 : 0;
}

int cmd_smf(const Options& o) {
    auto program = load_program(o.inputs.at(0));
    auto inst = load_instance(o);
    auto joined = masp::join_instance(
        program, inst, o.show.empty() ? std::nullopt : std::optional(parse_predlist(o.show)));
    std::cout << masp::print_formula(masp::phi(joined)) << "\n";
    return 0;
}

int cmd_flatten(const Options& o) {
    auto program = load_program(o.inputs.at(0));
    auto inst = load_instance(o);
    auto joined = masp::join_instance(program, inst, std::nullopt);
    std::vector<masp::Diagnostic> warnings;
    auto flat = masp::flatten(joined, &warnings);
    for (const auto& w : warnings) std::cerr << w.to_string() << "\n";
    std::cout << masp::print_program(flat);
    return 0;
}

int cmd_check(const Options& o) {
    auto program = load_program(o.inputs.at(0));
    auto inst = load_instance(o);
    auto joined = masp::join_instance(program, inst, std::nullopt);
    auto rep = masp::is_coherent(joined);
    auto mods = masp::defmods(joined);

    if (o.format == "json") {
        json j;
        j["coherent"] = rep.coherent;
        j["simple"] = rep.simple;
        j["alpha_nf"] = rep.alpha_nf;
        j["disjoint_intensional"] = rep.disjoint_intensional;
        j["scc_covered"] = rep.scc_covered;
        j["violations"] = json::array();
        for (const auto& d : rep.violations) j["violations"].push_back(d.message);
        j["def_modules"] = json::array();
        for (const auto& m : mods)
            j["def_modules"].push_back({{"label", m.label()}, {"tight", masp::is_tight(m)}});
        std::cout << j.dump() << "\n";
        return 0;
    }
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::cout << "coherent: " << yn(rep.coherent) << "\n";
    std::cout << "  simple: " << yn(rep.simple) << "\n";
    std::cout << "  alpha-nf: " << yn(rep.alpha_nf) << "\n";
    std::cout << "  disjoint intensional: " << yn(rep.disjoint_intensional) << "\n";
    std::cout << "  scc covered: " << yn(rep.scc_covered) << "\n";
    for (const auto& d : rep.violations) std::cout << "  violation: " << d.message << "\n";
    std::string tight, nontight;
    for (const auto& m : mods) (masp::is_tight(m) ? tight : nontight) += "  " + m.label() + "\n";
    std::cout << "tight def-modules:\n" << tight;
    if (!nontight.empty()) std::cout << "non-tight def-modules:\n" << nontight;
    return 0;
}

int cmd_depgraph(const Options& o) {
    auto program = load_program(o.inputs.at(0));
    auto inst = load_instance(o);
    auto joined = masp::join_instance(program, inst, std::nullopt);
    std::cout << masp::to_dot(masp::dependency_graph(joined));
    return 0;
}

int cmd_reduce(const Options& o) {
    auto program = load_program(o.inputs.at(0));
    auto inst = load_instance(o);
    auto joined = masp::join_instance(program, inst, std::nullopt);
    auto mods = masp::defmods(joined);

    auto selected = [&](size_t idx, const masp::DefModule& m) {
        if (o.module_sel.empty()) return true;
        if (o.module_sel == std::to_string(idx + 1)) return true;
        for (const auto& p : m.intensional)
            if (o.module_sel == p.to_string() || o.module_sel == p.name) return true;
        return false;
    };

    json out = json::array();
    bool any = false;
    for (size_t i = 0; i < mods.size(); ++i) {
        const auto& m = mods[i];
        if (!selected(i, m)) continue;
        any = true;
        auto [kept, denials] = masp::extract_denials(m);
        auto comp = masp::completion(m);
        auto choice = masp::reduce_choice(m);
        auto circ = masp::circumscription_applicability(m);

        if (o.format == "json") {
            json j;
            j["module"] = m.label();
            j["denials"] = masp::print_formula(denials);
            auto put = [&](const char* key, const masp::ReductionResult& r) {
                json e;
                e["applicable"] = r.applicable;
                if (r.applicable)
                    e["residual"] = masp::print_formula(r.residual);
                else
                    e["reason"] = r.reason;
                j[key] = std::move(e);
            };
            put("completion", comp);
            put("choice", choice);
            put("circumscription", circ);
            out.push_back(std::move(j));
            continue;
        }
        std::cout << m.label() << "\n";
        if (!masp::is_top(denials))
            std::cout << "  denials: " << masp::print_formula(denials) << "\n";
        auto show = [&](const char* name, const masp::ReductionResult& r) {
            if (r.applicable)
                std::cout << "  " << name << ": " << masp::print_formula(r.residual) << "\n";
            else
                std::cout << "  " << name << ": not applicable (" << r.reason << ")\n";
        };
        show("completion", comp);
        show("choice", choice);
        if (circ.applicable)
            std::cout << "  circumscription: applicable (negation-free)\n";
        else
            std::cout << "  circumscription: not applicable (" << circ.reason << ")\n";
    }
    if (!any) throw masp::error("no def-module matches --module " + o.module_sel);
    if (o.format == "json") std::cout << out.dump() << "\n";
    return 0;
}

masp::ContextTheory load_context(const Options& o) {
    masp::ContextTheory gamma;
    if (o.context.empty()) return gamma;
    auto src = masp::load_source(o.context, masp::SourceUnit::Kind::program);
    auto res = masp::parse_program(src);
    for (const auto& d : res.diagnostics) std::cerr << o.context << ":" << d.to_string() << "\n";
    if (!res.ok()) throw masp::error("parse failed: " + o.context);
    for (const auto& m : masp::defmods(*res.program))
        for (const auto& r : m.rules) gamma.sentences.push_back(masp::rule_to_formula(r));
    return gamma;
}

int cmd_equiv(const Options& o) {
    auto a = load_program(o.inputs.at(0));
    auto b = load_program(o.inputs.at(1));
    auto gamma = load_context(o);

    std::set<std::string> consts = masp::constants_of(a);
    auto cb = masp::constants_of(b);
    consts.insert(cb.begin(), cb.end());
    for (const auto& s : gamma.sentences) {
        auto cs = masp::constants_of(s);
        consts.insert(cs.begin(), cs.end());
    }
    auto bound = parse_domain_bound(o.domain_bound, consts);
    if (!bound) {
        if (consts.empty()) throw masp::error("no constants anywhere; supply --domain-bound");
        bound = masp::Domain::of(std::vector<std::string>(consts.begin(), consts.end()));
    }

    auto verdict = masp::strong_equiv_bounded(a, b, gamma, *bound, effective_jobs(o));
    bool equivalent = verdict.status == masp::EquivVerdict::Status::equivalent_up_to_bound;

    if (o.format == "json") {
        json j;
        j["status"] = equivalent ? "equivalent_up_to_bound" : "counterexample";
        j["bound"] = verdict.bound.constants;
        if (verdict.witness) {
            json w = json::array();
            for (const auto& atom : verdict.witness->atoms()) w.push_back(atom.to_string());
            j["witness"] = std::move(w);
            j["direction"] =
                verdict.direction == masp::EquivVerdict::Direction::holds_in_first_only
                    ? "first_only"
                    : "second_only";
        }
        std::cout << j.dump() << "\n";
    } else {
        std::string bound_text;
        for (const auto& c : verdict.bound.constants)
            bound_text += (bound_text.empty() ? "" : ",") + c;
        if (equivalent) {
            std::cout << "equivalent up to bound {" << bound_text << "}\n";
        } else {
            std::cout << "counterexample at bound {" << bound_text << "} (phi holds in the "
                      << (verdict.direction ==
                                  masp::EquivVerdict::Direction::holds_in_first_only
                              ? "first"
                              : "second")
                      << " program only)\n"
                      << verdict.witness->to_text() << "\n";
        }
    }
    return equivalent ? 0 : 1;
}

int cmd_replace(const Options& o) {
    auto host = load_program(o.inputs.at(0));
    auto old_mod = load_program(o.inputs.at(1));
    auto new_mod = load_program(o.inputs.at(2));
    std::cout << masp::print_program(masp::replace(host, old_mod, new_mod));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modular answer set toolkit"};
    app.require_subcommand(1);

    Options o;
    app.add_option("--jobs", o.jobs, "worker threads (default: MASP_JOBS or 1)");
    app.add_option("--seed", o.seed, "seed for randomized runs (echoed for reproducibility)");

    auto add_common = [&](CLI::App* c, int ninputs, bool instance = true) {
        c->add_option("inputs", o.inputs, "input files")->expected(ninputs);
        if (instance) c->add_option("--instance", o.instance, "instance file (.facts)");
        c->add_option("--format", o.format, "text|json|dot");
        return c;
    };

    auto* solve = add_common(app.add_subcommand("solve", "enumerate answer sets"), 1);
    solve->add_option("--domain-bound", o.domain_bound, "n (fresh constants) or list a,b,c");
    solve->add_option("--show", o.show, "override public predicates, e.g. in/2,edge/2");
    solve->add_option("--strategy", o.strategy, "splitting|naive");
    solve->add_option("--max-branch", o.max_branch, "candidate subset cap per def-module");

    auto* oracle =
        add_common(app.add_subcommand("oracle-solve", "answer sets via the naive oracle"), 1);
    oracle->add_option("--domain-bound", o.domain_bound, "n or list a,b,c");
    oracle->add_option("--show", o.show, "override public predicates");
    oracle->add_option("--max-branch", o.max_branch, "cap on enumerated extents");

    auto* smf = add_common(app.add_subcommand("smf", "print the second-order formula phi"), 1);
    smf->add_option("--show", o.show, "override public predicates");
    add_common(app.add_subcommand("flatten", "print the flattened program"), 1);
    add_common(app.add_subcommand("check", "coherence and tightness report"), 1);
    add_common(app.add_subcommand("depgraph", "dependency graph as DOT"), 1);
    auto* reduce = add_common(app.add_subcommand("reduce", "per-def-module reductions"), 1);
    reduce->add_option("--module", o.module_sel,
                       "select def-module by predicate or 1-based index");

    auto* equiv =
        add_common(app.add_subcommand("equiv", "bounded contextual strong equivalence"), 2, false);
    equiv->add_option("--context", o.context, "context theory file (rules read classically)");
    equiv->add_option("--domain-bound", o.domain_bound, "n or list a,b,c");

    add_common(app.add_subcommand("replace", "replace a module inside a host program"), 3, false);

    CLI11_PARSE(app, argc, argv);

    if (o.seed >= 0) std::cout << "seed: " << o.seed << "\n";
    try {
        if (app.got_subcommand("solve")) return cmd_solve(o, false);
        if (app.got_subcommand("oracle-solve")) return cmd_solve(o, true);
        if (app.got_subcommand("smf")) return cmd_smf(o);
        if (app.got_subcommand("flatten")) return cmd_flatten(o);
        if (app.got_subcommand("check")) return cmd_check(o);
        if (app.got_subcommand("depgraph")) return cmd_depgraph(o);
        if (app.got_subcommand("reduce")) return cmd_reduce(o);
        if (app.got_subcommand("equiv")) return cmd_equiv(o);
        if (app.got_subcommand("replace")) return cmd_replace(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
