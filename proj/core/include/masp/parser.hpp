// Concrete syntax for modular programs (.masp) and instances (.facts).
//
//   program := item* ; item := module | defblock | rule | show
//   module  := "module" IDENT "show" predlist "{" item* "}"
//   defblock:= "def" predlist "{" rule* "}"
//   show    := "#show" predlist "."
//   predlist:= (IDENT "/" INT ("," IDENT "/" INT)*)?
//   rule    := (head)? (":-" body)? "."
//   head    := atom (";" atom)* | "{" atom "}"
//   body    := lit ("," lit)* ; lit := ("not" ("not")?)? atom | term ("="|"!=") term
//   atom    := IDENT ("(" term ("," term)* ")")?
//
// Constants are lowercase-initial identifiers, variables uppercase-initial;
// "%" starts a line comment.  Bare rules at a nesting level are gathered
// into one implicit def-module whose intensional set is every predicate
// occurring in those rules.  The top level is an implicit module whose
// public set comes from #show; without #show all predicates are public.

#pragma once

#include <optional>

#include "masp/ast.hpp"
#include "masp/diagnostics.hpp"

namespace masp {

struct ParseResult {
    std::optional<ModularProgram> program;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return program.has_value() && !has_error(diagnostics); }
};

struct InstanceParseResult {
    std::optional<DefModule> instance;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return instance.has_value() && !has_error(diagnostics); }
};

ParseResult parse_program(const SourceUnit& source);

/// Instances are fact files: ground atoms terminated by ".".  The resulting
/// def-module has the fact predicates as intensional tuple.
InstanceParseResult parse_instance(const SourceUnit& source);

SourceUnit load_source(const std::string& path, SourceUnit::Kind kind);

}  // namespace masp
