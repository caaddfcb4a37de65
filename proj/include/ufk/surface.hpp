#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ufk/diagnostic.hpp"
#include "ufk/environment.hpp"
#include "ufk/typecheck.hpp"

namespace ufk::surface {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind : std::uint8_t {
    Ident,     // name
    Hole,      // `_`, only valid as an eliminator binder annotation
    Universe,  // number
    Numeral,   // number
    App,       // args = {fn, arg}
    Fun,       // binders, args = {body}
    Forall,    // binders, args = {body}
    Sum,       // binders, args = {body}
    Arrow,     // args = {domain, codomain}
    Eq,        // args = {lhs, rhs, type}
};

struct Binder {
    std::string name;  // "_" for anonymous
    ExprPtr type;      // Hole when written without annotation
    SourceSpan span;
};

struct Expr {
    ExprKind kind;
    SourceSpan span;
    std::string name;
    std::uint64_t number = 0;
    std::vector<ExprPtr> args;
    std::vector<Binder> binders;
};

struct SurfaceDecl {
    DeclKind kind = DeclKind::Definition;
    std::string name;
    std::vector<Binder> telescope;
    ExprPtr type;
    ExprPtr body;  // null for axioms
    SourceSpan span;
    SourceSpan name_span;
};

struct Import {
    std::string path;  // as written
    SourceSpan span;
};

struct SourceFile {
    std::string path;  // for display
    std::string key;   // canonical, when loaded from disk
    std::vector<Import> imports;
    std::vector<SurfaceDecl> decls;
    /// Canonical paths of `imports`, filled in by the loader.
    std::vector<std::string> resolved;
};

/// Throws `Error` with E009 at the first offending token.
SourceFile parse_file(std::string_view text, const std::string& path);

/// A single term, e.g. from the command line.
ExprPtr parse_term(std::string_view text, const std::string& path = "<input>");

/// Resolve names and lower to core. Innermost binder wins, then `env`,
/// then builtins. E001 for unknown names, E006 for eliminator misuse,
/// E007 for reserved or duplicate declaration names.
DeclInput elaborate(const SurfaceDecl& decl, const GlobalEnv& env);

/// Lower a closed term.
TermPtr elaborate_term(const ExprPtr& e, const GlobalEnv& env, SpanMap* spans = nullptr);

/// Identifiers a declaration mentions that are not bound inside it.
std::vector<std::string> free_identifiers(const SurfaceDecl& decl);

/// Read a file from disk and parse it. An unreadable file is E009.
SourceFile load_file(const std::string& path);

/// Canonical path of `entry` and everything it imports, dependencies
/// first, each listed once. Import paths are relative to the importing
/// file. E010 on a cycle (the message lists it), E009 on unreadable files.
std::vector<std::string> resolve_imports(const std::string& entry);

/// `resolve_imports` returning the parsed files. `cache` is keyed by
/// canonical path and shared across calls, so each file is read once.
std::vector<const SourceFile*> load_with_imports(const std::string& entry,
                                                 std::map<std::string, SourceFile>& cache);

}  // namespace ufk::surface
