#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ufk/diagnostic.hpp"
#include "ufk/environment.hpp"
#include "ufk/normalize.hpp"
#include "ufk/term.hpp"

namespace ufk {

struct CheckOptions {
    std::uint64_t max_steps = kDefaultMaxSteps;
    /// Largest universe level a term may mention; unlimited when empty.
    std::optional<std::uint64_t> max_universe;
};

/// Source positions of elaborated core nodes, consulted when a kernel
/// error needs a location.
using SpanMap = std::unordered_map<const Term*, SourceSpan>;

/// Synthesize the type of `t` in `ctx`. Throws `Error` (E001-E006, E008).
TermPtr infer(const GlobalEnv& env, const Context& ctx, const TermPtr& t, const CheckOptions& options = {});

/// Check `t` against `expected`. A term of type `Type i` also checks against
/// `Type j` for j >= i; no other subtyping. Throws `Error` (E002, E003, ...).
void check(const GlobalEnv& env, const Context& ctx, const TermPtr& t, const TermPtr& expected,
           const CheckOptions& options = {});

/// Universe level of the type `t`, or E003 when `t` is not a type.
std::uint64_t universe_of(const GlobalEnv& env, const Context& ctx, const TermPtr& t,
                          const CheckOptions& options = {});

/// An elaborated declaration awaiting checking.
struct DeclInput {
    std::string name;
    DeclKind kind = DeclKind::Definition;
    TermPtr type;
    TermPtr body;
    SourceSpan span;
    std::shared_ptr<const SpanMap> spans;
};

/// Check `d` and return `env` extended with it. `env` itself is unchanged.
GlobalEnv add_decl(const GlobalEnv& env, const DeclInput& d, const CheckOptions& options = {});

/// The axioms `name` transitively depends on. E001 if absent.
std::set<std::string> assumptions(const GlobalEnv& env, std::string_view name);

}  // namespace ufk
