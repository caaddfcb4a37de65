#pragma once

#include <string>

#include "ufk/environment.hpp"
#include "ufk/term.hpp"

namespace ufk {

/// Render a core term in surface syntax that re-parses to the same term.
///
/// Bound variables are named after their binding depth (`x0`, `x1`, ...),
/// skipping anything `env` declares. `depth` free variables are assumed,
/// named the same way. Nat numerals print as decimal literals.
std::string print_term(const TermPtr& t, std::size_t depth = 0, const GlobalEnv* env = nullptr);

/// Name used for the variable bound at `level`.
std::string binder_name(std::size_t level, const GlobalEnv* env = nullptr);

}  // namespace ufk
