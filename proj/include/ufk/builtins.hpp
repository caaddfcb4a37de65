#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ufk/term.hpp"

namespace ufk {

/// A primitive written like a constant applied to a fixed number of
/// arguments, e.g. `J T t M f t' p`.
struct Builtin {
    std::string_view name;
    Kind kind;
    /// Variables bound by each argument; a motive written `fun (y : T) (e : ...) => M`
    /// must supply exactly this many binders.
    std::vector<unsigned> binds;
};

const Builtin* find_builtin(std::string_view name);

/// Surface keywords (`def`, `fun`, `in`, ...).
bool is_keyword(std::string_view name);

/// Builtins and keywords: never usable as declaration names.
bool is_reserved(std::string_view name);

}  // namespace ufk
