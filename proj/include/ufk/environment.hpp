#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ufk/diagnostic.hpp"
#include "ufk/term.hpp"

namespace ufk {

enum class DeclKind : std::uint8_t { Definition, Axiom };

struct Declaration {
    std::string name;
    DeclKind kind = DeclKind::Definition;
    TermPtr type;
    TermPtr body;  // null for axioms
    /// Transitive: every axiom reachable from type or body, plus the
    /// declaration itself when it is an axiom.
    std::set<std::string> axioms_used;
    SourceSpan span;

    bool is_axiom() const { return kind == DeclKind::Axiom; }
};

using DeclPtr = std::shared_ptr<const Declaration>;

/// Persistent map from names to checked declarations. Extending returns a
/// new snapshot and leaves the receiver untouched, so snapshots can be
/// shared across threads.
class GlobalEnv {
public:
    GlobalEnv();

    const Declaration* find(std::string_view name) const;
    DeclPtr find_ptr(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }

    /// Caller guarantees the name is fresh.
    GlobalEnv extend(DeclPtr decl) const;

    /// Declarations in insertion order.
    const std::vector<DeclPtr>& declarations() const { return *order_; }
    std::size_t size() const { return order_->size(); }

private:
    using Index = std::map<std::string, DeclPtr, std::less<>>;
    std::shared_ptr<const Index> index_;
    std::shared_ptr<const std::vector<DeclPtr>> order_;
};

}  // namespace ufk
