#include "ufk/builtins.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace ufk {

namespace {

const std::vector<Builtin>& table() {
    static const std::vector<Builtin> kTable = {
        {"Nat", Kind::Nat, {}},
        {"zero", Kind::Zero, {}},
        {"succ", Kind::Succ, {0}},
        {"natind", Kind::NatInd, {1, 0, 2, 0}},
        {"Empty", Kind::Empty, {}},
        {"emptyind", Kind::EmptyInd, {1, 0}},
        {"Unit", Kind::Unit, {}},
        {"star", Kind::Star, {}},
        {"unitind", Kind::UnitInd, {1, 0, 0}},
        {"Coprod", Kind::Coprod, {0, 0}},
        {"inl", Kind::Inl, {0, 0}},
        {"inr", Kind::Inr, {0, 0}},
        {"coprodind", Kind::CoprodInd, {1, 1, 1, 0}},
        {"Id", Kind::Id, {0, 0, 0}},
        {"refl", Kind::Refl, {0, 0}},
        {"J", Kind::J, {0, 0, 2, 0, 0, 0}},
        {"pair", Kind::Pair, {0, 0, 0}},
        {"pr1", Kind::Pr1, {0}},
        {"pr2", Kind::Pr2, {0}},
    };
    return kTable;
}

constexpr std::array<std::string_view, 9> kKeywords = {"def", "axiom", "import", "fun", "forall",
                                                        "Sum", "Type", "in",     "_"};

}  // namespace

const Builtin* find_builtin(std::string_view name) {
    for (const auto& b : table())
        if (b.name == name) return &b;
    return nullptr;
}

bool is_keyword(std::string_view name) {
    return std::find(kKeywords.begin(), kKeywords.end(), name) != kKeywords.end();
}

bool is_reserved(std::string_view name) { return is_keyword(name) || find_builtin(name) != nullptr; }

}  // namespace ufk
