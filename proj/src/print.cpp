#include "ufk/print.hpp"

#include "ufk/builtins.hpp"

namespace ufk {

namespace {

enum Prec { kTerm = 0, kArrow = 1, kEq = 2, kApp = 3, kAtom = 4 };

class Printer {
public:
    explicit Printer(const GlobalEnv* env) : env_(env) {}

    std::string print(const TermPtr& t, std::size_t depth, int prec) {
        auto [text, own] = render(t, depth);
        return own < prec ? "(" + text + ")" : text;
    }

private:
    std::string name(std::size_t level) { return binder_name(level, env_); }

    std::string var(std::size_t depth, std::uint64_t index) {
        if (index >= depth) return "?" + std::to_string(index);
        return name(depth - 1 - index);
    }

    std::string binder(std::size_t level, const std::string& type) { return "(" + name(level) + " : " + type + ")"; }

    // A 1- or 2-binder eliminator argument, printed as an explicit fun.
    std::string motive(const TermPtr& body, std::size_t depth, std::vector<std::string> annots) {
        std::string s = "fun";
        for (std::size_t i = 0; i < annots.size(); ++i) s += " " + binder(depth + i, annots[i]);
        return "(" + s + " => " + print(body, depth + annots.size(), kTerm) + ")";
    }

    std::string args(std::string head, std::initializer_list<std::string> rest) {
        for (const auto& r : rest) head += " " + r;
        return head;
    }

    std::pair<std::string, int> render(const TermPtr& t, std::size_t d) {
        auto at = [&](std::size_t i) { return print(t->arg(i), d, kAtom); };
        switch (t->kind()) {
            case Kind::Var:
                return {var(d, t->index()), kAtom};
            case Kind::Universe:
                return {"Type " + std::to_string(t->level()), kApp};
            case Kind::Const:
                return {t->name(), kAtom};
            case Kind::Nat:
                return {"Nat", kAtom};
            case Kind::Zero:
                return {"0", kAtom};
            case Kind::Empty:
                return {"Empty", kAtom};
            case Kind::Unit:
                return {"Unit", kAtom};
            case Kind::Star:
                return {"star", kAtom};
            case Kind::Succ:
                if (auto n = as_numeral(t)) return {std::to_string(*n), kAtom};
                return {"succ " + at(0), kApp};
            case Kind::Pi: {
                if (!occurs(t->arg(1), 0))
                    return {print(t->arg(0), d, kEq) + " -> " + print(shift(t->arg(1), 0, -1), d, kArrow), kArrow};
                std::string s = "forall";
                std::size_t depth = d;
                TermPtr rest = t;
                while (rest->kind() == Kind::Pi && occurs(rest->arg(1), 0)) {
                    s += " " + binder(depth, print(rest->arg(0), depth, kTerm));
                    rest = rest->arg(1);
                    ++depth;
                }
                return {s + ", " + print(rest, depth, kTerm), kTerm};
            }
            case Kind::Lam: {
                std::string s = "fun";
                std::size_t depth = d;
                TermPtr rest = t;
                while (rest->kind() == Kind::Lam) {
                    s += " " + binder(depth, print(rest->arg(0), depth, kTerm));
                    rest = rest->arg(1);
                    ++depth;
                }
                return {s + " => " + print(rest, depth, kTerm), kTerm};
            }
            case Kind::Sigma:
                return {"Sum " + binder(d, print(t->arg(0), d, kTerm)) + ", " + print(t->arg(1), d + 1, kTerm), kTerm};
            case Kind::App: {
                std::vector<const TermPtr*> spine;
                const TermPtr* head = &t;
                while ((*head)->kind() == Kind::App) {
                    spine.push_back(&(*head)->arg(1));
                    head = &(*head)->arg(0);
                }
                std::string s = print(*head, d, kApp);
                for (auto it = spine.rbegin(); it != spine.rend(); ++it) s += " " + print(**it, d, kAtom);
                return {s, kApp};
            }
            case Kind::Pair:
                return {args("pair", {at(0), at(1), at(2)}), kApp};
            case Kind::Pr1:
                return {"pr1 " + at(0), kApp};
            case Kind::Pr2:
                return {"pr2 " + at(0), kApp};
            case Kind::Id:
                return {print(t->arg(1), d, kApp) + " = " + print(t->arg(2), d, kApp) + " in " + print(t->arg(0), d, kApp),
                        kEq};
            case Kind::Refl:
                return {args("refl", {at(0), at(1)}), kApp};
            case Kind::J: {
                const auto& type = t->arg(0);
                const auto& base = t->arg(1);
                std::string path_type = print(Term::id(shift(type, 0, 1), shift(base, 0, 1), Term::var(0)), d + 1, kTerm);
                return {args("J", {at(0), at(1), motive(t->arg(2), d, {print(type, d, kTerm), path_type}), at(3), at(4),
                                   at(5)}),
                        kApp};
            }
            case Kind::NatInd: {
                std::string hyp = print(t->arg(0), d + 1, kTerm);
                return {args("natind", {motive(t->arg(0), d, {"Nat"}), at(1), motive(t->arg(2), d, {"Nat", hyp}), at(3)}),
                        kApp};
            }
            case Kind::EmptyInd:
                return {args("emptyind", {motive(t->arg(0), d, {"Empty"}), at(1)}), kApp};
            case Kind::UnitInd:
                return {args("unitind", {motive(t->arg(0), d, {"Unit"}), at(1), at(2)}), kApp};
            case Kind::Coprod:
                return {args("Coprod", {at(0), at(1)}), kApp};
            case Kind::Inl:
                return {args("inl", {at(0), at(1)}), kApp};
            case Kind::Inr:
                return {args("inr", {at(0), at(1)}), kApp};
            case Kind::CoprodInd:
                // Binder types here are not recoverable from the node itself.
                return {args("coprodind", {motive(t->arg(0), d, {"_"}), motive(t->arg(1), d, {"_"}),
                                           motive(t->arg(2), d, {"_"}), at(3)}),
                        kApp};
        }
        return {"?", kAtom};
    }

    const GlobalEnv* env_;
};

}  // namespace

std::string binder_name(std::size_t level, const GlobalEnv* env) {
    std::string n = "x" + std::to_string(level);
    while ((env && env->contains(n)) || is_reserved(n)) n += "'";
    return n;
}

std::string print_term(const TermPtr& t, std::size_t depth, const GlobalEnv* env) {
    return Printer(env).print(t, depth, kTerm);
}

}  // namespace ufk
