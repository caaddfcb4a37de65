#include "ufk/normalize.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ufk {

StepLimitExceeded::StepLimitExceeded(std::uint64_t budget)
    : std::runtime_error("reduction step limit of " + std::to_string(budget) + " exceeded"), budget_(budget) {}

namespace {

struct Value;
struct Neutral;
struct EnvNode;
using Val = std::shared_ptr<const Value>;
using Neu = std::shared_ptr<const Neutral>;
using Env = std::shared_ptr<const EnvNode>;

struct EnvNode {
    Val head;
    Env tail;
};

Env cons(Val v, Env tail) { return std::make_shared<const EnvNode>(EnvNode{std::move(v), std::move(tail)}); }

/// A term body waiting for the values of the variables it binds.
struct Closure {
    Env env;
    TermPtr body;
};

enum class VK : std::uint8_t {
    Universe,
    Pi,
    Lam,
    Sigma,
    Pair,
    Id,
    Refl,
    Nat,
    Zero,
    Succ,  // num = how many successors sit on top of vals[0] (Zero or neutral)
    Empty,
    Unit,
    Star,
    Coprod,
    Inl,
    Inr,
    Neutral,
};

struct Value {
    VK kind;
    std::uint64_t num = 0;
    std::vector<Val> vals;
    std::optional<Closure> clo;
    Neu neu;
};

enum class NK : std::uint8_t { Var, Const, App, Pr1, Pr2, J, NatInd, EmptyInd, UnitInd, CoprodInd };

struct Neutral {
    NK kind;
    std::uint64_t level = 0;
    std::string name;
    Neu head;  // function, projected pair or eliminated scrutinee
    std::vector<Val> vals;
    std::vector<Closure> clos;
};

Val mk(VK kind, std::vector<Val> vals = {}, std::uint64_t num = 0) {
    auto v = std::make_shared<Value>();
    v->kind = kind;
    v->num = num;
    v->vals = std::move(vals);
    return v;
}

Val mk_binder(VK kind, Val dom, Closure clo) {
    auto v = std::make_shared<Value>();
    v->kind = kind;
    v->vals = {std::move(dom)};
    v->clo = std::move(clo);
    return v;
}

Val mk_neutral(Neutral n) {
    auto v = std::make_shared<Value>();
    v->kind = VK::Neutral;
    v->neu = std::make_shared<const Neutral>(std::move(n));
    return v;
}

Val fresh(std::uint64_t level) { return mk_neutral(Neutral{NK::Var, level, {}, nullptr, {}, {}}); }

class Machine {
public:
    Machine(const GlobalEnv& genv, const NormalizeOptions& opts) : genv_(genv), max_steps_(opts.max_steps) {}

    Val eval(const Env& env, const TermPtr& t) {
        switch (t->kind()) {
            case Kind::Var: {
                const EnvNode* node = env.get();
                for (std::uint64_t i = 0; i < t->index() && node; ++i) node = node->tail.get();
                if (!node) throw ScopeViolation("eval: unbound variable");
                return node->head;
            }
            case Kind::Universe:
                return mk(VK::Universe, {}, t->level());
            case Kind::Pi:
                return mk_binder(VK::Pi, eval(env, t->arg(0)), Closure{env, t->arg(1)});
            case Kind::Lam:
                return mk_binder(VK::Lam, eval(env, t->arg(0)), Closure{env, t->arg(1)});
            case Kind::Sigma:
                return mk_binder(VK::Sigma, eval(env, t->arg(0)), Closure{env, t->arg(1)});
            case Kind::App:
                return apply_value(eval(env, t->arg(0)), eval(env, t->arg(1)));
            case Kind::Pair:
                return mk(VK::Pair, {eval(env, t->arg(0)), eval(env, t->arg(1)), eval(env, t->arg(2))});
            case Kind::Pr1:
                return project(eval(env, t->arg(0)), true);
            case Kind::Pr2:
                return project(eval(env, t->arg(0)), false);
            case Kind::Id:
                return mk(VK::Id, {eval(env, t->arg(0)), eval(env, t->arg(1)), eval(env, t->arg(2))});
            case Kind::Refl:
                return mk(VK::Refl, {eval(env, t->arg(0)), eval(env, t->arg(1))});
            case Kind::J: {
                Val path = eval(env, t->arg(5));
                if (path->kind == VK::Refl) {
                    tick();
                    return eval(env, t->arg(3));
                }
                if (path->kind != VK::Neutral) throw StuckReduction("J on a non-path");
                return mk_neutral(Neutral{NK::J,
                                          0,
                                          {},
                                          path->neu,
                                          {eval(env, t->arg(0)), eval(env, t->arg(1)), eval(env, t->arg(3)),
                                           eval(env, t->arg(4))},
                                          {Closure{env, t->arg(2)}}});
            }
            case Kind::Nat:
                return mk(VK::Nat);
            case Kind::Zero:
                return mk(VK::Zero);
            case Kind::Succ: {
                std::uint64_t count = 0;
                const Term* base = t.get();
                while (base->kind() == Kind::Succ) {
                    base = base->arg(0).get();
                    ++count;
                }
                // `base` is kept alive by `t`.
                Val n = eval(env, TermPtr(t, base));
                if (n->kind == VK::Succ) return mk(VK::Succ, {n->vals[0]}, n->num + count);
                return mk(VK::Succ, {std::move(n)}, count);
            }
            case Kind::NatInd:
                return nat_ind(Closure{env, t->arg(0)}, eval(env, t->arg(1)), Closure{env, t->arg(2)},
                               eval(env, t->arg(3)));
            case Kind::Empty:
                return mk(VK::Empty);
            case Kind::EmptyInd: {
                Val s = eval(env, t->arg(1));
                if (s->kind != VK::Neutral) throw StuckReduction("emptyind on a non-neutral");
                return mk_neutral(Neutral{NK::EmptyInd, 0, {}, s->neu, {}, {Closure{env, t->arg(0)}}});
            }
            case Kind::Unit:
                return mk(VK::Unit);
            case Kind::Star:
                return mk(VK::Star);
            case Kind::UnitInd: {
                Val s = eval(env, t->arg(2));
                if (s->kind == VK::Star) {
                    tick();
                    return eval(env, t->arg(1));
                }
                if (s->kind != VK::Neutral) throw StuckReduction("unitind on a non-unit");
                return mk_neutral(
                    Neutral{NK::UnitInd, 0, {}, s->neu, {eval(env, t->arg(1))}, {Closure{env, t->arg(0)}}});
            }
            case Kind::Coprod:
                return mk(VK::Coprod, {eval(env, t->arg(0)), eval(env, t->arg(1))});
            case Kind::Inl:
                return mk(VK::Inl, {eval(env, t->arg(0)), eval(env, t->arg(1))});
            case Kind::Inr:
                return mk(VK::Inr, {eval(env, t->arg(0)), eval(env, t->arg(1))});
            case Kind::CoprodInd: {
                Val s = eval(env, t->arg(3));
                if (s->kind == VK::Inl) return apply(Closure{env, t->arg(1)}, s->vals[1]);
                if (s->kind == VK::Inr) return apply(Closure{env, t->arg(2)}, s->vals[1]);
                if (s->kind != VK::Neutral) throw StuckReduction("coprodind on a non-coproduct");
                return mk_neutral(Neutral{NK::CoprodInd,
                                          0,
                                          {},
                                          s->neu,
                                          {},
                                          {Closure{env, t->arg(0)}, Closure{env, t->arg(1)}, Closure{env, t->arg(2)}}});
            }
            case Kind::Const: {
                const Declaration* d = genv_.find(t->name());
                if (!d || d->is_axiom()) return mk_neutral(Neutral{NK::Const, 0, t->name(), nullptr, {}, {}});
                tick();
                return eval(nullptr, d->body);
            }
        }
        throw ScopeViolation("eval: unknown term kind");
    }

    TermPtr quote(std::uint64_t depth, const Val& v) {
        switch (v->kind) {
            case VK::Universe:
                return Term::universe(v->num);
            case VK::Pi:
                return Term::pi(quote(depth, v->vals[0]), quote(depth + 1, apply(*v->clo, fresh(depth))));
            case VK::Sigma:
                return Term::sigma(quote(depth, v->vals[0]), quote(depth + 1, apply(*v->clo, fresh(depth))));
            case VK::Lam: {
                TermPtr dom = quote(depth, v->vals[0]);
                TermPtr body = quote(depth + 1, apply(*v->clo, fresh(depth)));
                // eta: fun x => g x  ~>  g
                if (body->kind() == Kind::App && body->arg(1)->kind() == Kind::Var && body->arg(1)->index() == 0 &&
                    !occurs(body->arg(0), 0))
                    return shift(body->arg(0), 0, -1);
                return Term::lam(std::move(dom), std::move(body));
            }
            case VK::Pair: {
                TermPtr fst = quote(depth, v->vals[1]);
                TermPtr snd = quote(depth, v->vals[2]);
                // eta: pair S (pr1 p) (pr2 p)  ~>  p
                if (fst->kind() == Kind::Pr1 && snd->kind() == Kind::Pr2 && alpha_equal(fst->arg(0), snd->arg(0)))
                    return fst->arg(0);
                return Term::pair(quote(depth, v->vals[0]), std::move(fst), std::move(snd));
            }
            case VK::Id:
                return Term::id(quote(depth, v->vals[0]), quote(depth, v->vals[1]), quote(depth, v->vals[2]));
            case VK::Refl:
                return Term::refl(quote(depth, v->vals[0]), quote(depth, v->vals[1]));
            case VK::Nat:
                return Term::nat();
            case VK::Zero:
                return Term::zero();
            case VK::Succ: {
                TermPtr t = quote(depth, v->vals[0]);
                for (std::uint64_t i = 0; i < v->num; ++i) {
                    tick();
                    t = Term::succ(std::move(t));
                }
                return t;
            }
            case VK::Empty:
                return Term::empty();
            case VK::Unit:
                return Term::unit();
            case VK::Star:
                return Term::star();
            case VK::Coprod:
                return Term::coprod(quote(depth, v->vals[0]), quote(depth, v->vals[1]));
            case VK::Inl:
                return Term::inl(quote(depth, v->vals[0]), quote(depth, v->vals[1]));
            case VK::Inr:
                return Term::inr(quote(depth, v->vals[0]), quote(depth, v->vals[1]));
            case VK::Neutral:
                return quote_neutral(depth, v->neu);
        }
        throw ScopeViolation("quote: unknown value kind");
    }

private:
    void tick() {
        if (++steps_ > max_steps_) throw StepLimitExceeded(max_steps_);
    }

    Val apply(const Closure& c, Val arg) {
        tick();
        return eval(cons(std::move(arg), c.env), c.body);
    }

    Val apply2(const Closure& c, Val outer, Val inner) {
        tick();
        return eval(cons(std::move(inner), cons(std::move(outer), c.env)), c.body);
    }

    Val apply_value(Val f, Val a) {
        if (f->kind == VK::Lam) return apply(*f->clo, std::move(a));
        if (f->kind != VK::Neutral) throw StuckReduction("application of a non-function");
        return mk_neutral(Neutral{NK::App, 0, {}, f->neu, {std::move(a)}, {}});
    }

    Val project(Val p, bool first) {
        if (p->kind == VK::Pair) {
            tick();
            return p->vals[first ? 1 : 2];
        }
        if (p->kind != VK::Neutral) throw StuckReduction("projection of a non-pair");
        return mk_neutral(Neutral{first ? NK::Pr1 : NK::Pr2, 0, {}, p->neu, {}, {}});
    }

    // Iterates from the base of the numeral upwards so deep numerals do not
    // recurse.
    Val nat_ind(const Closure& motive, Val case_zero, const Closure& case_succ, Val n) {
        Val base;
        std::uint64_t count = 0;
        if (n->kind == VK::Succ) {
            base = n->vals[0];
            count = n->num;
        } else {
            base = n;
        }
        Val acc;
        if (base->kind == VK::Zero) {
            if (count == 0) tick();
            acc = case_zero;
        } else if (base->kind == VK::Neutral) {
            acc = mk_neutral(Neutral{NK::NatInd, 0, {}, base->neu, {case_zero}, {motive, case_succ}});
        } else {
            throw StuckReduction("natind on a non-number");
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            Val pred = i == 0 ? base : mk(VK::Succ, {base}, i);
            acc = apply2(case_succ, std::move(pred), std::move(acc));
        }
        return acc;
    }

    TermPtr quote_neutral(std::uint64_t depth, const Neu& n) {
        switch (n->kind) {
            case NK::Var:
                if (n->level >= depth) throw ScopeViolation("quote: variable escapes its scope");
                return Term::var(depth - n->level - 1);
            case NK::Const:
                return Term::constant(n->name);
            case NK::App:
                return Term::app(quote_neutral(depth, n->head), quote(depth, n->vals[0]));
            case NK::Pr1:
                return Term::pr1(quote_neutral(depth, n->head));
            case NK::Pr2:
                return Term::pr2(quote_neutral(depth, n->head));
            case NK::J:
                return Term::j(quote(depth, n->vals[0]), quote(depth, n->vals[1]),
                               quote(depth + 2, apply2(n->clos[0], fresh(depth), fresh(depth + 1))),
                               quote(depth, n->vals[2]), quote(depth, n->vals[3]), quote_neutral(depth, n->head));
            case NK::NatInd:
                return Term::nat_ind(quote(depth + 1, apply(n->clos[0], fresh(depth))), quote(depth, n->vals[0]),
                                     quote(depth + 2, apply2(n->clos[1], fresh(depth), fresh(depth + 1))),
                                     quote_neutral(depth, n->head));
            case NK::EmptyInd:
                return Term::empty_ind(quote(depth + 1, apply(n->clos[0], fresh(depth))),
                                       quote_neutral(depth, n->head));
            case NK::UnitInd:
                return Term::unit_ind(quote(depth + 1, apply(n->clos[0], fresh(depth))), quote(depth, n->vals[0]),
                                      quote_neutral(depth, n->head));
            case NK::CoprodInd:
                return Term::coprod_ind(quote(depth + 1, apply(n->clos[0], fresh(depth))),
                                        quote(depth + 1, apply(n->clos[1], fresh(depth))),
                                        quote(depth + 1, apply(n->clos[2], fresh(depth))),
                                        quote_neutral(depth, n->head));
        }
        throw ScopeViolation("quote: unknown neutral kind");
    }

    const GlobalEnv& genv_;
    std::uint64_t steps_ = 0;
    std::uint64_t max_steps_;
};

Env initial_env(std::size_t depth) {
    Env env;
    for (std::size_t level = 0; level < depth; ++level) env = cons(fresh(level), std::move(env));
    return env;
}

}  // namespace

TermPtr normalize(const GlobalEnv& env, const TermPtr& t, std::size_t depth, const NormalizeOptions& options) {
    Machine m(env, options);
    return m.quote(depth, m.eval(initial_env(depth), t));
}

bool definitionally_equal(const GlobalEnv& env, const TermPtr& t, const TermPtr& u, std::size_t depth,
                          const NormalizeOptions& options) {
    if (alpha_equal(t, u)) return true;
    return alpha_equal(normalize(env, t, depth, options), normalize(env, u, depth, options));
}

}  // namespace ufk
