#include "ufk/typecheck.hpp"

#include <algorithm>

#include "ufk/print.hpp"

namespace ufk {

namespace {

bool is_canonical_type(const TermPtr& t) {
    switch (t->kind()) {
        case Kind::Universe:
        case Kind::Pi:
        case Kind::Sigma:
        case Kind::Id:
        case Kind::Nat:
        case Kind::Empty:
        case Kind::Unit:
        case Kind::Coprod:
            return true;
        default:
            return false;
    }
}

class Checker {
public:
    Checker(const GlobalEnv& env, const CheckOptions& opts, const SpanMap* spans = nullptr, SourceSpan fallback = {})
        : env_(env), opts_(opts), spans_(spans), fallback_(std::move(fallback)) {
        if (fallback_.file.empty()) fallback_.file = "<kernel>";
    }

    TermPtr infer(Context& ctx, const TermPtr& t) {
        Trail trail(*this, t);
        switch (t->kind()) {
            case Kind::Var: {
                if (t->index() >= ctx.size()) throw ScopeViolation("infer: variable out of scope");
                return shift(ctx[ctx.size() - 1 - t->index()], 0, static_cast<std::int64_t>(t->index() + 1));
            }
            case Kind::Universe:
                if (opts_.max_universe && t->level() > *opts_.max_universe)
                    fail(ErrorCode::UniverseError, "universe Type " + std::to_string(t->level()) +
                                                       " exceeds the maximum level " +
                                                       std::to_string(*opts_.max_universe));
                return Term::universe(t->level() + 1);
            case Kind::Pi:
            case Kind::Sigma:
            case Kind::Coprod: {
                const auto i = universe(ctx, t->arg(0));
                std::uint64_t j;
                if (t->kind() == Kind::Coprod) {
                    j = universe(ctx, t->arg(1));
                } else {
                    Extend ext(ctx, t->arg(0));
                    j = universe(ctx, t->arg(1));
                }
                return Term::universe(std::max(i, j));
            }
            case Kind::Lam: {
                universe(ctx, t->arg(0));
                Extend ext(ctx, t->arg(0));
                TermPtr body_type = infer(ctx, t->arg(1));
                return Term::pi(t->arg(0), std::move(body_type));
            }
            case Kind::App: {
                TermPtr fn_type = whnf(ctx, infer(ctx, t->arg(0)));
                if (fn_type->kind() != Kind::Pi)
                    fail(ErrorCode::NotAFunction, "not a function: '" + show(ctx, t->arg(0)) + "' has type '" +
                                                      show(ctx, fn_type) + "'");
                check(ctx, t->arg(1), fn_type->arg(0));
                return instantiate(fn_type->arg(1), t->arg(1));
            }
            case Kind::Pair: {
                universe(ctx, t->arg(0));
                TermPtr s = whnf(ctx, t->arg(0));
                if (s->kind() != Kind::Sigma)
                    fail(ErrorCode::NotAPair, "pair annotation '" + show(ctx, t->arg(0)) + "' is not a Sum type");
                check(ctx, t->arg(1), s->arg(0));
                check(ctx, t->arg(2), instantiate(s->arg(1), t->arg(1)));
                return t->arg(0);
            }
            case Kind::Pr1:
            case Kind::Pr2: {
                TermPtr s = whnf(ctx, infer(ctx, t->arg(0)));
                if (s->kind() != Kind::Sigma)
                    fail(ErrorCode::NotAPair, "not a pair: '" + show(ctx, t->arg(0)) + "' has type '" + show(ctx, s) +
                                                  "'");
                if (t->kind() == Kind::Pr1) return s->arg(0);
                return instantiate(s->arg(1), Term::pr1(t->arg(0)));
            }
            case Kind::Id: {
                const auto i = universe(ctx, t->arg(0));
                check(ctx, t->arg(1), t->arg(0));
                check(ctx, t->arg(2), t->arg(0));
                return Term::universe(i);
            }
            case Kind::Refl:
                universe(ctx, t->arg(0));
                check(ctx, t->arg(1), t->arg(0));
                return Term::id(t->arg(0), t->arg(1), t->arg(1));
            case Kind::J:
                return infer_j(ctx, t);
            case Kind::Nat:
            case Kind::Empty:
            case Kind::Unit:
                return Term::universe(0);
            case Kind::Zero:
                return Term::nat();
            case Kind::Succ: {
                // Literals can be deep; walk down to the base.
                const Term* base = t.get();
                while (base->kind() == Kind::Succ && base->arg(0)->kind() == Kind::Succ) base = base->arg(0).get();
                check(ctx, base->arg(0), Term::nat());
                return Term::nat();
            }
            case Kind::Star:
                return Term::unit();
            case Kind::NatInd: {
                const auto& motive = t->arg(0);
                {
                    Extend ext(ctx, Term::nat());
                    universe(ctx, motive);
                }
                check(ctx, t->arg(1), instantiate(motive, Term::zero()));
                {
                    Extend n(ctx, Term::nat());
                    Extend ih(ctx, motive);
                    check(ctx, t->arg(2), substitute(shift(motive, 1, 2), 0, Term::succ(Term::var(1))));
                }
                check(ctx, t->arg(3), Term::nat());
                return instantiate(motive, t->arg(3));
            }
            case Kind::EmptyInd: {
                {
                    Extend ext(ctx, Term::empty());
                    universe(ctx, t->arg(0));
                }
                check(ctx, t->arg(1), Term::empty());
                return instantiate(t->arg(0), t->arg(1));
            }
            case Kind::UnitInd: {
                {
                    Extend ext(ctx, Term::unit());
                    universe(ctx, t->arg(0));
                }
                check(ctx, t->arg(1), instantiate(t->arg(0), Term::star()));
                check(ctx, t->arg(2), Term::unit());
                return instantiate(t->arg(0), t->arg(2));
            }
            case Kind::Inl:
            case Kind::Inr: {
                universe(ctx, t->arg(0));
                TermPtr c = whnf(ctx, t->arg(0));
                if (c->kind() != Kind::Coprod)
                    fail(ErrorCode::EliminatorShape, std::string(t->kind() == Kind::Inl ? "inl" : "inr") +
                                                         " annotation '" + show(ctx, t->arg(0)) +
                                                         "' is not a Coprod type");
                check(ctx, t->arg(1), c->arg(t->kind() == Kind::Inl ? 0 : 1));
                return t->arg(0);
            }
            case Kind::CoprodInd:
                return infer_coprod_ind(ctx, t);
            case Kind::Const: {
                const Declaration* d = env_.find(t->name());
                if (!d) fail(ErrorCode::UnboundIdentifier, "unknown constant '" + t->name() + "'");
                return d->type;
            }
        }
        throw ScopeViolation("infer: unknown term kind");
    }

    void check(Context& ctx, const TermPtr& t, const TermPtr& expected) {
        Trail trail(*this, t);
        if (t->kind() == Kind::Lam) {
            TermPtr pi = whnf(ctx, expected);
            if (pi->kind() == Kind::Pi) {
                universe(ctx, t->arg(0));
                if (!conv(ctx, t->arg(0), pi->arg(0))) mismatch(ctx, pi->arg(0), t->arg(0), "binder type mismatch");
                Extend ext(ctx, t->arg(0));
                check(ctx, t->arg(1), pi->arg(1));
                return;
            }
        }
        TermPtr actual = infer(ctx, t);
        if (alpha_equal(actual, expected)) return;
        TermPtr na = nf(ctx, actual);
        TermPtr ne = nf(ctx, expected);
        if (alpha_equal(na, ne)) return;
        if (na->kind() == Kind::Universe && ne->kind() == Kind::Universe) {
            if (na->level() <= ne->level()) return;
            fail(ErrorCode::UniverseError, "'" + show(ctx, t) + "' lives in " + show(ctx, na) +
                                               ", which is not contained in " + show(ctx, ne));
        }
        mismatch(ctx, ne, na, "type mismatch", true);
    }

    std::uint64_t universe(Context& ctx, const TermPtr& type) {
        TermPtr u = whnf(ctx, infer(ctx, type));
        if (u->kind() != Kind::Universe)
            fail(ErrorCode::UniverseError, "expected a type, but '" + show(ctx, type) + "' has type '" + show(ctx, u) +
                                               "'");
        return u->level();
    }

private:
    // Records the node being checked so errors can borrow the nearest span.
    struct Trail {
        Trail(Checker& c, const TermPtr& t) : c(c) { c.trail_.push_back(t.get()); }
        ~Trail() { c.trail_.pop_back(); }
        Checker& c;
    };

    struct Extend {
        Extend(Context& ctx, TermPtr type) : ctx(ctx) { ctx.push_back(std::move(type)); }
        ~Extend() { ctx.pop_back(); }
        Context& ctx;
    };

    TermPtr infer_j(Context& ctx, const TermPtr& t) {
        const auto& type = t->arg(0);
        const auto& base = t->arg(1);
        const auto& motive = t->arg(2);
        universe(ctx, type);
        check(ctx, base, type);
        {
            Extend y(ctx, type);
            Extend e(ctx, Term::id(shift(type, 0, 1), shift(base, 0, 1), Term::var(0)));
            universe(ctx, motive);
        }
        check(ctx, t->arg(3), instantiate2(motive, base, Term::refl(type, base)));
        check(ctx, t->arg(4), type);
        check(ctx, t->arg(5), Term::id(type, base, t->arg(4)));
        return instantiate2(motive, t->arg(4), t->arg(5));
    }

    TermPtr infer_coprod_ind(Context& ctx, const TermPtr& t) {
        const auto& motive = t->arg(0);
        const auto& scrutinee = t->arg(3);
        TermPtr c = whnf(ctx, infer(ctx, scrutinee));
        if (c->kind() != Kind::Coprod)
            fail(ErrorCode::EliminatorShape, "coprodind on '" + show(ctx, scrutinee) + "' of type '" + show(ctx, c) +
                                                 "', which is not a Coprod type");
        {
            Extend ext(ctx, c);
            universe(ctx, motive);
        }
        const TermPtr lifted = shift(motive, 1, 1);
        const TermPtr c_up = shift(c, 0, 1);
        {
            Extend a(ctx, c->arg(0));
            check(ctx, t->arg(1), substitute(lifted, 0, Term::inl(c_up, Term::var(0))));
        }
        {
            Extend b(ctx, c->arg(1));
            check(ctx, t->arg(2), substitute(lifted, 0, Term::inr(c_up, Term::var(0))));
        }
        return instantiate(motive, scrutinee);
    }

    TermPtr nf(const Context& ctx, const TermPtr& t) {
        try {
            return normalize(env_, t, ctx.size(), NormalizeOptions{opts_.max_steps});
        } catch (const StepLimitExceeded& e) {
            fail(ErrorCode::StepLimit, e.what());
        } catch (const StuckReduction& e) {
            fail(ErrorCode::TypeMismatch, std::string("ill-typed reduction: ") + e.what());
        }
    }

    TermPtr whnf(const Context& ctx, const TermPtr& t) { return is_canonical_type(t) ? t : nf(ctx, t); }

    bool conv(const Context& ctx, const TermPtr& a, const TermPtr& b) {
        return alpha_equal(a, b) || alpha_equal(nf(ctx, a), nf(ctx, b));
    }

    std::string show(const Context& ctx, const TermPtr& t) const { return print_term(t, ctx.size(), &env_); }

    [[noreturn]] void mismatch(const Context& ctx, TermPtr expected, TermPtr actual, const std::string& what,
                               bool normalized = false) {
        if (!normalized) {
            expected = nf(ctx, expected);
            actual = nf(ctx, actual);
        }
        fail(ErrorCode::TypeMismatch,
             what + ": expected '" + show(ctx, expected) + "', got '" + show(ctx, actual) + "'", expected, actual);
    }

    [[noreturn]] void fail(ErrorCode code, std::string message, TermPtr expected = nullptr, TermPtr actual = nullptr) {
        Diagnostic d{code, fallback_, std::move(message), std::move(expected), std::move(actual)};
        if (spans_) {
            for (auto it = trail_.rbegin(); it != trail_.rend(); ++it) {
                auto found = spans_->find(*it);
                if (found != spans_->end()) {
                    d.span = found->second;
                    break;
                }
            }
        }
        throw Error(std::move(d));
    }

    const GlobalEnv& env_;
    CheckOptions opts_;
    const SpanMap* spans_;
    SourceSpan fallback_;
    std::vector<const Term*> trail_;
};

}  // namespace

TermPtr infer(const GlobalEnv& env, const Context& ctx, const TermPtr& t, const CheckOptions& options) {
    Context local = ctx;
    return Checker(env, options).infer(local, t);
}

void check(const GlobalEnv& env, const Context& ctx, const TermPtr& t, const TermPtr& expected,
           const CheckOptions& options) {
    Context local = ctx;
    Checker(env, options).check(local, t, expected);
}

std::uint64_t universe_of(const GlobalEnv& env, const Context& ctx, const TermPtr& t, const CheckOptions& options) {
    Context local = ctx;
    return Checker(env, options).universe(local, t);
}

GlobalEnv add_decl(const GlobalEnv& env, const DeclInput& d, const CheckOptions& options) {
    if (env.contains(d.name))
        throw Error(Diagnostic{ErrorCode::DuplicateName, d.span, "duplicate declaration '" + d.name + "'", {}, {}});
    if (d.kind == DeclKind::Definition && !d.body)
        throw Error(Diagnostic{ErrorCode::ParseError, d.span, "definition '" + d.name + "' has no body", {}, {}});

    Checker checker(env, options, d.spans.get(), d.span);
    Context ctx;
    checker.universe(ctx, d.type);
    if (d.kind == DeclKind::Definition) checker.check(ctx, d.body, d.type);

    auto decl = std::make_shared<Declaration>();
    decl->name = d.name;
    decl->kind = d.kind;
    decl->type = d.type;
    decl->body = d.kind == DeclKind::Definition ? d.body : nullptr;
    decl->span = d.span;

    std::vector<std::string> refs;
    collect_constants(d.type, refs);
    if (decl->body) collect_constants(decl->body, refs);
    for (const auto& r : refs)
        if (const Declaration* dep = env.find(r)) decl->axioms_used.insert(dep->axioms_used.begin(), dep->axioms_used.end());
    if (decl->is_axiom()) decl->axioms_used.insert(decl->name);
    return env.extend(std::move(decl));
}

std::set<std::string> assumptions(const GlobalEnv& env, std::string_view name) {
    const Declaration* d = env.find(name);
    if (!d) {
        throw Error(Diagnostic{ErrorCode::UnboundIdentifier, SourceSpan{"<env>", 1, 1, 1, 1},
                               "unknown declaration '" + std::string(name) + "'", {}, {}});
    }
    return d->axioms_used;
}

}  // namespace ufk
