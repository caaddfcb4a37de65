#include <algorithm>
#include <set>

#include "ufk/builtins.hpp"
#include "ufk/surface.hpp"

namespace ufk::surface {

namespace {

[[noreturn]] void fail(ErrorCode code, const SourceSpan& at, std::string message) {
    throw Error(Diagnostic{code, at, std::move(message), nullptr, nullptr});
}

void check_binder_name(const Binder& b) {
    if (is_reserved(b.name) && b.name != "_") fail(ErrorCode::DuplicateName, b.span, "'" + b.name + "' is reserved");
}

class Elaborator {
public:
    Elaborator(const GlobalEnv& env, SpanMap* spans) : env_(env), spans_(spans) {}

    TermPtr term(const ExprPtr& e) {
        switch (e->kind) {
            case ExprKind::Ident:
                return ident(e);
            case ExprKind::Hole:
                fail(ErrorCode::ParseError, e->span,
                     "'_' is only allowed as a binder annotation in an eliminator argument");
            case ExprKind::Universe:
                return note(Term::universe(e->number), e);
            case ExprKind::Numeral:
                return note(Term::numeral(e->number), e);
            case ExprKind::App:
                return app(e);
            case ExprKind::Fun:
            case ExprKind::Forall:
            case ExprKind::Sum:
                return binding(e, e->binders, 0);
            case ExprKind::Arrow: {
                auto dom = term(e->args[0]);
                auto cod = term(e->args[1]);
                return note(Term::arrow(std::move(dom), std::move(cod)), e);
            }
            case ExprKind::Eq: {
                auto lhs = term(e->args[0]);
                auto rhs = term(e->args[1]);
                auto type = term(e->args[2]);
                return note(Term::id(std::move(type), std::move(lhs), std::move(rhs)), e);
            }
        }
        fail(ErrorCode::ParseError, e->span, "unsupported expression");
    }

    // Binders `bs[i..]` then the body, as nested Lam/Pi/Sigma.
    TermPtr binding(const ExprPtr& e, const std::vector<Binder>& bs, std::size_t i) {
        if (i == bs.size()) return term(e->args[0]);
        const Binder& b = bs[i];
        check_binder_name(b);
        if (b.type->kind == ExprKind::Hole)
            fail(ErrorCode::ParseError, b.span, "binder '" + b.name + "' needs a type annotation");
        auto dom = term(b.type);
        scope_.push_back(b.name);
        TermPtr rest;
        try {
            rest = binding(e, bs, i + 1);
        } catch (...) {
            scope_.pop_back();
            throw;
        }
        scope_.pop_back();
        TermPtr t;
        switch (e->kind) {
            case ExprKind::Fun: t = Term::lam(std::move(dom), std::move(rest)); break;
            case ExprKind::Forall: t = Term::pi(std::move(dom), std::move(rest)); break;
            default: t = Term::sigma(std::move(dom), std::move(rest)); break;
        }
        if (spans_) spans_->emplace(t.get(), i == 0 ? e->span : b.span);
        return t;
    }

    std::vector<std::string>& scope() { return scope_; }

private:
    TermPtr note(TermPtr t, const ExprPtr& e) {
        if (spans_) spans_->emplace(t.get(), e->span);
        return t;
    }

    std::optional<std::size_t> local(const std::string& name) const {
        for (std::size_t i = scope_.size(); i-- > 0;)
            if (scope_[i] == name) return scope_.size() - 1 - i;
        return std::nullopt;
    }

    const Builtin* builtin_head(const ExprPtr& e) const {
        if (e->kind != ExprKind::Ident || local(e->name) || env_.contains(e->name)) return nullptr;
        return find_builtin(e->name);
    }

    TermPtr ident(const ExprPtr& e) {
        if (auto i = local(e->name)) return note(Term::var(*i), e);
        if (env_.contains(e->name)) return note(Term::constant(e->name), e);
        if (const Builtin* b = find_builtin(e->name)) {
            if (!b->binds.empty())
                fail(ErrorCode::EliminatorShape, e->span,
                     "'" + e->name + "' expects " + std::to_string(b->binds.size()) + " arguments, got 0");
            return note(Term::make(b->kind, {}), e);
        }
        fail(ErrorCode::UnboundIdentifier, e->span, "unbound identifier '" + e->name + "'");
    }

    TermPtr app(const ExprPtr& e) {
        std::vector<ExprPtr> spine;
        ExprPtr head = e;
        while (head->kind == ExprKind::App) {
            spine.push_back(head->args[1]);
            head = head->args[0];
        }
        std::reverse(spine.begin(), spine.end());

        std::size_t used = 0;
        TermPtr fn;
        if (const Builtin* b = builtin_head(head); b && !b->binds.empty()) {
            const auto n = b->binds.size();
            if (spine.size() < n)
                fail(ErrorCode::EliminatorShape, e->span,
                     "'" + head->name + "' expects " + std::to_string(n) + " arguments, got " +
                         std::to_string(spine.size()));
            std::vector<TermPtr> children;
            for (std::size_t i = 0; i < n; ++i) children.push_back(bound(spine[i], b->binds[i], head->name));
            fn = Term::make(b->kind, std::move(children));
            used = n;
            if (spans_) spans_->emplace(fn.get(), n == spine.size() ? e->span : head->span);
        } else {
            fn = term(head);
        }
        for (; used < spine.size(); ++used) {
            fn = Term::app(std::move(fn), term(spine[used]));
            if (spans_) spans_->emplace(fn.get(), SourceSpan{head->span.file, head->span.line, head->span.column,
                                                             spine[used]->span.end_line,
                                                             spine[used]->span.end_column});
        }
        return fn;
    }

    // An eliminator argument binding `k` variables. A `fun` must bind
    // exactly `k`; any other term is applied to the bound variables.
    TermPtr bound(const ExprPtr& arg, unsigned k, const std::string& owner) {
        if (k == 0) return term(arg);
        if (arg->kind == ExprKind::Fun) {
            if (arg->binders.size() != k)
                fail(ErrorCode::EliminatorShape, arg->span,
                     "this argument of '" + owner + "' must bind exactly " + std::to_string(k) + " variable" +
                         (k == 1 ? "" : "s") + ", got " + std::to_string(arg->binders.size()));
            const auto mark = scope_.size();
            try {
                for (const auto& b : arg->binders) {
                    check_binder_name(b);
                    // The kernel derives binder types; annotations are only scope-checked.
                    if (b.type->kind != ExprKind::Hole) term(b.type);
                    scope_.push_back(b.name);
                }
                auto body = term(arg->args[0]);
                scope_.resize(mark);
                return body;
            } catch (...) {
                scope_.resize(mark);
                throw;
            }
        }
        TermPtr f = shift(term(arg), 0, k);
        for (unsigned i = k; i-- > 0;) f = Term::app(std::move(f), Term::var(i));
        return f;
    }

    const GlobalEnv& env_;
    SpanMap* spans_;
    std::vector<std::string> scope_;
};

void collect_free(const ExprPtr& e, std::vector<std::string>& scope, std::set<std::string>& seen,
                  std::vector<std::string>& out);

void collect_binders(const std::vector<Binder>& bs, std::size_t i, const ExprPtr& body,
                     std::vector<std::string>& scope, std::set<std::string>& seen, std::vector<std::string>& out) {
    if (i == bs.size()) {
        if (body) collect_free(body, scope, seen, out);
        return;
    }
    if (bs[i].type) collect_free(bs[i].type, scope, seen, out);
    scope.push_back(bs[i].name);
    collect_binders(bs, i + 1, body, scope, seen, out);
    scope.pop_back();
}

void collect_free(const ExprPtr& e, std::vector<std::string>& scope, std::set<std::string>& seen,
                  std::vector<std::string>& out) {
    switch (e->kind) {
        case ExprKind::Ident:
            if (std::find(scope.begin(), scope.end(), e->name) == scope.end() && !find_builtin(e->name) &&
                seen.insert(e->name).second)
                out.push_back(e->name);
            return;
        case ExprKind::Fun:
        case ExprKind::Forall:
        case ExprKind::Sum:
            collect_binders(e->binders, 0, e->args[0], scope, seen, out);
            return;
        default:
            for (const auto& a : e->args) collect_free(a, scope, seen, out);
    }
}

}  // namespace

DeclInput elaborate(const SurfaceDecl& decl, const GlobalEnv& env) {
    if (is_reserved(decl.name))
        fail(ErrorCode::DuplicateName, decl.name_span, "'" + decl.name + "' is reserved and cannot be declared");
    if (env.contains(decl.name))
        fail(ErrorCode::DuplicateName, decl.name_span, "duplicate declaration '" + decl.name + "'");

    auto spans = std::make_shared<SpanMap>();
    Elaborator el(env, spans.get());
    std::vector<TermPtr> tele;
    for (const auto& b : decl.telescope) {
        check_binder_name(b);
        tele.push_back(el.term(b.type));
        el.scope().push_back(b.name);
    }
    TermPtr type = el.term(decl.type);
    TermPtr body = decl.body ? el.term(decl.body) : nullptr;
    for (std::size_t i = tele.size(); i-- > 0;) {
        type = Term::pi(tele[i], std::move(type));
        spans->emplace(type.get(), decl.telescope[i].span);
        if (body) {
            body = Term::lam(tele[i], std::move(body));
            spans->emplace(body.get(), decl.telescope[i].span);
        }
    }

    DeclInput in;
    in.name = decl.name;
    in.kind = decl.kind;
    in.type = std::move(type);
    in.body = std::move(body);
    in.span = decl.name_span;
    in.spans = std::move(spans);
    return in;
}

TermPtr elaborate_term(const ExprPtr& e, const GlobalEnv& env, SpanMap* spans) {
    return Elaborator(env, spans).term(e);
}

std::vector<std::string> free_identifiers(const SurfaceDecl& decl) {
    std::vector<std::string> scope;
    std::set<std::string> seen;
    std::vector<std::string> out;
    // Telescope scopes over both the type and the body.
    auto pack = std::make_shared<Expr>();
    pack->kind = ExprKind::Eq;
    pack->args = {decl.type};
    if (decl.body) pack->args.push_back(decl.body);
    collect_binders(decl.telescope, 0, pack, scope, seen, out);
    return out;
}

}  // namespace ufk::surface
