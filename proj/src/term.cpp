#include "ufk/term.hpp"

#include <algorithm>
#include <cassert>

namespace ufk {

namespace {

struct KindInfo {
    const char* name;
    std::size_t arity;
    unsigned binders[6];
};

constexpr KindInfo kKinds[] = {
    {"Var", 0, {}},
    {"Universe", 0, {}},
    {"Pi", 2, {0, 1}},
    {"Lam", 2, {0, 1}},
    {"App", 2, {0, 0}},
    {"Sigma", 2, {0, 1}},
    {"Pair", 3, {0, 0, 0}},
    {"Pr1", 1, {0}},
    {"Pr2", 1, {0}},
    {"Id", 3, {0, 0, 0}},
    {"Refl", 2, {0, 0}},
    {"J", 6, {0, 0, 2, 0, 0, 0}},
    {"Nat", 0, {}},
    {"Zero", 0, {}},
    {"Succ", 1, {0}},
    {"NatInd", 4, {1, 0, 2, 0}},
    {"Empty", 0, {}},
    {"EmptyInd", 2, {1, 0}},
    {"Unit", 0, {}},
    {"Star", 0, {}},
    {"UnitInd", 3, {1, 0, 0}},
    {"Coprod", 2, {0, 0}},
    {"Inl", 2, {0, 0}},
    {"Inr", 2, {0, 0}},
    {"CoprodInd", 4, {1, 1, 1, 0}},
    {"Const", 0, {}},
};

const KindInfo& info(Kind k) { return kKinds[static_cast<std::size_t>(k)]; }

}  // namespace

const char* kind_name(Kind k) { return info(k).name; }
std::size_t arity(Kind k) { return info(k).arity; }
unsigned binders(Kind k, std::size_t i) { return info(k).binders[i]; }

Term::Term(Kind kind, std::vector<TermPtr> args, std::uint64_t num, std::string name)
    : kind_(kind), num_(num), free_bound_(0), name_(std::move(name)), args_(std::move(args)) {
    assert(args_.size() == arity(kind_));
    if (kind_ == Kind::Var) {
        free_bound_ = num_ + 1;
        return;
    }
    for (std::size_t i = 0; i < args_.size(); ++i) {
        const std::uint64_t fb = args_[i]->free_bound_;
        const unsigned b = binders(kind_, i);
        if (fb > b) free_bound_ = std::max(free_bound_, fb - b);
    }
}

// Long Succ chains and deep spines would overflow the stack under the
// default recursive shared_ptr teardown; unlink uniquely-owned children
// onto an explicit worklist instead.
Term::~Term() {
    std::vector<TermPtr> pending = std::move(args_);
    while (!pending.empty()) {
        TermPtr t = std::move(pending.back());
        pending.pop_back();
        if (t && t.use_count() == 1) {
            auto& kids = const_cast<Term&>(*t).args_;
            for (auto& k : kids) pending.push_back(std::move(k));
            kids.clear();
        }
    }
}

TermPtr Term::make(Kind kind, std::vector<TermPtr> args, std::uint64_t num, std::string name) {
    return std::make_shared<const Term>(kind, std::move(args), num, std::move(name));
}

TermPtr Term::var(std::uint64_t index) { return make(Kind::Var, {}, index); }
TermPtr Term::universe(std::uint64_t level) { return make(Kind::Universe, {}, level); }
TermPtr Term::pi(TermPtr domain, TermPtr codomain) {
    return make(Kind::Pi, {std::move(domain), std::move(codomain)});
}
TermPtr Term::arrow(TermPtr domain, TermPtr codomain) {
    return pi(std::move(domain), shift(codomain, 0, 1));
}
TermPtr Term::lam(TermPtr domain, TermPtr body) {
    return make(Kind::Lam, {std::move(domain), std::move(body)});
}
TermPtr Term::app(TermPtr fn, TermPtr arg) { return make(Kind::App, {std::move(fn), std::move(arg)}); }
TermPtr Term::sigma(TermPtr first, TermPtr second) {
    return make(Kind::Sigma, {std::move(first), std::move(second)});
}
TermPtr Term::pair(TermPtr sigma_type, TermPtr fst, TermPtr snd) {
    return make(Kind::Pair, {std::move(sigma_type), std::move(fst), std::move(snd)});
}
TermPtr Term::pr1(TermPtr p) { return make(Kind::Pr1, {std::move(p)}); }
TermPtr Term::pr2(TermPtr p) { return make(Kind::Pr2, {std::move(p)}); }
TermPtr Term::id(TermPtr type, TermPtr lhs, TermPtr rhs) {
    return make(Kind::Id, {std::move(type), std::move(lhs), std::move(rhs)});
}
TermPtr Term::refl(TermPtr type, TermPtr point) { return make(Kind::Refl, {std::move(type), std::move(point)}); }
TermPtr Term::j(TermPtr type, TermPtr base, TermPtr motive, TermPtr case_refl, TermPtr endpoint, TermPtr path) {
    return make(Kind::J, {std::move(type), std::move(base), std::move(motive), std::move(case_refl),
                          std::move(endpoint), std::move(path)});
}
TermPtr Term::nat() { return make(Kind::Nat, {}); }
TermPtr Term::zero() { return make(Kind::Zero, {}); }
TermPtr Term::succ(TermPtr n) { return make(Kind::Succ, {std::move(n)}); }
TermPtr Term::numeral(std::uint64_t n) {
    TermPtr t = zero();
    for (std::uint64_t i = 0; i < n; ++i) t = succ(std::move(t));
    return t;
}
TermPtr Term::nat_ind(TermPtr motive, TermPtr case_zero, TermPtr case_succ, TermPtr scrutinee) {
    return make(Kind::NatInd, {std::move(motive), std::move(case_zero), std::move(case_succ), std::move(scrutinee)});
}
TermPtr Term::empty() { return make(Kind::Empty, {}); }
TermPtr Term::empty_ind(TermPtr motive, TermPtr scrutinee) {
    return make(Kind::EmptyInd, {std::move(motive), std::move(scrutinee)});
}
TermPtr Term::unit() { return make(Kind::Unit, {}); }
TermPtr Term::star() { return make(Kind::Star, {}); }
TermPtr Term::unit_ind(TermPtr motive, TermPtr case_star, TermPtr scrutinee) {
    return make(Kind::UnitInd, {std::move(motive), std::move(case_star), std::move(scrutinee)});
}
TermPtr Term::coprod(TermPtr left, TermPtr right) { return make(Kind::Coprod, {std::move(left), std::move(right)}); }
TermPtr Term::inl(TermPtr coprod_type, TermPtr v) { return make(Kind::Inl, {std::move(coprod_type), std::move(v)}); }
TermPtr Term::inr(TermPtr coprod_type, TermPtr v) { return make(Kind::Inr, {std::move(coprod_type), std::move(v)}); }
TermPtr Term::coprod_ind(TermPtr motive, TermPtr case_l, TermPtr case_r, TermPtr scrutinee) {
    return make(Kind::CoprodInd, {std::move(motive), std::move(case_l), std::move(case_r), std::move(scrutinee)});
}
TermPtr Term::constant(std::string name) { return make(Kind::Const, {}, 0, std::move(name)); }

namespace {

// Rebuild `t` with children produced by `f(child, extra_binders)`, keeping
// the original node when nothing changed.
template <class F>
TermPtr map_children(const TermPtr& t, F&& f) {
    const auto n = t->args().size();
    std::vector<TermPtr> kids;
    kids.reserve(n);
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
        kids.push_back(f(t->arg(i), binders(t->kind(), i)));
        changed |= kids.back() != t->arg(i);
    }
    if (!changed) return t;
    return Term::make(t->kind(), std::move(kids), t->index(), t->name());
}

TermPtr shift_rec(const TermPtr& t, std::uint64_t cutoff, std::int64_t amount) {
    if (t->free_bound() <= cutoff) return t;
    if (t->kind() == Kind::Var) {
        const auto i = static_cast<std::int64_t>(t->index());
        if (i + amount < 0) throw ScopeViolation("shift: index underflow");
        return Term::var(static_cast<std::uint64_t>(i + amount));
    }
    return map_children(t, [&](const TermPtr& c, unsigned b) { return shift_rec(c, cutoff + b, amount); });
}

TermPtr subst_rec(const TermPtr& t, std::uint64_t target, const TermPtr& u, std::uint64_t depth) {
    if (t->free_bound() <= target) return t;
    if (t->kind() == Kind::Var) {
        const auto i = t->index();
        if (i == target) return shift(u, 0, static_cast<std::int64_t>(depth));
        return Term::var(i - 1);
    }
    return map_children(t, [&](const TermPtr& c, unsigned b) { return subst_rec(c, target + b, u, depth + b); });
}

bool occurs_rec(const TermPtr& t, std::uint64_t index) {
    if (t->free_bound() <= index) return false;
    if (t->kind() == Kind::Var) return t->index() == index;
    for (std::size_t i = 0; i < t->args().size(); ++i)
        if (occurs_rec(t->arg(i), index + binders(t->kind(), i))) return true;
    return false;
}

}  // namespace

TermPtr shift(const TermPtr& t, std::uint64_t cutoff, std::int64_t amount) {
    if (amount == 0) return t;
    return shift_rec(t, cutoff, amount);
}

TermPtr substitute(const TermPtr& t, std::uint64_t target, const TermPtr& u) {
    return subst_rec(t, target, u, 0);
}

TermPtr instantiate(const TermPtr& body, const TermPtr& u) { return substitute(body, 0, u); }

TermPtr instantiate2(const TermPtr& body, const TermPtr& outer, const TermPtr& inner) {
    return substitute(substitute(body, 0, shift(inner, 0, 1)), 0, outer);
}

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
    const Term* t = a.get();
    const Term* u = b.get();
    while (true) {
        if (t == u) return true;
        if (t->kind() != u->kind() || t->index() != u->index() || t->name() != u->name()) return false;
        const auto n = t->args().size();
        if (n == 0) return true;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!alpha_equal(t->arg(i), u->arg(i))) return false;
        // Last child handled iteratively so Succ chains and right spines stay flat.
        t = t->arg(n - 1).get();
        u = u->arg(n - 1).get();
    }
}

bool occurs(const TermPtr& t, std::uint64_t index) { return occurs_rec(t, index); }

std::size_t term_size(const TermPtr& t) {
    std::size_t n = 0;
    std::vector<const Term*> stack{t.get()};
    while (!stack.empty()) {
        const Term* cur = stack.back();
        stack.pop_back();
        ++n;
        for (const auto& c : cur->args()) stack.push_back(c.get());
    }
    return n;
}

std::optional<std::uint64_t> as_numeral(const TermPtr& t) {
    std::uint64_t n = 0;
    const Term* cur = t.get();
    while (cur->kind() == Kind::Succ) {
        ++n;
        cur = cur->arg(0).get();
    }
    if (cur->kind() != Kind::Zero) return std::nullopt;
    return n;
}

void collect_constants(const TermPtr& t, std::vector<std::string>& out) {
    std::vector<const Term*> stack{t.get()};
    while (!stack.empty()) {
        const Term* cur = stack.back();
        stack.pop_back();
        if (cur->kind() == Kind::Const) {
            if (std::find(out.begin(), out.end(), cur->name()) == out.end()) out.push_back(cur->name());
            continue;
        }
        for (const auto& c : cur->args()) stack.push_back(c.get());
    }
}

}  // namespace ufk
