#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ufk {

/// Universe index. `Type 0 : Type 1 : Type 2 ...`
struct Level {
    std::uint64_t value = 0;
    friend bool operator==(Level, Level) = default;
    friend auto operator<=>(Level, Level) = default;
};

enum class Kind : std::uint8_t {
    Var,
    Universe,
    Pi,
    Lam,
    App,
    Sigma,
    Pair,
    Pr1,
    Pr2,
    Id,
    Refl,
    J,
    Nat,
    Zero,
    Succ,
    NatInd,
    Empty,
    EmptyInd,
    Unit,
    Star,
    UnitInd,
    Coprod,
    Inl,
    Inr,
    CoprodInd,
    Const,
};

const char* kind_name(Kind k);

/// Number of children a node of kind `k` has.
std::size_t arity(Kind k);

/// Number of variables bound by child `i` of a node of kind `k`.
///
///   Pi/Lam/Sigma   second child binds 1
///   J              motive (child 2) binds endpoint then path
///   NatInd         motive binds n; caseSucc binds n then the hypothesis
///   EmptyInd/UnitInd  motive binds 1
///   CoprodInd      motive, caseL and caseR bind 1
unsigned binders(Kind k, std::size_t i);

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Nameless core syntax. Immutable once built; share freely.
///
/// Children are stored uniformly so that traversals (shift, substitution,
/// equality) are driven by the `binders` table instead of per-kind code.
class Term {
public:
    Term(Kind kind, std::vector<TermPtr> args, std::uint64_t num = 0, std::string name = {});
    ~Term();
    Term(const Term&) = delete;
    Term& operator=(const Term&) = delete;

    Kind kind() const { return kind_; }
    /// de Bruijn index for Var, level for Universe.
    std::uint64_t index() const { return num_; }
    std::uint64_t level() const { return num_; }
    const std::string& name() const { return name_; }
    const TermPtr& arg(std::size_t i) const { return args_[i]; }
    std::span<const TermPtr> args() const { return args_; }
    /// One more than the largest free index, 0 for closed terms.
    std::uint64_t free_bound() const { return free_bound_; }

    static TermPtr var(std::uint64_t index);
    static TermPtr universe(std::uint64_t level);
    static TermPtr pi(TermPtr domain, TermPtr codomain);
    static TermPtr arrow(TermPtr domain, TermPtr codomain);
    static TermPtr lam(TermPtr domain, TermPtr body);
    static TermPtr app(TermPtr fn, TermPtr arg);
    static TermPtr sigma(TermPtr first, TermPtr second);
    static TermPtr pair(TermPtr sigma_type, TermPtr fst, TermPtr snd);
    static TermPtr pr1(TermPtr p);
    static TermPtr pr2(TermPtr p);
    static TermPtr id(TermPtr type, TermPtr lhs, TermPtr rhs);
    static TermPtr refl(TermPtr type, TermPtr point);
    static TermPtr j(TermPtr type, TermPtr base, TermPtr motive, TermPtr case_refl, TermPtr endpoint,
                     TermPtr path);
    static TermPtr nat();
    static TermPtr zero();
    static TermPtr succ(TermPtr n);
    static TermPtr numeral(std::uint64_t n);
    static TermPtr nat_ind(TermPtr motive, TermPtr case_zero, TermPtr case_succ, TermPtr scrutinee);
    static TermPtr empty();
    static TermPtr empty_ind(TermPtr motive, TermPtr scrutinee);
    static TermPtr unit();
    static TermPtr star();
    static TermPtr unit_ind(TermPtr motive, TermPtr case_star, TermPtr scrutinee);
    static TermPtr coprod(TermPtr left, TermPtr right);
    static TermPtr inl(TermPtr coprod_type, TermPtr v);
    static TermPtr inr(TermPtr coprod_type, TermPtr v);
    static TermPtr coprod_ind(TermPtr motive, TermPtr case_l, TermPtr case_r, TermPtr scrutinee);
    static TermPtr constant(std::string name);

    static TermPtr make(Kind kind, std::vector<TermPtr> args, std::uint64_t num = 0, std::string name = {});

private:
    Kind kind_;
    std::uint64_t num_;
    std::uint64_t free_bound_;
    std::string name_;
    std::vector<TermPtr> args_;
};

/// Local context: types of bound variables, innermost last.
using Context = std::vector<TermPtr>;

/// Raised when an operation would break the well-scopedness invariant.
/// Signals a defect in the caller, never a user error.
class ScopeViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Displace every free variable with index >= cutoff by `amount`.
TermPtr shift(const TermPtr& t, std::uint64_t cutoff, std::int64_t amount);

/// Replace Var(target) by `u` and close the gap left by it. `u` lives in the
/// context with the target variable removed.
TermPtr substitute(const TermPtr& t, std::uint64_t target, const TermPtr& u);

/// Instantiate the variable bound by a 1-binder child.
TermPtr instantiate(const TermPtr& body, const TermPtr& u);
/// Instantiate a 2-binder child: `outer` for Var 1, `inner` for Var 0.
TermPtr instantiate2(const TermPtr& body, const TermPtr& outer, const TermPtr& inner);

bool alpha_equal(const TermPtr& t, const TermPtr& u);

/// Whether Var(index) occurs free in `t`.
bool occurs(const TermPtr& t, std::uint64_t index);

/// Size in nodes, used by tests and statistics.
std::size_t term_size(const TermPtr& t);

/// If `t` is Succ^n(Zero), its value.
std::optional<std::uint64_t> as_numeral(const TermPtr& t);

/// Names of every Const reachable in `t`.
void collect_constants(const TermPtr& t, std::vector<std::string>& out);

}  // namespace ufk
