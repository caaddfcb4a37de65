#pragma once

#include <cstdint>
#include <stdexcept>

#include "ufk/environment.hpp"
#include "ufk/term.hpp"

namespace ufk {

inline constexpr std::uint64_t kDefaultMaxSteps = 10'000'000;

struct NormalizeOptions {
    /// Budget of beta, iota and delta steps for one normalization.
    std::uint64_t max_steps = kDefaultMaxSteps;
};

class StepLimitExceeded : public std::runtime_error {
public:
    explicit StepLimitExceeded(std::uint64_t budget);
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t budget_;
};

/// Reduction got stuck on a non-neutral, non-canonical head. Only possible
/// for ill-typed input.
class StuckReduction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Beta-iota-delta normal form with eta for Π and Σ, computed by evaluating
/// into a semantic domain and reading back. `depth` is the number of free
/// variables `t` may mention. Axioms stay as stuck constants.
TermPtr normalize(const GlobalEnv& env, const TermPtr& t, std::size_t depth = 0,
                  const NormalizeOptions& options = {});

/// Normal forms alpha-equal.
bool definitionally_equal(const GlobalEnv& env, const TermPtr& t, const TermPtr& u, std::size_t depth = 0,
                          const NormalizeOptions& options = {});

}  // namespace ufk
