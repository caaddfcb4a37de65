#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ufk/term.hpp"

namespace ufk {

enum class ErrorCode : std::uint8_t {
    UnboundIdentifier = 1,  // E001
    TypeMismatch,           // E002
    UniverseError,          // E003
    NotAFunction,           // E004
    NotAPair,               // E005
    EliminatorShape,        // E006
    DuplicateName,          // E007
    StepLimit,              // E008
    ParseError,             // E009
    ImportCycle,            // E010
};

/// "E001" .. "E010".
std::string code_string(ErrorCode code);
std::optional<ErrorCode> parse_code(std::string_view text);

/// 1-based, inclusive start and end.
struct SourceSpan {
    std::string file;
    std::uint32_t line = 1;
    std::uint32_t column = 1;
    std::uint32_t end_line = 1;
    std::uint32_t end_column = 1;
};

struct Diagnostic {
    ErrorCode code;
    SourceSpan span;
    std::string message;
    // E002 carries both, in normal form.
    TermPtr expected;
    TermPtr actual;

    /// `file:line:col: CODE: message`
    std::string format() const;
};

/// The error channel used throughout: every user-facing failure is raised
/// as one of these and caught at a declaration or file boundary.
class Error : public std::runtime_error {
public:
    explicit Error(Diagnostic d) : std::runtime_error(d.message), diag_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diag_; }
    Diagnostic& diagnostic() { return diag_; }

private:
    Diagnostic diag_;
};

}  // namespace ufk
