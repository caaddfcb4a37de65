#include "ufk/diagnostic.hpp"

#include <cstdio>

namespace ufk {

std::string code_string(ErrorCode code) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "E%03d", static_cast<int>(code));
    return buf;
}

std::optional<ErrorCode> parse_code(std::string_view text) {
    if (text.size() != 4 || text[0] != 'E') return std::nullopt;
    int n = 0;
    for (char c : text.substr(1)) {
        if (c < '0' || c > '9') return std::nullopt;
        n = n * 10 + (c - '0');
    }
    if (n < 1 || n > 10) return std::nullopt;
    return static_cast<ErrorCode>(n);
}

std::string Diagnostic::format() const {
    return span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
           code_string(code) + ": " + message;
}

}  // namespace ufk
