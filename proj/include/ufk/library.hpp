#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ufk/diagnostic.hpp"
#include "ufk/environment.hpp"
#include "ufk/surface.hpp"
#include "ufk/typecheck.hpp"

namespace ufk {

enum class DeclStatus : std::uint8_t {
    Checked,
    Failed,
    /// Mentions a declaration that failed; skipped without a new diagnostic.
    Blocked,
};

struct DeclRecord {
    std::string name;
    std::string file;  // canonical path
    DeclKind kind;
    DeclStatus status;
    double seconds = 0;
};

struct LoadResult {
    /// Every declaration that checked, across all files.
    GlobalEnv env;
    std::vector<Diagnostic> diagnostics;
    std::vector<DeclRecord> decls;
    /// Parsed sources by canonical path.
    std::map<std::string, surface::SourceFile> sources;
    /// Canonical paths in processing order.
    std::vector<std::string> order;
    /// What each file exports: its own declarations plus its imports'.
    std::map<std::string, GlobalEnv> exports;

    std::size_t count(DeclKind kind) const;
    bool ok() const { return diagnostics.empty(); }
};

/// Check `paths` and everything they import, each file once, in
/// dependency order. Failures are collected and processing continues.
LoadResult load(const std::vector<std::string>& paths, const CheckOptions& options = {});

struct ManifestEntry {
    int tier = 1;
    std::string name;
    std::string file;  // resolved against the manifest's directory
    std::set<std::string> budget;
    SourceSpan span;
};

struct Manifest {
    std::string path;
    std::vector<ManifestEntry> entries;
};

/// Lines `<tier> <name> <file> [budget: a,b,...]`; `#` starts a comment.
/// Malformed lines are E009.
Manifest parse_manifest(std::string_view text, const std::string& path);
Manifest load_manifest(const std::string& path);

enum class EntryStatus : std::uint8_t { Pass, Fail, Blocked, Missing };

const char* status_name(EntryStatus s);

struct EntryReport {
    ManifestEntry entry;
    EntryStatus status = EntryStatus::Missing;
    std::set<std::string> assumptions;
    double seconds = 0;
};

struct Report {
    std::vector<EntryReport> entries;
    LoadResult result;
    double seconds = 0;

    std::size_t failures() const;
};

Report check_library(const Manifest& manifest, const CheckOptions& options = {});

struct BudgetViolation {
    std::string name;
    std::set<std::string> excess;
    SourceSpan span;
};

/// Entries whose assumptions exceed their budget. Entries absent from
/// `env` are skipped.
std::vector<BudgetViolation> audit_budgets(const Manifest& manifest, const GlobalEnv& env);

}  // namespace ufk
