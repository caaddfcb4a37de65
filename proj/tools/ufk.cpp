// ufk: check .uf files, list the axioms a declaration rests on, normalize terms.

#include <pthread.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "ufk/library.hpp"
#include "ufk/print.hpp"

namespace {

struct Flags {
    std::uint64_t max_steps = ufk::kDefaultMaxSteps;
    std::optional<std::uint64_t> max_universe;
    bool no_color = false;
    bool json = false;
};

struct Reporter {
    const Flags& flags;
    bool color;

    void diagnostic(const ufk::Diagnostic& d) const {
        if (flags.json) {
            nlohmann::json j = {{"code", ufk::code_string(d.code)},
                                {"file", d.span.file},
                                {"line", d.span.line},
                                {"column", d.span.column},
                                {"end_line", d.span.end_line},
                                {"end_column", d.span.end_column},
                                {"message", d.message}};
            if (d.expected) j["expected"] = ufk::print_term(d.expected);
            if (d.actual) j["actual"] = ufk::print_term(d.actual);
            std::cerr << j.dump() << '\n';
            return;
        }
        std::string line = d.format();
        if (color) {
            const auto code = ufk::code_string(d.code);
            if (auto at = line.find(": " + code + ":"); at != std::string::npos)
                line.replace(at + 2, code.size(), "\x1b[1;31m" + code + "\x1b[0m");
        }
        std::cerr << line << '\n';
    }

    int all(const std::vector<ufk::Diagnostic>& ds) const {
        for (const auto& d : ds) diagnostic(d);
        return ds.empty() ? 0 : 1;
    }
};

ufk::CheckOptions options(const Flags& f) { return ufk::CheckOptions{f.max_steps, f.max_universe}; }

bool is_manifest(const std::string& p) { return std::filesystem::path(p).extension() == ".manifest"; }

int usage_error(const std::string& msg) {
    std::cerr << "ufk: " << msg << '\n';
    return 2;
}

int require_files(const std::vector<std::string>& paths) {
    for (const auto& p : paths)
        if (!std::filesystem::is_regular_file(p)) return usage_error("no such file: " + p);
    return 0;
}

int cmd_check(const std::vector<std::string>& paths, const Flags& flags, const Reporter& out) {
    if (int rc = require_files(paths)) return rc;
    std::vector<std::string> sources;
    std::vector<ufk::Manifest> manifests;
    std::vector<ufk::Diagnostic> diags;
    for (const auto& p : paths) {
        if (!is_manifest(p)) {
            sources.push_back(p);
            continue;
        }
        try {
            manifests.push_back(ufk::load_manifest(p));
        } catch (const ufk::Error& e) {
            diags.push_back(e.diagnostic());
        }
    }

    std::size_t defs = 0;
    std::size_t axioms = 0;
    bool entries_ok = true;
    for (const auto& m : manifests) {
        ufk::Report r = ufk::check_library(m, options(flags));
        diags.insert(diags.end(), r.result.diagnostics.begin(), r.result.diagnostics.end());
        for (const auto& e : r.entries) {
            std::string deps;
            for (const auto& a : e.assumptions) deps += (deps.empty() ? "" : ",") + a;
            std::cout << status_name(e.status) << ' ' << e.entry.tier << ' ' << e.entry.name << ' '
                      << (e.status != ufk::EntryStatus::Pass ? "-" : deps.empty() ? "(closed)" : deps) << '\n';
            if (e.status == ufk::EntryStatus::Missing) {
                std::cerr << e.entry.span.file << ':' << e.entry.span.line << ':' << e.entry.span.column << ": '"
                          << e.entry.name << "' is not declared in " << e.entry.file << '\n';
                entries_ok = false;
            }
        }
        for (const auto& v : ufk::audit_budgets(m, r.result.env)) {
            std::string excess;
            for (const auto& a : v.excess) excess += (excess.empty() ? "" : ",") + a;
            std::cerr << v.span.file << ':' << v.span.line << ':' << v.span.column << ": budget: '" << v.name
                      << "' uses " << excess << " outside its budget\n";
            entries_ok = false;
        }
        defs += r.result.count(ufk::DeclKind::Definition);
        axioms += r.result.count(ufk::DeclKind::Axiom);
    }
    if (!sources.empty()) {
        ufk::LoadResult r = ufk::load(sources, options(flags));
        diags.insert(diags.end(), r.diagnostics.begin(), r.diagnostics.end());
        defs += r.count(ufk::DeclKind::Definition);
        axioms += r.count(ufk::DeclKind::Axiom);
    }
    int rc = out.all(diags);
    if (rc == 0 && entries_ok) {
        std::cout << "checked " << defs << " definitions, " << axioms << " axioms\n";
        return 0;
    }
    return 1;
}

// Load one file and return its exports, or report and fail.
std::optional<ufk::GlobalEnv> load_one(const std::string& path, const Flags& flags, const Reporter& out) {
    ufk::LoadResult r = ufk::load({path}, options(flags));
    if (out.all(r.diagnostics) != 0) return std::nullopt;
    return r.env;
}

int cmd_assumptions(const std::string& path, const std::string& name, const Flags& flags, const Reporter& out) {
    if (int rc = require_files({path})) return rc;
    auto env = load_one(path, flags, out);
    if (!env) return 1;
    try {
        auto deps = ufk::assumptions(*env, name);
        if (deps.empty()) std::cout << "(closed)\n";
        for (const auto& a : deps) std::cout << a << '\n';
        return 0;
    } catch (const ufk::Error& e) {
        auto d = e.diagnostic();
        d.span = ufk::SourceSpan{path};
        out.diagnostic(d);
        return 1;
    }
}

int cmd_normalize(const std::string& path, const std::string& text, const Flags& flags, const Reporter& out) {
    if (int rc = require_files({path})) return rc;
    auto env = load_one(path, flags, out);
    if (!env) return 1;
    try {
        auto expr = ufk::surface::parse_term(text, "<term>");
        auto t = ufk::surface::elaborate_term(expr, *env);
        ufk::infer(*env, {}, t, options(flags));
        ufk::TermPtr n;
        try {
            n = ufk::normalize(*env, t, 0, ufk::NormalizeOptions{flags.max_steps});
        } catch (const ufk::StepLimitExceeded& e) {
            throw ufk::Error(ufk::Diagnostic{ufk::ErrorCode::StepLimit, ufk::SourceSpan{"<term>"}, e.what(), {}, {}});
        }
        std::cout << ufk::print_term(n, 0, &*env) << '\n';
        return 0;
    } catch (const ufk::Error& e) {
        out.diagnostic(e.diagnostic());
        return 1;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Proof checker for Martin-Löf type theory with univalence"};
    app.require_subcommand(1);
    Flags flags;
    app.add_option("--max-steps", flags.max_steps, "Reduction step budget per normalization")
        ->capture_default_str();
    app.add_option("--max-universe", flags.max_universe, "Largest universe level allowed (default unlimited)");
    app.add_flag("--no-color", flags.no_color, "Never colorize diagnostics");
    app.add_flag("--json", flags.json, "Diagnostics as JSON lines on stderr");

    std::vector<std::string> paths;
    auto* check = app.add_subcommand("check", "Check .uf files and manifests");
    check->add_option("paths", paths, "Files to check (.uf or .manifest)")->required();

    std::string file, name, term;
    auto* assum = app.add_subcommand("assumptions", "List the axioms a declaration depends on");
    assum->add_option("file", file)->required();
    assum->add_option("name", name)->required();

    auto* norm = app.add_subcommand("normalize", "Print the normal form of a closed term");
    norm->add_option("file", file)->required();
    norm->add_option("term", term, "A name or a term in surface syntax")->required();

    // Global flags are accepted after the subcommand too.
    for (auto* sub : {check, assum, norm}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const Reporter out{flags, !flags.no_color && !flags.json && isatty(STDERR_FILENO)};
    if (*check) return cmd_check(paths, flags, out);
    if (*assum) return cmd_assumptions(file, name, flags, out);
    return cmd_normalize(file, term, flags, out);
}

struct Job {
    int argc;
    char** argv;
    int rc = 0;
};

}  // namespace

int main(int argc, char** argv) {
    // Deep terms recurse deeply; run on a thread with a generous stack.
    Job job{argc, argv};
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, std::size_t{1} << 30);
    pthread_t th;
    auto body = [](void* p) -> void* {
        auto* j = static_cast<Job*>(p);
        j->rc = run(j->argc, j->argv);
        return nullptr;
    };
    if (pthread_create(&th, &attr, body, &job) != 0) return run(argc, argv);
    pthread_join(th, nullptr);
    pthread_attr_destroy(&attr);
    return job.rc;
}
