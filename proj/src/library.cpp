#include "ufk/library.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ufk {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Add everything in `from` missing from `into`. A name bound to a
// different declaration is a conflict.
GlobalEnv merge(GlobalEnv into, const GlobalEnv& from, const SourceSpan& at, std::vector<Diagnostic>& diags) {
    for (const auto& d : from.declarations()) {
        DeclPtr mine = into.find_ptr(d->name);
        if (!mine) {
            into = into.extend(d);
        } else if (mine != d) {
            diags.push_back({ErrorCode::DuplicateName, at, "'" + d->name + "' is declared in two imported files", {},
                             {}});
        }
    }
    return into;
}

class Session {
public:
    Session(LoadResult& out, const CheckOptions& opts) : out_(out), opts_(opts) {}

    void entry(const std::string& path) {
        std::vector<const surface::SourceFile*> files;
        try {
            files = surface::load_with_imports(path, out_.sources);
        } catch (const Error& e) {
            out_.diagnostics.push_back(e.diagnostic());
            return;
        }
        for (const auto* f : files) {
            if (out_.exports.count(f->key)) continue;
            process(*f);
        }
        out_.env = merge(out_.env, out_.exports.at(files.back()->key), SourceSpan{files.back()->path}, out_.diagnostics);
    }

private:
    void process(const surface::SourceFile& f) {
        out_.order.push_back(f.key);
        GlobalEnv env;
        for (std::size_t i = 0; i < f.resolved.size(); ++i) {
            auto it = out_.exports.find(f.resolved[i]);
            if (it != out_.exports.end()) env = merge(env, it->second, f.imports[i].span, out_.diagnostics);
        }
        for (const auto& d : f.decls) {
            DeclRecord rec{d.name, f.key, d.kind, DeclStatus::Checked, 0};
            const auto t0 = Clock::now();
            const auto refs = surface::free_identifiers(d);
            const bool blocked = std::any_of(refs.begin(), refs.end(), [&](const std::string& r) {
                return failed_.count(r) && !env.contains(r);
            });
            if (blocked) {
                rec.status = DeclStatus::Blocked;
                failed_.insert(d.name);
            } else {
                try {
                    env = add_decl(env, surface::elaborate(d, env), opts_);
                } catch (const Error& e) {
                    out_.diagnostics.push_back(e.diagnostic());
                    rec.status = DeclStatus::Failed;
                    if (!env.contains(d.name)) failed_.insert(d.name);
                }
            }
            rec.seconds = since(t0);
            out_.decls.push_back(std::move(rec));
        }
        out_.exports[f.key] = env;
    }

    LoadResult& out_;
    const CheckOptions& opts_;
    std::set<std::string> failed_;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void manifest_error(const SourceSpan& at, std::string message) {
    throw Error(Diagnostic{ErrorCode::ParseError, at, std::move(message), nullptr, nullptr});
}

}  // namespace

std::size_t LoadResult::count(DeclKind kind) const {
    return static_cast<std::size_t>(std::count_if(decls.begin(), decls.end(), [&](const DeclRecord& r) {
        return r.kind == kind && r.status == DeclStatus::Checked;
    }));
}

LoadResult load(const std::vector<std::string>& paths, const CheckOptions& options) {
    LoadResult out;
    Session s(out, options);
    for (const auto& p : paths) s.entry(p);
    return out;
}

Manifest parse_manifest(std::string_view text, const std::string& path) {
    Manifest m;
    m.path = path;
    const fs::path dir = fs::path(path).parent_path();
    std::istringstream in{std::string(text)};
    std::string line;
    std::uint32_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string rest = trim(line);
        if (rest.empty()) continue;
        const SourceSpan span{path, lineno, 1, lineno, static_cast<std::uint32_t>(std::max<std::size_t>(line.size(), 1))};

        std::string budget_text;
        bool has_budget = false;
        if (auto b = rest.find("budget:"); b != std::string::npos) {
            has_budget = true;
            budget_text = rest.substr(b + 7);
            rest = trim(rest.substr(0, b));
            if (!rest.empty() && rest.back() == '[') {
                rest = trim(rest.substr(0, rest.size() - 1));
                budget_text = trim(budget_text);
                if (budget_text.empty() || budget_text.back() != ']') manifest_error(span, "unterminated '[budget: ...]'");
                budget_text.pop_back();
            }
        }

        std::istringstream fields(rest);
        std::string tier, name, file, extra;
        fields >> tier >> name >> file;
        if (file.empty()) manifest_error(span, "expected '<tier> <name> <file> [budget: a,b,...]'");
        if (fields >> extra) manifest_error(span, "unexpected '" + extra + "'");
        if (tier != "1" && tier != "2") manifest_error(span, "tier must be 1 or 2, got '" + tier + "'");

        ManifestEntry e;
        e.tier = tier[0] - '0';
        e.name = name;
        e.file = (dir / file).lexically_normal().string();
        e.span = span;
        if (has_budget) {
            std::istringstream items(budget_text);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (!item.empty()) e.budget.insert(item);
            }
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) manifest_error(SourceSpan{path}, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), path);
}

const char* status_name(EntryStatus s) {
    switch (s) {
        case EntryStatus::Pass: return "pass";
        case EntryStatus::Fail: return "fail";
        case EntryStatus::Blocked: return "blocked";
        case EntryStatus::Missing: return "missing";
    }
    return "?";
}

std::size_t Report::failures() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const EntryReport& e) { return e.status != EntryStatus::Pass; }));
}

Report check_library(const Manifest& manifest, const CheckOptions& options) {
    const auto t0 = Clock::now();
    Report r;
    std::vector<std::string> files;
    for (const auto& e : manifest.entries)
        if (std::find(files.begin(), files.end(), e.file) == files.end()) files.push_back(e.file);
    r.result = load(files, options);

    for (const auto& e : manifest.entries) {
        EntryReport er;
        er.entry = e;
        std::error_code ec;
        const auto key = fs::weakly_canonical(e.file, ec).string();
        auto rec = std::find_if(r.result.decls.begin(), r.result.decls.end(),
                                [&](const DeclRecord& d) { return d.name == e.name && d.file == key; });
        if (rec != r.result.decls.end()) {
            er.seconds = rec->seconds;
            switch (rec->status) {
                case DeclStatus::Checked:
                    er.status = EntryStatus::Pass;
                    if (auto it = r.result.exports.find(key); it != r.result.exports.end())
                        er.assumptions = assumptions(it->second, e.name);
                    break;
                case DeclStatus::Failed: er.status = EntryStatus::Fail; break;
                case DeclStatus::Blocked: er.status = EntryStatus::Blocked; break;
            }
        }
        r.entries.push_back(std::move(er));
    }
    r.seconds = since(t0);
    return r;
}

std::vector<BudgetViolation> audit_budgets(const Manifest& manifest, const GlobalEnv& env) {
    std::vector<BudgetViolation> out;
    for (const auto& e : manifest.entries) {
        const Declaration* d = env.find(e.name);
        if (!d) continue;
        BudgetViolation v{e.name, {}, e.span};
        std::set_difference(d->axioms_used.begin(), d->axioms_used.end(), e.budget.begin(), e.budget.end(),
                            std::inserter(v.excess, v.excess.begin()));
        if (!v.excess.empty()) out.push_back(std::move(v));
    }
    return out;
}

}  // namespace ufk
