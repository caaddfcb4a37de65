#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ufk/surface.hpp"

namespace ufk::surface {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(ErrorCode code, const SourceSpan& at, std::string message) {
    throw Error(Diagnostic{code, at, std::move(message), nullptr, nullptr});
}

std::string canonical_path(const fs::path& p) {
    std::error_code ec;
    auto c = fs::weakly_canonical(p, ec);
    return (ec ? fs::absolute(p).lexically_normal() : c).string();
}

// Relative to the working directory when that is shorter.
std::string display(const std::string& key) {
    std::error_code ec;
    auto rel = fs::relative(key, fs::current_path(ec), ec);
    if (ec || rel.empty() || *rel.begin() == "..") return key;
    return rel.string();
}

std::string read_text(const std::string& path, const std::string& shown, const SourceSpan& at) {
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path)) fail(ErrorCode::ParseError, at, "cannot read '" + shown + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Loader {
public:
    explicit Loader(std::map<std::string, SourceFile>& cache) : cache_(cache) {}

    void visit(const std::string& key, const SourceSpan& from) {
        if (done_.count(key)) return;
        if (auto it = std::find(stack_.begin(), stack_.end(), key); it != stack_.end()) {
            std::string cycle;
            for (; it != stack_.end(); ++it) cycle += display(*it) + " -> ";
            fail(ErrorCode::ImportCycle, from, "import cycle: " + cycle + display(key));
        }
        SourceFile& file = load(key, from);
        stack_.push_back(key);
        const auto dir = fs::path(key).parent_path();
        file.resolved.clear();
        for (const auto& imp : file.imports) file.resolved.push_back(canonical_path(dir / imp.path));
        for (std::size_t i = 0; i < file.imports.size(); ++i) visit(file.resolved[i], file.imports[i].span);
        stack_.pop_back();
        done_.insert(key);
        order_.push_back(&file);
    }

    std::vector<const SourceFile*> order() const { return order_; }

private:
    SourceFile& load(const std::string& key, const SourceSpan& from) {
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const std::string shown = display(key);
        SourceFile f = parse_file(read_text(key, shown, from.file.empty() ? SourceSpan{shown} : from), shown);
        f.key = key;
        return cache_.emplace(key, std::move(f)).first->second;
    }

    std::map<std::string, SourceFile>& cache_;
    std::vector<std::string> stack_;
    std::set<std::string> done_;
    std::vector<const SourceFile*> order_;
};

}  // namespace

SourceFile load_file(const std::string& path) {
    SourceFile f = parse_file(read_text(path, path, SourceSpan{path}), path);
    f.key = canonical_path(path);
    return f;
}

std::vector<const SourceFile*> load_with_imports(const std::string& entry, std::map<std::string, SourceFile>& cache) {
    Loader loader(cache);
    loader.visit(canonical_path(entry), SourceSpan{});
    return loader.order();
}

std::vector<std::string> resolve_imports(const std::string& entry) {
    std::map<std::string, SourceFile> cache;
    std::vector<std::string> out;
    for (const auto* f : load_with_imports(entry, cache)) out.push_back(f->key);
    return out;
}

}  // namespace ufk::surface
