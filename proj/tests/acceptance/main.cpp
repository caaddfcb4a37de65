// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "support/paths.hpp"
#include "ufk/library.hpp"
#include "ufk/print.hpp"

using namespace ufk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Run {
    int rc = -1;
    std::string out;
    std::string err;
    double seconds = 0;
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

Run ufk(const std::vector<std::string>& args) {
    testing::TempDir tmp;
    const auto err_path = (tmp.path() / "stderr").string();
    std::string cmd = quote(UFK_BINARY);
    for (const auto& a : args) cmd += ' ' + quote(a);
    cmd += " 2>" + quote(err_path);
    Run r;
    const auto t0 = std::chrono::steady_clock::now();
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = testing::slurp(err_path);
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string join(const std::set<std::string>& s) {
    std::string out = "{";
    for (const auto& x : s) out += (out.size() > 1 ? "," : "") + x;
    return out + "}";
}

// Records failures; the first few are kept as the detail line.
struct Tally {
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first;

    void expect(bool cond, const std::string& what) {
        ++checked;
        if (cond) return;
        if (failed++ < 3) first += (first.empty() ? "" : "; ") + what;
    }
    Outcome outcome(const std::string& summary) const {
        if (failed == 0) return {true, summary};
        return {false, std::to_string(failed) + " of " + std::to_string(checked) + " failed: " + first};
    }
};

const Report& library() {
    static const Report r = check_library(load_manifest(testing::lib("library.manifest")));
    return r;
}

TermPtr term(const std::string& text, const GlobalEnv& env) {
    return surface::elaborate_term(surface::parse_term(text), env);
}

GlobalEnv with_axiom(const GlobalEnv& env, const std::string& name, const std::string& type) {
    DeclInput d;
    d.name = name;
    d.kind = DeclKind::Axiom;
    d.type = term(type, env);
    d.span = SourceSpan{"<acceptance>"};
    return add_decl(env, d);
}

// 1
Outcome full_corpus() {
    auto r = ufk({"check", "--no-color", testing::lib("library.manifest")});
    Tally t;
    t.expect(r.rc == 0, "exit " + std::to_string(r.rc));
    t.expect(r.err.empty(), "diagnostics: " + r.err.substr(0, 200));
    t.expect(r.seconds < 10.0, "took " + std::to_string(r.seconds) + " s");
    std::size_t tier1 = 0, tier1_pass = 0;
    for (const auto& l : lines(r.out)) {
        std::istringstream in(l);
        std::string status, tier;
        in >> status >> tier;
        if (tier != "1") continue;
        ++tier1;
        if (status == "pass") ++tier1_pass;
        else t.expect(false, l);
    }
    t.expect(tier1 >= 30, std::to_string(tier1) + " tier-1 entries");
    t.expect(!lines(r.out).empty() && lines(r.out).back().starts_with("checked "), "no summary line");
    std::ostringstream s;
    s << tier1_pass << "/" << tier1 << " tier-1 entries pass, 0 diagnostics, " << std::fixed;
    s.precision(2);
    s << r.seconds << " s";
    return t.outcome(s.str());
}

// 2
Outcome j_computation() {
    GlobalEnv env = load({testing::lib("part_a.uf")}).env;
    env = with_axiom(env, "opaque_point", "Nat");
    env = with_axiom(env, "opaque_fn", "Nat -> Nat");
    struct Case {
        std::string x_type, motive, base, value;
    };
    // transportf X P a a (refl X a) v  should be  v.
    const std::vector<Case> cases = {
        {"Nat", "fun (n : Nat) => Nat", "3", "7"},
        {"Type 0", "fun (A : Type 0) => A", "Nat", "5"},
        {"Nat", "fun (n : Nat) => n = n in Nat", "2", "refl Nat 2"},
        {"Type 0", "fun (A : Type 0) => A -> A", "Unit", "fun (u : Unit) => u"},
        {"Nat", "fun (n : Nat) => Nat", "0", "opaque_point"},
        {"Type 0", "fun (A : Type 0) => A", "Nat -> Nat", "opaque_fn"},
    };
    Tally t;
    std::set<std::string> motives;
    for (const auto& c : cases) {
        const auto text = "transportf (" + c.x_type + ") (" + c.motive + ") (" + c.base + ") (" + c.base + ") (refl (" +
                          c.x_type + ") (" + c.base + ")) (" + c.value + ")";
        auto tr = term(text, env);
        infer(env, {}, tr);
        auto expected = term(c.value, env);
        auto got = normalize(env, tr);
        t.expect(alpha_equal(got, expected), text + " ~> " + print_term(got, 0, &env));
        motives.insert(c.motive);
    }
    // Raw J with an opaque reflexivity case reduces to exactly that case.
    auto raw = term("J Nat 4 (fun y e => Nat) opaque_point 4 (refl Nat 4)", env);
    infer(env, {}, raw);
    t.expect(alpha_equal(normalize(env, raw), Term::constant("opaque_point")), "raw J");
    return t.outcome(std::to_string(cases.size()) + " transports over " + std::to_string(motives.size()) +
                     " motives, plus raw J, reduce to the transported value");
}

// 3
Outcome nat_computation() {
    Tally t;
    auto a = ufk({"normalize", testing::lib("nat_demo.uf"), "plus 2 3"});
    auto b = ufk({"normalize", testing::lib("nat_demo.uf"), "mult 3 4"});
    t.expect(a.rc == 0 && a.out == std::to_string(2 + 3) + "\n", "plus 2 3 printed " + a.out + a.err);
    t.expect(b.rc == 0 && b.out == std::to_string(3 * 4) + "\n", "mult 3 4 printed " + b.out + b.err);
    return t.outcome("plus 2 3 = 5, mult 3 4 = 12");
}

// Identifiers an expression mentions outside its own binders.
void refs(const surface::ExprPtr& e, std::set<std::string> bound, std::set<std::string>& out) {
    using surface::ExprKind;
    if (!e) return;
    switch (e->kind) {
        case ExprKind::Ident:
            if (!bound.count(e->name)) out.insert(e->name);
            return;
        case ExprKind::Fun:
        case ExprKind::Forall:
        case ExprKind::Sum:
            for (const auto& b : e->binders) {
                refs(b.type, bound, out);
                bound.insert(b.name);
            }
            refs(e->args[0], bound, out);
            return;
        default:
            for (const auto& a : e->args) refs(a, bound, out);
    }
}

// 4
Outcome axiom_hygiene() {
    Tally t;
    // Oracle: parse every library file, build the reference graph, and
    // compute reachable axioms by search.
    std::map<std::string, std::set<std::string>> edges;
    std::set<std::string> axioms;
    for (const auto& f : fs::directory_iterator(testing::lib_dir())) {
        if (f.path().extension() != ".uf") continue;
        auto src = surface::parse_file(testing::slurp(f.path().string()), f.path().string());
        for (const auto& d : src.decls) {
            std::set<std::string> bound, out;
            for (const auto& b : d.telescope) {
                refs(b.type, bound, out);
                bound.insert(b.name);
            }
            refs(d.type, bound, out);
            refs(d.body, bound, out);
            edges[d.name] = out;
            if (d.kind == DeclKind::Axiom) axioms.insert(d.name);
        }
    }
    auto reach = [&](const std::string& root) {
        std::set<std::string> seen{root}, found;
        std::vector<std::string> todo{root};
        while (!todo.empty()) {
            auto n = todo.back();
            todo.pop_back();
            if (axioms.count(n)) found.insert(n);
            for (const auto& m : edges[n])
                if (edges.count(m) && seen.insert(m).second) todo.push_back(m);
        }
        return found;
    };

    const auto& r = library();
    for (const auto& e : r.entries) {
        const auto oracle = reach(e.entry.name);
        t.expect(e.assumptions == oracle, e.entry.name + ": checker " + join(e.assumptions) + " oracle " + join(oracle));
    }

    auto cli = [&](const std::string& file, const std::string& name) {
        auto run = ufk({"assumptions", testing::lib(file), name});
        std::set<std::string> got;
        for (const auto& l : lines(run.out))
            if (l != "(closed)") got.insert(l);
        t.expect(run.rc == 0, name + ": exit " + std::to_string(run.rc));
        return got;
    };
    for (const auto& [file, name] : std::vector<std::pair<std::string, std::string>>{{"part_a.uf", "idfun"},
                                                                                     {"part_b.uf", "iscontrunit"},
                                                                                     {"part_b.uf", "natdeceq"},
                                                                                     {"part_b.uf", "isasetnat"},
                                                                                     {"part_a.uf", "idisweq"}}) {
        const auto got = cli(file, name);
        t.expect(got.empty(), name + " uses " + join(got));
    }
    const auto uw = cli("univalence.uf", "weqtopaths");
    t.expect(uw == std::set<std::string>{"univalence"}, "weqtopaths uses " + join(uw));
    std::size_t tier2 = 0;
    for (const auto& e : r.entries) {
        if (e.entry.tier != 2 || e.entry.budget != std::set<std::string>{"funext"}) continue;
        ++tier2;
        const auto got = cli(fs::path(e.entry.file).filename().string(), e.entry.name);
        t.expect(got == std::set<std::string>{"funext"}, e.entry.name + " uses " + join(got));
    }
    t.expect(tier2 > 0, "no tier-2 funext entries");
    return t.outcome(std::to_string(r.entries.size()) + " entries agree with the reference-graph oracle; " +
                     std::to_string(tier2) + " tier-2 entries use exactly {funext}");
}

// 5
Outcome hedberg() {
    Tally t;
    const auto& r = library();
    const EntryReport* e = nullptr;
    for (const auto& x : r.entries)
        if (x.entry.name == "isasetnat") e = &x;
    t.expect(e != nullptr, "isasetnat not in manifest");
    if (!e) return t.outcome("");
    t.expect(e->status == EntryStatus::Pass, std::string("status ") + status_name(e->status));
    t.expect(e->assumptions.empty(), "uses " + join(e->assumptions));
    const auto* d = r.result.env.find("isasetnat");
    t.expect(d && alpha_equal(d->type, term("isaset Nat", r.result.env)), "declared type is not isaset Nat");
    return t.outcome("isasetnat : isaset Nat checks, axioms {}");
}

// 6
Outcome unfolding() {
    Tally t;
    const GlobalEnv& env = library().result.env;
    auto X = Term::var(0);
    auto c = [](const char* n) { return Term::constant(n); };
    // isofhlevel 0 X == iscontr X, with X : Type 1 free.
    t.expect(definitionally_equal(env, Term::app(Term::app(c("isofhlevel"), Term::zero()), X),
                                  Term::app(c("iscontr"), X), 1),
             "isofhlevel 0 X");
    // isofhlevel 1 X == forall (x y : X), iscontr (x = y in X)
    auto level1 = Term::pi(X, Term::pi(Term::var(1), Term::app(c("iscontr"), Term::id(Term::var(2), Term::var(1),
                                                                                       Term::var(0)))));
    t.expect(definitionally_equal(env, Term::app(Term::app(c("isofhlevel"), Term::numeral(1)), X), level1, 1),
             "isofhlevel 1 X");
    t.expect(!definitionally_equal(env, Term::app(Term::app(c("isofhlevel"), Term::numeral(1)), X),
                                   Term::app(c("iscontr"), X), 1),
             "isofhlevel 1 X should differ from iscontr X");
    // eqweqmap A A (refl (Type 0) A) == idweq A, with A : Type 0 free.
    auto A = Term::var(0);
    auto lhs = Term::app(Term::app(Term::app(c("eqweqmap"), A), A), Term::refl(Term::universe(0), A));
    t.expect(definitionally_equal(env, lhs, Term::app(c("idweq"), A), 1), "eqweqmap A A refl");
    return t.outcome("isofhlevel 0 X == iscontr X, eqweqmap A A refl == idweq A");
}

// 7
Outcome negative_suite() {
    Tally t;
    std::map<std::string, std::string> expected;
    for (const auto& f : fs::directory_iterator(testing::fixture("negative"))) {
        const auto first = lines(testing::slurp(f.path().string())).at(0);
        const std::string tag = "-- expect: ";
        if (!first.starts_with(tag)) {
            t.expect(false, f.path().filename().string() + " has no expectation");
            continue;
        }
        expected[f.path().string()] = first.substr(tag.size());
    }
    for (const auto& [path, code] : expected) {
        auto r = ufk({"check", "--json", path});
        std::string got = "none";
        auto ls = lines(r.err);
        if (!ls.empty()) {
            try {
                got = nlohmann::json::parse(ls[0]).at("code").get<std::string>();
            } catch (const std::exception&) {
                got = "unparseable: " + ls[0];
            }
        }
        t.expect(r.rc == 1 && got == code,
                 fs::path(path).filename().string() + ": want " + code + " got " + got + " exit " + std::to_string(r.rc));
    }
    for (const auto& [name, code] : std::vector<std::pair<std::string, std::string>>{{"universe_in_itself.uf", "E003"},
                                                                                     {"apply_zero.uf", "E004"},
                                                                                     {"j_motive_arity.uf", "E006"},
                                                                                     {"unbound.uf", "E001"},
                                                                                     {"cycle_a.uf", "E010"}}) {
        auto it = expected.find(testing::fixture("negative/" + name));
        t.expect(it != expected.end() && it->second == code, "required fixture " + name);
    }
    t.expect(expected.size() >= 15, "only " + std::to_string(expected.size()) + " fixtures");
    std::set<std::string> codes;
    for (const auto& [_, c] : expected) codes.insert(c);
    return t.outcome(std::to_string(expected.size()) + " fixtures fail with their designated code, covering " +
                     std::to_string(codes.size()) + " codes");
}

// 8
Outcome preservation() {
    Tally t;
    const GlobalEnv& env = library().result.env;
    std::size_t n = 0;
    for (const auto& d : env.declarations()) {
        if (d->is_axiom()) continue;
        ++n;
        try {
            check(env, {}, normalize(env, d->body), d->type);
            t.expect(true, d->name);
        } catch (const Error& e) {
            t.expect(false, d->name + ": " + e.diagnostic().format());
        }
    }
    return t.outcome(std::to_string(n) + " normalized bodies re-check");
}

// 9
Outcome idempotence_roundtrip() {
    Tally t;
    const GlobalEnv& env = library().result.env;
    std::size_t n = 0;
    auto roundtrip = [&](const TermPtr& x, const std::string& what) {
        const auto text = print_term(x, 0, &env);
        try {
            t.expect(alpha_equal(term(text, env), x), what + " reparses differently");
        } catch (const Error& e) {
            t.expect(false, what + ": " + e.diagnostic().format());
        }
    };
    for (const auto& d : env.declarations()) {
        ++n;
        roundtrip(d->type, d->name + " type");
        if (d->is_axiom()) continue;
        auto nf = normalize(env, d->body);
        t.expect(alpha_equal(normalize(env, nf), nf), d->name + " not idempotent");
        roundtrip(d->body, d->name + " body");
        roundtrip(nf, d->name + " normal form");
    }
    return t.outcome(std::to_string(n) + " declarations: normalize idempotent, print/reparse alpha-equal");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"full-corpus check", full_corpus},
        {"J computation", j_computation},
        {"Nat computation", nat_computation},
        {"axiom hygiene", axiom_hygiene},
        {"Hedberg milestone", hedberg},
        {"unfolding identities", unfolding},
        {"negative suite", negative_suite},
        {"preservation", preservation},
        {"idempotence and round-trip", idempotence_roundtrip},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const Error& e) {
            o = {false, "error: " + e.diagnostic().format()};
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.ok ? 0 : 1;
        std::cout << (o.ok ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failures) << '/' << criteria.size() << " criteria pass" << std::endl;
    return failures == 0 ? 0 : 1;
}
