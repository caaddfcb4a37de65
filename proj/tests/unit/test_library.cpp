#include <doctest.h>

#include <filesystem>

#include "support/paths.hpp"
#include "ufk/library.hpp"

using namespace ufk;
namespace fs = std::filesystem;

namespace {

// A scratch copy of the bundled library that a test may edit.
struct LibCopy {
    testing::TempDir dir;
    LibCopy() {
        for (const auto& e : fs::directory_iterator(testing::lib_dir())) fs::copy(e.path(), dir.path() / e.path().filename());
    }
    std::string path(const std::string& f) const { return (dir.path() / f).string(); }
    void replace(const std::string& f, const std::string& from, const std::string& to) const {
        auto text = testing::slurp(path(f));
        const auto at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        testing::spit(path(f), text);
    }
};

const EntryReport* entry(const Report& r, const std::string& name) {
    for (const auto& e : r.entries)
        if (e.entry.name == name) return &e;
    return nullptr;
}

}  // namespace

TEST_SUITE("library") {
    TEST_CASE("manifest lines") {
        auto m = parse_manifest(
            "# comment\n"
            "\n"
            "1 idfun part_a.uf\n"
            "2 impred_prop part_b.uf [budget: funext]\n"
            "1 weqtopaths univalence.uf budget: univalence, funext  # trailing\n",
            "/x/lib.manifest");
        REQUIRE(m.entries.size() == 3);
        CHECK(m.entries[0].tier == 1);
        CHECK(m.entries[0].name == "idfun");
        CHECK(fs::path(m.entries[0].file) == fs::path("/x/part_a.uf"));
        CHECK(m.entries[0].budget.empty());
        CHECK(m.entries[1].tier == 2);
        CHECK(m.entries[1].budget == std::set<std::string>{"funext"});
        CHECK(m.entries[2].budget == std::set<std::string>{"funext", "univalence"});
        CHECK(m.entries[2].span.line == 5);
    }

    TEST_CASE("malformed manifest lines are E009") {
        for (const char* bad : {"one idfun part_a.uf\n", "1 idfun\n", "1 idfun a.uf [budget funext]\n"}) {
            try {
                parse_manifest(bad, "m.manifest");
                FAIL("accepted: " << bad);
            } catch (const Error& e) {
                CHECK(e.diagnostic().code == ErrorCode::ParseError);
            }
        }
    }

    TEST_CASE("an empty manifest checks nothing") {
        auto r = check_library(parse_manifest("# nothing\n", "m.manifest"));
        CHECK(r.entries.empty());
        CHECK(r.failures() == 0);
        CHECK(r.result.ok());
    }

    TEST_CASE("the bundled library checks") {
        auto r = check_library(load_manifest(testing::lib("library.manifest")));
        CHECK(r.result.ok());
        CHECK(r.failures() == 0);
        CHECK(r.entries.size() >= 30);
        for (const auto& e : r.entries) CHECK_MESSAGE(e.status == EntryStatus::Pass, e.entry.name);
        CHECK(audit_budgets(load_manifest(testing::lib("library.manifest")), r.result.env).empty());
    }

    TEST_CASE("a broken declaration fails alone") {
        LibCopy lib;
        lib.replace("part_b.uf", "def isasetnat : isaset Nat := hedberg Nat natdeceq",
                    "def isasetnat : isaset Nat := 0");
        auto r = check_library(load_manifest(lib.path("library.manifest")));
        REQUIRE(r.result.diagnostics.size() == 1);
        const auto& d = r.result.diagnostics[0];
        CHECK(d.code == ErrorCode::TypeMismatch);
        CHECK(fs::path(d.span.file).filename() == "part_b.uf");
        CHECK(entry(r, "isasetnat")->status == EntryStatus::Fail);
        // Later files still check.
        CHECK(entry(r, "is_univalent")->status == EntryStatus::Pass);
        CHECK(entry(r, "ac_type")->status == EntryStatus::Pass);
        CHECK(r.failures() == 1);
    }

    TEST_CASE("dependents of a failure are blocked without new diagnostics") {
        LibCopy lib;
        lib.replace("part_a.uf", "def iscontr (A : Type 1) : Type 1 :=",
                    "def iscontr (A : Type 1) : Type 1 := star\ndef iscontr_old (A : Type 1) : Type 1 :=");
        auto r = check_library(load_manifest(lib.path("library.manifest")));
        REQUIRE(r.result.diagnostics.size() == 1);
        CHECK(entry(r, "iscontr")->status == EntryStatus::Fail);
        CHECK(entry(r, "isweq")->status == EntryStatus::Blocked);
        CHECK(entry(r, "isofhlevel")->status == EntryStatus::Blocked);
        CHECK(entry(r, "idfun")->status == EntryStatus::Pass);
        CHECK(entry(r, "nat_pred")->status == EntryStatus::Pass);
    }

    TEST_CASE("names missing from their file are reported") {
        LibCopy lib;
        testing::spit(lib.path("library.manifest"), testing::slurp(lib.path("library.manifest")) + "1 nosuch part_a.uf\n");
        auto r = check_library(load_manifest(lib.path("library.manifest")));
        CHECK(entry(r, "nosuch")->status == EntryStatus::Missing);
        CHECK(r.failures() == 1);
    }

    TEST_CASE("budget audit") {
        LibCopy lib;
        lib.replace("part_b.uf", "def isasetnat : isaset Nat := hedberg Nat natdeceq",
                    "def isasetnat : isaset Nat := hedberg Nat natdeceq\n"
                    "def sneaky : Type 2 := forall (X : Type 1) (P : X -> Type 1) (f g : forall (x : X), P x), "
                    "(forall (x : X), f x = g x in P x) -> f = g in (forall (x : X), P x)\n"
                    "def sneaky_proof : sneaky := funext");
        testing::spit(lib.path("library.manifest"),
                      testing::slurp(lib.path("library.manifest")) + "1 sneaky part_b.uf\n1 sneaky_proof part_b.uf\n");
        auto m = load_manifest(lib.path("library.manifest"));
        auto r = check_library(m);
        REQUIRE(r.result.ok());
        auto v = audit_budgets(m, r.result.env);
        REQUIRE(v.size() == 1);
        CHECK(v[0].name == "sneaky_proof");
        CHECK(v[0].excess == std::set<std::string>{"funext"});
        CHECK(entry(r, "weqtopaths")->assumptions == std::set<std::string>{"univalence"});
        CHECK(entry(r, "isasetnat")->assumptions.empty());
    }

    TEST_CASE("load checks shared imports once") {
        auto r = load({testing::lib("logic.uf"), testing::lib("categories.uf")});
        CHECK(r.ok());
        std::set<std::string> names;
        for (const auto& d : r.decls) CHECK_MESSAGE(names.insert(d.name).second, d.name);
        CHECK(r.count(DeclKind::Axiom) == 2);
    }

    TEST_CASE("conflicting names from two imports are E007") {
        testing::TempDir dir;
        dir.file("l.uf", "def x : Nat := 0\n");
        dir.file("r.uf", "def x : Nat := 1\n");
        auto top = dir.file("top.uf", "import \"l.uf\"\nimport \"r.uf\"\ndef y : Nat := 2\n");
        auto r = load({top});
        REQUIRE_FALSE(r.ok());
        CHECK(r.diagnostics[0].code == ErrorCode::DuplicateName);
    }
}
