#include <charconv>
#include <limits>

#include "ufk/builtins.hpp"
#include "ufk/surface.hpp"

namespace ufk::surface {

namespace {

enum class Tok : std::uint8_t {
    Ident,
    Number,
    String,
    LParen,
    RParen,
    Colon,
    Assign,
    Comma,
    FatArrow,
    Arrow,
    Equals,
    End,
};

const char* describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::String: return "string literal";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Colon: return "':'";
        case Tok::Assign: return "':='";
        case Tok::Comma: return "','";
        case Tok::FatArrow: return "'=>'";
        case Tok::Arrow: return "'->'";
        case Tok::Equals: return "'='";
        case Tok::End: return "end of input";
    }
    return "token";
}

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

[[noreturn]] void parse_error(const SourceSpan& at, std::string message) {
    throw Error(Diagnostic{ErrorCode::ParseError, at, std::move(message), nullptr, nullptr});
}

struct Synonym {
    std::string_view bytes;
    Tok kind;
    std::string_view text;
};

// Optional Unicode spellings.
constexpr Synonym kSynonyms[] = {
    {"\xE2\x88\x8F", Tok::Ident, "forall"},  // ∏
    {"\xE2\x88\x91", Tok::Ident, "Sum"},     // ∑
    {"\xCE\xBB", Tok::Ident, "fun"},         // λ
    {"\xE2\xA8\xBF", Tok::Ident, "Coprod"},  // ⨿
    {"\xE2\x86\x92", Tok::Arrow, "->"},      // →
    {"\xE2\x87\x92", Tok::FatArrow, "=>"},   // ⇒
};

class Lexer {
public:
    Lexer(std::string_view text, const std::string& path) : src_(text), path_(path) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            const auto line = line_;
            const auto col = col_;
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", span(line, col)});
                return out;
            }
            Token t = next();
            t.span = span(line, col);
            out.push_back(std::move(t));
        }
    }

private:
    SourceSpan span(std::uint32_t line, std::uint32_t col) const {
        // End is inclusive: the last character consumed.
        const std::uint32_t end_col = col_ > 1 ? col_ - 1 : 1;
        return SourceSpan{path_, line, col, line_, std::max(end_col, line_ == line ? col : 1u)};
    }

    void advance() {
        const unsigned char c = static_cast<unsigned char>(src_[pos_++]);
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((c & 0xC0) != 0x80) {
            ++col_;
        }
    }

    // Advance past a multi-byte sequence that counts as one column.
    void advance_bytes(std::size_t n) {
        pos_ += n;
        ++col_;
    }

    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '-' && peek(1) == '-') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    static bool ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }

    Token next() {
        const auto line = line_;
        const auto col = col_;
        const char c = peek();
        for (const auto& s : kSynonyms) {
            if (src_.substr(pos_, s.bytes.size()) == s.bytes) {
                advance_bytes(s.bytes.size());
                return {s.kind, std::string(s.text), {}};
            }
        }
        if (ident_start(c)) {
            const auto start = pos_;
            while (pos_ < src_.size() && ident_char(peek())) advance();
            return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), {}};
        }
        if (c >= '0' && c <= '9') {
            const auto start = pos_;
            while (pos_ < src_.size() && peek() >= '0' && peek() <= '9') advance();
            if (ident_char(peek())) parse_error(span(line, col), "malformed number");
            return {Tok::Number, std::string(src_.substr(start, pos_ - start)), {}};
        }
        if (c == '"') {
            advance();
            std::string text;
            while (pos_ < src_.size() && peek() != '"' && peek() != '\n') {
                text += peek();
                advance();
            }
            if (peek() != '"') parse_error(span(line, col), "unterminated string literal");
            advance();
            return {Tok::String, std::move(text), {}};
        }
        auto two = src_.substr(pos_, 2);
        auto take = [&](std::size_t n, Tok k) {
            std::string text(src_.substr(pos_, n));
            for (std::size_t i = 0; i < n; ++i) advance();
            return Token{k, std::move(text), {}};
        };
        if (two == ":=") return take(2, Tok::Assign);
        if (two == "=>") return take(2, Tok::FatArrow);
        if (two == "->") return take(2, Tok::Arrow);
        switch (c) {
            case '(': return take(1, Tok::LParen);
            case ')': return take(1, Tok::RParen);
            case ':': return take(1, Tok::Colon);
            case ',': return take(1, Tok::Comma);
            case '=': return take(1, Tok::Equals);
            default: break;
        }
        advance();
        parse_error(span(line, col), "unexpected character");
    }

    std::string_view src_;
    const std::string& path_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
    return SourceSpan{a.file, a.line, a.column, b.end_line, b.end_column};
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    SourceFile file(const std::string& path) {
        SourceFile f;
        f.path = path;
        while (!at(Tok::End)) {
            if (at_word("import")) {
                const auto kw = take();
                const auto lit = expect(Tok::String, "after 'import'");
                f.imports.push_back({lit.text, join(kw.span, lit.span)});
            } else if (at_word("def") || at_word("axiom")) {
                f.decls.push_back(decl());
            } else {
                fail_here("expected 'def', 'axiom' or 'import'");
            }
        }
        return f;
    }

    ExprPtr single_term() {
        auto t = term();
        if (!at(Tok::End)) fail_here("unexpected trailing input");
        return t;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool at_word(std::string_view w) const { return at(Tok::Ident) && cur().text == w; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    const SourceSpan& last_span() const { return toks_[pos_ > 0 ? pos_ - 1 : 0].span; }

    [[noreturn]] void fail_here(const std::string& what) {
        std::string found = at(Tok::End) ? "end of input" : "'" + cur().text + "'";
        parse_error(cur().span, what + ", found " + found);
    }

    Token expect(Tok k, const std::string& context) {
        if (!at(k)) fail_here(std::string("expected ") + describe(k) + " " + context);
        return take();
    }

    Token name(const std::string& context) {
        if (!at(Tok::Ident) || (is_keyword(cur().text) && cur().text != "_"))
            fail_here("expected a name " + context);
        return take();
    }

    SurfaceDecl decl() {
        SurfaceDecl d;
        const auto kw = take();
        d.kind = kw.text == "def" ? DeclKind::Definition : DeclKind::Axiom;
        const auto n = name("after '" + kw.text + "'");
        if (n.text == "_") parse_error(n.span, "a declaration needs a name");
        d.name = n.text;
        d.name_span = n.span;
        while (at(Tok::LParen)) group(d.telescope, true);
        expect(Tok::Colon, "before the declared type");
        d.type = term();
        if (at(Tok::Assign)) {
            const auto assign = take();
            if (d.kind == DeclKind::Axiom) parse_error(assign.span, "an axiom cannot have a body");
            d.body = term();
        } else if (d.kind == DeclKind::Definition) {
            fail_here("expected ':=' and a body for definition '" + d.name + "'");
        }
        d.span = join(kw.span, last_span());
        return d;
    }

    ExprPtr hole(const SourceSpan& s) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Hole;
        e->span = s;
        return e;
    }

    // `(x y : A)`; with `annotated` false a bare name or `_` is also accepted.
    void group(std::vector<Binder>& out, bool annotated) {
        if (!at(Tok::LParen)) {
            if (annotated) fail_here("expected a binder '(x : A)'");
            const auto n = name("in binder");
            out.push_back({n.text, hole(n.span), n.span});
            return;
        }
        const auto open = take();
        std::vector<Token> names;
        do names.push_back(name("in binder"));
        while (at(Tok::Ident));
        expect(Tok::Colon, "in binder");
        auto type = term();
        const auto close = expect(Tok::RParen, "to close binder");
        for (const auto& n : names) out.push_back({n.text, type, join(open.span, close.span)});
    }

    // Binders for `forall`/`Sum`: parenthesized groups, or the bare form `x y : A`.
    std::vector<Binder> quantifier_binders() {
        std::vector<Binder> bs;
        if (at(Tok::LParen)) {
            while (at(Tok::LParen)) group(bs, true);
            return bs;
        }
        std::vector<Token> names;
        do names.push_back(name("in binder"));
        while (at(Tok::Ident));
        expect(Tok::Colon, "in binder");
        auto type = term();
        for (const auto& n : names) bs.push_back({n.text, type, n.span});
        return bs;
    }

    ExprPtr binding(ExprKind kind, const Token& kw) {
        auto e = std::make_shared<Expr>();
        e->kind = kind;
        if (kind == ExprKind::Fun) {
            do group(e->binders, false);
            while (at(Tok::LParen) || at(Tok::Ident));
            expect(Tok::FatArrow, "after 'fun' binders");
        } else {
            e->binders = quantifier_binders();
            expect(Tok::Comma, std::string("after '") + kw.text + "' binders");
        }
        e->args.push_back(term());
        e->span = join(kw.span, e->args[0]->span);
        return e;
    }

    ExprPtr term() {
        if (at_word("fun")) {
            const auto kw = take();
            return binding(ExprKind::Fun, kw);
        }
        if (at_word("forall")) {
            const auto kw = take();
            return binding(ExprKind::Forall, kw);
        }
        if (at_word("Sum")) {
            const auto kw = take();
            return binding(ExprKind::Sum, kw);
        }
        return arrow();
    }

    ExprPtr arrow() {
        auto lhs = eq();
        if (!at(Tok::Arrow)) return lhs;
        take();
        auto rhs = at_word("fun") || at_word("forall") || at_word("Sum") ? term() : arrow();
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Arrow;
        e->span = join(lhs->span, rhs->span);
        e->args = {lhs, rhs};
        return e;
    }

    ExprPtr eq() {
        auto lhs = app();
        if (!at(Tok::Equals)) return lhs;
        take();
        auto rhs = app();
        if (!at_word("in")) fail_here("expected 'in' after 'a = b'");
        take();
        auto type = app();
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Eq;
        e->span = join(lhs->span, type->span);
        e->args = {lhs, rhs, type};
        return e;
    }

    bool at_atom() const {
        if (at(Tok::Number) || at(Tok::LParen)) return true;
        if (!at(Tok::Ident)) return false;
        const auto& w = cur().text;
        return !is_keyword(w) || w == "Type" || w == "_";
    }

    ExprPtr app() {
        if (!at_atom()) fail_here("expected a term");
        auto fn = atom();
        while (at_atom()) {
            auto arg = atom();
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::App;
            e->span = join(fn->span, arg->span);
            e->args = {fn, arg};
            fn = e;
        }
        return fn;
    }

    std::uint64_t number(const Token& t) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) parse_error(t.span, "number out of range");
        return v;
    }

    ExprPtr atom() {
        auto e = std::make_shared<Expr>();
        if (at(Tok::LParen)) {
            const auto open = take();
            ExprPtr inner;
            try {
                inner = term();
            } catch (const Error&) {
                if (at(Tok::End)) parse_error(open.span, "'(' is never closed");
                throw;
            }
            if (at(Tok::End)) parse_error(open.span, "'(' is never closed");
            const auto close = expect(Tok::RParen, "to match '('");
            auto copy = std::make_shared<Expr>(*inner);
            copy->span = join(open.span, close.span);
            return copy;
        }
        const auto t = take();
        e->span = t.span;
        if (t.kind == Tok::Number) {
            e->kind = ExprKind::Numeral;
            e->number = number(t);
        } else if (t.text == "_") {
            e->kind = ExprKind::Hole;
        } else if (t.text == "Type") {
            if (!at(Tok::Number)) fail_here("expected a level after 'Type'");
            const auto lvl = take();
            e->kind = ExprKind::Universe;
            e->number = number(lvl);
            e->span = join(t.span, lvl.span);
        } else {
            e->kind = ExprKind::Ident;
            e->name = t.text;
        }
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

SourceFile parse_file(std::string_view text, const std::string& path) {
    Parser p(Lexer(text, path).run());
    return p.file(path);
}

ExprPtr parse_term(std::string_view text, const std::string& path) {
    Parser p(Lexer(text, path).run());
    return p.single_term();
}

}  // namespace ufk::surface
