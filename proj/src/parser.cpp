#include "samp/parser.hpp"

#include <charconv>
#include <cstdlib>
#include <optional>

namespace samp {

SyntaxError::SyntaxError(std::uint32_t line, std::uint32_t col, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + message)
    , line_(line)
    , col_(col)
    , detail_(message)
{
}

namespace {

enum class Tok {
    End, Ident, Int, Float, Str,
    KwLet, KwIf, KwElse, KwWhile, KwFor, KwIn, KwFn, KwReturn, KwPrint, KwTrue, KwFalse, KwNull,
    LParen, RParen, LBrace, RBrace, LBracket, RBracket, Comma, Semi, Colon, Dot,
    Assign, PlusAssign, Plus, Minus, Star, Slash, Percent,
    Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier name, decoded string literal, or raw lexeme
    std::uint32_t line = 1;
    std::uint32_t col = 1;
    std::uint32_t end_line = 1;
    std::uint32_t end_col = 1;
    std::int64_t int_value = 0;
    double float_value = 0;
};

std::optional<Tok> keyword(std::string_view s)
{
    static constexpr std::pair<std::string_view, Tok> table[] = {
        {"let", Tok::KwLet}, {"if", Tok::KwIf}, {"else", Tok::KwElse}, {"while", Tok::KwWhile},
        {"for", Tok::KwFor}, {"in", Tok::KwIn}, {"fn", Tok::KwFn}, {"return", Tok::KwReturn},
        {"print", Tok::KwPrint}, {"true", Tok::KwTrue}, {"false", Tok::KwFalse}, {"null", Tok::KwNull},
    };
    for (auto [k, t] : table)
        if (k == s)
            return t;
    return std::nullopt;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t = next();
            out.push_back(std::move(t));
            if (out.back().kind == Tok::End)
                return out;
        }
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;

    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }
    bool at_end() const { return pos_ >= src_.size(); }

    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, col_, msg); }

    void skip_space()
    {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    static bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    Token next()
    {
        Token t;
        t.line = line_;
        t.col = col_;
        auto finish = [&](Tok kind) {
            t.kind = kind;
            t.end_line = line_;
            t.end_col = col_;
            return t;
        };
        if (at_end())
            return finish(Tok::End);

        const std::size_t start = pos_;
        char c = peek();
        if (ident_start(c)) {
            while (!at_end() && (ident_start(peek()) || is_digit(peek())))
                advance();
            t.text = std::string(src_.substr(start, pos_ - start));
            return finish(keyword(t.text).value_or(Tok::Ident));
        }
        if (is_digit(c))
            return number(t, start, finish);
        if (c == '"')
            return string(t, finish);

        auto two = [&](char second, Tok yes, Tok no) {
            advance();
            if (peek() == second) {
                advance();
                return yes;
            }
            return no;
        };
        Tok kind;
        switch (c) {
        case '(': advance(); kind = Tok::LParen; break;
        case ')': advance(); kind = Tok::RParen; break;
        case '{': advance(); kind = Tok::LBrace; break;
        case '}': advance(); kind = Tok::RBrace; break;
        case '[': advance(); kind = Tok::LBracket; break;
        case ']': advance(); kind = Tok::RBracket; break;
        case ',': advance(); kind = Tok::Comma; break;
        case ';': advance(); kind = Tok::Semi; break;
        case ':': advance(); kind = Tok::Colon; break;
        case '.': advance(); kind = Tok::Dot; break;
        case '-': advance(); kind = Tok::Minus; break;
        case '*': advance(); kind = Tok::Star; break;
        case '/': advance(); kind = Tok::Slash; break;
        case '%': advance(); kind = Tok::Percent; break;
        case '+': kind = two('=', Tok::PlusAssign, Tok::Plus); break;
        case '=': kind = two('=', Tok::Eq, Tok::Assign); break;
        case '!': kind = two('=', Tok::Ne, Tok::Bang); break;
        case '<': kind = two('=', Tok::Le, Tok::Lt); break;
        case '>': kind = two('=', Tok::Ge, Tok::Gt); break;
        case '&':
            if (peek(1) != '&')
                fail("unexpected '&'");
            advance();
            advance();
            kind = Tok::AndAnd;
            break;
        case '|':
            if (peek(1) != '|')
                fail("unexpected '|'");
            advance();
            advance();
            kind = Tok::OrOr;
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                fail("unexpected character");
            fail(std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        return finish(kind);
    }

    template <class Finish>
    Token number(Token& t, std::size_t start, Finish finish)
    {
        bool is_float = false;
        while (is_digit(peek()))
            advance();
        if (peek() == '.' && is_digit(peek(1))) {
            is_float = true;
            advance();
            while (is_digit(peek()))
                advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t ahead = 1;
            if (peek(1) == '+' || peek(1) == '-')
                ahead = 2;
            if (is_digit(peek(ahead))) {
                is_float = true;
                for (std::size_t i = 0; i < ahead; ++i)
                    advance();
                while (is_digit(peek()))
                    advance();
            }
        }
        if (ident_start(peek()))
            fail("malformed number");
        t.text = std::string(src_.substr(start, pos_ - start));
        if (is_float) {
            t.float_value = std::strtod(t.text.c_str(), nullptr);
            return finish(Tok::Float);
        }
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.int_value);
        if (ec != std::errc{})
            throw SyntaxError(t.line, t.col, "integer literal out of range");
        return finish(Tok::Int);
    }

    template <class Finish>
    Token string(Token& t, Finish finish)
    {
        advance();  // opening quote
        std::string value;
        for (;;) {
            if (at_end() || peek() == '\n')
                throw SyntaxError(t.line, t.col, "unterminated string literal");
            char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                char e = peek();
                switch (e) {
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case 'r': value += '\r'; break;
                case '"': value += '"'; break;
                case '\\': value += '\\'; break;
                default: fail("unknown escape sequence");
                }
                advance();
                continue;
            }
            value += c;
            advance();
        }
        t.text = std::move(value);
        return finish(Tok::Str);
    }
};

std::string describe(const Token& t)
{
    switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Int:
    case Tok::Float: return "number " + t.text;
    case Tok::Str: return "string literal";
    default: return "'" + t.text + "'";
    }
}

constexpr int kMaxNesting = 256;

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program()
    {
        Program p;
        while (cur().kind != Tok::End)
            p.stmts.push_back(statement(true));
        if (!p.stmts.empty())
            p.span = Span{p.stmts.front()->span.start_line, p.stmts.front()->span.start_col,
                p.stmts.back()->span.end_line, p.stmts.back()->span.end_col};
        else
            p.span = Span{1, 1, 1, 1};
        return p;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    int depth_ = 0;

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser)
        {
            if (++p.depth_ > kMaxNesting)
                p.error_at(p.cur(), "nesting too deep");
        }
        ~DepthGuard() { --p.depth_; }
    };

    const Token& cur() const { return toks_[i_]; }
    const Token& prev() const { return toks_[i_ - 1]; }
    bool check(Tok k) const { return cur().kind == k; }
    const Token& take()
    {
        const Token& t = toks_[i_];
        if (t.kind != Tok::End)
            ++i_;
        return t;
    }
    bool accept(Tok k)
    {
        if (!check(k))
            return false;
        take();
        return true;
    }

    [[noreturn]] void error_at(const Token& t, const std::string& msg) const { throw SyntaxError(t.line, t.col, msg); }
    [[noreturn]] void unexpected() const { error_at(cur(), "unexpected " + describe(cur())); }

    const Token& expect(Tok k, const char* what)
    {
        if (!check(k))
            error_at(cur(), "expected " + std::string(what) + ", found " + describe(cur()));
        return take();
    }

    static Span token_span(const Token& t) { return Span{t.line, t.col, t.end_line, t.end_col}; }
    Span from(const Token& first) const
    {
        return Span{first.line, first.col, prev().end_line, prev().end_col};
    }

    template <class N>
    ExprPtr make_expr(Span span, N node)
    {
        return std::make_unique<Expr>(Expr{span, std::move(node)});
    }
    template <class N>
    StmtPtr make_stmt(Span span, N node)
    {
        return std::make_unique<Stmt>(Stmt{span, std::move(node)});
    }

    // ---- statements ----

    StmtPtr statement(bool top_level)
    {
        DepthGuard guard(*this);
        const Token& first = cur();
        switch (first.kind) {
        case Tok::KwLet: {
            take();
            const Token& name = expect(Tok::Ident, "variable name");
            expect(Tok::Assign, "'='");
            auto init = expression();
            expect(Tok::Semi, "';'");
            return make_stmt(from(first), ast::Let{name.text, token_span(name), std::move(init)});
        }
        case Tok::KwIf: {
            take();
            expect(Tok::LParen, "'('");
            auto cond = expression();
            expect(Tok::RParen, "')'");
            auto then_block = body();
            std::optional<ast::Block> else_block;
            if (accept(Tok::KwElse))
                else_block = body();
            return make_stmt(from(first), ast::If{std::move(cond), std::move(then_block), std::move(else_block)});
        }
        case Tok::KwWhile: {
            take();
            expect(Tok::LParen, "'('");
            auto cond = expression();
            expect(Tok::RParen, "')'");
            auto b = body();
            return make_stmt(from(first), ast::While{std::move(cond), std::move(b)});
        }
        case Tok::KwFor: {
            take();
            expect(Tok::LParen, "'('");
            const Token& var = expect(Tok::Ident, "loop variable");
            expect(Tok::KwIn, "'in'");
            auto iterable = expression();
            expect(Tok::RParen, "')'");
            auto b = body();
            return make_stmt(from(first), ast::For{var.text, token_span(var), std::move(iterable), std::move(b)});
        }
        case Tok::KwFn: {
            if (!top_level)
                error_at(first, "functions may only be declared at top level");
            take();
            const Token& name = expect(Tok::Ident, "function name");
            expect(Tok::LParen, "'('");
            std::vector<ast::Param> params;
            if (!check(Tok::RParen)) {
                do {
                    const Token& p = expect(Tok::Ident, "parameter name");
                    for (const auto& existing : params)
                        if (existing.name == p.text)
                            error_at(p, "duplicate parameter '" + p.text + "'");
                    params.push_back({p.text, token_span(p)});
                } while (accept(Tok::Comma));
            }
            expect(Tok::RParen, "')'");
            if (!check(Tok::LBrace))
                error_at(cur(), "expected '{', found " + describe(cur()));
            auto b = block();
            return make_stmt(from(first), ast::FnDecl{name.text, std::move(params), std::move(b)});
        }
        case Tok::KwReturn: {
            take();
            ExprPtr value;
            if (!check(Tok::Semi))
                value = expression();
            expect(Tok::Semi, "';'");
            return make_stmt(from(first), ast::Return{std::move(value)});
        }
        case Tok::KwPrint: {
            take();
            expect(Tok::LParen, "'('");
            auto value = expression();
            expect(Tok::RParen, "')'");
            expect(Tok::Semi, "';'");
            return make_stmt(from(first), ast::Print{std::move(value)});
        }
        case Tok::LBrace:
            error_at(first, "unexpected '{' (blocks are only allowed as statement bodies)");
        default:
            break;
        }

        auto e = expression();
        if (check(Tok::Assign) || check(Tok::PlusAssign)) {
            const Token& op = take();
            const bool assignable = std::holds_alternative<ast::Name>(e->node)
                || std::holds_alternative<ast::Member>(e->node) || std::holds_alternative<ast::Index>(e->node);
            if (!assignable)
                error_at(op, "invalid assignment target");
            auto value = expression();
            expect(Tok::Semi, "';'");
            auto aop = op.kind == Tok::Assign ? ast::AssignOp::Set : ast::AssignOp::Add;
            return make_stmt(from(first), ast::Assign{std::move(e), aop, std::move(value)});
        }
        expect(Tok::Semi, "';'");
        return make_stmt(from(first), ast::ExprStmt{std::move(e)});
    }

    ast::Block block()
    {
        const Token& open = expect(Tok::LBrace, "'{'");
        ast::Block b;
        while (!check(Tok::RBrace)) {
            if (check(Tok::End))
                error_at(cur(), "expected '}', found end of input");
            b.stmts.push_back(statement(false));
        }
        take();
        b.span = from(open);
        return b;
    }

    ast::Block body()
    {
        if (check(Tok::LBrace))
            return block();
        ast::Block b;
        b.stmts.push_back(statement(false));
        b.span = b.stmts.back()->span;
        return b;
    }

    // ---- expressions ----

    ExprPtr expression()
    {
        DepthGuard guard(*this);
        return or_expr();
    }

    template <class Next>
    ExprPtr binary_level(Next next, std::initializer_list<std::pair<Tok, BinaryOp>> ops)
    {
        auto lhs = (this->*next)();
        for (;;) {
            std::optional<BinaryOp> op;
            for (auto [t, o] : ops)
                if (check(t))
                    op = o;
            if (!op)
                return lhs;
            take();
            auto rhs = (this->*next)();
            Span s{lhs->span.start_line, lhs->span.start_col, rhs->span.end_line, rhs->span.end_col};
            lhs = make_expr(s, ast::Binary{*op, std::move(lhs), std::move(rhs)});
        }
    }

    ExprPtr or_expr() { return binary_level(&Parser::and_expr, {{Tok::OrOr, BinaryOp::Or}}); }
    ExprPtr and_expr() { return binary_level(&Parser::eq_expr, {{Tok::AndAnd, BinaryOp::And}}); }
    ExprPtr eq_expr()
    {
        return binary_level(&Parser::cmp_expr, {{Tok::Eq, BinaryOp::Eq}, {Tok::Ne, BinaryOp::Ne}});
    }
    ExprPtr cmp_expr()
    {
        return binary_level(&Parser::add_expr,
            {{Tok::Lt, BinaryOp::Lt}, {Tok::Le, BinaryOp::Le}, {Tok::Gt, BinaryOp::Gt}, {Tok::Ge, BinaryOp::Ge}});
    }
    ExprPtr add_expr()
    {
        return binary_level(&Parser::mul_expr, {{Tok::Plus, BinaryOp::Add}, {Tok::Minus, BinaryOp::Sub}});
    }
    ExprPtr mul_expr()
    {
        return binary_level(&Parser::unary_expr,
            {{Tok::Star, BinaryOp::Mul}, {Tok::Slash, BinaryOp::Div}, {Tok::Percent, BinaryOp::Mod}});
    }

    ExprPtr unary_expr()
    {
        DepthGuard guard(*this);
        const Token& first = cur();
        if (accept(Tok::Minus)) {
            auto operand = unary_expr();
            return make_expr(from(first), ast::Unary{UnaryOp::Neg, std::move(operand)});
        }
        if (accept(Tok::Bang)) {
            auto operand = unary_expr();
            return make_expr(from(first), ast::Unary{UnaryOp::Not, std::move(operand)});
        }
        return postfix_expr();
    }

    ExprPtr postfix_expr()
    {
        const Token& first = cur();
        auto e = primary();
        for (;;) {
            if (accept(Tok::LParen)) {
                std::vector<ExprPtr> args;
                if (!check(Tok::RParen)) {
                    do {
                        args.push_back(expression());
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
                e = make_expr(from(first), ast::Call{std::move(e), std::move(args)});
            } else if (accept(Tok::LBracket)) {
                auto index = expression();
                expect(Tok::RBracket, "']'");
                e = make_expr(from(first), ast::Index{std::move(e), std::move(index)});
            } else if (accept(Tok::Dot)) {
                const Token& field = expect(Tok::Ident, "field name");
                e = make_expr(from(first), ast::Member{std::move(e), field.text, token_span(field)});
            } else {
                return e;
            }
        }
    }

    ExprPtr primary()
    {
        const Token& t = cur();
        switch (t.kind) {
        case Tok::Int: take(); return make_expr(token_span(t), ast::IntLit{t.int_value});
        case Tok::Float: take(); return make_expr(token_span(t), ast::FloatLit{t.float_value});
        case Tok::Str: take(); return make_expr(token_span(t), ast::StrLit{t.text});
        case Tok::KwTrue: take(); return make_expr(token_span(t), ast::BoolLit{true});
        case Tok::KwFalse: take(); return make_expr(token_span(t), ast::BoolLit{false});
        case Tok::KwNull: take(); return make_expr(token_span(t), ast::NullLit{});
        case Tok::Ident: take(); return make_expr(token_span(t), ast::Name{t.text});
        case Tok::LParen: {
            take();
            auto inner = expression();
            expect(Tok::RParen, "')'");
            // Parentheses widen the span so child spans stay nested in parents.
            inner->span = from(t);
            return inner;
        }
        case Tok::LBracket: {
            take();
            std::vector<ExprPtr> elems;
            if (!check(Tok::RBracket)) {
                do {
                    elems.push_back(expression());
                } while (accept(Tok::Comma));
            }
            expect(Tok::RBracket, "']'");
            return make_expr(from(t), ast::ArrayLit{std::move(elems)});
        }
        case Tok::LBrace: {
            take();
            std::vector<ast::RecordField> fields;
            if (!check(Tok::RBrace)) {
                do {
                    const Token& key = expect(Tok::Ident, "field name");
                    for (const auto& f : fields)
                        if (f.key == key.text)
                            error_at(key, "duplicate field '" + key.text + "'");
                    expect(Tok::Colon, "':'");
                    fields.push_back({key.text, expression()});
                } while (accept(Tok::Comma));
            }
            expect(Tok::RBrace, "'}'");
            return make_expr(from(t), ast::RecordLit{std::move(fields)});
        }
        default:
            unexpected();
        }
    }
};

} // namespace

Program parse(std::string_view content)
{
    Parser parser(Lexer(content).run());
    return parser.program();
}

} // namespace samp
