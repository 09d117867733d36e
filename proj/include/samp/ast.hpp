#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace samp {

/// 1-based source range. end_col is one past the last byte of the last token.
struct Span {
    std::uint32_t start_line = 0;
    std::uint32_t start_col = 0;
    std::uint32_t end_line = 0;
    std::uint32_t end_col = 0;

    bool contains(const Span& o) const noexcept;
    bool covers_line(std::uint32_t line) const noexcept { return line >= start_line && line <= end_line; }
    friend bool operator==(const Span&, const Span&) = default;
};

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* to_string(BinaryOp op) noexcept;

namespace ast {

struct IntLit { std::int64_t value; };
struct FloatLit { double value; };
struct StrLit { std::string value; };
struct BoolLit { bool value; };
struct NullLit {};
struct ArrayLit { std::vector<ExprPtr> elems; };
struct RecordField {
    std::string key;
    ExprPtr value;
};
struct RecordLit { std::vector<RecordField> fields; };
struct Name { std::string id; };
struct Index { ExprPtr base; ExprPtr index; };
struct Member {
    ExprPtr base;
    std::string field;
    Span field_span;
};
struct Call { ExprPtr callee; std::vector<ExprPtr> args; };
struct Unary { UnaryOp op; ExprPtr operand; };
struct Binary { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };

struct Block {
    std::vector<StmtPtr> stmts;
    Span span;
};

struct Let {
    std::string name;
    Span name_span;
    ExprPtr init;
};
enum class AssignOp { Set, Add };
/// Target is a Name, Member or Index expression.
struct Assign { ExprPtr target; AssignOp op; ExprPtr value; };
struct ExprStmt { ExprPtr expr; };
struct If { ExprPtr cond; Block then_block; std::optional<Block> else_block; };
struct While { ExprPtr cond; Block body; };
struct For {
    std::string var;
    Span var_span;
    ExprPtr iterable;
    Block body;
};
struct Param {
    std::string name;
    Span span;
};
struct FnDecl {
    std::string name;
    std::vector<Param> params;
    Block body;
};
struct Return { ExprPtr value; };  // value may be null
struct Print { ExprPtr value; };

} // namespace ast

struct Expr {
    using Node = std::variant<ast::IntLit, ast::FloatLit, ast::StrLit, ast::BoolLit, ast::NullLit,
        ast::ArrayLit, ast::RecordLit, ast::Name, ast::Index, ast::Member, ast::Call, ast::Unary,
        ast::Binary>;
    Span span;
    Node node;
};

struct Stmt {
    using Node = std::variant<ast::Let, ast::Assign, ast::ExprStmt, ast::If, ast::While, ast::For,
        ast::FnDecl, ast::Return, ast::Print>;
    Span span;
    Node node;

    /// Line on which the statement's own evaluation happens (its first token).
    std::uint32_t line() const noexcept { return span.start_line; }
};

/// A parsed program. Function declarations appear only at top level.
struct Program {
    std::vector<StmtPtr> stmts;
    Span span;

    const ast::FnDecl* find_function(std::string_view name) const;
    /// Function declarations with their spans, in source order.
    std::vector<std::pair<const ast::FnDecl*, Span>> functions() const;
};

/// S-expression dump with spans; equal dumps mean structurally identical trees.
std::string dump(const Program& program);

} // namespace samp
