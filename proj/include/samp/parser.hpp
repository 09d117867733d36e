#pragma once

#include "samp/ast.hpp"
#include "samp/source.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace samp {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::uint32_t line, std::uint32_t col, const std::string& message);

    std::uint32_t line() const noexcept { return line_; }
    std::uint32_t column() const noexcept { return col_; }
    /// Message without the "line:col: " prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::uint32_t line_;
    std::uint32_t col_;
    std::string detail_;
};

/// Parses a whole program. Throws SyntaxError on the first error; no partial tree.
///
/// Grammar summary (bodies are either a `{...}` block or a single statement):
///   stmt  := 'let' NAME '=' expr ';' | lvalue ('=' | '+=') expr ';' | expr ';'
///          | 'if' '(' expr ')' body ['else' body] | 'while' '(' expr ')' body
///          | 'for' '(' NAME 'in' expr ')' body | 'fn' NAME '(' params ')' block
///          | 'return' [expr] ';' | 'print' '(' expr ')' ';'
///   `fn` is accepted only at top level. Line comments start with `//`.
Program parse(std::string_view content);
inline Program parse(const SourceFile& file) { return parse(file.content); }

} // namespace samp
