#pragma once

#include "samp/ast.hpp"
#include "samp/source.hpp"
#include "samp/value.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace samp {

/// Line number used as the target of the transition fired on function exit.
/// It never compares less than a real line, so exits are not backward jumps.
inline constexpr std::uint32_t kExitLine = std::numeric_limits<std::uint32_t>::max();
/// `Frame::current_line` before the first line of an activation runs.
inline constexpr std::uint32_t kEntryLine = 0;

using Env = std::unordered_map<std::string, Value>;

struct Frame {
    std::string function_name;
    Env locals;
    /// Globals for function activations; null for the module frame, whose
    /// locals are the globals.
    Env* globals = nullptr;
    /// Forward-execution segment id; 0 until something is recorded.
    std::uint64_t pass_id = 0;
    std::uint32_t current_line = kEntryLine;
    bool instrumented = true;

    /// Local first, then global. Null when unbound.
    const Value* lookup(const std::string& name) const;
};

struct LineTransition {
    Frame& frame;
    const SourceFile& file;
    std::uint32_t current_line;
    std::uint32_t next_line;

    bool is_exit() const noexcept { return next_line == kExitLine; }
    bool is_backward() const noexcept { return next_line < current_line; }
};

/// Receives every change of physical line, synchronously on the
/// interpreter thread, after all effects of `current_line` have applied.
class LineHook {
public:
    virtual ~LineHook() = default;
    virtual void on_transition(const LineTransition& t) = 0;
};

class RuntimeError : public std::runtime_error {
public:
    RuntimeError(std::string file, std::uint32_t line, const std::string& message);

    const std::string& file() const noexcept { return file_; }
    std::uint32_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string file_;
    std::uint32_t line_;
    std::string detail_;
};

struct ExecOptions {
    LineHook* hook = nullptr;
    std::ostream* out = nullptr;  // print target; std::cout when null
    std::size_t max_call_depth = 10'000;
};

/// Tree-walking evaluator. Top-level statements run first as module
/// initialization (not instrumented), then `main()` is called.
class Interpreter {
public:
    Interpreter(const Program& program, const SourceFile& file, ExecOptions opts = {});
    ~Interpreter();
    Interpreter(const Interpreter&) = delete;
    Interpreter& operator=(const Interpreter&) = delete;

    /// Runs the program to completion and returns main's return value.
    /// Throws RuntimeError; transitions already delivered to the hook stay delivered.
    Value run();

    /// Evaluates one expression in `frame` (left-to-right, && and || short-circuit).
    Value eval_expr(const Expr& e, Frame& frame);

    /// A fresh uninstrumented frame that sees this interpreter's globals.
    Frame scratch_frame(std::string name = "<eval>");

    const Env& globals() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: parse-free execution of an already parsed program.
/// Runs on a thread with a stack large enough for the full call-depth cap.
Value execute(const Program& program, const SourceFile& file, LineHook* hook, std::ostream* out = nullptr);

} // namespace samp
