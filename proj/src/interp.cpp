#include "samp/interp.hpp"

#include "samp/render.hpp"

#include <pthread.h>

#include <cmath>
#include <exception>
#include <functional>
#include <iostream>

namespace samp {

const Value* Frame::lookup(const std::string& name) const
{
    if (auto it = locals.find(name); it != locals.end())
        return &it->second;
    if (globals) {
        if (auto it = globals->find(name); it != globals->end())
            return &it->second;
    }
    return nullptr;
}

RuntimeError::RuntimeError(std::string file, std::uint32_t line, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": runtime error: " + message)
    , file_(std::move(file))
    , line_(line)
    , detail_(message)
{
}

namespace {

enum class Flow { Normal, Return };

enum class Builtin { None, Len, Substring, Push };

Builtin builtin_named(std::string_view name)
{
    if (name == "len")
        return Builtin::Len;
    if (name == "substring")
        return Builtin::Substring;
    if (name == "push")
        return Builtin::Push;
    return Builtin::None;
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b)
{
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b)
{
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b)
{
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

// Runs fn on a thread whose stack can hold the deepest allowed call chain.
void run_on_large_stack(const std::function<void()>& fn)
{
    constexpr std::size_t kStackBytes = std::size_t{1} << 30;
    struct Ctx {
        const std::function<void()>* fn;
        std::exception_ptr error;
    } ctx{&fn, nullptr};

    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, kStackBytes);
    pthread_t tid;
    auto entry = [](void* p) -> void* {
        auto* c = static_cast<Ctx*>(p);
        try {
            (*c->fn)();
        } catch (...) {
            c->error = std::current_exception();
        }
        return nullptr;
    };
    const int rc = pthread_create(&tid, &attr, entry, &ctx);
    pthread_attr_destroy(&attr);
    if (rc != 0) {
        fn();  // fall back to the calling thread
        return;
    }
    pthread_join(tid, nullptr);
    if (ctx.error)
        std::rethrow_exception(ctx.error);
}

} // namespace

struct Interpreter::Impl {
    const Program& program;
    const SourceFile& file;
    ExecOptions opts;
    std::ostream& out;
    Frame module;
    std::unordered_map<std::string_view, const ast::FnDecl*> functions;
    std::size_t depth = 0;
    Value returned;

    Impl(const Program& p, const SourceFile& f, ExecOptions o)
        : program(p)
        , file(f)
        , opts(o)
        , out(o.out ? *o.out : std::cout)
    {
        module.function_name = "<module>";
        module.instrumented = false;
        for (const auto& [fn, span] : program.functions())
            functions.emplace(fn->name, fn);
    }

    [[noreturn]] void fail(std::uint32_t line, const std::string& msg) const
    {
        throw RuntimeError(file.path, line, msg);
    }

    void visit(Frame& f, std::uint32_t line)
    {
        if (f.current_line == line)
            return;
        if (f.current_line != kEntryLine && f.instrumented && opts.hook)
            opts.hook->on_transition(LineTransition{f, file, f.current_line, line});
        f.current_line = line;
    }

    void leave(Frame& f)
    {
        if (f.current_line != kEntryLine && f.instrumented && opts.hook)
            opts.hook->on_transition(LineTransition{f, file, f.current_line, kExitLine});
    }

    Value run()
    {
        for (const auto& s : program.stmts)
            if (exec(*s, module) == Flow::Return)
                break;
        const ast::FnDecl* main_fn = program.find_function("main");
        if (!main_fn)
            fail(module.current_line == kEntryLine ? 1 : module.current_line, "no 'main' function defined");
        if (!main_fn->params.empty())
            fail(main_fn->body.span.start_line, "'main' must not take parameters");
        return call_user(*main_fn, {}, main_fn->body.span.start_line);
    }

    // ---- statements ----

    Flow exec_block(const ast::Block& b, Frame& f)
    {
        for (const auto& s : b.stmts)
            if (exec(*s, f) == Flow::Return)
                return Flow::Return;
        return Flow::Normal;
    }

    Flow exec(const Stmt& s, Frame& f)
    {
        const std::uint32_t line = s.line();
        if (std::holds_alternative<ast::FnDecl>(s.node))
            return Flow::Normal;
        visit(f, line);

        switch (s.node.index()) {
        case 0: {  // Let
            const auto& n = std::get<ast::Let>(s.node);
            Value v = eval(*n.init, f);
            f.locals.insert_or_assign(n.name, std::move(v));
            return Flow::Normal;
        }
        case 1:
            assign(std::get<ast::Assign>(s.node), f, line);
            return Flow::Normal;
        case 2:
            eval(*std::get<ast::ExprStmt>(s.node).expr, f);
            return Flow::Normal;
        case 3: {
            const auto& n = std::get<ast::If>(s.node);
            if (truthy(eval(*n.cond, f), n.cond->span.start_line))
                return exec_block(n.then_block, f);
            if (n.else_block)
                return exec_block(*n.else_block, f);
            return Flow::Normal;
        }
        case 4: {
            const auto& n = std::get<ast::While>(s.node);
            for (bool first = true;; first = false) {
                if (!first)
                    visit(f, line);
                if (!truthy(eval(*n.cond, f), n.cond->span.start_line))
                    return Flow::Normal;
                if (exec_block(n.body, f) == Flow::Return)
                    return Flow::Return;
            }
        }
        case 5: {
            const auto& n = std::get<ast::For>(s.node);
            Value seq = eval(*n.iterable, f);
            std::vector<Value> items;
            if (seq.is(Kind::Array)) {
                items = seq.as_array()->elems;
            } else if (seq.is(Kind::Str)) {
                for (char c : seq.as_str())
                    items.push_back(Value::string(std::string(1, c)));
            } else {
                fail(n.iterable->span.start_line, std::string("cannot iterate over ") + kind_name(seq.kind()));
            }
            // The header line binds each element; exhausting the sequence
            // does not revisit it.
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i > 0)
                    visit(f, line);
                f.locals.insert_or_assign(n.var, std::move(items[i]));
                if (exec_block(n.body, f) == Flow::Return)
                    return Flow::Return;
            }
            return Flow::Normal;
        }
        case 7: {
            const auto& n = std::get<ast::Return>(s.node);
            returned = n.value ? eval(*n.value, f) : Value::null();
            return Flow::Return;
        }
        case 8: {
            const auto& n = std::get<ast::Print>(s.node);
            Value v = eval(*n.value, f);
            RenderOptions ro;
            ro.max_len = std::size_t{1} << 40;
            ro.max_elems = std::size_t{1} << 40;
            out << render(v, ro) << '\n';
            return Flow::Normal;
        }
        default:
            return Flow::Normal;
        }
    }

    Value* variable_slot(const std::string& name, Frame& f)
    {
        if (auto it = f.locals.find(name); it != f.locals.end())
            return &it->second;
        if (f.globals)
            if (auto it = f.globals->find(name); it != f.globals->end())
                return &it->second;
        return nullptr;
    }

    void assign(const ast::Assign& n, Frame& f, std::uint32_t line)
    {
        const bool add = n.op == ast::AssignOp::Add;
        if (auto* name = std::get_if<ast::Name>(&n.target->node)) {
            Value v = eval(*n.value, f);
            Value* slot = variable_slot(name->id, f);
            if (!slot)
                fail(n.target->span.start_line, "assignment to undefined name '" + name->id + "'");
            *slot = add ? binary(BinaryOp::Add, *slot, v, line) : std::move(v);
            return;
        }
        if (auto* mem = std::get_if<ast::Member>(&n.target->node)) {
            Value obj = eval(*mem->base, f);
            if (!obj.is(Kind::Record))
                fail(n.target->span.start_line,
                    "cannot set field '" + mem->field + "' on " + kind_name(obj.kind()));
            Value v = eval(*n.value, f);
            auto& rec = *obj.as_record();
            if (add) {
                const Value* cur = rec.find(mem->field);
                if (!cur)
                    fail(n.target->span.start_line, "record has no field '" + mem->field + "'");
                v = binary(BinaryOp::Add, *cur, v, line);
            }
            rec.set(mem->field, std::move(v));
            return;
        }
        const auto& idx = std::get<ast::Index>(n.target->node);
        Value obj = eval(*idx.base, f);
        Value key = eval(*idx.index, f);
        Value v = eval(*n.value, f);
        const std::uint32_t at = n.target->span.start_line;
        if (obj.is(Kind::Array)) {
            auto& elems = obj.as_array()->elems;
            const std::size_t i = checked_index(key, elems.size(), at);
            elems[i] = add ? binary(BinaryOp::Add, elems[i], v, line) : std::move(v);
        } else if (obj.is(Kind::Record) && key.is(Kind::Str)) {
            auto& rec = *obj.as_record();
            if (add) {
                const Value* cur = rec.find(key.as_str());
                if (!cur)
                    fail(at, "record has no field '" + key.as_str() + "'");
                v = binary(BinaryOp::Add, *cur, v, line);
            }
            rec.set(key.as_str(), std::move(v));
        } else {
            fail(at, std::string("cannot assign into ") + kind_name(obj.kind()));
        }
    }

    bool truthy(const Value& v, std::uint32_t line) const
    {
        if (!v.is(Kind::Bool))
            fail(line, std::string("condition must be bool, got ") + kind_name(v.kind()));
        return v.as_bool();
    }

    std::size_t checked_index(const Value& key, std::size_t size, std::uint32_t line) const
    {
        if (!key.is(Kind::Int))
            fail(line, std::string("index must be int, got ") + kind_name(key.kind()));
        const std::int64_t i = key.as_int();
        if (i < 0 || static_cast<std::uint64_t>(i) >= size)
            fail(line, "index " + std::to_string(i) + " out of bounds for length " + std::to_string(size));
        return static_cast<std::size_t>(i);
    }

    // ---- expressions ----

    Value eval(const Expr& e, Frame& f)
    {
        const std::uint32_t line = e.span.start_line;
        visit(f, line);
        switch (e.node.index()) {
        case 0: return Value::integer(std::get<ast::IntLit>(e.node).value);
        case 1: return Value::floating(std::get<ast::FloatLit>(e.node).value);
        case 2: return Value::string(std::get<ast::StrLit>(e.node).value);
        case 3: return Value::boolean(std::get<ast::BoolLit>(e.node).value);
        case 4: return Value::null();
        case 5: {
            const auto& n = std::get<ast::ArrayLit>(e.node);
            std::vector<Value> elems;
            elems.reserve(n.elems.size());
            for (const auto& x : n.elems)
                elems.push_back(eval(*x, f));
            return Value::array(std::move(elems));
        }
        case 6: {
            const auto& n = std::get<ast::RecordLit>(e.node);
            std::vector<std::pair<std::string, Value>> fields;
            fields.reserve(n.fields.size());
            for (const auto& fld : n.fields)
                fields.emplace_back(fld.key, eval(*fld.value, f));
            return Value::record(std::move(fields));
        }
        case 7: return read_name(std::get<ast::Name>(e.node).id, f, line);
        case 8: {
            const auto& n = std::get<ast::Index>(e.node);
            Value obj = eval(*n.base, f);
            Value key = eval(*n.index, f);
            if (obj.is(Kind::Array)) {
                const auto& elems = obj.as_array()->elems;
                return elems[checked_index(key, elems.size(), line)];
            }
            if (obj.is(Kind::Str)) {
                const auto& s = obj.as_str();
                return Value::string(std::string(1, s[checked_index(key, s.size(), line)]));
            }
            if (obj.is(Kind::Record) && key.is(Kind::Str)) {
                if (const Value* v = obj.as_record()->find(key.as_str()))
                    return *v;
                fail(line, "record has no field '" + key.as_str() + "'");
            }
            fail(line, std::string("cannot index ") + kind_name(obj.kind()) + " with " + kind_name(key.kind()));
        }
        case 9: {
            const auto& n = std::get<ast::Member>(e.node);
            Value obj = eval(*n.base, f);
            if (!obj.is(Kind::Record))
                fail(line, "cannot read field '" + n.field + "' of " + kind_name(obj.kind()));
            if (const Value* v = obj.as_record()->find(n.field))
                return *v;
            fail(n.field_span.start_line, "record has no field '" + n.field + "'");
        }
        case 10: return call(std::get<ast::Call>(e.node), f, line);
        case 11: {
            const auto& n = std::get<ast::Unary>(e.node);
            Value v = eval(*n.operand, f);
            if (n.op == UnaryOp::Not) {
                if (!v.is(Kind::Bool))
                    fail(line, std::string("cannot apply '!' to ") + kind_name(v.kind()));
                return Value::boolean(!v.as_bool());
            }
            if (v.is(Kind::Int))
                return Value::integer(wrap_sub(0, v.as_int()));
            if (v.is(Kind::Float))
                return Value::floating(-v.as_float());
            fail(line, std::string("cannot negate ") + kind_name(v.kind()));
        }
        case 12: {
            const auto& n = std::get<ast::Binary>(e.node);
            if (n.op == BinaryOp::And || n.op == BinaryOp::Or) {
                const bool lhs = logic_operand(eval(*n.lhs, f), n.op, line);
                if (n.op == BinaryOp::And ? !lhs : lhs)
                    return Value::boolean(lhs);
                return Value::boolean(logic_operand(eval(*n.rhs, f), n.op, line));
            }
            Value lhs = eval(*n.lhs, f);
            Value rhs = eval(*n.rhs, f);
            return binary(n.op, lhs, rhs, line);
        }
        }
        fail(line, "unsupported expression");
    }

    bool logic_operand(const Value& v, BinaryOp op, std::uint32_t line) const
    {
        if (!v.is(Kind::Bool))
            fail(line, std::string("cannot apply '") + to_string(op) + "' to " + kind_name(v.kind()));
        return v.as_bool();
    }

    Value read_name(const std::string& id, Frame& f, std::uint32_t line)
    {
        if (const Value* v = f.lookup(id))
            return *v;
        if (auto it = functions.find(id); it != functions.end())
            return Value::function(FuncRef{id, it->second});
        if (builtin_named(id) != Builtin::None)
            return Value::function(FuncRef{id, nullptr});
        fail(line, "undefined name '" + id + "'");
    }

    Value binary(BinaryOp op, const Value& a, const Value& b, std::uint32_t line) const
    {
        const Kind ka = a.kind();
        const Kind kb = b.kind();
        auto type_error = [&]() -> Value {
            fail(line, std::string("cannot apply '") + to_string(op) + "' to " + kind_name(ka) + " and "
                    + kind_name(kb));
        };
        switch (op) {
        case BinaryOp::Eq: return Value::boolean(a == b);
        case BinaryOp::Ne: return Value::boolean(!(a == b));
        case BinaryOp::Add:
            if (ka == Kind::Int && kb == Kind::Int)
                return Value::integer(wrap_add(a.as_int(), b.as_int()));
            if (ka == Kind::Float && kb == Kind::Float)
                return Value::floating(a.as_float() + b.as_float());
            if (ka == Kind::Str && kb == Kind::Str)
                return Value::string(a.as_str() + b.as_str());
            return type_error();
        case BinaryOp::Sub:
            if (ka == Kind::Int && kb == Kind::Int)
                return Value::integer(wrap_sub(a.as_int(), b.as_int()));
            if (ka == Kind::Float && kb == Kind::Float)
                return Value::floating(a.as_float() - b.as_float());
            return type_error();
        case BinaryOp::Mul:
            if (ka == Kind::Int && kb == Kind::Int)
                return Value::integer(wrap_mul(a.as_int(), b.as_int()));
            if (ka == Kind::Float && kb == Kind::Float)
                return Value::floating(a.as_float() * b.as_float());
            return type_error();
        case BinaryOp::Div:
        case BinaryOp::Mod: {
            const bool num_a = ka == Kind::Int || ka == Kind::Float;
            const bool num_b = kb == Kind::Int || kb == Kind::Float;
            if (!num_a || !num_b)
                return type_error();
            if (ka == Kind::Int && kb == Kind::Int) {
                const std::int64_t x = a.as_int();
                const std::int64_t y = b.as_int();
                if (y == 0)
                    fail(line, "division by zero");
                if (y == -1)  // avoids INT64_MIN / -1 overflow
                    return Value::integer(op == BinaryOp::Div ? wrap_sub(0, x) : 0);
                return Value::integer(op == BinaryOp::Div ? x / y : x % y);
            }
            if (op == BinaryOp::Mod && ka != kb)
                return type_error();
            const double x = ka == Kind::Int ? static_cast<double>(a.as_int()) : a.as_float();
            const double y = kb == Kind::Int ? static_cast<double>(b.as_int()) : b.as_float();
            if (y == 0.0)
                fail(line, "division by zero");
            return Value::floating(op == BinaryOp::Div ? x / y : std::fmod(x, y));
        }
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: {
            int c;
            if (ka == Kind::Int && kb == Kind::Int)
                c = a.as_int() < b.as_int() ? -1 : a.as_int() > b.as_int() ? 1 : 0;
            else if (ka == Kind::Float && kb == Kind::Float) {
                const double x = a.as_float();
                const double y = b.as_float();
                if (std::isnan(x) || std::isnan(y))
                    return Value::boolean(false);
                c = x < y ? -1 : x > y ? 1 : 0;
            } else if (ka == Kind::Str && kb == Kind::Str)
                c = a.as_str().compare(b.as_str());
            else
                return type_error();
            switch (op) {
            case BinaryOp::Lt: return Value::boolean(c < 0);
            case BinaryOp::Le: return Value::boolean(c <= 0);
            case BinaryOp::Gt: return Value::boolean(c > 0);
            default: return Value::boolean(c >= 0);
            }
        }
        case BinaryOp::And:
        case BinaryOp::Or:
            break;
        }
        return type_error();
    }

    Value call(const ast::Call& n, Frame& f, std::uint32_t line)
    {
        std::string_view name;
        const ast::FnDecl* decl = nullptr;
        Value callee_value;
        auto* callee_name = std::get_if<ast::Name>(&n.callee->node);
        if (callee_name && !f.lookup(callee_name->id)) {
            name = callee_name->id;
            if (auto it = functions.find(name); it != functions.end())
                decl = it->second;
            else if (builtin_named(name) == Builtin::None)
                fail(line, "undefined function '" + callee_name->id + "'");
        } else {
            callee_value = eval(*n.callee, f);
            if (!callee_value.is(Kind::Func))
                fail(line, std::string("cannot call ") + kind_name(callee_value.kind()));
            name = callee_value.as_func().name;
            decl = callee_value.as_func().decl;
        }

        std::vector<Value> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args)
            args.push_back(eval(*a, f));

        if (decl)
            return call_user(*decl, std::move(args), line);
        return call_builtin(builtin_named(name), name, args, line);
    }

    Value call_user(const ast::FnDecl& fn, std::vector<Value> args, std::uint32_t line)
    {
        if (args.size() != fn.params.size())
            fail(line, "'" + fn.name + "' expects " + std::to_string(fn.params.size()) + " argument(s), got "
                    + std::to_string(args.size()));
        if (depth >= opts.max_call_depth)
            fail(line, "maximum call depth of " + std::to_string(opts.max_call_depth) + " exceeded");

        Frame callee;
        callee.function_name = fn.name;
        callee.globals = &module.locals;
        for (std::size_t i = 0; i < args.size(); ++i)
            callee.locals.insert_or_assign(fn.params[i].name, std::move(args[i]));

        ++depth;
        struct DepthRestore {
            std::size_t& d;
            ~DepthRestore() { --d; }
        } restore{depth};

        Value result;
        if (exec_block(fn.body, callee) == Flow::Return)
            result = std::move(returned);
        returned = Value();
        leave(callee);
        return result;
    }

    Value call_builtin(Builtin b, std::string_view name, const std::vector<Value>& args, std::uint32_t line) const
    {
        auto arity = [&](std::size_t n) {
            if (args.size() != n)
                fail(line, "'" + std::string(name) + "' expects " + std::to_string(n) + " argument(s), got "
                        + std::to_string(args.size()));
        };
        switch (b) {
        case Builtin::Len: {
            arity(1);
            const Value& v = args[0];
            if (v.is(Kind::Str))
                return Value::integer(static_cast<std::int64_t>(v.as_str().size()));
            if (v.is(Kind::Array))
                return Value::integer(static_cast<std::int64_t>(v.as_array()->elems.size()));
            if (v.is(Kind::Record))
                return Value::integer(static_cast<std::int64_t>(v.as_record()->fields.size()));
            fail(line, std::string("len() of ") + kind_name(v.kind()));
        }
        case Builtin::Substring: {
            arity(3);
            if (!args[0].is(Kind::Str) || !args[1].is(Kind::Int) || !args[2].is(Kind::Int))
                fail(line, "substring(string, int, int) called with wrong argument types");
            const auto& s = args[0].as_str();
            const std::int64_t from = args[1].as_int();
            const std::int64_t to = args[2].as_int();
            const auto size = static_cast<std::int64_t>(s.size());
            if (from < 0 || to < from || to > size)
                fail(line, "substring range [" + std::to_string(from) + ", " + std::to_string(to)
                        + ") out of bounds for length " + std::to_string(size));
            return Value::string(s.substr(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from)));
        }
        case Builtin::Push: {
            arity(2);
            if (!args[0].is(Kind::Array))
                fail(line, std::string("push() into ") + kind_name(args[0].kind()));
            args[0].as_array()->elems.push_back(args[1]);
            return Value::null();
        }
        case Builtin::None:
            break;
        }
        fail(line, "undefined function '" + std::string(name) + "'");
    }
};

Interpreter::Interpreter(const Program& program, const SourceFile& file, ExecOptions opts)
    : impl_(std::make_unique<Impl>(program, file, opts))
{
}

Interpreter::~Interpreter() = default;

Value Interpreter::run()
{
    Value result;
    run_on_large_stack([&] { result = impl_->run(); });
    return result;
}

Value Interpreter::eval_expr(const Expr& e, Frame& frame)
{
    return impl_->eval(e, frame);
}

Frame Interpreter::scratch_frame(std::string name)
{
    Frame f;
    f.function_name = std::move(name);
    f.globals = &impl_->module.locals;
    f.instrumented = false;
    return f;
}

const Env& Interpreter::globals() const noexcept
{
    return impl_->module.locals;
}

Value execute(const Program& program, const SourceFile& file, LineHook* hook, std::ostream* out)
{
    ExecOptions opts;
    opts.hook = hook;
    opts.out = out;
    Interpreter interp(program, file, opts);
    return interp.run();
}

} // namespace samp
