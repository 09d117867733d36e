#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace samp {

namespace ast {
struct FnDecl;
}

class Value;

struct ArrayObj {
    std::vector<Value> elems;
};

struct RecordObj {
    std::vector<std::pair<std::string, Value>> fields;

    Value* find(std::string_view name);
    const Value* find(std::string_view name) const;
    void set(std::string_view name, Value v);
};

/// Reference to a user function (decl set) or a builtin (decl null).
struct FuncRef {
    std::string name;
    const ast::FnDecl* decl = nullptr;
};

enum class Kind : std::uint8_t { Null, Bool, Int, Float, Str, Array, Record, Func };

const char* kind_name(Kind k) noexcept;

/// A Samp runtime value. Arrays and records are shared by reference, so
/// cycles are possible.
class Value {
public:
    using Array = std::shared_ptr<ArrayObj>;
    using Record = std::shared_ptr<RecordObj>;

    Value() = default;
    static Value null() { return Value(); }
    static Value boolean(bool b) { return Value(Storage{b}); }
    static Value integer(std::int64_t i) { return Value(Storage{i}); }
    static Value floating(double d) { return Value(Storage{d}); }
    static Value string(std::string s) { return Value(Storage{std::move(s)}); }
    static Value array(std::vector<Value> elems = {});
    static Value record(std::vector<std::pair<std::string, Value>> fields = {});
    static Value function(FuncRef ref) { return Value(Storage{std::move(ref)}); }

    Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
    bool is(Kind k) const noexcept { return kind() == k; }

    bool as_bool() const { return std::get<bool>(data_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_float() const { return std::get<double>(data_); }
    const std::string& as_str() const { return std::get<std::string>(data_); }
    const Array& as_array() const { return std::get<Array>(data_); }
    const Record& as_record() const { return std::get<Record>(data_); }
    const FuncRef& as_func() const { return std::get<FuncRef>(data_); }

    /// Deep structural equality; terminates on cyclic values.
    friend bool operator==(const Value& a, const Value& b);

private:
    using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, Array, Record, FuncRef>;
    explicit Value(Storage s) : data_(std::move(s)) {}
    Storage data_;
};

} // namespace samp
