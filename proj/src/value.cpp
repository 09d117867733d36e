#include "samp/value.hpp"

#include <set>

namespace samp {

const char* kind_name(Kind k) noexcept
{
    switch (k) {
    case Kind::Null: return "null";
    case Kind::Bool: return "bool";
    case Kind::Int: return "int";
    case Kind::Float: return "float";
    case Kind::Str: return "string";
    case Kind::Array: return "array";
    case Kind::Record: return "record";
    case Kind::Func: return "function";
    }
    return "?";
}

Value* RecordObj::find(std::string_view name)
{
    for (auto& [k, v] : fields)
        if (k == name)
            return &v;
    return nullptr;
}

const Value* RecordObj::find(std::string_view name) const
{
    return const_cast<RecordObj*>(this)->find(name);
}

void RecordObj::set(std::string_view name, Value v)
{
    if (auto* slot = find(name))
        *slot = std::move(v);
    else
        fields.emplace_back(std::string(name), std::move(v));
}

Value Value::array(std::vector<Value> elems)
{
    return Value(Storage{std::make_shared<ArrayObj>(ArrayObj{std::move(elems)})});
}

Value Value::record(std::vector<std::pair<std::string, Value>> fields)
{
    return Value(Storage{std::make_shared<RecordObj>(RecordObj{std::move(fields)})});
}

namespace {

// Pairs of containers already assumed equal; revisiting one closes a cycle.
using Assumed = std::set<std::pair<const void*, const void*>>;

bool equal(const Value& a, const Value& b, Assumed& assumed)
{
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Kind::Null: return true;
    case Kind::Bool: return a.as_bool() == b.as_bool();
    case Kind::Int: return a.as_int() == b.as_int();
    case Kind::Float: return a.as_float() == b.as_float();
    case Kind::Str: return a.as_str() == b.as_str();
    case Kind::Func: return a.as_func().name == b.as_func().name;
    case Kind::Array: {
        const auto* x = a.as_array().get();
        const auto* y = b.as_array().get();
        if (x == y || !assumed.emplace(x, y).second)
            return true;
        if (x->elems.size() != y->elems.size())
            return false;
        for (std::size_t i = 0; i < x->elems.size(); ++i)
            if (!equal(x->elems[i], y->elems[i], assumed))
                return false;
        return true;
    }
    case Kind::Record: {
        const auto* x = a.as_record().get();
        const auto* y = b.as_record().get();
        if (x == y || !assumed.emplace(x, y).second)
            return true;
        if (x->fields.size() != y->fields.size())
            return false;
        for (std::size_t i = 0; i < x->fields.size(); ++i) {
            if (x->fields[i].first != y->fields[i].first)
                return false;
            if (!equal(x->fields[i].second, y->fields[i].second, assumed))
                return false;
        }
        return true;
    }
    }
    return false;
}

} // namespace

bool operator==(const Value& a, const Value& b)
{
    Assumed assumed;
    return equal(a, b, assumed);
}

} // namespace samp
