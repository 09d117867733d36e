#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "samp/augment.hpp"
#include "samp/line_vars.hpp"
#include "samp/parser.hpp"
#include "samp/pipeline.hpp"
#include "samp/render.hpp"
#include "samp/trace.hpp"

#include <sstream>

namespace py = pybind11;

namespace {

samp::Value to_value(const py::handle& obj)
{
    if (obj.is_none())
        return samp::Value::null();
    if (py::isinstance<py::bool_>(obj))
        return samp::Value::boolean(obj.cast<bool>());
    if (py::isinstance<py::int_>(obj))
        return samp::Value::integer(obj.cast<std::int64_t>());
    if (py::isinstance<py::float_>(obj))
        return samp::Value::floating(obj.cast<double>());
    if (py::isinstance<py::str>(obj))
        return samp::Value::string(obj.cast<std::string>());
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        std::vector<samp::Value> elems;
        for (auto item : obj)
            elems.push_back(to_value(item));
        return samp::Value::array(std::move(elems));
    }
    if (py::isinstance<py::dict>(obj)) {
        std::vector<std::pair<std::string, samp::Value>> fields;
        for (auto [k, v] : obj.cast<py::dict>())
            fields.emplace_back(py::str(k).cast<std::string>(), to_value(v));
        return samp::Value::record(std::move(fields));
    }
    throw py::type_error("cannot convert object to a Samp value");
}

samp::HitLimit to_limit(const std::optional<std::uint32_t>& hits) { return hits; }

py::dict event_dict(const samp::LineEvent& e)
{
    py::dict d;
    d["seq"] = e.seq;
    d["pass"] = e.pass;
    d["file"] = e.file;
    d["ln"] = e.line;
    return d;
}

py::dict var_dict(const samp::VarRecord& r)
{
    py::dict d;
    d["seq"] = r.seq;
    d["pass"] = r.pass;
    d["ln"] = r.line;
    d["name"] = r.name;
    d["val"] = r.value;
    return d;
}

} // namespace

PYBIND11_MODULE(_samp, m)
{
    m.doc() = "Record sample variable values of Samp programs and annotate source lines";

    py::register_exception<samp::SyntaxError>(m, "SyntaxError", PyExc_ValueError);
    py::register_exception<samp::RuntimeError>(m, "RuntimeError", PyExc_RuntimeError);
    py::register_exception<samp::TraceError>(m, "TraceError", PyExc_ValueError);
    py::register_exception<samp::StaleTraceError>(m, "StaleTraceError", PyExc_RuntimeError);

    m.def("render",
        [](const py::object& obj, std::size_t max_len, std::size_t max_depth, std::size_t max_elems) {
            samp::RenderOptions opts{max_len, max_depth, max_elems};
            return samp::render(to_value(obj), opts);
        },
        py::arg("value"), py::arg("max_len") = 60, py::arg("max_depth") = 2, py::arg("max_elems") = 8);

    m.def("line_vars",
        [](const std::string& source) {
            const auto program = samp::parse(source);
            const auto table = samp::line_vars(program);
            py::dict out;
            for (std::uint32_t line = 1; line <= table.max_line(); ++line) {
                auto entries = table.at(line);
                if (entries.empty())
                    continue;
                py::list items;
                for (const auto& v : entries)
                    items.append(py::make_tuple(v.name, samp::to_string(v.access)));
                out[py::int_(line)] = items;
            }
            return out;
        },
        py::arg("source"), "Per-line variable table: {line: [(name, access), ...]}");

    py::class_<samp::TraceDb>(m, "Trace")
        .def_property_readonly("hits_per_line", [](const samp::TraceDb& db) { return db.header().hits_per_line; })
        .def_property_readonly("files",
            [](const samp::TraceDb& db) {
                py::list out;
                for (const auto& f : db.header().files)
                    out.append(py::make_tuple(f.path, f.hash, f.lines));
                return out;
            })
        .def_property_readonly("events",
            [](const samp::TraceDb& db) {
                py::list out;
                for (const auto& e : db.events())
                    out.append(event_dict(e));
                return out;
            })
        .def_property_readonly("vars",
            [](const samp::TraceDb& db) {
                py::list out;
                for (const auto& r : db.vars())
                    out.append(var_dict(r));
                return out;
            })
        .def("passes", &samp::TraceDb::passes)
        .def("passes_covering", &samp::TraceDb::passes_covering, py::arg("file"), py::arg("line"))
        .def("save", [](const samp::TraceDb& db, const std::string& path) { samp::write_trace(path, db); });

    m.def("load_trace", &samp::load_trace, py::arg("path"));

    m.def("record",
        [](const std::string& source, const std::string& path, std::optional<std::uint32_t> hits) {
            const auto file = samp::SourceFile::from_string(path, source);
            std::ostringstream out;
            auto db = samp::record_in_memory(file, to_limit(hits), &out);
            return py::make_tuple(std::move(db), out.str());
        },
        py::arg("source"), py::arg("path") = "<string>", py::arg("hits_per_line") = 1,
        "Runs a program with the recorder attached; returns (Trace, printed output). "
        "hits_per_line=None records every execution.");

    m.def("run",
        [](const std::string& program, const std::string& trace, std::optional<std::uint32_t> hits) {
            const auto file = samp::SourceFile::load(program);
            const std::string path = trace.empty() ? samp::default_trace_path(program) : trace;
            std::ostringstream out;
            const auto s = samp::record_to_file(file, path, to_limit(hits), &out);
            py::dict d;
            d["trace"] = path;
            d["passes"] = s.passes;
            d["events"] = s.events;
            d["vars"] = s.vars;
            d["seconds"] = s.seconds;
            d["output"] = out.str();
            return d;
        },
        py::arg("program"), py::arg("trace") = "", py::arg("hits_per_line") = 1);

    m.def("annotate",
        [](const samp::TraceDb& db, const std::string& source, const std::string& path, std::uint32_t cursor) {
            return samp::annotate(db, samp::SourceFile::from_string(path, source), cursor);
        },
        py::arg("trace"), py::arg("source"), py::arg("path"), py::arg("cursor"));

    m.def("is_stale",
        [](const samp::TraceDb& db, const std::string& source, const std::string& path) {
            return samp::is_stale(db, samp::SourceFile::from_string(path, source));
        },
        py::arg("trace"), py::arg("source"), py::arg("path"));
}
