#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiercode/error.hpp"
#include "hiercode/io.hpp"
#include "hiercode/sim.hpp"

namespace py = pybind11;
using namespace hiercode;

namespace {

struct PyCode {
    Config config;
    HierCode code;
};

using IntRows = std::vector<std::vector<std::uint32_t>>;

IntRows to_ints(const std::vector<Vec>& rows) {
    IntRows out;
    for (const auto& r : rows) {
        std::vector<std::uint32_t> v;
        for (Elem e : r) v.push_back(e.value);
        out.push_back(std::move(v));
    }
    return out;
}

Messages to_messages(const PyCode& c, const IntRows& rows) {
    Messages m;
    for (const auto& r : rows) {
        Vec v;
        for (auto x : r) {
            if (!c.code.field()->contains(Elem{x})) throw Error(ErrorKind::InvalidParams, "symbol outside the field");
            v.push_back(Elem{x});
        }
        m.push_back(std::move(v));
    }
    return m;
}

// erasures: node id -> 1-based positions.
ErasurePattern to_pattern(const PyCode& c, const std::map<int, std::vector<int>>& erasures) {
    ErasurePattern p = ErasurePattern::none(c.code.p());
    for (const auto& [id, pos] : erasures) {
        if (id < 1 || id > c.code.p()) throw Error(ErrorKind::DanglingEdge, "unknown node id");
        for (int x : pos) p.erased[static_cast<std::size_t>(id - 1)].push_back(x - 1);
    }
    return p;
}

PyCode from_config(Config cfg) {
    HierCode code = cfg.build();
    return PyCode{std::move(cfg), std::move(code)};
}

}  // namespace

PYBIND11_MODULE(_hiercode, m) {
    static py::exception<Error> error(m, "HierCodeError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            error(e.what());
        }
    });

    py::class_<PyCode>(m, "Code")
        .def_property_readonly("p", [](const PyCode& c) { return c.code.p(); })
        .def_property_readonly("multi_level", [](const PyCode& c) { return c.code.multi_level(); })
        .def("params", [](const PyCode& c, int id) {
            const NodeParams& q = c.code.graph().params(id - 1);
            return py::dict(py::arg("k") = q.k, py::arg("r") = q.r, py::arg("delta") = q.delta);
        })
        .def("hierarchy", [](const PyCode& c, int id) { return ec_hierarchy(c.code).at(static_cast<std::size_t>(id - 1)).d; })
        .def("generator", [](const PyCode& c) { return c.code.generator().dump(); })
        .def("random_messages", [](const PyCode& c, std::uint64_t seed) { return to_ints(random_messages(c.code, seed)); },
             py::arg("seed") = 1)
        .def("encode", [](const PyCode& c, const IntRows& msgs) { return to_ints(encode(c.code, to_messages(c, msgs))); })
        .def(
            "decode",
            [](const PyCode& c, const IntRows& words, const std::map<int, std::vector<int>>& erasures) {
                auto rx = apply_pattern(to_messages(c, words), to_pattern(c, erasures));
                RecoveryTrace tr = run_recovery(c.code, rx);
                std::vector<std::optional<std::vector<std::uint32_t>>> out;
                for (const auto& n : tr.nodes) {
                    if (!n.recovered) {
                        out.emplace_back(std::nullopt);
                        continue;
                    }
                    out.push_back(to_ints({n.message}).front());
                }
                return out;
            },
            py::arg("codewords"), py::arg("erasures"))
        .def(
            "trace",
            [](const PyCode& c, const std::map<int, std::vector<int>>& erasures, std::uint64_t seed) {
                return run_recovery(c.code, to_pattern(c, erasures), seed).to_json();
            },
            py::arg("erasures"), py::arg("seed") = 1)
        .def(
            "certify",
            [](const PyCode& c, const std::vector<int>& weights) { return certify(c.code, weights).certified; },
            py::arg("weights"))
        .def(
            "simulate",
            [](const PyCode& c, int trials, std::uint64_t seed) {
                SimConfig sim = c.config.simulation.value_or(SimConfig{});
                if (!c.config.simulation) sim.model.pattern = ErasurePattern::none(c.code.p());
                sim.trials = trials;
                sim.seed = seed;
                return sweep(c.code, sim).to_json();
            },
            py::arg("trials") = 100, py::arg("seed") = 1)
        .def("dump_config", [](const PyCode& c) { return dump_config(c.code); });

    m.def("parse", [](const std::string& text) { return from_config(parse_config(text)); }, py::arg("text"));
    m.def("load", [](const std::string& path) { return from_config(load_config(path)); }, py::arg("path"));
}
