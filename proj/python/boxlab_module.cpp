#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "boxlab/box_json.hpp"
#include "boxlab/cli.hpp"
#include "boxlab/cost.hpp"
#include "boxlab/error.hpp"
#include "boxlab/generators.hpp"
#include "boxlab/measures.hpp"
#include "boxlab/verify.hpp"

namespace py = pybind11;
using namespace boxlab;

namespace {

// Rationals cross the boundary as fractions.Fraction.
py::object to_py(const Rational& q) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(py::int_(py::str(q.get_num().get_str())), py::int_(py::str(q.get_den().get_str())));
}

Rational from_py(const py::handle& value) {
    return parse_rational(py::str(value).cast<std::string>());
}

py::list entries_to_py(const Box& box) {
    py::list out;
    for (const auto& e : box.entries()) out.append(to_py(e));
    return out;
}

Box box_from_entries(const py::sequence& values) {
    if (py::len(values) != kEntries) throw Error(ErrorCode::DimensionMismatch, "a box has 16 entries");
    Box::Entries e;
    for (int i = 0; i < kEntries; ++i) e[i] = from_py(values[i]);
    return Box::from_table(e);
}

}  // namespace

PYBIND11_MODULE(_boxlab, m) {
    static py::exception<Error> error(m, "BoxlabError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            error(e.what());
        }
    });

    py::class_<Box>(m, "Box")
        .def(py::init(&box_from_entries), py::arg("entries"))
        .def_static("from_json", [](const std::string& text) { return parse_box(text); })
        .def("to_json", [](const Box& b) { return serialize_box(b); })
        .def("entries", &entries_to_py)
        .def("p", [](const Box& b, int a, int bb, int A, int B) { return to_py(b.p(a, bb, A, B)); })
        .def("__eq__", [](const Box& x, const Box& y) { return x == y; })
        .def("__repr__", [](const Box& b) { return "Box(" + serialize_box(b) + ")"; });

    m.def("canonical", [](const std::string& name) { return canonical(name); });
    m.def("canonical_names", &canonical_names);
    m.def("isotropic", [](const py::object& v) { return isotropic(from_py(v)); });
    m.def("quantum_box", [](std::array<double, 4> angles, long max_den) { return quantum_box(angles, max_den); },
          py::arg("angles"), py::arg("max_den") = 1000000);
    m.def("nearest_rational", [](double x, long max_den) { return to_py(nearest_rational(x, max_den)); });
    m.def("sample", [](const std::string& family, std::uint64_t seed, long count) {
        return sample(parse_random_family(family), seed, count);
    });

    m.def("chsh_values", [](const Box& b) {
        py::list out;
        for (const auto& v : chsh(b).values) out.append(to_py(v));
        return out;
    });
    m.def("lambda_max", [](const Box& b) { return to_py(chsh(b).lambda_max); });
    m.def("signal", [](const Box& b) {
        const auto s = signal(b);
        return py::make_tuple(to_py(s.s_AtoB), to_py(s.s_BtoA), to_py(s.s));
    });
    m.def(
        "unpredictability",
        [](const Box& b, const std::string& variant) {
            if (variant != "formula" && variant != "per_party") {
                throw Error(ErrorCode::BadParameter, "variant is 'formula' or 'per_party'");
            }
            return to_py(unpredictability(
                b, variant == "formula" ? UnpredictabilityVariant::formula : UnpredictabilityVariant::per_party));
        },
        py::arg("box"), py::arg("variant") = "formula");
    m.def("uncertainty", [](const Box& b) {
        const auto u = uncertainty(b);
        return py::make_tuple(to_py(u.u_A), to_py(u.u_B));
    });
    m.def(
        "communication_cost",
        [](const Box& b, const std::string& basis) {
            const auto r = communication_cost(b, parse_basis(basis));
            py::dict weights;
            for (const auto& [id, w] : r.decomposition.weights) weights[py::int_(id)] = to_py(w);
            py::dict out;
            out["c"] = to_py(r.c);
            out["s"] = to_py(r.s);
            out["eta"] = to_py(r.eta);
            out["lower_bound"] = to_py(r.lower_bound);
            out["weights"] = weights;
            return out;
        },
        py::arg("box"), py::arg("basis") = "full256");

    m.def(
        "analyze_json", [](const Box& b, std::optional<int> dim) { return analysis_to_json(analyze(b, dim)).dump(); },
        py::arg("box"), py::arg("dim") = py::none());
    m.def("fuzz_json", [](const std::string& family, std::uint64_t seed, long count) {
        return findings_to_json(fuzz(RandomSpec{parse_random_family(family), seed}, count)).dump();
    });
    m.def("repro_json", [] { return repro_to_json(reproduce_reference()).dump(); });
    m.def("run_cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "boxlab");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(int(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
