#include "crnsign/cli.hpp"
#include "crnsign/report.hpp"
#include "crnsign/textio.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace crnsign;

namespace {

py::object fraction(const Rational &q) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(py::int_(py::str(q.get_num().get_str())), py::int_(py::str(q.get_den().get_str())));
}

py::list fractions(const RationalMatrix &m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.append(fraction(m(i, j)));
        rows.append(row);
    }
    return rows;
}

// reports cross the boundary as JSON text; the package decodes them
std::string dump(const report::Json &j) { return j.dump(); }

} // namespace

PYBIND11_MODULE(_crnsign, m) {
    m.doc() = "Sign-pattern analysis and sign fixing of reaction networks";

    static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const ParseError &e) {
            std::ostringstream msg;
            msg << e.line() << ":" << e.column() << ": " << to_string(e.kind()) << ": " << e.detail();
            py::set_error(parse_error, msg.str().c_str());
        }
    });

    py::class_<Network>(m, "Network")
        .def_property_readonly("species",
                               [](const Network &n) {
                                   std::vector<std::string> out;
                                   for (std::size_t i = 0; i < n.species_count(); ++i)
                                       out.push_back(n.species_name(i));
                                   return out;
                               })
        .def_property_readonly("reactions",
                               [](const Network &n) {
                                   std::vector<std::string> out;
                                   for (std::size_t k = 0; k < n.reaction_count(); ++k)
                                       out.push_back(reaction_to_string(n, k));
                                   return out;
                               })
        .def("stoichiometry", [](const Network &n) { return fractions(stoichiometric_matrix(n)); })
        .def("text", &serialize_network)
        .def("__eq__", [](const Network &a, const Network &b) { return a == b; })
        .def("__repr__", [](const Network &n) {
            return "<Network " + std::to_string(n.species_count()) + " species, " +
                   std::to_string(n.reaction_count()) + " reactions>";
        });

    m.def(
        "parse",
        [](const std::string &text, bool permissive) { return parse_network(text, {permissive}); },
        py::arg("text"), py::arg("permissive") = false);

    m.def("network_report", [](const Network &n) { return dump(report::network(n)); });
    m.def(
        "signcheck_report",
        [](const Network &n, std::size_t samples, std::uint64_t seed) {
            return dump(report::signcheck(n, {samples, seed}));
        },
        py::arg("network"), py::arg("samples") = 100, py::arg("seed") = 0);
    m.def("badclasses_report", [](const Network &n) {
        return dump(report::badclasses(n, find_bad_submatrices(stoichiometric_matrix(n))));
    });
    m.def("kernels_report", [](const Network &n) { return dump(report::kernels(stoichiometric_matrix(n))); });
    m.def("deficiency_report", [](const Network &n) { return dump(report::deficiency(n)); });

    m.def(
        "sign_fix",
        [](const Network &n, std::optional<std::vector<std::size_t>> order, double rate) {
            SignFixOptions opt;
            opt.order = std::move(order);
            opt.rate = rate;
            FixReport rep = sign_fix(n, opt);
            report::Json j = report::fixreport(rep);
            j["kernels"] = report::kernels(rep);
            j["deficiency"] = report::deficiency(rep);
            return py::make_tuple(rep.result(), dump(j));
        },
        py::arg("network"), py::arg("order") = py::none(), py::arg("rate") = 1.0);
    m.def("altfix_report", [](const Network &n) { return dump(report::altfix(n, altfix(n))); });

    m.def("run_cli", [](const std::vector<std::string> &args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
