#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "saftea/cli.hpp"
#include "saftea/json_io.hpp"
#include "saftea/report.hpp"
#include "saftea/service.hpp"

namespace py = pybind11;
using namespace saftea;

namespace {

DatasetBundle bundle_from(const std::optional<std::string>& dir) {
  return dir ? load_bundle(std::filesystem::path(*dir)) : default_bundle();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the saftea techno-economic engine";
  m.attr("__version__") = SAFTEA_VERSION;

  py::register_exception<BundleError>(m, "BundleError", PyExc_RuntimeError);

  py::class_<service::Service>(m, "Service")
      .def(py::init([](const std::optional<std::string>& bundle_dir) {
             return std::make_unique<service::Service>(bundle_from(bundle_dir));
           }),
           py::arg("bundle_dir") = py::none())
      .def(
          "handle",
          [](const service::Service& s, const std::string& method, const std::string& path,
             const service::Query& query, const std::string& body) {
            service::Response r;
            {
              py::gil_scoped_release release;
              r = s.handle(method, path, query, body);
            }
            return py::make_tuple(r.status, r.body);
          },
          py::arg("method"), py::arg("path"), py::arg("query") = service::Query{}, py::arg("body") = "")
      .def_property_readonly("etag", &service::Service::etag)
      .def("reproduce", [](const service::Service& s) { return io::to_json(report::reproduce(s.bundle())).dump(); })
      .def(
          "history",
          [](const service::Service& s, const std::string& route, bool include_taxes) {
            const Route r = parse_route(route);
            return io::to_json(report::historical_comparison(s.bundle(), r, include_taxes), r).dump();
          },
          py::arg("route"), py::arg("include_taxes") = true);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
