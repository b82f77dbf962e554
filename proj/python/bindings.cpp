#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrq/errors.hpp"
#include "qrq/json_io.hpp"

namespace py = pybind11;
using namespace qrq;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
std::string dump(const ojson& j) { return j.dump(); }

Mat4 to_mat(const std::vector<std::vector<cplx>>& rows) {
  if (rows.size() != 4) throw Error(ErrorCode::InvalidArgument, "gate must be 4x4");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    if (rows[r].size() != 4) throw Error(ErrorCode::InvalidArgument, "gate must be 4x4");
    for (int c = 0; c < 4; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<Error>(m, "QrqError", PyExc_ValueError);

  m.def("amplitudes", [](double xi1, double xi2, double t1, double t2) {
    return dump(to_json(amplitudes({xi1, xi2, t1, t2})));
  });
  m.def(
      "regime", [](double xi1, double xi2, double t1, double t2, double tol) {
        return dump(to_json(regime_classify({xi1, xi2, t1, t2}, tol)));
      },
      py::arg("xi1"), py::arg("xi2"), py::arg("theta1"), py::arg("theta2"), py::arg("tol") = 1e-6);
  m.def("phi_en", [](double x, double delta, const std::string& branch) {
    return dump(to_json(phi_en(x, delta, branch_from_string(branch))));
  });
  m.def("x_min", &x_min);
  m.def("invariants", [](const std::vector<std::vector<cplx>>& rows) {
    TwoQubitGate g{to_mat(rows), false};
    ojson j;
    j["class"] = to_json(classify(g));
    if (unitarity_error(g.matrix) <= 1e-9) j["invariants"] = to_json(makhlin_invariants(g));
    return dump(j);
  });
  m.def(
      "compare", [](double xi1, double xi2, double t1, double t2, int n_start) {
        py::gil_scoped_release release;
        return dump(to_json(compare_closed_form({xi1, xi2, t1, t2}, n_start)));
      },
      py::arg("xi1"), py::arg("xi2"), py::arg("theta1"), py::arg("theta2"), py::arg("n_start") = 16);
  m.def(
      "tables", [](int which) {
        ojson arr = ojson::array();
        for (const auto& r : verify_tables(which)) arr.push_back(to_json(r));
        return dump(arr);
      },
      py::arg("which") = 0);
}
