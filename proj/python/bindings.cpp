#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "fllab/campaign.hpp"
#include "fllab/errors.hpp"
#include "fllab/weil.hpp"

namespace py = pybind11;
using namespace fllab;

namespace {

// JSON crosses the boundary as text; the Python layer decodes it.
FieldConfig field(std::int64_t p, std::optional<std::int64_t> u, int precision) {
  FieldConfig cfg = FieldConfig::make(p, u, precision);
  cfg.validate();
  return cfg;
}

RunConfig run_config(std::size_t n, std::int64_t p, std::optional<std::int64_t> u, int precision,
                     std::size_t samples, std::uint64_t seed, std::int64_t height, std::int64_t max_denominator_exp,
                     std::int64_t max_log_index, double unmatched_fraction, unsigned threads) {
  RunConfig rc;
  rc.n = n;
  rc.cfg = field(p, u, precision);
  rc.samples = samples;
  rc.seed = seed;
  rc.sampling.height = height;
  rc.sampling.max_denominator_exp = max_denominator_exp;
  rc.enumeration.max_log_index = max_log_index;
  if (unmatched_fraction < 0 || unmatched_fraction > 1)
    fail(ErrorKind::InvalidConfig, "unmatched fraction must lie in [0, 1]");
  rc.unmatched_permille = static_cast<std::int64_t>(unmatched_fraction * 1000 + 0.5);
  rc.threads = threads;
  rc.validate();
  return rc;
}

MatrixInput matrix_input(const std::string& doc, std::int64_t p, std::optional<std::int64_t> u, int precision) {
  return parse_matrix_json(Json::parse(doc), field(p, u, precision));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "p-adic orbital integral lab";
  m.attr("__version__") = kToolVersion;

  static py::handle error_type = PyErr_NewException("fllab._core.Error", PyExc_RuntimeError, nullptr);
  m.attr("Error") = error_type;
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      py::object err = error_type(py::str(e.what()));
      err.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), err.ptr());
    } catch (const Json::exception& e) {
      const std::string kind(to_string(ErrorKind::Parse));
      py::object err = error_type(py::str(kind + ": " + e.what()));
      err.attr("kind") = kind;
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  m.def(
      "invariants",
      [](const std::string& doc, std::int64_t p, std::optional<std::int64_t> u, int precision) {
        return invariants_report(matrix_input(doc, p, u, precision)).dump();
      },
      py::arg("matrix"), py::arg("p") = 3, py::arg("u") = py::none(), py::arg("precision") = 48);
  m.def(
      "orbit",
      [](const std::string& doc, bool oracle, std::int64_t p, std::optional<std::int64_t> u, int precision) {
        const MatrixInput in = matrix_input(doc, p, u, precision);
        py::gil_scoped_release release;
        return orbit_report(in, oracle).dump();
      },
      py::arg("matrix"), py::arg("oracle") = false, py::arg("p") = 3, py::arg("u") = py::none(),
      py::arg("precision") = 48);
  m.def(
      "represent",
      [](const std::string& doc, const std::string& side, std::int64_t p, std::optional<std::int64_t> u,
         int precision) {
        const InvariantPoint a = parse_invariants_json(Json::parse(doc), field(p, u, precision));
        return represent_report(a, parse_side(side)).dump();
      },
      py::arg("invariants"), py::arg("side") = "gl", py::arg("p") = 3, py::arg("u") = py::none(),
      py::arg("precision") = 48);
  m.def(
      "compare",
      [](const std::string& doc, std::int64_t p, std::optional<std::int64_t> u, int precision) {
        const InvariantPoint a = parse_invariants_json(Json::parse(doc), field(p, u, precision));
        if (!is_rss(a)) fail(ErrorKind::NotRss, "moment Hankel determinant vanishes");
        py::gil_scoped_release release;
        const FlComparison c = fl_compare(a);
        return Json{{"o_u", c.o_u}, {"o_gl", c.o_gl}, {"hermitian_exists", c.hermitian_exists}, {"equal", c.equal}}
            .dump();
      },
      py::arg("invariants"), py::arg("p") = 3, py::arg("u") = py::none(), py::arg("precision") = 48);
  m.def(
      "verify",
      [](std::size_t n, std::int64_t p, std::optional<std::int64_t> u, int precision, std::size_t samples,
         std::uint64_t seed, std::int64_t height, std::int64_t max_denominator_exp, std::int64_t max_log_index,
         double unmatched_fraction, unsigned threads, const std::string& timestamp) {
        const RunConfig rc = run_config(n, p, u, precision, samples, seed, height, max_denominator_exp,
                                        max_log_index, unmatched_fraction, threads);
        py::gil_scoped_release release;
        return to_json(run_verify(rc), timestamp).dump();
      },
      py::arg("n") = 2, py::arg("p") = 3, py::arg("u") = py::none(), py::arg("precision") = 48,
      py::arg("samples") = 100, py::arg("seed") = 0, py::arg("height") = 50, py::arg("max_denominator_exp") = 1,
      py::arg("max_log_index") = 12, py::arg("unmatched_fraction") = 0.2, py::arg("threads") = 1,
      py::arg("timestamp") = "");
  m.def(
      "lemma1",
      [](std::size_t n, std::int64_t p, std::optional<std::int64_t> u, int precision, std::size_t samples,
         std::uint64_t seed, std::int64_t height, std::int64_t max_denominator_exp, std::int64_t max_log_index,
         unsigned threads, const std::string& timestamp) {
        const RunConfig rc = run_config(n, p, u, precision, samples, seed, height, max_denominator_exp,
                                        max_log_index, 0.0, threads);
        py::gil_scoped_release release;
        return to_json(run_lemma1(rc), timestamp).dump();
      },
      py::arg("n") = 3, py::arg("p") = 3, py::arg("u") = py::none(), py::arg("precision") = 48,
      py::arg("samples") = 100, py::arg("seed") = 0, py::arg("height") = 50, py::arg("max_denominator_exp") = 1,
      py::arg("max_log_index") = 12, py::arg("threads") = 1, py::arg("timestamp") = "");
  m.def(
      "fourier_check",
      [](int n, std::int64_t p, std::optional<std::int64_t> u, std::int64_t level, int trials, std::uint64_t seed,
         const std::string& timestamp) {
        FourierCheckConfig fc;
        fc.cfg = field(p, u, 48);
        fc.n = n;
        fc.level = level;
        fc.trials = trials;
        fc.seed = seed;
        py::gil_scoped_release release;
        return to_json(run_fourier_check(fc), timestamp).dump();
      },
      py::arg("n") = 2, py::arg("p") = 3, py::arg("u") = py::none(), py::arg("level") = 1, py::arg("trials") = 10,
      py::arg("seed") = 0, py::arg("timestamp") = "");
}
