#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "peacock/baseline.hpp"
#include "peacock/bundling.hpp"
#include "peacock/coloring.hpp"
#include "peacock/dissimilarity.hpp"
#include "peacock/error.hpp"
#include "peacock/fixtures.hpp"
#include "peacock/pipeline.hpp"
#include "peacock/render.hpp"

namespace py = pybind11;
using namespace peacock;

namespace {

using Matrix = Eigen::MatrixXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

DetectionParams make_params(double epsilon, double t_frac, std::optional<double> t_abs, double k_min) {
  DetectionParams params;
  if (t_abs) {
    params.threshold = AbsoluteThreshold{*t_abs};
  } else {
    params.threshold = RelativeThreshold{t_frac};
  }
  params.k_min = k_min;
  params.epsilon = epsilon;
  params.validate();
  return params;
}

OptimizerConfig make_config(std::size_t dims, std::size_t max_iters, double rel_tol, std::uint64_t seed,
                            const std::string& init, unsigned threads) {
  OptimizerConfig cfg;
  cfg.dims = dims;
  cfg.max_iters = max_iters;
  cfg.rel_tol = rel_tol;
  cfg.seed = seed;
  if (init == "endpoint") {
    cfg.init = InitMethod::kEndpointProjection;
  } else if (init == "random") {
    cfg.init = InitMethod::kSeededRandom;
  } else {
    throw ParameterError("init must be 'endpoint' or 'random', got '" + init + "'");
  }
  cfg.threads = threads;
  cfg.validate();
  return cfg;
}

Point2 to_point(const std::array<double, 2>& p) { return {p[0], p[1]}; }

EdgeCurve edge_from_dict(const py::dict& d) {
  EdgeCurve e;
  e.id = d["id"].cast<std::size_t>();
  e.v1 = to_point(d["v1"].cast<std::array<double, 2>>());
  e.v2 = to_point(d["v2"].cast<std::array<double, 2>>());
  for (const auto& p : d["controls"].cast<std::vector<std::array<double, 2>>>()) e.controls.push_back(to_point(p));
  return e;
}

py::dict edge_to_dict(const EdgeCurve& e) {
  py::dict d;
  d["id"] = e.id;
  d["v1"] = std::array<double, 2>{e.v1.x, e.v1.y};
  d["v2"] = std::array<double, 2>{e.v2.x, e.v2.y};
  std::vector<std::array<double, 2>> controls;
  for (const Point2& p : e.controls) controls.push_back({p.x, p.y});
  d["controls"] = controls;
  return d;
}

py::dict fixture_to_dict(const Fixture& f) {
  py::dict d;
  d["layout"] = f.layout;
  d["bundles"] = f.truth.bundles;
  d["order"] = f.truth.order;
  d["threshold"] = f.threshold;
  d["k_min"] = f.k_min;
  return d;
}

}  // namespace

PYBIND11_MODULE(_peacock, m) {
  m.doc() = "Bundle-aware edge coloring";

  // Exception types live as long as the interpreter.
  static py::handle error = py::exception<Error>(m, "PeacockError", PyExc_ValueError).release();
  static py::handle parse_error = py::exception<ParseError>(m, "ParseError", error).release();
  static py::handle validation_error = py::exception<ValidationError>(m, "ValidationError", error).release();
  static py::handle parameter_error = py::exception<ParameterError>(m, "ParameterError", error).release();
  static py::handle optimizer_error = py::exception<OptimizerError>(m, "OptimizerError", error).release();
  static py::handle stage_error = py::exception<StageError>(m, "StageError", error).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const StageError& e) {
      py::object instance = stage_error(e.what());
      instance.attr("stage") = e.stage();
      py::set_error(stage_error, instance);
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const ParameterError& e) {
      py::set_error(parameter_error, e.what());
    } catch (const OptimizerError& e) {
      py::set_error(optimizer_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<GraphLayout>(m, "Layout")
      .def(py::init([](const std::vector<py::dict>& edges) {
             std::vector<EdgeCurve> out;
             for (const auto& d : edges) out.push_back(edge_from_dict(d));
             return GraphLayout(std::move(out));
           }),
           py::arg("edges"), "Edges as dicts with keys id, v1, v2, controls.")
      .def("__len__", &GraphLayout::size)
      .def_property_readonly("edges", [](const GraphLayout& g) {
        py::list out;
        for (const EdgeCurve& e : g.edges()) out.append(edge_to_dict(e));
        return out;
      })
      .def_property_readonly("nodes", [](const GraphLayout& g) {
        py::list out;
        for (const Node& n : g.nodes()) out.append(py::make_tuple(n.id, n.pos.x, n.pos.y));
        return out;
      })
      .def_property_readonly("extent", [](const GraphLayout& g) {
        const Extent& e = g.extent();
        return py::make_tuple(e.min_x, e.min_y, e.max_x, e.max_y);
      })
      .def("to_json", &layout_to_json)
      .def("save", &save_layout, py::arg("path"))
      .def("__eq__", [](const GraphLayout& a, const GraphLayout& b) { return a == b; });

  m.def("parse_layout", [](const std::string& text) { return parse_layout(text); }, py::arg("text"));
  m.def("load_layout", &load_layout, py::arg("path"));

  m.def("required_run_length", &required_run_length, py::arg("c_i"), py::arg("c_j"), py::arg("k_min"));

  m.def(
      "detect_bundles",
      [](const GraphLayout& g, double threshold, double k_min, bool brute_force, unsigned threads) -> BoolMatrix {
        return detect_bundles(g, threshold, k_min,
                              {brute_force ? DetectionMethod::kBruteForce : DetectionMethod::kGrid, threads});
      },
      py::arg("layout"), py::arg("threshold"), py::arg("k_min") = 0.4, py::arg("brute_force") = false,
      py::arg("threads") = 1u, "Directional flags for every ordered pair at an absolute threshold.");

  m.def(
      "build_weight_matrix",
      [](const GraphLayout& g, double epsilon, double t_frac, std::optional<double> t_abs, double k_min) {
        const BundleWeightMatrix w = build_weight_matrix(g, make_params(epsilon, t_frac, t_abs, k_min));
        return py::make_tuple(Matrix(w.weights()), BoolMatrix(w.flags()));
      },
      py::arg("layout"), py::arg("epsilon") = 0.001, py::arg("t_frac") = 0.03, py::arg("t_abs") = py::none(),
      py::arg("k_min") = 0.4, "Returns (weights, flags).");

  m.def("dissimilarity_matrix", &build_dissimilarity_matrix, py::arg("layout"), py::arg("threads") = 1u);

  m.def(
      "stress",
      [](const Matrix& y, const BoolMatrix& flags, double epsilon, const Matrix& d) {
        return stress(ColorEmbedding(y), BundleWeightMatrix(flags, epsilon), d);
      },
      py::arg("y"), py::arg("flags"), py::arg("epsilon"), py::arg("d"));

  m.def(
      "smacof_step",
      [](const Matrix& y, const BoolMatrix& flags, double epsilon, const Matrix& d) -> Matrix {
        return smacof_step(ColorEmbedding(y), BundleWeightMatrix(flags, epsilon), d).values();
      },
      py::arg("y"), py::arg("flags"), py::arg("epsilon"), py::arg("d"));

  m.def(
      "optimize",
      [](const BoolMatrix& flags, double epsilon, const Matrix& d, std::size_t dims, std::size_t max_iters,
         double rel_tol, std::uint64_t seed, std::optional<Matrix> start) {
        const BundleWeightMatrix w(flags, epsilon);
        const std::size_t q = start ? static_cast<std::size_t>(start->cols()) : dims;
        const OptimizerConfig cfg = make_config(q, max_iters, rel_tol, seed, "random", 1);
        const OptimizeResult r = start ? optimize(w, d, cfg, std::vector<ColorEmbedding>{ColorEmbedding(*start)})
                                       : optimize(w, d, cfg);
        py::dict out;
        out["embedding"] = Matrix(r.embedding.values());
        out["stress"] = r.stress;
        out["iterations"] = r.iterations;
        out["stress_trace"] = r.stress_trace;
        return out;
      },
      py::arg("flags"), py::arg("epsilon"), py::arg("d"), py::arg("dims") = 1, py::arg("max_iters") = 500,
      py::arg("rel_tol") = 1e-6, py::arg("seed") = 0, py::arg("start") = py::none(),
      "SMACOF from a seeded random start, or from `start` when given.");

  m.def(
      "normalize_colors",
      [](const Matrix& y, const BoolMatrix& flags) -> Matrix {
        return normalize_colors(ColorEmbedding(y), BundleWeightMatrix(flags, 0.0)).values();
      },
      py::arg("y"), py::arg("flags"));

  m.def(
      "colors_to_display", [](const Matrix& colors) { return colors_to_display(ColorTable(colors)); },
      py::arg("colors"));

  m.def("gradient_color", &gradient_color, py::arg("t"));

  m.def(
      "baseline_colors", [](const GraphLayout& g) -> Matrix { return baseline_colors(g).values(); },
      py::arg("layout"));

  m.def(
      "make_ordered_bundles",
      [](std::size_t groups, std::size_t edges, bool reverse_last, std::uint64_t seed) {
        return fixture_to_dict(make_ordered_bundles(groups, edges, reverse_last, seed));
      },
      py::arg("groups") = 6, py::arg("edges_per_bundle") = 6, py::arg("reverse_last") = false,
      py::arg("seed") = 0);

  m.def(
      "make_crossing_bundles",
      [](std::size_t bundles, std::size_t edges, std::uint64_t seed) {
        return fixture_to_dict(make_crossing_bundles(bundles, edges, seed));
      },
      py::arg("bundles") = 3, py::arg("edges_per_bundle") = 6, py::arg("seed") = 0);

  m.def(
      "run_peacock",
      [](const GraphLayout& g, double epsilon, double t_frac, std::optional<double> t_abs, double k_min,
         std::size_t dims, std::size_t max_iters, double rel_tol, std::uint64_t seed, const std::string& init,
         unsigned threads) {
        PeacockResult r = [&] {
          py::gil_scoped_release release;
          return run_peacock(g, make_params(epsilon, t_frac, t_abs, k_min),
                             make_config(dims, max_iters, rel_tol, seed, init, threads));
        }();
        py::dict out;
        out["colors"] = Matrix(r.colors.values());
        out["rgb"] = colors_to_display(r.colors);
        out["embedding"] = Matrix(r.embedding.values());
        out["weights"] = Matrix(r.weights.weights());
        out["flags"] = BoolMatrix(r.weights.flags());
        out["dissimilarities"] = r.dissimilarities;
        out["threshold"] = r.diagnostics.threshold;
        out["stress"] = r.diagnostics.final_stress;
        out["iterations"] = r.diagnostics.iterations;
        out["bundled_pairs"] = r.diagnostics.bundled_pairs;
        py::dict timings;
        for (const StageTiming& t : r.diagnostics.timings) timings[py::str(t.stage)] = t.seconds;
        out["timings"] = timings;
        return out;
      },
      py::arg("layout"), py::arg("epsilon") = 0.001, py::arg("t_frac") = 0.03, py::arg("t_abs") = py::none(),
      py::arg("k_min") = 0.4, py::arg("dims") = 1, py::arg("max_iters") = 500, py::arg("rel_tol") = 1e-6,
      py::arg("seed") = 0, py::arg("init") = "endpoint", py::arg("threads") = 1u);

  m.def(
      "fan_segments",
      [](const GraphLayout& g, const BoolMatrix& flags, double threshold, double k_min) {
        return collect_fan_segments(g, flags, threshold, k_min);
      },
      py::arg("layout"), py::arg("flags"), py::arg("threshold"), py::arg("k_min") = 0.4);

  m.def(
      "render_svg",
      [](const GraphLayout& g, const std::vector<Rgb>& rgb, std::optional<double> stroke_width, double opacity,
         bool draw_nodes, std::optional<std::vector<std::vector<std::size_t>>> fan_segments) {
        RenderOptions opts;
        opts.stroke_width = stroke_width;
        opts.opacity = opacity;
        opts.draw_nodes = draw_nodes;
        opts.fan_segments = std::move(fan_segments);
        return render_svg(g, rgb, opts);
      },
      py::arg("layout"), py::arg("rgb"), py::arg("stroke_width") = py::none(), py::arg("opacity") = 0.85,
      py::arg("draw_nodes") = true, py::arg("fan_segments") = py::none());

  m.def(
      "color_dump_json",
      [](const Matrix& colors, const std::vector<Rgb>& rgb, double stress, std::size_t iterations) {
        return color_dump_json(colors, rgb, stress, iterations);
      },
      py::arg("colors"), py::arg("rgb"), py::arg("stress"), py::arg("iterations"));
}
