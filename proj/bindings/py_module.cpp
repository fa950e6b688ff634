#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "punfold/decimate.hpp"
#include "punfold/mesh_io.hpp"
#include "punfold/metrics.hpp"
#include "punfold/pipeline.hpp"
#include "punfold/svg.hpp"
#include "punfold/tabu.hpp"

namespace py = pybind11;
using namespace punfold;

namespace {

CollapseStrategy strategy_from_name(const std::string& name) {
  if (name == "q/q") return kStrategyQQ;
  if (name == "se/mp") return kStrategySEMP;
  if (name == "se/q") return kStrategySEQ;
  throw std::invalid_argument("unknown strategy: " + name);
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["status"] = to_string(m.status);
  d["coverage_percent"] = m.coverage_percent;
  d["aspect_ratio"] = m.aspect_ratio;
  d["hausdorff_percent"] =
      m.hausdorff_percent ? py::cast(*m.hausdorff_percent) : py::none();
  d["wall_seconds"] = m.wall_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mesh unfolding: edge-collapse simplification, tabu overlap "
            "resolution, progressive restoration.";

  py::register_exception<MeshError>(m, "MeshError");

  py::class_<HalfEdgeMesh>(m, "Mesh")
      .def("vertex_count", &HalfEdgeMesh::vertex_count)
      .def("edge_count", &HalfEdgeMesh::edge_count)
      .def("face_count", &HalfEdgeMesh::face_count)
      .def("boundary_edge_count", &HalfEdgeMesh::boundary_edge_count)
      .def("is_closed", &HalfEdgeMesh::is_closed)
      .def("bbox_diagonal", &HalfEdgeMesh::bbox_diagonal)
      .def("average_dual_valence", &HalfEdgeMesh::average_dual_valence)
      .def("validate",
           [](const HalfEdgeMesh& mesh) {
             MeshValidationReport r = mesh.validate();
             py::dict d;
             d["manifold"] = r.is_manifold;
             d["orientable"] = r.is_orientable;
             d["triangular"] = r.is_triangular;
             d["components"] = r.component_count;
             d["boundary_edges"] = r.boundary_edge_count;
             d["genus"] = r.genus_known ? py::cast(r.genus) : py::none();
             return d;
           })
      .def("vertices",
           [](const HalfEdgeMesh& mesh) {
             std::vector<std::tuple<double, double, double>> out;
             for (VertexId v : mesh.alive_vertex_ids()) {
               const Vec3& p = mesh.position(v);
               out.emplace_back(p.x, p.y, p.z);
             }
             return out;
           })
      .def("faces",
           [](const HalfEdgeMesh& mesh) {
             std::vector<std::array<int, 3>> out;
             for (FaceId f : mesh.alive_face_ids()) {
               auto vs = mesh.face_vertices(f);
               out.push_back({vs[0], vs[1], vs[2]});
             }
             return out;
           })
      .def("__eq__", [](const HalfEdgeMesh& a,
                        const HalfEdgeMesh& b) { return a == b; })
      .def("__repr__", [](const HalfEdgeMesh& mesh) {
        std::ostringstream s;
        s << "<punfold.Mesh V=" << mesh.vertex_count()
          << " E=" << mesh.edge_count() << " F=" << mesh.face_count() << ">";
        return s.str();
      });

  py::class_<UnfoldOutcome>(m, "Outcome")
      .def_property_readonly(
          "status", [](const UnfoldOutcome& o) { return to_string(o.status); })
      .def_readonly("mesh", &UnfoldOutcome::mesh)
      .def_readonly("remaining_uncollapses",
                    &UnfoldOutcome::remaining_uncollapses)
      .def_property_readonly(
          "metrics", [](const UnfoldOutcome& o) { return metrics_dict(o.metrics); })
      .def("triangles",
           [](const UnfoldOutcome& o) {
             std::vector<std::vector<std::pair<double, double>>> out;
             for (std::size_t f = 0; f < o.layout.tri.size(); ++f) {
               if (!o.layout.is_placed(static_cast<FaceId>(f))) continue;
               std::vector<std::pair<double, double>> t;
               for (const Vec2& p : o.layout.tri[f]) t.emplace_back(p.x, p.y);
               out.push_back(std::move(t));
             }
             return out;
           },
           "Placed net triangles as lists of (x, y) corners.")
      .def(
          "svg",
          [](const UnfoldOutcome& o, double scale) {
            if (o.status == UnfoldStatus::Failed)
              throw std::runtime_error("failed outcome has no net");
            std::ostringstream s;
            write_svg(s, o.mesh, o.tree, o.layout, scale);
            return s.str();
          },
          py::arg("scale") = 10.0)
      .def("__repr__", [](const UnfoldOutcome& o) {
        std::ostringstream s;
        s << "<punfold.Outcome " << to_string(o.status)
          << " F=" << o.mesh.face_count() << ">";
        return s.str();
      });

  m.def("load", &load_mesh_file, py::arg("path"),
        "Load an .obj/.off/.stl mesh.");
  m.def("save_obj", &save_obj_file, py::arg("mesh"), py::arg("path"));
  m.def("target_face_count", &target_face_count, py::arg("input_faces"),
        py::arg("genus"));
  m.def("tabu_capacity", &tabu_capacity, py::arg("face_count"),
        py::arg("avg_valence"));
  m.def(
      "decimate",
      [](const HalfEdgeMesh& mesh, int target, const std::string& strategy,
         std::uint64_t seed) {
        HalfEdgeMesh copy = mesh;
        Rng rng(Rng::mix(seed, rng_stream::kDecimate));
        auto records =
            decimate_to(copy, target, strategy_from_name(strategy), rng);
        return py::make_tuple(copy, records.size());
      },
      py::arg("mesh"), py::arg("target"), py::arg("strategy") = "q/q",
      py::arg("seed") = 0,
      "Collapse down to `target` faces; returns (mesh, collapse_count).");
  m.def(
      "unfold",
      [](const HalfEdgeMesh& mesh, const std::string& strategy, bool direct,
         std::uint64_t seed, int target_faces, double budget_factor,
         double step_budget, bool allow_boundary) {
        PipelineConfig config;
        config.target_faces = target_faces;
        config.initial_budget_factor = budget_factor;
        config.step_budget_factor = step_budget;
        config.allow_boundary = allow_boundary;
        Rng rng(seed);
        return direct ? direct_unfold(mesh, config, rng)
                      : progressive_unfold(mesh, strategy_from_name(strategy),
                                           config, rng);
      },
      py::arg("mesh"), py::arg("strategy") = "q/q", py::arg("direct") = false,
      py::arg("seed") = 0, py::arg("target_faces") = 0,
      py::arg("budget_factor") = 100.0, py::arg("step_budget") = 20.0,
      py::arg("allow_boundary") = false,
      "Unfold into a single overlap-free net (progressive by default).");
  m.def("hausdorff", &hausdorff_relative, py::arg("original"),
        py::arg("approx"), py::arg("density") = 10.0,
        "Symmetric sampled Hausdorff distance, percent of bbox diagonal.");
}
