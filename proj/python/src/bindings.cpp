#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "gsac/augment.hpp"
#include "gsac/error.hpp"
#include "gsac/graphs.hpp"
#include "gsac/io.hpp"
#include "gsac/placement.hpp"
#include "gsac/synthetic.hpp"
#include "gsac/training.hpp"

namespace py = pybind11;
using namespace gsac;

namespace {

const SceneObject& object_or_throw(const Scene& s, const std::string& id) {
    const SceneObject* o = s.find(id);
    if (o == nullptr) throw DataError("scene '" + s.id() + "' has no object '" + id + "'");
    return *o;
}

Vec3 to_dims(const std::array<double, 3>& d) {
    if (!(d[0] > 0 && d[1] > 0 && d[2] > 0)) throw DataError("dims must be three positive extents");
    return {d[0], d[1], d[2]};
}

py::dict object_dict(const SceneObject& o) {
    py::dict d;
    d["id"] = o.id;
    d["group"] = std::string(group_name(o.group));
    d["min"] = std::array<double, 3>{o.bbox.min().x, o.bbox.min().y, o.bbox.min().z};
    d["max"] = std::array<double, 3>{o.bbox.max().x, o.bbox.max().y, o.bbox.max().z};
    return d;
}

FurnitureGroup group_or_throw(const std::string& label) {
    const auto g = parse_group(label);
    if (!g) throw DataError("unknown furniture group '" + label + "'");
    return *g;
}

/// Heatmap as (probabilities[ny, nx] with NaN outside the floor, origin, cell size).
py::tuple map_to_python(const PlacementMap& m) {
    py::array_t<double> arr({m.ny, m.nx});
    auto view = arr.mutable_unchecked<2>();
    for (int iy = 0; iy < m.ny; ++iy) {
        for (int ix = 0; ix < m.nx; ++ix) {
            const std::size_t i = m.index(ix, iy);
            view(iy, ix) = m.mask[i] ? m.probs[i] : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return py::make_tuple(arr, py::make_tuple(m.origin.x, m.origin.y), py::make_tuple(m.cell_w, m.cell_h));
}

}  // namespace

PYBIND11_MODULE(_gsacnet, m) {
    m.doc() = "Furniture placement plausibility from scene graphs";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ComputeError>(m, "ComputeError", PyExc_RuntimeError);

    m.attr("GROUPS") = [] {
        py::list out;
        for (FurnitureGroup g : kAllGroups) out.append(std::string(group_name(g)));
        return out;
    }();

    py::class_<Scene>(m, "Scene")
        .def_static("from_json", [](const std::string& text) { return scene_from_json(text); }, py::arg("text"))
        .def_static("load", [](const std::filesystem::path& p) { return load_scene(p); }, py::arg("path"))
        .def_static(
            "rectangle",
            [](const std::string& id, double length, double width) { return make_rect_room(id, "", length, width); },
            py::arg("id"), py::arg("length"), py::arg("width"))
        .def("to_json", [](const Scene& s) { return scene_to_json(s); })
        .def("save", [](const Scene& s, const std::filesystem::path& p) { save_scene(s, p); }, py::arg("path"))
        .def_property_readonly("id", &Scene::id)
        .def_property_readonly("room_type", &Scene::room_type)
        .def_property_readonly("floor_area", &Scene::floor_area)
        .def_property_readonly("walls",
                               [](const Scene& s) {
                                   py::list out;
                                   for (const auto& w : s.walls()) {
                                       out.append(py::make_tuple(w.id, py::make_tuple(w.segment.a.x, w.segment.a.y),
                                                                 py::make_tuple(w.segment.b.x, w.segment.b.y)));
                                   }
                                   return out;
                               })
        .def_property_readonly("objects",
                               [](const Scene& s) {
                                   py::list out;
                                   for (const auto& o : s.objects()) out.append(object_dict(o));
                                   return out;
                               })
        .def(
            "with_object",
            [](const Scene& s, const std::string& id, const std::string& group, std::array<double, 3> lo,
               std::array<double, 3> hi) {
                auto objs = s.objects();
                objs.push_back({id, group_or_throw(group), BoundingBox3({lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]})});
                return s.with_objects(std::move(objs));
            },
            py::arg("id"), py::arg("group"), py::arg("min"), py::arg("max"))
        .def("without_object", [](const Scene& s, const std::string& id) { return s.without_object(id); }, py::arg("id"))
        .def("open_space_ratio", [](const Scene& s, int resolution) { return open_space_ratio(s, resolution); },
             py::arg("resolution") = 512)
        .def("__repr__", [](const Scene& s) {
            return "<Scene " + s.id() + ": " + std::to_string(s.walls().size()) + " walls, " +
                   std::to_string(s.objects().size()) + " objects>";
        });

    m.def(
        "summary_vector",
        [](const Scene& s, const std::string& object_id) {
            const auto v = summary_vector(object_or_throw(s, object_id), s, {});
            return std::vector<double>(v.begin(), v.end());
        },
        py::arg("scene"), py::arg("object_id"), "48-D summary vector of an object in its scene.");

    m.def(
        "graph_edges",
        [](const Scene& s, const std::string& object_id) {
            std::ostringstream os;
            dump_graphs(os, extract_graphs(object_or_throw(s, object_id), s, {}));
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            std::istringstream is(os.str());
            std::string rel, src, dst;
            while (is >> rel >> src >> dst) out.emplace_back(rel, src, dst);
            return out;
        },
        py::arg("scene"), py::arg("object_id"), "(relation, source, target) for every edge of the six scene graphs.");

    m.def(
        "synthetic_corpus",
        [](int rooms, std::uint64_t seed) {
            SyntheticParams p;
            p.rooms = rooms;
            p.seed = seed;
            return generate_rule_corpus(p);
        },
        py::arg("rooms") = 120, py::arg("seed") = 0);

    m.def(
        "augment",
        [](const std::vector<Scene>& scenes, int variants, bool removal, std::uint64_t seed) {
            AugmentParams p;
            p.variants_per_room = variants;
            p.removal = removal;
            p.seed = seed;
            py::gil_scoped_release release;
            return build_augmented_dataset(scenes, p).final_corpus();
        },
        py::arg("scenes"), py::arg("variants") = 20, py::arg("removal") = true, py::arg("seed") = 0);

    py::class_<GroupModel, std::shared_ptr<GroupModel>>(m, "GroupModel")
        .def_static(
            "train",
            [](const std::vector<Scene>& scenes, const std::string& group, int epochs, double l2_siamese, bool reduced,
               std::uint64_t seed) {
                TrainConfig cfg;
                cfg.epochs = epochs;
                cfg.l2_siamese = l2_siamese;
                cfg.seed = seed;
                const ModelDims dims = reduced ? ModelDims::reduced() : ModelDims{};
                py::gil_scoped_release release;
                return std::make_shared<GroupModel>(train_group(scenes, group_or_throw(group), dims, {}, cfg).model);
            },
            py::arg("scenes"), py::arg("group"), py::arg("epochs") = 100, py::arg("l2_siamese") = 1.0,
            py::arg("reduced") = true, py::arg("seed") = 0)
        .def_static(
            "load",
            [](const std::filesystem::path& dir, const std::string& group) {
                return std::make_shared<GroupModel>(load_bundle(dir, group_or_throw(group)));
            },
            py::arg("model_dir"), py::arg("group"))
        .def(
            "save", [](const GroupModel& g, const std::filesystem::path& dir, std::uint64_t seed) { save_bundle(g, dir, {seed, "", "{}"}); },
            py::arg("model_dir"), py::arg("seed") = 0)
        .def_property_readonly("group", [](const GroupModel& g) { return std::string(group_name(g.group())); })
        .def_property_readonly("support_height", &GroupModel::support_height)
        .def(
            "score",
            [](const GroupModel& g, const Scene& s, std::array<double, 3> dims, std::array<double, 2> center) {
                const SceneObject cand = make_candidate(s, g.group(), to_dims(dims), {center[0], center[1]}, g.support_height(),
                                                        g.feature_params().support_tau);
                return g.score(cand, s);
            },
            py::arg("scene"), py::arg("dims"), py::arg("center"), "Plausibility of an object centered at (x, y).")
        .def(
            "heatmap",
            [](const GroupModel& g, const Scene& s, std::array<double, 3> dims, double cell) {
                PlacementMap map;
                {
                    py::gil_scoped_release release;
                    map = probability_map(g, s, to_dims(dims), {cell, 0});
                }
                return map_to_python(map);
            },
            py::arg("scene"), py::arg("dims"), py::arg("cell_size") = 0.1,
            "(probabilities[ny, nx], origin, cell) with NaN outside the floor.")
        .def(
            "propose",
            [](const GroupModel& g, const Scene& s, std::array<double, 3> dims, int k, double cell) {
                const Vec3 d = to_dims(dims);
                PlacementMap map;
                {
                    py::gil_scoped_release release;
                    map = probability_map(g, s, d, {cell, 0});
                }
                std::vector<std::tuple<double, double, double>> out;
                for (const auto& p : top_k(map, k, default_nms_radius(d))) out.emplace_back(p.position.x, p.position.y, p.probability);
                return out;
            },
            py::arg("scene"), py::arg("dims"), py::arg("k") = 5, py::arg("cell_size") = 0.1,
            "Top-k (x, y, probability) proposals after non-maximum suppression.");
}
