#include "gmphd/errors.hpp"
#include "gmphd/hungarian.hpp"
#include "gmphd/io.hpp"
#include "gmphd/metrics.hpp"
#include "gmphd/phd_filter.hpp"
#include "gmphd/pipeline.hpp"
#include "gmphd/synth.hpp"
#include "gmphd/tracker.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace gmphd;

namespace {

TrackerConfig config_from(const py::dict& values) {
    TrackerConfig cfg = default_config();
    for (const auto& [key, value] : values) {
        const std::string text = py::isinstance<py::bool_>(value) ? (value.cast<bool>() ? "true" : "false")
                                                                   : py::str(value).cast<std::string>();
        set_config_value(cfg, py::str(key).cast<std::string>(), text);
    }
    validate(cfg);
    return cfg;
}

py::dict config_dict(const TrackerConfig& cfg) {
    py::dict out;
    for (const auto& [key, value] : config_to_pairs(cfg)) out[py::str(key)] = value;
    return out;
}

py::dict report_dict(const EvalReport& r) {
    py::dict d;
    d["mota"] = r.mota;
    d["motp"] = r.motp;
    d["idf1"] = r.idf1;
    d["idp"] = r.idp;
    d["idr"] = r.idr;
    d["fp"] = r.fp;
    d["fn"] = r.fn;
    d["idsw"] = r.idsw;
    d["frag"] = r.frag;
    d["mt"] = r.mt;
    d["ml"] = r.ml;
    d["faf"] = r.faf;
    d["gt_boxes"] = r.gt_boxes;
    d["hyp_boxes"] = r.hyp_boxes;
    d["gt_tracks"] = r.gt_tracks;
    return d;
}

/// Stateful tracker fed one frame of top-left boxes at a time.
class PyTracker {
public:
    explicit PyTracker(const py::dict& config) : cfg_(config_from(config)), tracker_(cfg_) {}

    py::list step(const Eigen::MatrixXd& boxes, const Eigen::VectorXd& scores,
                  const std::optional<Eigen::MatrixXf>& features, double width, double height) {
        if (boxes.rows() > 0 && boxes.cols() != 4) throw InputError("boxes must have shape (N, 4)");
        if (scores.size() != boxes.rows()) throw InputError("scores must have one entry per box");
        if (features && features->rows() != boxes.rows()) throw InputError("features must have one row per box");
        std::vector<Detection> dets;
        for (Eigen::Index i = 0; i < boxes.rows(); ++i) {
            Detection d;
            d.box = Box::from_top_left({boxes(i, 0), boxes(i, 1), boxes(i, 2), boxes(i, 3)});
            d.score = scores(i);
            if (features) d.feature = AppearanceFeature(features->row(i).transpose()).normalized();
            dets.push_back(std::move(d));
        }
        ++frame_;
        const FrameResult res = tracker_.step(preprocess(dets, cfg_), {frame_, width, height});
        py::list out;
        for (const auto& t : res.tracks) {
            const TopLeftBox b = t.box.to_top_left();
            out.append(py::make_tuple(t.id, b.left, b.top, b.width, b.height, t.origin == Origin::predicted));
        }
        return out;
    }

    int frame() const { return frame_; }
    std::size_t component_count() const { return tracker_.filter().posterior().size(); }
    double mass() const { return tracker_.filter().posterior().mass(); }

private:
    TrackerConfig cfg_;
    Tracker tracker_;
    int frame_ = 0;
};

void check_exit(int code, const std::ostringstream& err) {
    if (code == exit_numerical) throw NumericalError(err.str());
    if (code != exit_ok) throw InputError(err.str());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "GM-PHD multi-object tracker with appearance-augmented likelihood and re-identification.";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("config_keys", &config_keys);
    m.def("default_config", [] { return config_dict(default_config()); });
    m.def("resolve_config", [](const py::dict& values) { return config_dict(config_from(values)); },
          py::arg("values"));

    m.def("appearance_likelihood", &appearance_likelihood_from_similarity, py::arg("cosine"));
    m.def("solve_min_cost", &solve_min_cost, py::arg("cost"),
          "Row-to-column assignment minimizing total cost; -1 marks an unassigned row.");

    py::class_<PyTracker>(m, "Tracker")
        .def(py::init<const py::dict&>(), py::arg("config") = py::dict())
        .def("step", &PyTracker::step, py::arg("boxes"), py::arg("scores"), py::arg("features") = std::nullopt,
             py::arg("width") = 1920.0, py::arg("height") = 1080.0,
             "Boxes are (left, top, width, height). Returns (id, left, top, width, height, predicted) tuples.")
        .def_property_readonly("frame", &PyTracker::frame)
        .def_property_readonly("component_count", &PyTracker::component_count)
        .def_property_readonly("mass", &PyTracker::mass);

    m.def(
        "track",
        [](const std::string& det, const std::string& seqinfo, const std::string& out, const std::string& config,
           const std::string& provider, const std::string& features, const std::string& frames_dir,
           std::optional<std::uint64_t> seed) {
            TrackOptions opt;
            opt.det_path = det;
            opt.seqinfo_path = seqinfo;
            opt.out_path = out;
            opt.config_path = config;
            opt.provider = provider;
            opt.feature_path = features;
            opt.frames_dir = frames_dir;
            opt.seed = seed;
            std::ostringstream msg, err;
            check_exit(cmd_track(opt, msg, err), err);
            return msg.str();
        },
        py::arg("det"), py::arg("seqinfo"), py::arg("out"), py::arg("config") = "", py::arg("provider") = "null",
        py::arg("features") = "", py::arg("frames_dir") = "", py::arg("seed") = std::nullopt);

    m.def(
        "synthesize",
        [](const std::string& scenario_json, const std::string& out_dir, bool render_frames) {
            const synth::Scenario s = synth::parse_scenario(scenario_json);
            synth::write_scenario(out_dir, s, synth::generate(s), render_frames);
        },
        py::arg("scenario_json"), py::arg("out_dir"), py::arg("render_frames") = false);

    m.def(
        "evaluate",
        [](const std::string& gt_path, const std::string& results_path) {
            const GroundTruth gt = read_ground_truth(gt_path);
            return report_dict(evaluate(gt, read_results(results_path, gt.frame_count())));
        },
        py::arg("gt"), py::arg("results"));

    m.def(
        "ablate",
        [](const std::string& scenario_json, const std::vector<int>& tp_values, const py::dict& config) {
            const synth::Generated g = synth::generate(synth::parse_scenario(scenario_json));
            py::list rows;
            for (const auto& r : run_ablation(g, config_from(config), tp_values)) {
                py::dict d = report_dict(r.report);
                d["row"] = r.label;
                d["appearance"] = r.appearance;
                d["reid"] = r.reid;
                d["t_ts"] = r.t_ts;
                rows.append(d);
            }
            return rows;
        },
        py::arg("scenario_json"), py::arg("tp_values") = std::vector<int>{0, 2, 3, 4, 5, 7, 10},
        py::arg("config") = py::dict());
}
