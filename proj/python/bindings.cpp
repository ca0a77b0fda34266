#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pwe/experiment.hpp"
#include "pwe/io.hpp"

namespace py = pybind11;
using namespace pwe;
using nlohmann::json;

namespace {

using Triple = std::array<double, 3>;

Triple tup(const Vec3 &v) { return {v.x, v.y, v.z}; }
Vec3 vec(const Triple &t) { return {t[0], t[1], t[2]}; }

ExperimentConfig config_of(const std::string &config_json) { return io::config_from_json(json::parse(config_json)); }

std::vector<double> floats(std::span<const double> s) { return {s.begin(), s.end()}; }

py::dict wall_dict(const WallPlane &w) {
    py::dict d;
    d["id"] = w.id;
    d["center"] = tup(w.p0);
    d["normal"] = tup(w.n);
    d["u_axis"] = tup(w.u_axis);
    d["v_axis"] = tup(w.v_axis);
    d["u_extent"] = w.u_extent;
    d["v_extent"] = w.v_extent;
    return d;
}

py::dict ris_dict(const RisUnit &r) {
    py::dict d;
    d["id"] = r.id;
    d["wall_id"] = r.wall_id;
    d["center"] = tup(r.center);
    d["normal"] = tup(r.normal);
    d["side"] = r.side;
    return d;
}

py::dict opening_dict(const Opening &o) {
    py::dict d;
    d["wall_id"] = o.wall_id;
    d["u_min"] = o.u_min;
    d["u_max"] = o.u_max;
    d["v_min"] = o.v_min;
    d["v_max"] = o.v_max;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "RIS wavefront routing simulator core";

    py::register_exception<SceneError>(m, "SceneError");
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<stats::DegenerateData>(m, "DegenerateData", PyExc_ValueError);

    py::class_<Scene>(m, "Scene")
        .def_property_readonly("walls",
                               [](const Scene &s) {
                                   py::list out;
                                   for (const auto &w : s.walls) out.append(wall_dict(w));
                                   return out;
                               })
        .def_property_readonly("ris_units",
                               [](const Scene &s) {
                                   py::list out;
                                   for (const auto &r : s.ris_units) out.append(ris_dict(r));
                                   return out;
                               })
        .def_property_readonly("openings",
                               [](const Scene &s) {
                                   py::list out;
                                   for (const auto &o : s.openings) out.append(opening_dict(o));
                                   return out;
                               })
        .def_property_readonly("tx", [](const Scene &s) { return tup(s.tx); })
        .def_property_readonly("antennas",
                               [](const Scene &s) {
                                   std::vector<Triple> out;
                                   for (const auto &a : s.rx.antennas) out.push_back(tup(a));
                                   return out;
                               })
        .def_property_readonly("boresight", [](const Scene &s) { return tup(s.rx.boresight); });

    m.def(
        "make_scene",
        [](double d_r, int m_side, const std::string &config_json) {
            return make_two_room_scene(config_of(config_json).scene, d_r, m_side);
        },
        py::arg("d_r"), py::arg("m_side"), py::arg("config_json") = "{}");

    py::class_<PweGraph>(m, "Graph")
        .def(py::init([](const Scene &s) { return build_graph(s); }))
        .def_property_readonly("vertex_count", &PweGraph::vertex_count)
        .def_property_readonly("edge_count", &PweGraph::edge_count)
        .def("neighbors",
             [](const PweGraph &g, VertexId v) {
                 if (v >= g.vertex_count()) throw py::index_error("vertex out of range");
                 const auto n = g.neighbors(v);
                 return std::vector<VertexId>(n.begin(), n.end());
             })
        .def("tx_vertex", &PweGraph::tx_vertex)
        .def("ris_vertex", &PweGraph::ris_vertex)
        .def("antenna_vertex", &PweGraph::antenna_vertex)
        .def("shortest_path",
             [](const PweGraph &g, VertexId s, VertexId t, const std::vector<bool> &banned) {
                 if (s >= g.vertex_count() || t >= g.vertex_count()) throw py::index_error("vertex out of range");
                 auto flags = std::make_unique<bool[]>(banned.size());
                 std::copy(banned.begin(), banned.end(), flags.get());
                 return bfs_shortest_path(g, s, t, std::span<const bool>(flags.get(), banned.size()));
             },
             py::arg("source"), py::arg("target"), py::arg("banned") = std::vector<bool>{});

    m.def(
        "get_routes",
        [](const Scene &s, const PweGraph &g, const std::vector<Triple> &doas) {
            WavefrontSpec spec;
            for (const auto &d : doas) spec.doas.push_back(vec(d));
            return io::route_set_to_json(get_routes(s, g, spec)).dump();
        },
        "Routes as a JSON string.");

    m.def(
        "sample_wavefront",
        [](const Scene &s, std::uint64_t seed) {
            RngStream rng(seed);
            std::vector<Triple> out;
            for (const auto &d : sample_wavefront(s, rng).doas) out.push_back(tup(d));
            return out;
        },
        py::arg("scene"), py::arg("seed"));

    m.def("deviation_angle", [](const Triple &a, const Triple &b) { return deviation_angle(vec(a), vec(b)); });

    m.def("digamma", &stats::digamma);
    m.def("gamma_pdf", &stats::gamma_pdf);
    m.def("rayleigh_pdf", &stats::rayleigh_pdf);
    m.def("fit_gamma", [](const std::vector<double> &xs) {
        const auto f = stats::fit_gamma_mle(stats::DeviationDataset(xs));
        return py::make_tuple(f.k_hat, f.theta_hat, f.log_likelihood);
    });
    m.def("fit_rayleigh", [](const std::vector<double> &xs) {
        const auto f = stats::fit_rayleigh_mle(stats::DeviationDataset(xs));
        return py::make_tuple(f.sigma_hat, f.log_likelihood);
    });
    m.def(
        "histogram",
        [](const std::vector<double> &xs, int bins) {
            const auto h = stats::make_histogram(stats::DeviationDataset(xs), bins);
            return py::make_tuple(h.bin_edges, h.densities, h.counts);
        },
        py::arg("samples"), py::arg("bins") = stats::kDefaultBins);
    m.def(
        "kld",
        [](const std::vector<double> &xs, const std::function<double(double)> &pdf, int bins) {
            return stats::kld_empirical(stats::DeviationDataset(xs), pdf, bins);
        },
        py::arg("samples"), py::arg("pdf"), py::arg("bins") = stats::kDefaultBins);
    m.def(
        "fit_report",
        [](const std::vector<double> &xs, int bins) {
            return io::fit_report_to_json(fit_report(stats::DeviationDataset(xs), bins, 0)).dump();
        },
        py::arg("samples"), py::arg("bins") = stats::kDefaultBins, "Fit report as a JSON string.");

    m.def(
        "run_cell",
        [](const std::string &config_json, double d_r, int m_side, unsigned threads) {
            const auto config = config_of(config_json);
            std::optional<CellResult> c;
            {
                py::gil_scoped_release release;
                c.emplace(run_cell(config, d_r, m_side, threads));
            }
            return py::make_tuple(floats(c->dataset.samples()), io::fit_report_to_json(c->report).dump());
        },
        py::arg("config_json"), py::arg("d_r"), py::arg("m_side"), py::arg("threads") = 1);
    m.def(
        "run_sweep",
        [](const std::string &config_json, unsigned threads) {
            const auto config = config_of(config_json);
            std::vector<CellResult> cells;
            {
                py::gil_scoped_release release;
                cells = run_sweep(config, threads);
            }
            py::dict out;
            out["deviations.csv"] = io::deviations_csv(cells);
            out["fits.csv"] = io::fits_csv(cells);
            out["histograms.csv"] = io::histograms_csv(cells);
            return out;
        },
        py::arg("config_json") = "{}", py::arg("threads") = 1, "CSV documents keyed by file name.");
}
