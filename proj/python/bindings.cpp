#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

#include "greedyicl/errors.hpp"
#include "greedyicl/icl.hpp"
#include "greedyicl/initializer.hpp"
#include "greedyicl/io.hpp"
#include "greedyicl/metrics.hpp"
#include "greedyicl/optimizer.hpp"
#include "greedyicl/simulator.hpp"

namespace py = pybind11;
using namespace greedyicl;

namespace {

using Edge = std::tuple<int, int, int>;

DynamicNetwork make_network(const std::vector<Edge>& edges, int num_nodes, int num_times, bool directed) {
  std::vector<EdgeRow> rows;
  rows.reserve(edges.size());
  for (const auto& [t, i, j] : edges) rows.push_back({t, i, j});
  return DynamicNetwork(rows, num_nodes, num_times, directed);
}

std::vector<Edge> edges_of(const DynamicNetwork& net) {
  std::vector<Edge> out;
  for (const auto& e : net.edge_list()) out.emplace_back(e.t, e.i, e.j);
  return out;
}

Partition make_partition(const std::vector<std::vector<int>>& frames, std::optional<int> capacity) {
  const int t = static_cast<int>(frames.size());
  const int n = t ? static_cast<int>(frames[0].size()) : 0;
  std::vector<int> labels;
  int max_label = -1;
  for (const auto& row : frames) {
    if (static_cast<int>(row.size()) != n) throw DataError("every frame needs the same number of nodes");
    for (int g : row) max_label = std::max(max_label, g);
    labels.insert(labels.end(), row.begin(), row.end());
  }
  return Partition(std::move(labels), t, n, capacity.value_or(max_label + 1));
}

std::vector<std::vector<int>> frames_of(const Partition& p) {
  std::vector<std::vector<int>> out;
  for (int t = 0; t < p.num_times(); ++t) out.emplace_back(p.frame(t).begin(), p.frame(t).end());
  return out;
}

py::dict run_dict(const RunRecord& r) {
  py::dict d;
  d["strategy"] = r.strategy;
  d["restart"] = r.restart;
  d["seed"] = r.seed;
  d["capacity"] = r.capacity;
  d["icl"] = r.icl;
  d["num_groups"] = r.num_groups;
  d["sweeps"] = r.sweeps;
  d["moves_accepted"] = r.moves_accepted;
  d["merges"] = r.merges;
  d["hit_sweep_cap"] = r.hit_sweep_cap;
  d["seconds"] = r.seconds;
  d["trace"] = r.trace;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Greedy exact-ICL clustering of dynamic networks under a Markovian stochastic block model.";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Hyperparameters>(m, "Hyperparameters")
      .def(py::init([](double a, double b, double delta) {
             Hyperparameters h{a, b, delta};
             h.validate();
             return h;
           }),
           py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("delta") = 1.0)
      .def_readonly("a", &Hyperparameters::a)
      .def_readonly("b", &Hyperparameters::b)
      .def_readonly("delta", &Hyperparameters::delta)
      .def("__repr__", [](const Hyperparameters& h) {
        return "Hyperparameters(a=" + format_real(h.a) + ", b=" + format_real(h.b) + ", delta=" +
               format_real(h.delta) + ")";
      });

  py::class_<DynamicNetwork>(m, "DynamicNetwork")
      .def(py::init(&make_network), py::arg("edges"), py::arg("num_nodes"), py::arg("num_times"),
           py::arg("directed") = false, "Edges are (t, i, j) triples with 0-based indices.")
      .def_property_readonly("num_nodes", &DynamicNetwork::num_nodes)
      .def_property_readonly("num_times", &DynamicNetwork::num_times)
      .def_property_readonly("directed", &DynamicNetwork::directed)
      .def_property_readonly("total_edges", &DynamicNetwork::total_edges)
      .def("has_edge", &DynamicNetwork::has_edge, py::arg("t"), py::arg("i"), py::arg("j"))
      .def("edges", &edges_of);

  py::class_<Partition>(m, "Partition")
      .def(py::init(&make_partition), py::arg("labels"), py::arg("capacity") = py::none(),
           "labels[t][i] is the group of node i at frame t.")
      .def_property_readonly("num_nodes", &Partition::num_nodes)
      .def_property_readonly("num_times", &Partition::num_times)
      .def_property_readonly("capacity", &Partition::capacity)
      .def_property_readonly("num_nonempty", &Partition::num_nonempty)
      .def("labels", &frames_of)
      .def("__getitem__", [](const Partition& p, std::pair<int, int> ti) {
        if (ti.first < 0 || ti.first >= p.num_times() || ti.second < 0 || ti.second >= p.num_nodes())
          throw py::index_error("(t, node) out of range");
        return p(ti.first, ti.second);
      })
      .def("__eq__", [](const Partition& a, const Partition& b) { return a == b; })
      .def("compact", &compact_labels);

  py::class_<IclValue>(m, "IclValue")
      .def_readonly("log_lik", &IclValue::log_lik)
      .def_readonly("log_prior", &IclValue::log_prior)
      .def_readonly("total", &IclValue::total)
      .def_readonly("stranded", &IclValue::stranded)
      .def_property_readonly("feasible", &IclValue::feasible)
      .def("__repr__", [](const IclValue& v) { return "IclValue(total=" + format_real(v.total) + ")"; });

  m.def("icl", &icl, py::arg("network"), py::arg("partition"), py::arg("hyper") = Hyperparameters{});
  m.def(
      "delta_move",
      [](const DynamicNetwork& net, const Partition& p, int t, int i, int g, const Hyperparameters& h) {
        return delta_move(build_stats(net, p), net, p, t, i, g, h);
      },
      py::arg("network"), py::arg("partition"), py::arg("t"), py::arg("node"), py::arg("group"),
      py::arg("hyper") = Hyperparameters{});

  m.def(
      "simulate",
      [](int nodes, int times, int groups, double pi, double theta0, double eps0, double perturb, bool directed,
         std::uint64_t seed) {
        SimConfig cfg{nodes, times, groups, pi, theta0, eps0, perturb, directed, seed};
        auto out = simulate(cfg);
        py::dict d;
        d["network"] = std::move(out.network);
        d["truth"] = std::move(out.truth);
        d["theta_real"] = out.theta_real;
        d["pi_matrix"] = out.pi_matrix;
        return d;
      },
      py::arg("nodes") = 50, py::arg("times") = 4, py::arg("groups") = 4, py::arg("pi") = 0.9,
      py::arg("theta0") = 0.9, py::arg("eps0") = 0.1, py::arg("perturb") = 0.1, py::arg("directed") = false,
      py::arg("seed") = 0);

  m.def(
      "fit",
      [](const DynamicNetwork& net, const std::vector<std::string>& init, int restarts, std::optional<int> kup,
         std::uint64_t seed, const Hyperparameters& hyper, int max_sweeps) {
        FitOptions opts;
        opts.strategies = parse_strategies(init);
        opts.restarts = restarts;
        opts.capacity = kup;
        opts.seed = seed;
        opts.greedy.max_sweeps = max_sweeps;
        FitReport report;
        {
          py::gil_scoped_release release;
          report = fit(net, hyper, opts);
        }
        py::dict d;
        d["partition"] = report.best.partition;
        d["icl"] = report.best.icl;
        d["best_run"] = report.best_run;
        py::list runs;
        for (const auto& r : report.runs) runs.append(run_dict(r));
        d["runs"] = runs;
        return d;
      },
      py::arg("network"), py::arg("init") = std::vector<std::string>{"all"}, py::arg("restarts") = 1,
      py::arg("kup") = py::none(), py::arg("seed") = 0, py::arg("hyper") = Hyperparameters{},
      py::arg("max_sweeps") = 200);

  m.def(
      "refine",
      [](const DynamicNetwork& net, const Partition& init, std::uint64_t seed, const Hyperparameters& hyper) {
        const FitResult r = refine(net, init, hyper, seed);
        py::dict d;
        d["partition"] = r.partition;
        d["icl"] = r.icl;
        d["sweeps"] = r.sweeps;
        d["merges"] = r.merges;
        d["trace"] = r.trace;
        return d;
      },
      py::arg("network"), py::arg("init"), py::arg("seed") = 0, py::arg("hyper") = Hyperparameters{});

  m.def(
      "initialize",
      [](const DynamicNetwork& net, const std::string& strategy, std::uint64_t seed, std::optional<int> groups) {
        InitConfig cfg;
        cfg.strategy = parse_strategy(strategy);
        cfg.seed = seed;
        cfg.groups = groups;
        return initialize(net, cfg);
      },
      py::arg("network"), py::arg("strategy"), py::arg("seed") = 0, py::arg("groups") = py::none());

  m.def(
      "kmeans",
      [](const std::vector<std::vector<double>>& points, int k, std::uint64_t seed, int max_iter) {
        const int n = static_cast<int>(points.size());
        const int d = n ? static_cast<int>(points[0].size()) : 0;
        std::vector<double> flat;
        for (const auto& row : points) {
          if (static_cast<int>(row.size()) != d) throw DataError("points must all have the same dimension");
          flat.insert(flat.end(), row.begin(), row.end());
        }
        return kmeans(flat, n, d, k, seed, max_iter);
      },
      py::arg("points"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 100);

  m.def("nmi", [](const Partition& a, const Partition& b) { return nmi(a, b); }, py::arg("a"), py::arg("b"));
  m.def("nmi", [](const std::vector<int>& a, const std::vector<int>& b) { return nmi(a, b); }, py::arg("a"),
        py::arg("b"));

  m.def(
      "summarize",
      [](const DynamicNetwork& net, const Partition& p, const Hyperparameters& hyper, std::int64_t min_pairs) {
        const auto r = summarize(net, p, hyper, min_pairs);
        py::dict d;
        d["nonempty_per_frame"] = r.nonempty_per_frame;
        d["group_sizes"] = r.group_sizes;
        d["avg_out_degree"] = r.avg_out_degree;
        d["avg_in_degree"] = r.avg_in_degree;
        d["transition_means"] = r.transition_means;
        d["connection_means"] = r.connection_means;
        d["icl"] = r.icl;
        return d;
      },
      py::arg("network"), py::arg("partition"), py::arg("hyper") = Hyperparameters{}, py::arg("min_pairs") = 0);

  m.def(
      "read_edge_list",
      [](const std::string& path, bool directed, bool one_based, std::optional<int> nodes, std::optional<int> times) {
        return read_edge_list(path, EdgeListOptions{one_based, directed, nodes, times});
      },
      py::arg("path"), py::arg("directed") = false, py::arg("one_based") = false, py::arg("num_nodes") = py::none(),
      py::arg("num_times") = py::none());
  m.def("write_edge_list", &write_edge_list, py::arg("path"), py::arg("network"), py::arg("one_based") = false);
  m.def("read_partition", &read_partition, py::arg("path"), py::arg("num_times") = py::none(),
        py::arg("num_nodes") = py::none());
  m.def("write_partition", &write_partition, py::arg("path"), py::arg("partition"));
}
