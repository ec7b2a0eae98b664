#include "ccm/engine.hpp"
#include "ccm/error.hpp"
#include "ccm/xmap.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ccm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) {
        throw Error(Errc::InvalidArgument, "expected a one-dimensional array");
    }
    return {a.data(), a.data() + a.size()};
}

Array to_array(std::span<const double> values) {
    Array out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

std::vector<Direction> parse_directions(const std::string& token) {
    if (token == "both") {
        return {Direction::XFromMY, Direction::YFromMX};
    }
    return {parse_direction(token)};
}

// Records come back column-wise so they drop straight into a DataFrame.
py::dict records_to_columns(const std::vector<SkillRecord>& records) {
    const auto n = static_cast<py::ssize_t>(records.size());
    py::list direction;
    py::array_t<int> E(n);
    py::array_t<int> tau(n);
    py::array_t<std::size_t> L(n);
    py::array_t<std::size_t> replicate(n);
    py::array_t<double> rho(n);
    py::array_t<bool> degenerate(n);
    for (py::ssize_t i = 0; i < n; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        direction.append(std::string(to_string(r.direction)));
        E.mutable_at(i) = r.E;
        tau.mutable_at(i) = r.tau;
        L.mutable_at(i) = r.L;
        replicate.mutable_at(i) = r.replicate;
        rho.mutable_at(i) = r.rho;
        degenerate.mutable_at(i) = r.degenerate;
    }
    py::dict out;
    out["direction"] = direction;
    out["E"] = E;
    out["tau"] = tau;
    out["L"] = L;
    out["replicate"] = replicate;
    out["rho"] = rho;
    out["degenerate"] = degenerate;
    return out;
}

py::dict metrics_to_dict(const RunMetrics& m) {
    py::dict out;
    out["table_build_seconds"] = m.table_build_seconds;
    out["sweep_seconds"] = m.sweep_seconds;
    out["task_count"] = m.task_count;
    out["table_builds"] = m.table_builds;
    out["peak_table_entries"] = m.peak_table_entries;
    out["workers"] = m.workers;
    out["completion_order"] = m.completion_order;
    return out;
}

}  // namespace

PYBIND11_MODULE(_pyccm, m) {
    m.doc() = "Convergent cross mapping over parameter grids";

    static py::exception<Error> ccm_error(m, "CcmError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object code = py::str(to_string(e.code()));
            ccm_error.attr("code") = code;
            py::set_error(ccm_error, e.what());
        }
    });

    m.def(
        "embed",
        [](const Array& values, int E, int tau) {
            const auto series = validate_series(to_vector(values), "series");
            const auto manifold = embed(series, {E, tau});
            py::array_t<double> points({static_cast<py::ssize_t>(manifold.size()),
                                        static_cast<py::ssize_t>(manifold.dim())});
            std::copy(manifold.coordinates().begin(), manifold.coordinates().end(),
                      points.mutable_data());
            return points;
        },
        py::arg("values"), py::arg("E"), py::arg("tau") = 1,
        "Delay-embedding points (x_t, x_{t-tau}, ...) as an (M, E) array.");

    m.def(
        "simplex_weights",
        [](const Array& distances) { return to_array(simplex_weights(to_vector(distances))); },
        py::arg("distances"));

    m.def(
        "pearson",
        [](const Array& a, const Array& b) {
            const auto r = pearson(to_vector(a), to_vector(b));
            return py::make_tuple(r.rho, r.degenerate);
        },
        py::arg("a"), py::arg("b"), "Returns (rho, degenerate).");

    m.def(
        "coupled_logistic",
        [](std::size_t n, double beta_xy, double beta_yx, std::uint64_t seed) {
            const auto [x, y] = generate_coupled_logistic(n, beta_xy, beta_yx, seed);
            return py::make_tuple(to_array(x.values()), to_array(y.values()));
        },
        py::arg("n"), py::arg("beta_xy"), py::arg("beta_yx") = 0.0, py::arg("seed") = 42);

    m.def(
        "run_sweep",
        [](const Array& x, const Array& y, std::vector<std::size_t> L, std::vector<int> E,
           std::vector<int> tau, std::size_t r, std::uint64_t seed, const std::string& mode,
           std::size_t workers, std::size_t pipelines_in_flight, const std::string& directions) {
            const auto sx = validate_series(to_vector(x), "X");
            const auto sy = validate_series(to_vector(y), "Y");
            SweepConfig c;
            c.library_sizes = std::move(L);
            c.embedding_dims = std::move(E);
            c.delays = std::move(tau);
            c.replicates = r;
            c.seed = seed;
            c.directions = parse_directions(directions);
            c.mode = {parse_strategy(mode), workers, pipelines_in_flight};
            SweepResult result;
            {
                py::gil_scoped_release release;
                result = run_sweep(sx, sy, c);
            }
            return py::make_tuple(records_to_columns(result.records),
                                  metrics_to_dict(result.metrics));
        },
        py::arg("x"), py::arg("y"), py::arg("L"), py::arg("E") = std::vector<int>{1, 2, 4},
        py::arg("tau") = std::vector<int>{1, 2, 4}, py::arg("r") = 100, py::arg("seed") = 42,
        py::arg("mode") = "indexed-async", py::arg("workers") = 1,
        py::arg("pipelines_in_flight") = 2, py::arg("directions") = "both",
        "Returns (records, metrics); records is a dict of equal-length columns.");

    m.def(
        "summarize",
        [](const py::dict& columns, double min_delta) {
            const auto direction = columns["direction"].cast<std::vector<std::string>>();
            const auto E = columns["E"].cast<std::vector<int>>();
            const auto tau = columns["tau"].cast<std::vector<int>>();
            const auto L = columns["L"].cast<std::vector<std::size_t>>();
            const auto rep = columns["replicate"].cast<std::vector<std::size_t>>();
            const auto rho = columns["rho"].cast<std::vector<double>>();
            std::vector<SkillRecord> records(direction.size());
            for (std::size_t i = 0; i < records.size(); ++i) {
                records[i] = {parse_direction(direction[i]), E[i], tau[i], L[i], rep[i], rho[i], false};
            }
            py::list cells;
            for (const auto& cell : summarize_convergence(records, min_delta).cells) {
                py::list levels;
                for (const auto& l : cell.levels) {
                    levels.append(py::dict(py::arg("L") = l.L, py::arg("n") = l.count,
                                           py::arg("mean") = l.mean, py::arg("sd") = l.sd));
                }
                cells.append(py::dict(py::arg("direction") = std::string(to_string(cell.direction)),
                                      py::arg("E") = cell.E, py::arg("tau") = cell.tau,
                                      py::arg("levels") = levels,
                                      py::arg("delta_rho") = cell.delta_rho,
                                      py::arg("converged") = cell.converged));
            }
            return cells;
        },
        py::arg("records"), py::arg("min_delta") = 0.1);
}
