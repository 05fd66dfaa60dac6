#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pfcm/error.hpp"
#include "pfcm/fuzzy.hpp"
#include "pfcm/kmeans.hpp"
#include "pfcm/normalize.hpp"
#include "pfcm/rough_kmeans.hpp"
#include "pfcm/validity.hpp"

namespace py = pybind11;
using namespace pfcm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
    if (a.ndim() != 2) throw ConfigError("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

Array to_array(const Matrix& m) {
    Array a({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), a.mutable_data());
    return a;
}

py::dict fuzzy_result(const FuzzyPartition& p) {
    py::dict d;
    d["memberships"] = to_array(p.memberships);
    d["centroids"] = to_array(p.centroids);
    d["alpha"] = p.alpha ? py::cast(*p.alpha) : py::none();
    d["objective"] = p.objective;
    d["objective_trace"] = p.objective_trace;
    d["iterations"] = p.iterations;
    d["converged"] = p.converged;
    return d;
}

FuzzyConfig fuzzy_config(std::size_t c, double m, double v, double eps, std::size_t max_iter, std::uint64_t seed) {
    FuzzyConfig cfg;
    cfg.c = c;
    cfg.m = m;
    cfg.v = v;
    cfg.eps = eps;
    cfg.max_iter = max_iter;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Penalized fuzzy c-means and companion clustering algorithms";

    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(mod, "DataError", PyExc_ValueError);
    py::register_exception<NumericalError>(mod, "NumericalError", PyExc_ArithmeticError);

    mod.def(
        "pfcm",
        [](const Array& x, std::size_t c, double m, double v, double eps, std::size_t max_iter, std::uint64_t seed) {
            return fuzzy_result(pfcm::pfcm(to_matrix(x), fuzzy_config(c, m, v, eps, max_iter, seed)));
        },
        py::arg("x"), py::arg("c"), py::arg("m") = 2.0, py::arg("v") = 1.0, py::arg("eps") = 1e-5,
        py::arg("max_iter") = 300, py::arg("seed") = 0);

    mod.def(
        "fcm",
        [](const Array& x, std::size_t c, double m, double eps, std::size_t max_iter, std::uint64_t seed) {
            return fuzzy_result(fcm(to_matrix(x), fuzzy_config(c, m, 0.0, eps, max_iter, seed)));
        },
        py::arg("x"), py::arg("c"), py::arg("m") = 2.0, py::arg("eps") = 1e-5, py::arg("max_iter") = 300,
        py::arg("seed") = 0);

    mod.def(
        "kmeans",
        [](const Array& x, std::size_t k, std::uint64_t seed, std::size_t max_iter, const std::string& init) {
            KMeansConfig cfg;
            cfg.k = k;
            cfg.seed = seed;
            cfg.max_iter = max_iter;
            cfg.init = parse_centroid_init(init);
            const auto p = kmeans(to_matrix(x), cfg);
            py::dict d;
            d["assignments"] = p.assignments;
            d["centroids"] = to_array(p.centroids);
            d["sse"] = p.sse;
            d["iterations"] = p.iterations;
            d["converged"] = p.converged;
            return d;
        },
        py::arg("x"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 300, py::arg("init") = "uniform");

    mod.def(
        "rough_kmeans",
        [](const Array& x, std::size_t k, double zeta, double w_lower, std::uint64_t seed) {
            RoughConfig cfg;
            cfg.k = k;
            cfg.zeta = zeta;
            cfg.w_lower = w_lower;
            cfg.seed = seed;
            const Matrix xm = to_matrix(x);
            const auto p = rough_kmeans(xm, cfg);
            py::dict d;
            d["lower"] = p.lower;
            d["upper"] = p.upper;
            d["centroids"] = to_array(p.centroids);
            d["memberships"] = to_array(unified_memberships(p, xm.rows()));
            d["iterations"] = p.iterations;
            d["converged"] = p.converged;
            return d;
        },
        py::arg("x"), py::arg("k"), py::arg("zeta") = 1.3, py::arg("w_lower") = 0.7, py::arg("seed") = 0);

    mod.def(
        "validity",
        [](const Array& x, const Array& u, const Array& w, double m) {
            const Matrix xm = to_matrix(x), um = to_matrix(u), wm = to_matrix(w);
            py::dict d;
            d["rmse"] = rmse(xm, um, wm, m);
            d["mae"] = mae(xm, um, wm, m);
            d["xie_beni"] = wm.rows() >= 2 ? py::cast(xie_beni(xm, um, wm)) : py::none();
            return d;
        },
        py::arg("x"), py::arg("u"), py::arg("w"), py::arg("m") = 2.0);

    mod.def(
        "zscore",
        [](const Array& x) {
            const Matrix m = to_matrix(x);
            std::vector<std::string> genes, samples;
            for (std::size_t i = 0; i < m.rows(); ++i) genes.push_back("g" + std::to_string(i));
            for (std::size_t j = 0; j < m.cols(); ++j) samples.push_back("s" + std::to_string(j));
            return to_array(normalize_zscore(ExpressionMatrix(genes, samples, m)).values());
        },
        py::arg("x"));
}
