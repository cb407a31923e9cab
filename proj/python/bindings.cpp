// SPDX-License-Identifier: Apache-2.0
#include <helm/band_lu.hpp>
#include <helm/datagen.hpp>
#include <helm/deeponet.hpp>
#include <helm/grf.hpp>
#include <helm/helmholtz.hpp>
#include <helm/problem_config.hpp>
#include <helm/runner.hpp>
#include <helm/scatterer.hpp>
#include <helm/tensor_container.hpp>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>

namespace py = pybind11;
using namespace helm;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

template <typename T>
std::vector<T> from_array(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  return std::vector<T>(a.data(), a.data() + a.size());
}

nlohmann::json parse(const std::string& s) { return s.empty() ? nlohmann::json(nullptr) : nlohmann::json::parse(s); }

py::dict report_dict(const ConvergenceReport& r) {
  return py::module_::import("json").attr("loads")(to_json(r).dump());
}

py::array tensor_array(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape.begin(), t.shape.end());
  auto vals = t.to_f64();
  if (t.dtype == DType::f32) {
    py::array_t<float> a(shape);
    std::transform(vals.begin(), vals.end(), a.mutable_data(), [](double v) { return static_cast<float>(v); });
    return a;
  }
  py::array_t<double> a(shape);
  std::copy(vals.begin(), vals.end(), a.mutable_data());
  return a;
}

std::shared_ptr<const DeepOnetWeights> maybe_weights(const std::filesystem::path& path) {
  if (path.empty()) return nullptr;
  return std::make_shared<DeepOnetWeights>(load_weights(path));
}

}  // namespace

PYBIND11_MODULE(_helmsolve, m) {
  m.doc() = "Helmholtz solvers, preconditioners and data I/O";

  // translators run newest first, so the base class goes in before its subclasses
  py::register_exception<Error>(m, "HelmError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

  py::class_<AssembledSystem>(m, "System")
      .def_property_readonly("dim", [](const AssembledSystem& s) { return s.grid.dim(); })
      .def_property_readonly("m", [](const AssembledSystem& s) { return s.grid.nodes_per_axis(); })
      .def_property_readonly("n", &AssembledSystem::size)
      .def_property_readonly("rhs", [](const AssembledSystem& s) { return to_array(s.rhs); })
      .def_property_readonly("k", [](const AssembledSystem& s) { return to_array(s.k); })
      .def_property_readonly("dirichlet_rows", [](const AssembledSystem& s) { return to_array(s.dirichlet_rows); })
      .def_property_readonly("coords", [](const AssembledSystem& s) { return to_array(node_coordinates(s.grid)); })
      .def(
          "csr",
          [](const AssembledSystem& s) {
            auto ro = s.a.row_offsets();
            auto ci = s.a.col_indices();
            auto v = s.a.values();
            return py::make_tuple(to_array(std::vector<Index>(ro.begin(), ro.end())),
                                  to_array(std::vector<Index>(ci.begin(), ci.end())),
                                  to_array(std::vector<Complex>(v.begin(), v.end())));
          },
          "(indptr, indices, data) of the system matrix")
      .def(
          "matvec",
          [](const AssembledSystem& s, py::array_t<Complex, py::array::c_style | py::array::forcecast> x) {
            return to_array(s.a.matvec(from_array<Complex>(x)));
          })
      .def(
          "residual",
          [](const AssembledSystem& s, py::array_t<Complex, py::array::c_style | py::array::forcecast> u) {
            return to_array(residual(s, from_array<Complex>(u)));
          });

  m.def("_default_problem_json", [](int dim, Index mm, std::uint64_t seed) { return default_problem_json(dim, mm, seed).dump(); },
        py::arg("dim"), py::arg("m"), py::arg("seed") = 1);
  m.def("_assemble", [](const std::string& j) { return assemble(problem_from_json(parse(j))); }, py::arg("problem_json"));

  m.def(
      "direct_solve",
      [](const AssembledSystem& s) {
        py::gil_scoped_release release;
        auto u = BandLuFactorization::factor(s.a).solve(s.rhs);
        py::gil_scoped_acquire acquire;
        return to_array(u);
      },
      py::arg("system"), "Band LU solve of the assembled system.");

  m.def(
      "_solve",
      [](const AssembledSystem& s, const std::string& solver, const std::string& precond, Real tol, Index max_iters,
         Index restart, bool flexible, const std::string& weights, Index tb_size, Index nr, std::optional<Real> omega,
         std::optional<py::array_t<Complex, py::array::c_style | py::array::forcecast>> reference) {
        RunSpec spec;
        spec.solver = solver;
        spec.precond = precond;
        spec.control.tol = tol;
        spec.control.max_iters = max_iters;
        spec.control.restart = restart;
        spec.control.flexible = flexible;
        spec.tb_size = tb_size;
        spec.nr = nr;
        spec.omega = omega;
        auto w = maybe_weights(weights);
        ComplexVector ref;
        if (reference) ref = from_array<Complex>(*reference);
        SolveResult res;
        {
          py::gil_scoped_release release;
          res = run_config(s, spec, w, ref);
        }
        return py::make_tuple(to_array(res.u), report_dict(res.report));
      },
      py::arg("system"), py::arg("solver"), py::arg("precond"), py::arg("tol"), py::arg("max_iters"), py::arg("restart"),
      py::arg("flexible"), py::arg("weights"), py::arg("tb_size"), py::arg("nr"), py::arg("omega"), py::arg("reference"));

  m.def(
      "sample_grf",
      [](int dim, Index mm, Real mean, Real s, Real l, std::uint64_t seed, Index count) {
        GrfSpec spec{make_grid(dim, mm), mean, s, l, seed, std::nullopt};
        GrfSampler sampler(spec);
        const Index n = spec.grid.num_nodes();
        py::array_t<double> out({static_cast<py::ssize_t>(count), static_cast<py::ssize_t>(n)});
        for (Index i = 0; i < count; ++i) {
          auto f = sampler.sample(i);
          std::copy(f.begin(), f.end(), out.mutable_data() + i * n);
        }
        return out;
      },
      py::arg("dim"), py::arg("m"), py::arg("mean") = 0.0, py::arg("s") = 1.0, py::arg("l") = 0.1, py::arg("seed") = 0,
      py::arg("count") = 1, "GRF samples with RBF covariance, one row per sample (x-fastest node order).");

  m.def(
      "read_container",
      [](const std::filesystem::path& path) {
        auto c = read_container(path);
        py::dict tensors;
        for (const auto& [name, t] : c.tensors) tensors[py::str(name)] = tensor_array(t);
        return py::make_tuple(tensors, c.meta.dump());
      },
      py::arg("path"));
  m.def(
      "_write_container",
      [](const std::filesystem::path& path, const py::dict& tensors, const std::string& meta, bool f32) {
        TensorContainer c;
        c.meta = parse(meta);
        if (c.meta.is_null()) c.meta = nlohmann::json::object();
        for (auto item : tensors) {
          auto a = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(item.second);
          if (!a) throw ConfigError("tensor values must be numeric arrays");
          std::vector<std::uint64_t> shape(a.shape(), a.shape() + a.ndim());
          c.tensors[item.first.cast<std::string>()] =
              Tensor::from_values(f32 ? DType::f32 : DType::f64, shape, std::span<const double>(a.data(), a.size()));
        }
        write_container(path, c);
      },
      py::arg("path"), py::arg("tensors"), py::arg("meta"), py::arg("f32"));

  m.def(
      "write_voxel_mask",
      [](const std::filesystem::path& path, int dim, Index mm, py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> mask) {
        write_voxel_mask(path, make_grid(dim, mm), ScattererMask(from_array<std::uint8_t>(mask)));
      },
      py::arg("path"), py::arg("dim"), py::arg("m"), py::arg("mask"));
  m.def(
      "read_voxel_mask",
      [](const std::filesystem::path& path, int dim, Index mm) {
        auto mask = read_voxel_mask(path, make_grid(dim, mm));
        return to_array(std::vector<std::uint8_t>(mask.data().begin(), mask.data().end()));
      },
      py::arg("path"), py::arg("dim"), py::arg("m"));

  py::class_<DeepOnetWeights, std::shared_ptr<DeepOnetWeights>>(m, "DeepOnet")
      .def_static("load", [](const std::filesystem::path& path) { return std::make_shared<DeepOnetWeights>(load_weights(path)); })
      .def_static("random",
                  [](const std::string& meta_json, std::uint64_t seed) {
                    return std::make_shared<DeepOnetWeights>(DeepOnetWeights::random(DeepOnetMeta::from_json(parse(meta_json)), seed));
                  })
      .def_static("default_meta_json",
                  [](int dim, Index p) {
                    return (dim == 3 ? DeepOnetMeta::default_3d(p) : DeepOnetMeta::default_2d(p)).to_json().dump();
                  },
                  py::arg("dim"), py::arg("p") = 128)
      .def("save", [](const DeepOnetWeights& w, const std::filesystem::path& path, bool f32) {
             save_weights(path, w, f32 ? DType::f32 : DType::f64);
           }, py::arg("path"), py::arg("f32") = true)
      .def_property_readonly("meta_json", [](const DeepOnetWeights& w) { return w.meta.to_json().dump(); })
      .def(
          "branch",
          [](const DeepOnetWeights& w, py::array_t<double, py::array::c_style | py::array::forcecast> k,
             py::array_t<double, py::array::c_style | py::array::forcecast> re,
             py::array_t<double, py::array::c_style | py::array::forcecast> im) {
            auto kv = from_array<double>(k), rv = from_array<double>(re), iv = from_array<double>(im);
            return to_array(branch_forward(w, {kv, rv, iv}));
          },
          py::arg("k"), py::arg("f_re"), py::arg("f_im"))
      .def(
          "trunk",
          [](const DeepOnetWeights& w, py::array_t<double, py::array::c_style | py::array::forcecast> coords) {
            auto c = from_array<double>(coords);
            auto t = trunk_eval(w, c);
            py::array_t<double> out({static_cast<py::ssize_t>(t.rows), static_cast<py::ssize_t>(t.cols)});
            std::copy(t.data.begin(), t.data.end(), out.mutable_data());
            return out;
          },
          py::arg("coords"))
      .def(
          "infer",
          [](const DeepOnetWeights& w, py::array_t<double, py::array::c_style | py::array::forcecast> k,
             py::array_t<double, py::array::c_style | py::array::forcecast> re,
             py::array_t<double, py::array::c_style | py::array::forcecast> im,
             py::array_t<double, py::array::c_style | py::array::forcecast> coords) {
            auto kv = from_array<double>(k), rv = from_array<double>(re), iv = from_array<double>(im);
            auto c = from_array<double>(coords);
            return to_array(deeponet_infer(w, {kv, rv, iv}, c));
          },
          py::arg("k"), py::arg("f_re"), py::arg("f_im"), py::arg("coords"));

  m.def(
      "_generate_dataset",
      [](const std::string& spec_json, const std::filesystem::path& out) {
        auto spec = DatasetSpec::from_json(parse(spec_json));
        TensorContainer c;
        {
          py::gil_scoped_release release;
          c = generate_dataset(spec);
        }
        write_container(out, c);
      },
      py::arg("spec_json"), py::arg("out"));
  m.def("_dataset_defaults_json", [](int dim) { return DatasetSpec::defaults(dim).to_json().dump(); }, py::arg("dim"));
}
