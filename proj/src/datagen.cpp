// SPDX-License-Identifier: Apache-2.0
#include <helm/datagen.hpp>

#include <helm/band_lu.hpp>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace helm {

namespace {

constexpr const char* kGeneratorVersion = "helmsolve-datagen 1";

std::vector<std::uint64_t> field_shape(Index n, int dim, Index m) {
  std::vector<std::uint64_t> s{n};
  for (int i = 0; i < dim; ++i) s.push_back(m);
  return s;
}

}  // namespace

void DatasetSpec::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("dataset: dim must be 2 or 3");
  if (m < 3) throw ConfigError("dataset: m must be >= 3");
  if (n < 1) throw ConfigError("dataset: sample count must be >= 1");
  for (const auto* p : {&k, &g, &f_re, &f_im})
    if (p->s <= 0.0 || p->l <= 0.0) throw ConfigError("dataset: GRF s and l must be positive");
  if (k.min_reject && *k.min_reject >= k.mean) throw ConfigError("dataset: k rejection threshold must be below the mean");
}

nlohmann::json DatasetSpec::to_json() const {
  return {{"dim", dim},
          {"m", m},
          {"n", n},
          {"seed", seed},
          {"homogeneous_g", homogeneous_g},
          {"grf", {{"k", helm::to_json(k)}, {"g", helm::to_json(g)}, {"f_re", helm::to_json(f_re)}, {"f_im", helm::to_json(f_im)}}}};
}

DatasetSpec DatasetSpec::defaults(int dim) {
  DatasetSpec s;
  s.dim = dim;
  if (dim == 3) {
    s.m = 17;
    s.n = 1000;
    s.k.s = 0.2;
  }
  return s;
}

DatasetSpec DatasetSpec::from_json(const nlohmann::json& j) {
  try {
    auto s = defaults(j.value("dim", 2));
    s.m = j.value("m", s.m);
    s.n = j.value("n", s.n);
    s.seed = j.value("seed", s.seed);
    s.homogeneous_g = j.value("homogeneous_g", s.homogeneous_g);
    s.threads = j.value("threads", s.threads);
    if (j.contains("grf")) {
      const auto& g = j["grf"];
      if (g.contains("k")) s.k = grf_params_from_json(g["k"], s.k);
      if (g.contains("g")) s.g = grf_params_from_json(g["g"], s.g);
      if (g.contains("f_re")) s.f_re = grf_params_from_json(g["f_re"], s.f_re);
      if (g.contains("f_im")) s.f_im = grf_params_from_json(g["f_im"], s.f_im);
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("dataset spec: ") + e.what());
  }
}

ProblemSpec sample_problem(const DatasetSpec& spec, const DatasetSample& s) {
  ProblemSpec p;
  p.grid = make_grid(spec.dim, spec.m);
  p.k = s.k;
  p.f.resize(s.f_re.size());
  for (Index i = 0; i < p.f.size(); ++i) p.f[i] = {s.f_re[i], s.f_im[i]};
  p.g = s.g;
  p.mask = ScattererMask::empty(p.grid);
  return p;
}

DatasetSample generate_sample(const DatasetSpec& spec, Index index) {
  const auto grid = make_grid(spec.dim, spec.m);
  const auto face = grid.top_face_grid();
  auto sampler = [&](const StructuredGrid& g, const GrfParams& p, FieldStream f) {
    return GrfSampler({g, p.mean, p.s, p.l, stream_seed(spec.seed, static_cast<std::uint64_t>(f)), p.min_reject});
  };
  DatasetSample s;
  s.k = sampler(grid, spec.k, FieldStream::k).sample_accepted(index, &s.k_rejections);
  s.f_re = sampler(grid, spec.f_re, FieldStream::f_re).sample(index);
  s.f_im = sampler(grid, spec.f_im, FieldStream::f_im).sample(index);
  s.g = spec.homogeneous_g ? RealVector(face.num_nodes(), 0.0) : sampler(face, spec.g, FieldStream::g).sample(index);

  const auto sys = assemble(sample_problem(spec, s));
  ComplexVector u;
  try {
    u = BandLuFactorization::factor(sys.a).solve(sys.rhs);
  } catch (const Error& e) {
    throw Error("dataset: direct solve failed for sample " + std::to_string(index) + ": " + e.what());
  }
  const Real bn = norm2(sys.rhs);
  const Real rn = norm2(residual(sys, u));
  if (bn > 0.0 && rn > 1e-10 * bn)
    throw Error("dataset: sample " + std::to_string(index) + " residual " + std::to_string(rn / bn) +
                " exceeds 1e-10");
  s.u_re.resize(u.size());
  s.u_im.resize(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    s.u_re[i] = u[i].real();
    s.u_im[i] = u[i].imag();
  }
  return s;
}

Index worker_count(Index requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HELM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<Index>(v);
  }
  return std::max<Index>(1, std::thread::hardware_concurrency());
}

void parallel_for(Index n, Index threads, const std::function<void(Index)>& body) {
  const Index workers = std::min(n, std::max<Index>(1, threads));
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::mutex err_mutex;
  Index err_index = n;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  for (Index t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (Index i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (i < err_index) {
            err_index = i;
            err = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

TensorContainer generate_dataset(const DatasetSpec& spec, const std::function<void(Index, Index)>& progress) {
  spec.validate();
  const Index npts = make_grid(spec.dim, spec.m).num_nodes();
  const Index nface = npts / spec.m;
  RealVector k(spec.n * npts), f_re(k.size()), f_im(k.size()), u_re(k.size()), u_im(k.size()), g(spec.n * nface);
  std::atomic<Index> done{0};
  std::atomic<Index> rejections{0};
  std::mutex progress_mutex;
  parallel_for(spec.n, worker_count(spec.threads), [&](Index i) {
    const auto s = generate_sample(spec, i);
    auto put = [&](RealVector& dst, const RealVector& src) {
      std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(i * src.size()));
    };
    put(k, s.k);
    put(f_re, s.f_re);
    put(f_im, s.f_im);
    put(u_re, s.u_re);
    put(u_im, s.u_im);
    put(g, s.g);
    rejections += s.k_rejections;
    const Index d = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(d, spec.n);
    }
  });

  TensorContainer c;
  const auto shape = field_shape(spec.n, spec.dim, spec.m);
  c.tensors["k"] = Tensor::from_f64(shape, k);
  c.tensors["f_re"] = Tensor::from_f64(shape, f_re);
  c.tensors["f_im"] = Tensor::from_f64(shape, f_im);
  c.tensors["u_re"] = Tensor::from_f64(shape, u_re);
  c.tensors["u_im"] = Tensor::from_f64(shape, u_im);
  c.tensors["g"] = Tensor::from_f64(field_shape(spec.n, spec.dim - 1, spec.m), g);
  c.meta = spec.to_json();
  c.meta["kind"] = "dataset";
  c.meta["generator"] = kGeneratorVersion;
  c.meta["grid"] = {{"dim", spec.dim}, {"m", spec.m}, {"h", 1.0 / static_cast<Real>(spec.m - 1)}};
  c.meta["k_rejections"] = rejections.load();
  c.meta["boundary"] = {{"incoming", "top"}, {"absorbing", "sommerfeld"}, {"scatterer", "none"}};
  return c;
}

}  // namespace helm
