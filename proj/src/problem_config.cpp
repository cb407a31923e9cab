// SPDX-License-Identifier: Apache-2.0
#include <helm/problem_config.hpp>

#include <fstream>
#include <numbers>

namespace helm {

namespace {

Point point_from_json(const nlohmann::json& j, const Point& fallback) {
  Point p = fallback;
  for (Index i = 0; i < std::min<Index>(3, j.size()); ++i) p[i] = j[i].get<Real>();
  return p;
}

BoundaryKind parse_bc(const std::string& s) {
  if (s == "sommerfeld") return BoundaryKind::sommerfeld;
  if (s == "neumann") return BoundaryKind::neumann;
  if (s == "dirichlet") return BoundaryKind::dirichlet;
  throw ConfigError("problem: unknown boundary kind '" + s + "'");
}

std::uint64_t field_seed(std::uint64_t seed, FieldStream s) { return stream_seed(seed, static_cast<std::uint64_t>(s)); }

}  // namespace

nlohmann::json to_json(const GrfParams& p) {
  nlohmann::json j{{"mean", p.mean}, {"s", p.s}, {"l", p.l}};
  if (p.min_reject) j["min_reject"] = *p.min_reject;
  return j;
}

GrfParams grf_params_from_json(const nlohmann::json& j, const GrfParams& defaults) {
  GrfParams p = defaults;
  p.mean = j.value("mean", p.mean);
  p.s = j.value("s", p.s);
  p.l = j.value("l", p.l);
  if (j.contains("min_reject")) {
    if (j["min_reject"].is_null())
      p.min_reject.reset();
    else
      p.min_reject = j["min_reject"].get<Real>();
  }
  if (p.s <= 0.0 || p.l <= 0.0) throw ConfigError("grf: s and l must be positive");
  return p;
}

Shape shape_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "cube" || type == "square") {
    CubeShape c;
    if (j.contains("center")) c.center = point_from_json(j["center"], c.center);
    c.side = j.value("side", c.side);
    return c;
  }
  if (type == "sphere" || type == "disc") {
    SphereShape s;
    if (j.contains("center")) s.center = point_from_json(j["center"], s.center);
    s.radius = j.value("radius", s.radius);
    return s;
  }
  if (type == "triangle") {
    TriangleShape t;
    auto vertex = [&](const char* key, std::array<Real, 2>& v) {
      if (j.contains(key)) v = {j[key][0].get<Real>(), j[key][1].get<Real>()};
    };
    vertex("v1", t.v1);
    vertex("v2", t.v2);
    vertex("v3", t.v3);
    return t;
  }
  if (type == "capsule_sail" || type == "submarine") {
    CapsuleSailShape c;
    if (j.contains("center")) c.center = point_from_json(j["center"], c.center);
    c.cylinder_length = j.value("cylinder_length", c.cylinder_length);
    c.radius = j.value("radius", c.radius);
    if (j.contains("sail_size")) c.sail_size = j["sail_size"].get<std::array<Real, 3>>();
    c.sail_offset_x = j.value("sail_offset_x", c.sail_offset_x);
    return c;
  }
  if (type == "voxel_file") return VoxelFileShape{j.at("path").get<std::string>()};
  throw ConfigError("problem: unknown scatterer type '" + type + "'");
}

nlohmann::json default_problem_json(int dim, Index m, std::uint64_t seed) {
  if (dim == 2) {
    return {{"dim", 2},
            {"m", m},
            {"seed", seed},
            {"k", {{"mean", 6.0}, {"s", 0.5}, {"l", 0.3}, {"min_reject", 3.0}}},
            {"f", "zero"},
            {"g", {{"sin", 3.0}}},
            {"scatterer", {{{"type", "square"}, {"center", {0.5, 0.5}}, {"side", 0.25}}}}};
  }
  return {{"dim", 3},
          {"m", m},
          {"seed", seed},
          {"k", {{"mean", 6.0}, {"s", 0.2}, {"l", 0.3}, {"min_reject", 3.0}}},
          {"f", "zero"},
          {"g", {{"mean", 0.0}, {"s", 1.0}, {"l", 0.1}}},
          {"scatterer", {{{"type", "cube"}, {"center", {0.5, 0.5, 0.5}}, {"side", 0.125}}}}};
}

ProblemSpec problem_from_json(const nlohmann::json& in) {
  try {
    const int dim = in.value("dim", 2);
    if (dim != 2 && dim != 3) throw ConfigError("problem: dim must be 2 or 3");
    const Index m = in.value("m", Index{33});
    const auto seed = in.value("seed", std::uint64_t{1});
    const auto defaults = default_problem_json(dim, m, seed);
    auto j = defaults;
    j.update(in);

    ProblemSpec spec;
    spec.grid = make_grid(dim, m);
    const Index n = spec.grid.num_nodes();

    const auto& kj = j.at("k");
    if (kj.contains("constant")) {
      spec.k.assign(n, kj["constant"].get<Real>());
    } else {
      auto p = grf_params_from_json(kj, GrfParams{6.0, 0.5, 0.3, 3.0});
      if (j.contains("k_target_mean") && j.value("k_resample", false)) {
        // Resample: shift the mean and the rejection threshold together.
        const Real target = j["k_target_mean"].get<Real>();
        if (p.min_reject) *p.min_reject *= target / p.mean;
        p.mean = target;
      }
      GrfSpec gs{spec.grid, p.mean, p.s, p.l, field_seed(seed, FieldStream::k), p.min_reject};
      spec.k = sample_wavenumber(gs);
      if (j.contains("k_target_mean") && !j.value("k_resample", false))
        spec.k = scale_wavenumber(spec.k, j["k_target_mean"].get<Real>(), p.mean);
    }

    const auto& fj = j.at("f");
    if (!(fj.is_string() && fj.get<std::string>() == "zero")) {
      const GrfParams fd{0.0, 1.0, 0.1, std::nullopt};
      const auto pre = grf_params_from_json(fj.value("re", nlohmann::json::object()), fd);
      const auto pim = grf_params_from_json(fj.value("im", nlohmann::json::object()), fd);
      const auto re = GrfSampler({spec.grid, pre.mean, pre.s, pre.l, field_seed(seed, FieldStream::f_re), {}}).sample(0);
      const auto im = GrfSampler({spec.grid, pim.mean, pim.s, pim.l, field_seed(seed, FieldStream::f_im), {}}).sample(0);
      spec.f.resize(n);
      for (Index i = 0; i < n; ++i) spec.f[i] = {re[i], im[i]};
    }

    const auto& gj = j.at("g");
    const auto face = spec.grid.top_face_grid();
    if (gj.is_string()) {
      if (gj.get<std::string>() != "zero") throw ConfigError("problem: unknown g option");
    } else if (gj.contains("sin")) {
      const Real freq = gj["sin"].get<Real>();
      spec.g.resize(face.num_nodes());
      for (Index i = 0; i < face.num_nodes(); ++i) {
        const auto p = face.point(i);
        Real v = 1.0;
        for (int a = 0; a < face.dim(); ++a) v *= std::sin(freq * std::numbers::pi * p[static_cast<Index>(a)]);
        spec.g[i] = v;
      }
    } else {
      const auto p = grf_params_from_json(gj, GrfParams{0.0, 1.0, 0.1, std::nullopt});
      spec.g = GrfSampler({face, p.mean, p.s, p.l, field_seed(seed, FieldStream::g), {}}).sample(0);
    }

    std::vector<Shape> shapes;
    for (const auto& s : j.at("scatterer")) shapes.push_back(shape_from_json(s));
    spec.mask = mask_from_shapes(spec.grid, shapes);

    if (j.contains("boundary")) {
      for (const auto& [name, kind] : j["boundary"].items()) {
        bool found = false;
        for (Face f : kAllFaces)
          if (name == face_name(f) && StructuredGrid::face_axis(f, dim) >= 0) {
            spec.set_bc(f, parse_bc(kind.get<std::string>()));
            found = true;
          }
        if (!found) throw ConfigError("problem: unknown face '" + name + "' for dim " + std::to_string(dim));
      }
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("problem: malformed JSON: ") + e.what());
  }
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("problem file " + path.string() + ": " + e.what());
  }
  return problem_from_json(j);
}

}  // namespace helm
