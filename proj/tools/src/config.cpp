// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/io/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <openssl/evp.h>

#define TOML_EXCEPTIONS 1
#include <toml++/toml.hpp>

namespace limabs::io {

namespace {

std::string location(const std::string& file, const toml::source_region& src) {
  if (src.begin.line == 0) return file;
  return fmt::format("{}:{}:{}", file, src.begin.line, src.begin.column);
}

// One toml table plus the keys read from it, so leftovers can be reported.
class Section {
 public:
  Section(const toml::table* t, std::string path, const std::string& file) : t_(t), path_(std::move(path)), file_(file) {}

  bool present() const { return t_ != nullptr; }
  bool has(const char* key) const { return t_ && t_->contains(key); }

  [[noreturn]] void fail(const char* key, const std::string& msg) const {
    const toml::node* n = t_ ? t_->get(key) : nullptr;
    const std::string where = n ? location(file_, n->source()) : (t_ ? location(file_, t_->source()) : file_);
    throw ConfigError(where, fmt::format("{} {}", name(key), msg));
  }

  std::string name(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

  double num(const char* key, double def) {
    const toml::node* n = get(key);
    if (!n) return def;
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) return *v;
    fail(key, "must be a number");
  }

  int integer(const char* key, int def) {
    const toml::node* n = get(key);
    if (!n) return def;
    if (!n->is_integer()) fail(key, "must be an integer");
    return int(*n->value<std::int64_t>());
  }

  std::int64_t integer64(const char* key, std::int64_t def) {
    const toml::node* n = get(key);
    if (!n) return def;
    if (!n->is_integer()) fail(key, "must be an integer");
    return *n->value<std::int64_t>();
  }

  bool boolean(const char* key, bool def) {
    const toml::node* n = get(key);
    if (!n) return def;
    if (!n->is_boolean()) fail(key, "must be true or false");
    return *n->value<bool>();
  }

  std::string str(const char* key, const std::string& def) {
    const toml::node* n = get(key);
    if (!n) return def;
    if (!n->is_string()) fail(key, "must be a string");
    return *n->value<std::string>();
  }

  std::string choice(const char* key, const std::string& def, std::initializer_list<const char*> allowed) {
    const std::string v = str(key, def);
    std::string list;
    for (const char* a : allowed) {
      if (v == a) return v;
      list += list.empty() ? a : std::string(", ") + a;
    }
    fail(key, fmt::format("must be one of {}", list));
  }

  std::vector<std::string> strings(const char* key, const std::vector<std::string>& def,
                                   std::initializer_list<const char*> allowed) {
    const toml::node* n = get(key);
    if (!n) return def;
    const auto* a = n->as_array();
    if (!a) fail(key, "must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : *a) {
      auto v = e.value<std::string>();
      if (!v || std::none_of(allowed.begin(), allowed.end(), [&](const char* x) { return *v == x; }))
        fail(key, fmt::format("entries must be one of {}", fmt::join(allowed, ", ")));
      out.push_back(*v);
    }
    return out;
  }

  // number or [re, im]
  cplx complex(const char* key, cplx def) {
    const toml::node* n = get(key);
    if (!n) return def;
    if (n->is_integer() || n->is_floating_point()) return {*n->value<double>(), 0.0};
    if (const auto* a = n->as_array(); a && a->size() == 2) {
      auto re = (*a)[0].value<double>(), im = (*a)[1].value<double>();
      if (re && im) return {*re, *im};
    }
    fail(key, "must be a number or [re, im]");
  }

  std::vector<double> numbers(const char* key, const std::vector<double>& def, std::size_t size = 0) {
    const toml::node* n = get(key);
    if (!n) return def;
    const auto* a = n->as_array();
    if (!a) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *a) {
      auto v = e.value<double>();
      if (!v || !(e.is_integer() || e.is_floating_point())) fail(key, "must be an array of numbers");
      out.push_back(*v);
    }
    if (size && out.size() != size) fail(key, fmt::format("must have {} entries", size));
    return out;
  }

  Vec3 vec3(const char* key, const Vec3& def) {
    if (!has(key)) {
      get(key);
      return def;
    }
    const auto v = numbers(key, {}, 3);
    return {v[0], v[1], v[2]};
  }

  // three entries, each a number or [re, im]
  CVec3 cvec3(const char* key, const CVec3& def) {
    const toml::node* n = get(key);
    if (!n) return def;
    const auto* a = n->as_array();
    if (!a || a->size() != 3) fail(key, "must have 3 entries");
    CVec3 out;
    for (int i = 0; i < 3; ++i) {
      const auto& e = (*a)[i];
      if (auto v = e.value<double>(); v && (e.is_integer() || e.is_floating_point())) {
        out[i] = *v;
      } else if (const auto* p = e.as_array(); p && p->size() == 2 && (*p)[0].value<double>() &&
                                                 (*p)[1].value<double>()) {
        out[i] = {*(*p)[0].value<double>(), *(*p)[1].value<double>()};
      } else {
        fail(key, "entries must be numbers or [re, im]");
      }
    }
    return out;
  }

  Mat3 mat3(const char* key, const Mat3& def) {
    const toml::node* n = get(key);
    if (!n) return def;
    const auto* a = n->as_array();
    if (!a || a->size() != 3) fail(key, "must be a 3x3 array");
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      const auto* row = (*a)[i].as_array();
      if (!row || row->size() != 3) fail(key, "must be a 3x3 array");
      for (int j = 0; j < 3; ++j) {
        auto v = (*row)[j].value<double>();
        if (!v) fail(key, "must be a 3x3 array of numbers");
        m(i, j) = *v;
      }
    }
    return m;
  }

  Section sub(const char* key) {
    const toml::node* n = get(key);
    if (!n) return Section(nullptr, name(key), file_);
    if (!n->is_table()) fail(key, "must be a table");
    return Section(n->as_table(), name(key), file_);
  }

  void positive(const char* key, double v) const {
    if (!(v > 0.0)) fail(key, "must be positive");
  }

  // Every key must have been read.
  void finish() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_)
      if (!used_.count(std::string(k.str())))
        throw ConfigError(location(file_, v.source()), fmt::format("unknown key {}", name(std::string(k.str()).c_str())));
  }

 private:
  const toml::node* get(const char* key) {
    used_.insert(key);
    return t_ ? t_->get(key) : nullptr;
  }

  const toml::table* t_;
  std::string path_;
  const std::string& file_;
  std::set<std::string> used_;
};

GammaSpec read_gamma(Section s) {
  GammaSpec g;
  const std::string kind = s.choice("kind", "vacuum", {"vacuum", "radial"});
  g.gamma0 = s.num("gamma0", 1.0);
  s.positive("gamma0", g.gamma0);
  g.amplitude = s.num("amplitude", 0.0);
  g.kappa = s.num("kappa", 0.0);
  if (g.kappa < 0.0) s.fail("kappa", "must be non-negative");
  const std::string proj = s.choice("projector", "matrix", {"matrix", "radial"});
  g.radial_projector = proj == "radial";
  g.matrix = s.mat3("matrix", Mat3::Identity());
  if (s.has("decay_bound")) g.decay_bound = s.num("decay_bound", 0.0);
  g.kind = kind == "radial" ? GammaSpec::Kind::Radial : GammaSpec::Kind::Vacuum;
  if (g.kind == GammaSpec::Kind::Radial && !(g.kappa > 0.0)) s.fail("kappa", "must be positive for a radial perturbation");
  s.finish();
  return g;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

void set_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.hash = sha256_hex(cfg.canonical + fmt::format("\n# effective seed {}\n", seed));
}

RunConfig parse_config_text(const std::string& text, const std::string& file) {
  toml::table root;
  try {
    root = toml::parse(text, file);
  } catch (const toml::parse_error& e) {
    throw ConfigError(location(file, e.source()), std::string(e.description()));
  }
  RunConfig cfg;
  cfg.path = file;
  Section top(&root, "", file);

  const auto seed = top.integer64("seed", 1);
  if (seed < 0) top.fail("seed", "must be non-negative");

  {
    Section g = top.sub("grid");
    cfg.grid.h = g.num("h", cfg.grid.h);
    g.positive("h", cfg.grid.h);
    cfg.grid.n = g.integer("n", cfg.grid.n);
    if (cfg.grid.n < 4) g.fail("n", "must be at least 4");
    cfg.grid.r0 = g.num("r0", cfg.grid.r0);
    g.positive("r0", cfg.grid.r0);
    Section o = g.sub("obstacle");
    const std::string kind = o.choice("kind", "sphere", {"none", "sphere", "box"});
    const Vec3 c = o.vec3("center", Vec3::Zero());
    const double radius = o.num("radius", 1.0);
    const Vec3 lo = o.vec3("lo", Vec3(-0.5, -0.5, -0.5)), hi = o.vec3("hi", Vec3(0.5, 0.5, 0.5));
    if (kind == "none") {
      cfg.grid.obstacle = ObstacleSpec::none();
    } else if (kind == "sphere") {
      o.positive("radius", radius);
      cfg.grid.obstacle = ObstacleSpec::sphere(radius, c);
    } else {
      if (!(lo.array() < hi.array()).all()) o.fail("hi", "must exceed lo in every coordinate");
      cfg.grid.obstacle = ObstacleSpec::box(lo, hi);
    }
    o.finish();
    g.finish();
  }
  {
    Section m = top.sub("material");
    cfg.material.eps = read_gamma(m.sub("eps"));
    cfg.material.mu = read_gamma(m.sub("mu"));
    m.finish();
  }
  {
    Section b = top.sub("bc");
    cfg.bc_name = b.choice("rule", "gamma1", {"gamma1", "gamma2", "hemisphere"});
    cfg.bc = cfg.bc_name == "gamma1" ? BcRule::all_gamma1()
                                     : (cfg.bc_name == "gamma2" ? BcRule::all_gamma2() : BcRule::hemisphere_z());
    b.finish();
  }
  {
    Section f = top.sub("frequency");
    cfg.omega = f.complex("omega", cfg.omega);
    if (cfg.omega.real() == 0.0 && cfg.omega.imag() == 0.0) f.fail("omega", "must be nonzero");
    f.finish();
  }
  {
    Section s = top.sub("schedule");
    cfg.schedule.present = s.present();
    cfg.schedule.sigma0 = s.num("sigma0", cfg.schedule.sigma0);
    s.positive("sigma0", cfg.schedule.sigma0);
    cfg.schedule.ratio = s.num("ratio", cfg.schedule.ratio);
    if (!(cfg.schedule.ratio > 0.0 && cfg.schedule.ratio < 1.0)) s.fail("ratio", "must be in (0,1)");
    cfg.schedule.n = s.integer("n", cfg.schedule.n);
    if (cfg.schedule.n < 1) s.fail("n", "must be at least 1");
    cfg.schedule.side = s.integer("side", 1);
    if (cfg.schedule.side != 1 && cfg.schedule.side != -1) s.fail("side", "must be 1 or -1");
    cfg.schedule.richardson = s.boolean("richardson", false);
    cfg.monitor_t = s.num("monitor_t", cfg.monitor_t);
    s.finish();
  }
  {
    Section s = top.sub("source");
    const std::string kind = s.choice("kind", "plane_wave", {"plane_wave", "dipole", "bump"});
    auto& src = cfg.source;
    src.kind = kind == "plane_wave" ? SourceConfig::Kind::PlaneWave
                                    : (kind == "dipole" ? SourceConfig::Kind::Dipole : SourceConfig::Kind::Bump);
    src.plane_wave.direction = s.vec3("direction", Vec3::UnitZ());
    if (src.plane_wave.direction.norm() == 0.0) s.fail("direction", "must be nonzero");
    src.plane_wave.direction.normalize();
    src.plane_wave.polarization = s.vec3("polarization", Vec3::UnitX());
    src.plane_wave.amplitude = s.complex("amplitude", 1.0);
    src.dipole.position = s.vec3("position", Vec3::Zero());
    src.dipole.moment = s.cvec3("moment", CVec3(0.0, 0.0, 1.0));
    src.r_in = s.num("r_in", src.r_in);
    src.r_out = s.num("r_out", src.r_out);
    if (!(src.r_out > src.r_in && src.r_in > 0.0)) s.fail("r_out", "must exceed r_in > 0");
    src.center = s.vec3("center", src.center);
    src.radius = s.num("radius", src.radius);
    s.positive("radius", src.radius);
    src.polarization = s.cvec3("polarization_bump", src.polarization);
    s.finish();
  }
  {
    Section s = top.sub("solver");
    const std::string method = s.choice("method", "auto", {"auto", "direct", "iterative"});
    cfg.solver.method = method == "auto" ? SolverOptions::Method::Auto
                                         : (method == "direct" ? SolverOptions::Method::Direct
                                                               : SolverOptions::Method::Iterative);
    cfg.solver.tol = s.num("tol", cfg.solver.tol);
    s.positive("tol", cfg.solver.tol);
    cfg.solver.direct_max_n = s.integer("direct_max_n", cfg.solver.direct_max_n);
    cfg.solver.max_iterations = s.integer("max_iterations", cfg.solver.max_iterations);
    if (cfg.solver.max_iterations < 1) s.fail("max_iterations", "must be at least 1");
    cfg.solver.restart = s.integer("restart", cfg.solver.restart);
    if (cfg.solver.restart < 1) s.fail("restart", "must be at least 1");
    Section a = s.sub("absorber");
    cfg.solver.absorber.cells = a.integer("cells", 0);
    if (cfg.solver.absorber.cells < 0) a.fail("cells", "must be non-negative");
    cfg.solver.absorber.sigma_max = a.num("sigma_max", 0.0);
    if (cfg.solver.absorber.sigma_max < 0.0) a.fail("sigma_max", "must be non-negative");
    cfg.solver.absorber.order = a.num("order", 2.0);
    cfg.solver.absorber.omega_ref = a.num("omega_ref", 1.0);
    a.positive("omega_ref", cfg.solver.absorber.omega_ref);
    a.finish();
    Section t = s.sub("truncation");
    cfg.truncation_tol = t.num("tol", cfg.truncation_tol);
    t.positive("tol", cfg.truncation_tol);
    cfg.truncation_budget = t.num("budget", cfg.truncation_budget);
    t.positive("budget", cfg.truncation_budget);
    t.finish();
    s.finish();
  }
  {
    Section o = top.sub("outputs");
    const auto list = o.strings("formats", {"vtk", "csv", "json"}, {"vtk", "csv", "json"});
    auto in = [&](const char* f) { return std::find(list.begin(), list.end(), f) != list.end(); };
    cfg.outputs.vtk = in("vtk");
    cfg.outputs.csv = in("csv");
    cfg.outputs.json = in("json");
    cfg.outputs.prefix = o.str("prefix", "");
    o.finish();
  }
  {
    Section s = top.sub("spectrum");
    cfg.spectrum.omega0 = s.num("omega0", cfg.spectrum.omega0);
    s.positive("omega0", cfg.spectrum.omega0);
    cfg.spectrum.k = s.integer("k", cfg.spectrum.k);
    if (cfg.spectrum.k < 1) s.fail("k", "must be at least 1");
    cfg.spectrum.localization_limit = s.num("localization_limit", cfg.spectrum.localization_limit);
    s.finish();
  }
  {
    Section s = top.sub("helmholtz");
    auto& hz = cfg.helmholtz;
    hz.nu = s.num("nu", hz.nu);
    if (hz.nu == 0.0) s.fail("nu", "must be nonzero");
    hz.taus = s.numbers("taus", hz.taus);
    if (hz.taus.empty()) s.fail("taus", "must not be empty");
    for (double t : hz.taus)
      if (!(t > 0.0 && t <= 1.0)) s.fail("taus", "entries must lie in (0, 1]");
    hz.s = s.num("s", hz.s);
    if (!(hz.s > 0.5 && hz.s < 1.0)) s.fail("s", "must be in (1/2, 1)");
    hz.t = s.num("t", hz.t);
    if (!(hz.t < -0.5)) s.fail("t", "must be below -1/2");
    hz.source_radius = s.num("source_radius", hz.source_radius);
    s.positive("source_radius", hz.source_radius);
    hz.decay_study = s.boolean("decay_study", false);
    s.finish();
  }
  {
    Section s = top.sub("decompose");
    cfg.flavor = s.choice("flavor", "epsilon", {"epsilon", "mu"}) == "mu" ? Flavor::Mu : Flavor::Epsilon;
    s.finish();
  }
  {
    Section s = top.sub("verify");
    cfg.verify.samples = s.integer("samples", cfg.verify.samples);
    if (cfg.verify.samples < 1) s.fail("samples", "must be at least 1");
    s.finish();
  }
  top.finish();

  std::ostringstream canon;
  canon << toml::toml_formatter(root);
  cfg.canonical = canon.str();
  set_seed(cfg, std::uint64_t(seed));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

RunConfig default_config() { return parse_config_text("", "<defaults>"); }

}  // namespace limabs::io
