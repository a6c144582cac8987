#include "solitonlab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "solitonlab/scattering.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/splitstep.hpp"
#include "solitonlab/verify.hpp"

namespace solitonlab {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Config parsing. Strict: unknown keys are rejected and every error names the
// offending JSON path.

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config: " + path + ": " + msg);
}

void check_keys(const json& o, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : o.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) fail(path + "." + item.key(), "unknown key");
  }
}

const json* find(const json& o, const char* key) {
  const auto it = o.find(key);
  return it == o.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "must be finite");
  return d;
}

double get_double(const json& o, const std::string& path, const char* key,
                  double fallback) {
  const json* v = find(o, key);
  return v ? as_double(*v, path + "." + key) : fallback;
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !v.is_number_integer())
    fail(path, "expected a non-negative integer");
  const auto i = v.get<long long>();
  if (i < 0) fail(path, "expected a non-negative integer");
  return static_cast<std::size_t>(i);
}

std::size_t get_count(const json& o, const std::string& path, const char* key,
                      std::size_t fallback) {
  const json* v = find(o, key);
  return v ? as_count(*v, path + "." + key) : fallback;
}

Cx as_complex(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object {\"re\": , \"im\": }");
  check_keys(v, path, {"re", "im"});
  const json* re = find(v, "re");
  const json* im = find(v, "im");
  if (!re || !im) fail(path, "needs both \"re\" and \"im\"");
  return Cx(as_double(*re, path + ".re"), as_double(*im, path + ".im"));
}

Grid1D as_grid(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected {\"start\": , \"stop\": , \"n\": }");
  check_keys(v, path, {"start", "stop", "n"});
  const json* start = find(v, "start");
  const json* stop = find(v, "stop");
  const json* n = find(v, "n");
  if (!start || !stop || !n) fail(path, "needs start, stop and n");
  try {
    return uniform_grid(as_double(*start, path + ".start"),
                        as_double(*stop, path + ".stop"),
                        as_count(*n, path + ".n"));
  } catch (const InvalidRangeError& e) {
    fail(path, e.what());
  }
}

const std::set<std::string>& known_checks() {
  static const std::set<std::string> names = {
      "field_grid",
      "closed_form_equivalence",
      "pde_residual",
      "pde_residual_convergence",
      "zero_curvature",
      "mass_conservation",
      "det_unimodular",
      "sigma_symmetry",
      "reflectionless",
      "eigenvalue_roundtrip",
      "scattering_time_evolution",
      "splitstep_linf",
      "splitstep_mass_drift",
      "splitstep_dt_convergence",
  };
  return names;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "$",
             {"spectral_data", "grid", "verify", "scatter", "simulate", "tolerances"});

  ScenarioConfig cfg;

  const json* sd = find(root, "spectral_data");
  if (!sd) fail("$.spectral_data", "required");
  if (!sd->is_array()) fail("$.spectral_data", "expected an array");
  for (std::size_t i = 0; i < sd->size(); ++i) {
    const std::string path = "$.spectral_data[" + std::to_string(i) + "]";
    const json& e = (*sd)[i];
    if (!e.is_object()) fail(path, "expected an object");
    check_keys(e, path, {"k", "c", "d"});
    const json* k = find(e, "k");
    const json* c = find(e, "c");
    const json* d = find(e, "d");
    if (!k || !c || !d) fail(path, "needs k, c and d");
    cfg.data.push_back(SpectralDatum{as_complex(*k, path + ".k"),
                                     as_complex(*c, path + ".c"),
                                     as_complex(*d, path + ".d")});
  }
  try {
    validate_spectral(cfg.data);
  } catch (const InvalidInputError& e) {
    fail("$.spectral_data", e.what());
  }

  if (const json* g = find(root, "grid")) {
    if (!g->is_object()) fail("$.grid", "expected an object");
    check_keys(*g, "$.grid", {"x", "t"});
    if (const json* gx = find(*g, "x")) cfg.xgrid = as_grid(*gx, "$.grid.x");
    if (const json* gt = find(*g, "t")) cfg.tgrid = as_grid(*gt, "$.grid.t");
  }

  if (const json* v = find(root, "verify")) {
    const std::string p = "$.verify";
    if (!v->is_object()) fail(p, "expected an object");
    check_keys(*v, p, {"stencil_h", "zc_k", "mass_times", "mass_half_width",
                       "closed_form_points"});
    cfg.verify.stencil_h = get_double(*v, p, "stencil_h", cfg.verify.stencil_h);
    if (!(cfg.verify.stencil_h > 0.0)) fail(p + ".stencil_h", "must be positive");
    if (const json* zk = find(*v, "zc_k")) {
      if (!zk->is_array() || zk->empty()) fail(p + ".zc_k", "expected a nonempty array");
      cfg.verify.zc_k.clear();
      for (std::size_t i = 0; i < zk->size(); ++i)
        cfg.verify.zc_k.push_back(
            as_complex((*zk)[i], p + ".zc_k[" + std::to_string(i) + "]"));
    }
    if (const json* mt = find(*v, "mass_times")) {
      if (!mt->is_array() || mt->size() < 2)
        fail(p + ".mass_times", "expected at least two times");
      cfg.verify.mass_times.clear();
      for (std::size_t i = 0; i < mt->size(); ++i)
        cfg.verify.mass_times.push_back(
            as_double((*mt)[i], p + ".mass_times[" + std::to_string(i) + "]"));
    }
    cfg.verify.mass_half_width =
        get_double(*v, p, "mass_half_width", cfg.verify.mass_half_width);
    if (cfg.verify.mass_half_width < 0.0)
      fail(p + ".mass_half_width", "must be >= 0 (0 selects automatic)");
    cfg.verify.closed_form_points =
        get_count(*v, p, "closed_form_points", cfg.verify.closed_form_points);
    if (cfg.verify.closed_form_points == 0)
      fail(p + ".closed_form_points", "must be positive");
  }

  if (const json* s = find(root, "scatter")) {
    const std::string p = "$.scatter";
    if (!s->is_object()) fail(p, "expected an object");
    check_keys(*s, p, {"L", "n_steps", "k", "eigen_guesses", "t0", "t1"});
    cfg.scatter.L = get_double(*s, p, "L", cfg.scatter.L);
    if (cfg.scatter.L < 0.0) fail(p + ".L", "must be >= 0 (0 selects automatic)");
    cfg.scatter.n_steps = get_count(*s, p, "n_steps", cfg.scatter.n_steps);
    if (const json* ks = find(*s, "k")) {
      if (!ks->is_array() || ks->empty()) fail(p + ".k", "expected a nonempty array");
      cfg.scatter.k_real.clear();
      for (std::size_t i = 0; i < ks->size(); ++i)
        cfg.scatter.k_real.push_back(
            as_double((*ks)[i], p + ".k[" + std::to_string(i) + "]"));
    }
    if (const json* gs = find(*s, "eigen_guesses")) {
      if (!gs->is_array()) fail(p + ".eigen_guesses", "expected an array");
      for (std::size_t i = 0; i < gs->size(); ++i)
        cfg.scatter.eigen_guesses.push_back(as_complex(
            (*gs)[i], p + ".eigen_guesses[" + std::to_string(i) + "]"));
    }
    cfg.scatter.t0 = get_double(*s, p, "t0", cfg.scatter.t0);
    cfg.scatter.t1 = get_double(*s, p, "t1", cfg.scatter.t1);
  }

  if (const json* s = find(root, "simulate")) {
    const std::string p = "$.simulate";
    if (!s->is_object()) fail(p, "expected an object");
    check_keys(*s, p, {"L", "n", "dt", "T", "t0", "snapshots"});
    cfg.simulate.L = get_double(*s, p, "L", cfg.simulate.L);
    if (!(cfg.simulate.L > 0.0)) fail(p + ".L", "must be positive");
    cfg.simulate.n = get_count(*s, p, "n", cfg.simulate.n);
    if (cfg.simulate.n == 0 || (cfg.simulate.n & (cfg.simulate.n - 1)) != 0)
      fail(p + ".n", "must be a power of two");
    cfg.simulate.dt = get_double(*s, p, "dt", cfg.simulate.dt);
    if (!(cfg.simulate.dt > 0.0)) fail(p + ".dt", "must be positive");
    cfg.simulate.T = get_double(*s, p, "T", cfg.simulate.T);
    if (!(cfg.simulate.T > 0.0)) fail(p + ".T", "must be positive");
    cfg.simulate.t0 = get_double(*s, p, "t0", cfg.simulate.t0);
    if (const json* sn = find(*s, "snapshots")) {
      if (!sn->is_array()) fail(p + ".snapshots", "expected an array");
      for (std::size_t i = 0; i < sn->size(); ++i)
        cfg.simulate.snapshots.push_back(
            as_double((*sn)[i], p + ".snapshots[" + std::to_string(i) + "]"));
      std::sort(cfg.simulate.snapshots.begin(), cfg.simulate.snapshots.end());
    }
  }

  if (const json* t = find(root, "tolerances")) {
    if (!t->is_object()) fail("$.tolerances", "expected an object");
    for (const auto& item : t->items()) {
      if (known_checks().count(item.key()) == 0)
        fail("$.tolerances." + item.key(), "unknown check name");
      cfg.tolerance_overrides[item.key()] =
          as_double(item.value(), "$.tolerances." + item.key());
    }
  }

  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

bool RunReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Check bookkeeping.

namespace {

// Fine-stencil residuals below this are rounding noise for any soliton-sized
// field; the h**4 order of the stencils is only measurable above it.
constexpr double kConvergenceFloor = 1e-9;

double default_tolerance(const std::string& name, CheckKind* kind) {
  *kind = CheckKind::kUpperBound;
  if (name == "field_grid") {
    *kind = CheckKind::kInfo;
    return 0.0;
  }
  if (name == "closed_form_equivalence") return 1e-12;
  if (name == "pde_residual") return 1e-6;
  if (name == "pde_residual_convergence") {
    *kind = CheckKind::kLowerBound;
    return 12.0;
  }
  if (name == "zero_curvature") return 1e-6;
  if (name == "mass_conservation") return 1e-8;
  if (name == "det_unimodular") return 1e-8;
  if (name == "sigma_symmetry") return 1e-8;
  if (name == "reflectionless") return 1e-6;
  if (name == "eigenvalue_roundtrip") return 1e-6;
  if (name == "scattering_time_evolution") return 1e-7;
  if (name == "splitstep_linf") return 1e-4;
  if (name == "splitstep_mass_drift") return 1e-12;
  if (name == "splitstep_dt_convergence") return 0.5;
  throw InvalidInputError("unknown check: " + name);
}

struct CheckRunner {
  const ScenarioConfig& cfg;
  const RunOptions& opts;
  std::vector<CheckResult> results;

  bool enabled(const std::string& name) const {
    if (opts.only.empty()) return true;
    return std::find(opts.only.begin(), opts.only.end(), name) != opts.only.end();
  }

  // Runs `body` (returning the measured value; may fill `note`) and gates it
  // against the effective tolerance. Any library Error fails the check and
  // lands in the note instead of aborting the whole scenario.
  void run(const std::string& name, const std::function<double(std::string&)>& body) {
    if (!enabled(name)) return;
    CheckResult r;
    r.name = name;
    double tol = default_tolerance(name, &r.kind);
    const auto it = cfg.tolerance_overrides.find(name);
    if (it != cfg.tolerance_overrides.end()) tol = it->second;
    // tol-scale > 1 loosens both bound directions.
    if (r.kind == CheckKind::kUpperBound) tol *= opts.tol_scale;
    if (r.kind == CheckKind::kLowerBound) tol /= opts.tol_scale;
    r.tolerance = tol;

    const auto start = std::chrono::steady_clock::now();
    try {
      r.value = body(r.note);
      switch (r.kind) {
        case CheckKind::kUpperBound: r.passed = r.value <= tol; break;
        case CheckKind::kLowerBound: r.passed = r.value >= tol; break;
        case CheckKind::kInfo: r.passed = true; break;
      }
    } catch (const Error& e) {
      r.passed = false;
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.note = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(r);
  }
};

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic sampling helpers (fixed seeds, explicit bit mapping).

double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& g, double a, double b) {
  return a + (b - a) * u01(g);
}

// Probe points covering every envelope: per datum, a few offsets around the
// moving center at a few times; plus midpoints between neighbouring centers
// so collisions are seen too.
std::vector<std::pair<double, double>> probe_points(const SolitonData& data) {
  std::vector<std::pair<double, double>> pts;
  if (data.empty()) {
    pts = {{0.0, 0.0}, {3.0, 0.5}};
    return pts;
  }
  const double times[3] = {-1.5, 0.0, 1.5};
  const double offsets[5] = {-3.0, -1.0, 0.0, 1.0, 3.0};
  for (const SpectralDatum& d : data) {
    const double scale = 1.0 / (2.0 * d.k.imag());
    for (double t : times)
      for (double u : offsets)
        pts.emplace_back(envelope_center(d, t) + u * scale, t);
  }
  for (std::size_t m = 0; m + 1 < data.size(); ++m)
    pts.emplace_back(0.5 * (envelope_center(data[m], 0.0) +
                            envelope_center(data[m + 1], 0.0)),
                     0.0);
  return pts;
}

// Half-width and spacing for the mass quadrature, derived from the slowest
// envelope decay and fastest oscillation among the data.
Grid1D mass_grid(const SolitonData& data, const std::vector<double>& times,
                 double half_width_override) {
  double width = 30.0;
  double h = 0.02;
  if (!data.empty()) {
    double reach = 0.0;
    double min_im = std::numeric_limits<double>::infinity();
    double max_mu = 0.0;
    for (const SpectralDatum& d : data) {
      for (double t : times) reach = std::max(reach, std::abs(envelope_center(d, t)));
      min_im = std::min(min_im, d.k.imag());
      max_mu = std::max(max_mu, 2.0 * (std::abs(d.k.real()) + d.k.imag()));
    }
    width = reach + 20.0 / (2.0 * min_im);
    h = std::min(0.05, std::max(1e-3, 0.02 / max_mu));
  }
  if (half_width_override > 0.0) width = half_width_override;
  std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * width / h)) + 1;
  if (n % 2 == 0) ++n;  // odd point count: pure Simpson
  return uniform_grid(-width, width, n);
}

void write_fields_csv(const std::filesystem::path& p, const FieldGrid& g) {
  std::ofstream out = open_out(p);
  out << "x,t,re_q1,im_q1,re_q2,im_q2,singular\n";
  for (std::size_t ti = 0; ti < g.tgrid.n; ++ti)
    for (std::size_t xi = 0; xi < g.xgrid.n; ++xi) {
      const FieldSample& s = g.at(ti, xi);
      out << fmt_g17(g.xgrid.value(xi)) << ',' << fmt_g17(g.tgrid.value(ti)) << ','
          << fmt_g17(s.q1.real()) << ',' << fmt_g17(s.q1.imag()) << ','
          << fmt_g17(s.q2.real()) << ',' << fmt_g17(s.q2.imag()) << ','
          << (s.singular ? 1 : 0) << '\n';
    }
}

void write_surface_dat(const std::filesystem::path& p, const FieldGrid& g,
                       bool second) {
  // gnuplot splot format: blocks of constant t separated by blank lines.
  std::ofstream out = open_out(p);
  for (std::size_t ti = 0; ti < g.tgrid.n; ++ti) {
    for (std::size_t xi = 0; xi < g.xgrid.n; ++xi) {
      const FieldSample& s = g.at(ti, xi);
      const double mag = std::abs(second ? s.q2 : s.q1);
      out << fmt_g17(g.xgrid.value(xi)) << ' ' << fmt_g17(g.tgrid.value(ti)) << ' '
          << fmt_g17(s.singular ? std::numeric_limits<double>::quiet_NaN() : mag)
          << '\n';
    }
    out << '\n';
  }
}

void write_slice_dat(const std::filesystem::path& p, const FieldGrid& g,
                     std::size_t ti, bool second) {
  std::ofstream out = open_out(p);
  out << "# t = " << fmt_g17(g.tgrid.value(ti)) << "\n";
  for (std::size_t xi = 0; xi < g.xgrid.n; ++xi) {
    const FieldSample& s = g.at(ti, xi);
    const double mag = std::abs(second ? s.q2 : s.q1);
    out << fmt_g17(g.xgrid.value(xi)) << ' '
        << fmt_g17(s.singular ? std::numeric_limits<double>::quiet_NaN() : mag)
        << '\n';
  }
}

void write_state_csv(const std::filesystem::path& p, const SimState& st) {
  std::ofstream out = open_out(p);
  out << "# t = " << fmt_g17(st.t) << "\n";
  out << "x,re_q1,im_q1,re_q2,im_q2\n";
  for (std::size_t j = 0; j < st.n(); ++j)
    out << fmt_g17(st.x(j)) << ',' << fmt_g17(st.q1[j].real()) << ','
        << fmt_g17(st.q1[j].imag()) << ',' << fmt_g17(st.q2[j].real()) << ','
        << fmt_g17(st.q2[j].imag()) << '\n';
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

void run_soliton(const ScenarioConfig& cfg, const RunOptions& opts,
                 CheckRunner& runner) {
  const std::filesystem::path dir(opts.out_dir);
  runner.run("field_grid", [&](std::string& note) {
    const FieldGrid g = eval_grid(cfg.data, cfg.xgrid, cfg.tgrid);
    std::size_t singular = 0;
    for (const FieldSample& s : g.samples) singular += s.singular ? 1 : 0;

    write_fields_csv(dir / "fields.csv", g);
    write_surface_dat(dir / "q1_abs.dat", g, false);
    write_surface_dat(dir / "q2_abs.dat", g, true);
    const std::size_t slices[3] = {0, g.tgrid.n / 2, g.tgrid.n - 1};
    const char* names[3] = {"first", "mid", "last"};
    for (int i = 0; i < 3; ++i) {
      write_slice_dat(dir / ("slice_q1_" + std::string(names[i]) + ".dat"), g,
                      slices[i], false);
      write_slice_dat(dir / ("slice_q2_" + std::string(names[i]) + ".dat"), g,
                      slices[i], true);
    }
    note = std::to_string(singular) + " singular of " +
           std::to_string(g.samples.size()) + " samples";
    return static_cast<double>(singular) / static_cast<double>(g.samples.size());
  });
}

void run_verify(const ScenarioConfig& cfg, const RunOptions& opts,
                CheckRunner& runner) {
  const FieldSampler f = soliton_sampler(cfg.data);
  const auto pts = probe_points(cfg.data);
  const double h = cfg.verify.stencil_h;
  const std::filesystem::path dir(opts.out_dir);

  runner.run("closed_form_equivalence", [&](std::string& note) {
    if (cfg.data.size() != 1 && cfg.data.size() != 2) {
      note = "only defined for N = 1 or 2; skipped";
      return 0.0;
    }
    std::mt19937_64 gen(0x534f4c49544f4eull);
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < cfg.verify.closed_form_points; ++i) {
      const SpectralDatum& d = cfg.data[i % cfg.data.size()];
      const double t = uniform(gen, -2.0, 2.0);
      const double x =
          envelope_center(d, t) + uniform(gen, -8.0, 8.0) / (2.0 * d.k.imag());
      FieldSample closed;
      try {
        closed = cfg.data.size() == 1 ? one_soliton_closed(cfg.data[0], x, t)
                                      : two_soliton_closed(cfg.data, x, t);
      } catch (const SingularPointError&) {
        continue;  // pole line: both routes are undefined there
      }
      const FieldSample general = eval_fields(cfg.data, x, t);
      if (general.singular) continue;
      ++used;
      worst = std::max({worst, std::abs(general.q1 - closed.q1),
                        std::abs(general.q2 - closed.q2)});
    }
    note = std::to_string(used) + " points compared";
    if (used < cfg.verify.closed_form_points / 2)
      throw InvalidInputError("closed_form_equivalence: too many singular points");
    return worst;
  });

  const auto max_residual = [&](double hx) {
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& [x, t] : pts) {
      try {
        const auto [r1, r2] = pde_residual(f, x, t, hx, hx);
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
        ++used;
      } catch (const StencilOnSingularityError&) {
      }
    }
    if (used == 0)
      throw InvalidInputError("pde_residual: every probe point was singular");
    return worst;
  };

  double residual_h = std::numeric_limits<double>::quiet_NaN();
  runner.run("pde_residual", [&](std::string& note) {
    residual_h = max_residual(h);
    // Residual scan artifact: one row per probe point.
    std::ofstream out = open_out(dir / "residuals.csv");
    out << "x,t,abs_r1,abs_r2\n";
    for (const auto& [x, t] : pts) {
      try {
        const auto [r1, r2] = pde_residual(f, x, t, h, h);
        out << fmt_g17(x) << ',' << fmt_g17(t) << ',' << fmt_g17(std::abs(r1))
            << ',' << fmt_g17(std::abs(r2)) << '\n';
      } catch (const StencilOnSingularityError&) {
        out << fmt_g17(x) << ',' << fmt_g17(t) << ",nan,nan\n";
      }
    }
    note = std::to_string(pts.size()) + " probe points, h=" + fmt_g17(h);
    return residual_h;
  });

  runner.run("pde_residual_convergence", [&](std::string& note) {
    const double coarse =
        std::isnan(residual_h) ? max_residual(h) : residual_h;
    const double fine = max_residual(0.5 * h);
    note = "max residual " + fmt_g17(coarse) + " at h, " + fmt_g17(fine) +
           " at h/2";
    // Small-amplitude data bottoms out at cancellation noise (~1e-12 for a
    // weak soliton) long before h reaches 5e-3, and there the halving ratio
    // measures noise, not truncation order. The residual bound has already
    // passed with orders of magnitude to spare in that regime, so report the
    // order check as converged instead of failing on an unmeasurable ratio.
    if (fine < kConvergenceFloor) {
      note += "; fine residual below rounding floor, ratio not informative";
      return std::numeric_limits<double>::infinity();
    }
    return coarse / fine;
  });

  runner.run("zero_curvature", [&](std::string& note) {
    double worst = 0.0;
    // The t = 0 probe row is enough spatial coverage; every configured k is
    // tested at each point.
    for (const auto& [x, t] : pts) {
      if (t != 0.0 && !cfg.data.empty()) continue;
      for (const Cx& k : cfg.verify.zc_k) {
        try {
          worst = std::max(worst, zero_curvature_residual(f, x, t, k, h));
        } catch (const StencilOnSingularityError&) {
        }
      }
    }
    note = std::to_string(cfg.verify.zc_k.size()) + " spectral parameters";
    return worst;
  });

  runner.run("mass_conservation", [&](std::string& note) {
    const Grid1D xg =
        mass_grid(cfg.data, cfg.verify.mass_times, cfg.verify.mass_half_width);
    std::ofstream out = open_out(dir / "masses.csv");
    out << "t,mass_q1,mass_q2\n";
    double m1_ref = 0.0, m2_ref = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < cfg.verify.mass_times.size(); ++i) {
      const double t = cfg.verify.mass_times[i];
      const auto [m1, m2] = component_masses(f, xg, t);
      out << fmt_g17(t) << ',' << fmt_g17(m1) << ',' << fmt_g17(m2) << '\n';
      if (i == 0) {
        m1_ref = m1;
        m2_ref = m2;
      } else {
        worst = std::max(worst, std::abs(m1 - m1_ref) / std::max(m1_ref, 1e-300));
        worst = std::max(worst, std::abs(m2 - m2_ref) / std::max(m2_ref, 1e-300));
      }
    }
    note = "quadrature on [" + fmt_g17(xg.start) + ", " + fmt_g17(xg.stop) +
           "], n=" + std::to_string(xg.n);
    return worst;
  });
}

void run_scatter(const ScenarioConfig& cfg, const RunOptions& opts,
                 CheckRunner& runner) {
  const FieldSampler f = soliton_sampler(cfg.data);
  const double t0 = cfg.scatter.t0;
  const std::filesystem::path dir(opts.out_dir);

  double L = cfg.scatter.L;
  if (L <= 0.0)
    L = std::max(auto_half_width(f, t0), auto_half_width(f, cfg.scatter.t1));

  double kmax = 0.0;
  for (double k : cfg.scatter.k_real) kmax = std::max(kmax, std::abs(k));
  for (const Cx& g : cfg.scatter.eigen_guesses) kmax = std::max(kmax, std::abs(g));
  for (const SpectralDatum& d : cfg.data) kmax = std::max(kmax, std::abs(d.k) + 0.1);
  std::size_t n_steps = cfg.scatter.n_steps;
  if (n_steps == 0) n_steps = auto_steps(L, kmax);

  // One potential table serves every real-k check at t0.
  std::unique_ptr<JostIntegrator> ji;
  std::vector<ScatteringMatrix> smats;
  const auto ensure_smats = [&]() {
    if (!ji) ji = std::make_unique<JostIntegrator>(PotentialSampler{f, t0}, L, n_steps);
    if (smats.empty()) {
      for (double k : cfg.scatter.k_real) smats.push_back(ji->scattering_matrix(k));
      std::ofstream out = open_out(dir / "smatrix.csv");
      out << "k";
      const char* names[9] = {"s11", "s12", "s13", "s21", "s22",
                              "s23", "s31", "s32", "s33"};
      for (const char* n : names) out << ",re_" << n << ",im_" << n;
      out << '\n';
      for (const ScatteringMatrix& s : smats) {
        out << fmt_g17(s.k);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            out << ',' << fmt_g17(s.S(i, j).real()) << ','
                << fmt_g17(s.S(i, j).imag());
        out << '\n';
      }
    }
  };
  const std::string geom =
      "L=" + fmt_g17(L) + ", n_steps=" + std::to_string(n_steps);

  runner.run("det_unimodular", [&](std::string& note) {
    ensure_smats();
    double worst = 0.0;
    for (const ScatteringMatrix& s : smats)
      worst = std::max(worst, std::abs(lu_det(s.S) - Cx(1.0, 0.0)));
    note = geom;
    return worst;
  });

  runner.run("sigma_symmetry", [&](std::string& note) {
    ensure_smats();
    const CMatrix sigma = sigma_matrix();
    const CMatrix id = CMatrix::identity(3);
    double worst = 0.0;
    for (const ScatteringMatrix& s : smats)
      worst = std::max(
          worst, (s.S * sigma * s.S.adjoint() * sigma - id).inf_norm());
    note = geom;
    return worst;
  });

  runner.run("reflectionless", [&](std::string& note) {
    ensure_smats();
    double worst = 0.0;
    for (const ScatteringMatrix& s : smats)
      worst = std::max(worst, reflection_magnitude(s));
    note = geom;
    return worst;
  });

  if (!cfg.data.empty()) {
    runner.run("eigenvalue_roundtrip", [&](std::string& note) {
      std::vector<Cx> guesses = cfg.scatter.eigen_guesses;
      if (guesses.empty())
        for (const SpectralDatum& d : cfg.data) guesses.push_back(d.k + Cx(0.035, 0.035));
      std::ofstream out = open_out(dir / "eigenvalues.csv");
      out << "re_guess,im_guess,re_found,im_found,re_nearest,im_nearest\n";
      double worst = 0.0;
      for (const Cx& g : guesses) {
        const Cx found =
            find_discrete_eigenvalue(PotentialSampler{f, t0}, g, L, n_steps);
        Cx nearest = cfg.data[0].k;
        for (const SpectralDatum& d : cfg.data)
          if (std::abs(found - d.k) < std::abs(found - nearest)) nearest = d.k;
        out << fmt_g17(g.real()) << ',' << fmt_g17(g.imag()) << ','
            << fmt_g17(found.real()) << ',' << fmt_g17(found.imag()) << ','
            << fmt_g17(nearest.real()) << ',' << fmt_g17(nearest.imag()) << '\n';
        worst = std::max(worst, std::abs(found - nearest));
      }
      note = geom + ", " + std::to_string(guesses.size()) + " guesses";
      return worst;
    });
  }

  runner.run("scattering_time_evolution", [&](std::string& note) {
    const JostIntegrator ja(PotentialSampler{f, t0}, L, n_steps);
    const JostIntegrator jb(PotentialSampler{f, cfg.scatter.t1}, L, n_steps);
    double constancy = 0.0, law = 0.0;
    for (double k : cfg.scatter.k_real) {
      const ScatteringMatrix sa = ja.scattering_matrix(k);
      const ScatteringMatrix sb = jb.scattering_matrix(k);
      const std::pair<int, int> entries[] = {{0, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}};
      for (const auto& [i, j] : entries)
        constancy = std::max(constancy, std::abs(sb.S(i, j) - sa.S(i, j)));
      const Cx expected =
          sa.S(0, 1) * std::polar(1.0, 2.0 * k * k * (cfg.scatter.t1 - t0));
      law = std::max(law, std::abs(sb.S(0, 1) - expected));
    }
    note = geom + ", t=" + fmt_g17(t0) + " to " + fmt_g17(cfg.scatter.t1) +
           ", s12 law drift " + fmt_g17(law);
    return constancy;
  });
}

void run_simulate(const ScenarioConfig& cfg, const RunOptions& opts,
                  CheckRunner& runner) {
  const FieldSampler f = soliton_sampler(cfg.data);
  const SimulateParams& sp = cfg.simulate;
  const std::filesystem::path dir(opts.out_dir);
  const double t_end = sp.t0 + sp.T;

  double linf_coarse = std::numeric_limits<double>::quiet_NaN();
  double mass_drift = std::numeric_limits<double>::quiet_NaN();

  runner.run("splitstep_linf", [&](std::string& note) {
    SimState st = init_state(f, sp.L, sp.n, sp.t0);
    const auto [m1_0, m2_0] = st.masses();
    write_state_csv(dir / "state_initial.csv", st);

    std::size_t snap = 0;
    for (std::size_t i = 0; i < sp.snapshots.size(); ++i) {
      const double ts = sp.snapshots[i];
      if (ts <= st.t || ts >= t_end) continue;
      evolve(st, ts, sp.dt);
      write_state_csv(dir / ("snapshot_" + std::to_string(snap++) + ".csv"), st);
    }
    evolve(st, t_end, sp.dt);
    write_state_csv(dir / "state_final.csv", st);

    const auto [m1_1, m2_1] = st.masses();
    mass_drift = std::max(std::abs(m1_1 - m1_0) / std::max(m1_0, 1e-300),
                          std::abs(m2_1 - m2_0) / std::max(m2_0, 1e-300));

    const CompareResult cr = compare(st, f);
    linf_coarse = cr.linf;
    note = "l2 error " + fmt_g17(cr.l2) + ", grid n=" + std::to_string(sp.n) +
           ", dt=" + fmt_g17(sp.dt);
    return cr.linf;
  });

  runner.run("splitstep_mass_drift", [&](std::string& note) {
    if (std::isnan(mass_drift)) {
      SimState st = init_state(f, sp.L, sp.n, sp.t0);
      const auto [m1_0, m2_0] = st.masses();
      evolve(st, t_end, sp.dt);
      const auto [m1_1, m2_1] = st.masses();
      mass_drift = std::max(std::abs(m1_1 - m1_0) / std::max(m1_0, 1e-300),
                            std::abs(m2_1 - m2_0) / std::max(m2_0, 1e-300));
    }
    note = "relative, over " + fmt_g17(sp.T) + " time units";
    return mass_drift;
  });

  runner.run("splitstep_dt_convergence", [&](std::string& note) {
    if (std::isnan(linf_coarse)) {
      SimState st = init_state(f, sp.L, sp.n, sp.t0);
      evolve(st, t_end, sp.dt);
      linf_coarse = compare(st, f).linf;
    }
    SimState st = init_state(f, sp.L, sp.n, sp.t0);
    evolve(st, t_end, 0.5 * sp.dt);
    const double linf_fine = compare(st, f).linf;
    const double ratio = linf_fine > 0.0
                             ? linf_coarse / linf_fine
                             : std::numeric_limits<double>::infinity();
    note = "linf " + fmt_g17(linf_coarse) + " at dt, " + fmt_g17(linf_fine) +
           " at dt/2, ratio " + fmt_g17(ratio);
    return std::abs(ratio - 4.0);
  });
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg, const std::string& subcommand,
                       const RunOptions& opts) {
  std::filesystem::create_directories(opts.out_dir);
  CheckRunner runner{cfg, opts, {}};

  if (subcommand == "soliton") {
    run_soliton(cfg, opts, runner);
  } else if (subcommand == "verify") {
    run_verify(cfg, opts, runner);
  } else if (subcommand == "scatter") {
    run_scatter(cfg, opts, runner);
  } else if (subcommand == "simulate") {
    run_simulate(cfg, opts, runner);
  } else {
    throw InvalidInputError("unknown subcommand: " + subcommand);
  }

  RunReport report{subcommand, runner.results};
  std::ofstream out = open_out(std::filesystem::path(opts.out_dir) / "report.json");
  out << report_to_json(report, opts);
  return report;
}

std::string report_to_json(const RunReport& report, const RunOptions& opts) {
  json checks = json::array();
  json timing = json::object();
  for (const CheckResult& c : report.checks) {
    json e;
    e["name"] = c.name;
    e["kind"] = c.kind == CheckKind::kUpperBound  ? "upper"
                : c.kind == CheckKind::kLowerBound ? "lower"
                                                   : "info";
    e["pass"] = c.passed;
    if (std::isfinite(c.value)) e["value"] = c.value;
    else e["value"] = nullptr;
    if (c.kind != CheckKind::kInfo) e["tolerance"] = c.tolerance;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
    timing[c.name] = c.seconds;
  }
  json root;
  root["subcommand"] = report.subcommand;
  root["all_pass"] = report.all_passed();
  root["checks"] = checks;
  root["meta"] = {{"version", kVersion},
                  {"tol_scale", opts.tol_scale},
                  {"elapsed_seconds", timing}};
  return root.dump(2) + "\n";
}

}  // namespace solitonlab
