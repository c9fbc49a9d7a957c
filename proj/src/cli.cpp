#include "holodyn/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "holodyn/bouquet.hpp"
#include "holodyn/errors.hpp"
#include "holodyn/fatou.hpp"
#include "holodyn/image.hpp"
#include "holodyn/julia.hpp"
#include "holodyn/newton.hpp"
#include "holodyn/orbit.hpp"
#include "holodyn/parallel.hpp"
#include "holodyn/periodic.hpp"
#include "holodyn/report.hpp"

namespace holodyn::cli {

namespace {

using report::Json;

// Raised while turning flags into a run; maps to exit status 1.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error("ConfigError", msg) {}
  explicit ConfigError(const Error& e) : Error(e.kind(), e.what()) {}
};

struct RunConfig {
  std::string command;
  std::string action;  // newton / bouquet second word

  std::string fn, catalog_key, fn_class;
  std::string seed = "0";
  int iters = 200;
  std::string target;  // orbit: preimage target ("inf" or a constant)
  int depth = 1;
  int period = 1;
  std::vector<double> box{-2.0, 2.0, -2.0, 2.0};
  int grid = 100;
  int px = 200;
  int width = 0, height = 0;
  std::string method = "escape";
  int budget = 2000;
  bool rate = false;
  bool hint = true;

  std::string g, p, q, c = "0";
  std::string h = "1";
  std::vector<std::string> hs;
  bool flow = false;
  double t_max = 100.0, dt = 1e-2;

  double lambda = 0.3;
  int N = 1;
  std::string z = "2";
  int k = 1;
  std::vector<int> symbols;

  std::string out;
  std::string image;
  bool png = false;
  bool no_points = false;

  int threads = 0;
  std::uint64_t rng_seed = 42;
  bool jitter = false;
};

Box to_box(const std::vector<double>& v) {
  if (v.size() != 4) throw ConfigError("--box expects 4 numbers: re_min re_max im_min im_max");
  Box b{v[0], v[1], v[2], v[3]};
  if (!b.nondegenerate()) throw ConfigError("--box is degenerate");
  return b;
}

Complex to_complex(const std::string& text, const char* what) {
  try {
    return parse_constant(text);
  } catch (const Error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

MeroFn parse_fn(const std::string& text, const std::string& cls) {
  std::optional<FnClass> annotation;
  if (!cls.empty()) {
    annotation = fn_class_from_string(cls);
    if (!annotation) throw ConfigError("unknown --class '" + cls + "' (Rational, E, P, M)");
  }
  try {
    return parse(text, annotation);
  } catch (const Error& e) {
    throw ConfigError(e);
  }
}

MeroFn resolve_fn(const RunConfig& cfg) {
  if (!cfg.catalog_key.empty()) {
    if (!cfg.fn.empty()) throw ConfigError("give either --fn or --catalog, not both");
    const CatalogEntry* e = find_catalog(cfg.catalog_key);
    if (!e) throw ConfigError("unknown catalog key '" + cfg.catalog_key + "'");
    return parse_fn(e->expression, cfg.fn_class.empty() ? to_string(e->fn_class) : cfg.fn_class);
  }
  if (cfg.fn.empty()) throw ConfigError("a function is required (--fn or --catalog)");
  return parse_fn(cfg.fn, cfg.fn_class);
}

Json fn_json(const MeroFn& f) {
  Json j{{"expression", f.to_string()}};
  try {
    j["class"] = to_string(f.fn_class());
  } catch (const ClassificationAmbiguous& e) {
    j["class"] = "ambiguous";
    j["class_note"] = e.what();
  }
  return j;
}

// Orbit reports are line-oriented: one compact object per record.
void emit(const RunConfig& cfg, const Json& j, const std::string& summary, std::ostream& out,
          bool lines = false) {
  const std::string text = lines ? j.dump() + "\n" : report::dump(j);
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
    out << summary << "\nreport: " << cfg.out << "\n";
  }
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

// ------------------------------------------------------------ commands

int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
  const MeroFn f = resolve_fn(cfg);
  Json j{{"command", "orbit"}, {"function", fn_json(f)}};
  std::ostringstream summary;
  if (!cfg.target.empty()) {
    const ExtendedComplex target = (cfg.target == "inf" || cfg.target == "infinity")
                                       ? ExtendedComplex::infinity()
                                       : ExtendedComplex(to_complex(cfg.target, "--target"));
    const Box box = to_box(cfg.box);
    PreimageParams pp;
    if (cfg.jitter) pp.jitter_seed = cfg.rng_seed;
    const PreimageSet s = preimages(f, target, cfg.depth, box, cfg.grid, pp);
    j["preimages"] = report::preimage_json(s);
    summary << s.points.size() << " preimages at depth " << cfg.depth;
  } else {
    const OrbitRecord rec = iterate(f, to_complex(cfg.seed, "--seed"), cfg.iters);
    j["record"] = report::orbit_json(rec, !cfg.no_points);
    summary << "fate " << to_string(rec.fate.kind) << " after " << rec.points.size() << " points";
  }
  emit(cfg, j, summary.str(), out, true);
  return 0;
}

int cmd_periodic(const RunConfig& cfg, std::ostream& out) {
  const MeroFn f = resolve_fn(cfg);
  PeriodicParams pp;
  if (cfg.jitter) pp.jitter_seed = cfg.rng_seed;
  const PeriodicSearch s = find_periodic(f, cfg.period, to_box(cfg.box), cfg.grid, pp);
  Json j{{"command", "periodic"},
         {"function", fn_json(f)},
         {"period", cfg.period},
         {"box", report::box_json(to_box(cfg.box))},
         {"grid", cfg.grid},
         {"result", report::periodic_search_json(s)}};
  std::ostringstream summary;
  summary << s.cycles.size() << " cycles of minimal period " << cfg.period;
  emit(cfg, j, summary.str(), out);
  return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, bool seed_given) {
  const MeroFn f = resolve_fn(cfg);
  Json j{{"command", "classify"}, {"function", fn_json(f)}};
  if (auto om = omitted_value(f)) j["omitted_value"] = report::complex_json(*om);
  std::ostringstream summary;
  summary << "class " << j["function"]["class"].get<std::string>();
  if (seed_given) {
    FatouParams fp;
    fp.budget = cfg.budget;
    const Complex seed = to_complex(cfg.seed, "--seed");
    const FateLabel label = classify_seed(f, seed, fp);
    j["seed"] = report::complex_json(seed);
    j["fate"] = report::fate_label_json(label);
    summary << ", seed fate " << to_string(label.kind);
    if (cfg.rate) {
      const OrbitRecord rec = iterate(f, seed, cfg.budget);
      Json rc;
      if (auto per = escape_period(rec)) {
        const OrbitRecord esc = escaping_record(f, rec, per->first, per->second);
        try {
          rc = report::rate_check_json(escape_rate_check(esc, cfg.hint));
        } catch (const TooShortOrbit& e) {
          rc = Json{{"error", "TooShortOrbit"}, {"message", e.what()}};
        }
      } else {
        rc = Json{{"error", "TooShortOrbit"}, {"message", "orbit does not escape"}};
      }
      j["rate_check"] = std::move(rc);
    }
  }
  emit(cfg, j, summary.str(), out);
  return 0;
}

int cmd_julia(const RunConfig& cfg, std::ostream& out) {
  const MeroFn f = resolve_fn(cfg);
  const Box box = to_box(cfg.box);
  const int w = cfg.width > 0 ? cfg.width : cfg.px;
  const int h = cfg.height > 0 ? cfg.height : cfg.px;
  Json params{{"function", f.to_string()}, {"method", cfg.method}};
  RasterGrid grid;
  if (cfg.method == "escape" || cfg.method == "boundary") {
    params["max_iters"] = cfg.iters;
    grid = raster_escape(f, box, w, h, cfg.iters);
    if (cfg.method == "boundary") grid = boundary_extract(grid);
  } else if (cfg.method == "preimage") {
    const ExtendedComplex target = (cfg.target.empty() || cfg.target == "inf" || cfg.target == "infinity")
                                       ? ExtendedComplex::infinity()
                                       : ExtendedComplex(to_complex(cfg.target, "--target"));
    params["depth"] = cfg.depth;
    params["target"] = target.is_infinite() ? Json("infinity") : report::complex_json(target.value());
    PreimageRasterParams rp;
    if (cfg.grid > 0 && cfg.grid != 100) rp.seeds = cfg.grid;
    if (cfg.jitter) rp.preimage.jitter_seed = cfg.rng_seed;
    params["seeds"] = rp.seeds > 0 ? rp.seeds : std::max(w, h);
    grid = raster_preimage(f, box, w, h, cfg.depth, target, rp);
  } else {
    throw ConfigError("unknown --method '" + cfg.method + "' (escape, boundary, preimage)");
  }
  const std::string pgm = cfg.image.empty() ? "julia.pgm" : cfg.image;
  const GrayImage img = render(grid);
  write_pgm(pgm, img);
  if (cfg.png) write_png(replace_extension(pgm, ".png"), img);
  const Json side = report::raster_sidecar_json(grid, params);
  write_file(replace_extension(pgm, ".json"), report::dump(side));

  Json j{{"command", "julia"}, {"function", fn_json(f)}, {"image", pgm}, {"sidecar", side}};
  std::ostringstream summary;
  summary << "wrote " << pgm << " (" << w << "x" << h << "), JNear cells "
          << grid.count(CellCode::Kind::JNear);
  emit(cfg, j, summary.str(), out);
  return 0;
}

std::shared_ptr<const NewtonTarget> newton_target(const RunConfig& cfg) {
  if (!cfg.p.empty() || !cfg.q.empty()) {
    if (!cfg.g.empty()) throw ConfigError("give either --g or --p/--q, not both");
    if (cfg.p.empty() || cfg.q.empty()) throw ConfigError("integral form needs both --p and --q");
    return std::make_shared<IntegralTarget>(parse_fn(cfg.p, ""), parse_fn(cfg.q, ""),
                                            to_complex(cfg.c, "--c"));
  }
  if (!cfg.catalog_key.empty()) {
    if (!cfg.g.empty()) throw ConfigError("give either --g or --catalog, not both");
    const CatalogEntry* e = find_catalog(cfg.catalog_key);
    if (!e) throw ConfigError("unknown catalog key '" + cfg.catalog_key + "'");
    return std::make_shared<SymbolicTarget>(parse_fn(e->expression, ""));
  }
  if (cfg.g.empty()) throw ConfigError("newton needs --g, --catalog or --p and --q");
  return std::make_shared<SymbolicTarget>(parse_fn(cfg.g, ""));
}

int cmd_newton(const RunConfig& cfg, std::ostream& out) {
  auto target = newton_target(cfg);
  const Box box = to_box(cfg.box);
  RootSearchParams rp;
  rp.box = box;
  if (auto integral = std::dynamic_pointer_cast<const IntegralTarget>(target)) {
    auto warmed = std::make_shared<IntegralTarget>(*integral);
    warmed->warm(box, 32);
    target = warmed;
  }
  const Complex h = to_complex(cfg.h, "--h");
  Json j{{"command", "newton"}, {"action", cfg.action}};
  std::ostringstream summary;
  if (cfg.action == "setup") {
    const NewtonSetup s = make_relaxed(target, h, rp);
    j["setup"] = report::newton_setup_json(s);
    summary << s.roots.size() << " roots located";
  } else if (cfg.action == "smale") {
    const NewtonSetup s = make_relaxed(target, h, rp);
    const SmaleReport r = smale_test(s, box, cfg.iters);
    j["setup"] = report::newton_setup_json(s);
    j["smale"] = report::smale_json(r);
    summary << "verdict " << to_string(r.verdict) << " (" << r.singular.size() << " singular points)";
  } else if (cfg.action == "flow") {
    const NewtonSetup s = make_relaxed(target, h, rp);
    FlowParams fp;
    fp.t_max = cfg.t_max;
    fp.dt = cfg.dt;
    const Complex seed = to_complex(cfg.seed, "--seed");
    const FlowOutcome o = flow_basin(s, seed, fp);
    j["setup"] = report::newton_setup_json(s);
    j["seed"] = report::complex_json(seed);
    j["flow"] = report::flow_json(o);
    summary << "flow outcome " << to_string(o.kind);
  } else if (cfg.action == "basins") {
    std::vector<NewtonSetup> setups;
    const std::vector<std::string> hs = cfg.hs.empty() ? std::vector<std::string>{cfg.h} : cfg.hs;
    for (const auto& hv : hs) setups.push_back(make_relaxed(target, to_complex(hv, "--hs"), rp));
    BasinParams bp;
    bp.include_flow = cfg.flow;
    bp.flow.t_max = cfg.t_max;
    bp.flow.dt = cfg.dt;
    const int w = cfg.width > 0 ? cfg.width : cfg.px;
    const int hh = cfg.height > 0 ? cfg.height : cfg.px;
    const auto reports = basin_measures(setups, box, w, hh, cfg.iters, bp);
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(report::basin_json(r));
    j["g"] = target->describe();
    j["reports"] = std::move(arr);
    if (!cfg.image.empty()) {
      write_pgm(cfg.image, render_basins(reports.front()));
      if (cfg.png) write_png(replace_extension(cfg.image, ".png"), render_basins(reports.front()));
      j["image"] = cfg.image;
    }
    summary << "nonconvergent fractions:";
    for (const auto& r : reports) summary << " h=" << r.h.real() << ":" << r.iteration_nonconvergent;
  } else {
    throw ConfigError("unknown newton action '" + cfg.action + "'");
  }
  emit(cfg, j, summary.str(), out);
  return 0;
}

int cmd_bouquet(const RunConfig& cfg, std::ostream& out) {
  BouquetConfig bc;
  try {
    bc = configure(cfg.lambda, cfg.N);
  } catch (const Error& e) {
    throw ConfigError(e);
  }
  Json j{{"command", "bouquet"}, {"action", cfg.action}, {"config", report::bouquet_config_json(bc)}};
  std::ostringstream summary;
  if (cfg.action == "configure") {
    summary << "c = " << bc.c << ", q = " << bc.q;
  } else if (cfg.action == "itinerary") {
    const Complex z = to_complex(cfg.z, "--z");
    const ItineraryResult r = itinerary(bc, z, cfg.k);
    j["z"] = report::complex_json(z);
    j["itinerary"] = report::itinerary_json(r);
    summary << (r.complete ? "complete itinerary" : "left the strips at step " + std::to_string(r.exit_step));
  } else if (cfg.action == "endpoint") {
    if (cfg.symbols.empty()) throw ConfigError("--symbols is required");
    const Complex z = endpoint_from_itinerary(bc, cfg.symbols);
    j["symbols"] = cfg.symbols;
    j["endpoint"] = report::complex_json(z);
    j["itinerary"] = report::itinerary_json(itinerary(bc, z, static_cast<int>(cfg.symbols.size())));
    summary << "endpoint " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  } else if (cfg.action == "verify") {
    if (cfg.symbols.empty()) throw ConfigError("--symbols is required");
    const bool pass = verify_conjugacy(bc, cfg.symbols, cfg.k);
    j["symbols"] = cfg.symbols;
    j["k"] = cfg.k;
    j["verdict"] = pass ? "pass" : "fail";
    summary << "conjugacy " << (pass ? "pass" : "fail");
  } else {
    throw ConfigError("unknown bouquet action '" + cfg.action + "'");
  }
  emit(cfg, j, summary.str(), out);
  return 0;
}

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  Json arr = Json::array();
  for (const auto& e : catalog()) {
    arr.push_back(Json{{"key", e.key},
                       {"expression", e.expression},
                       {"class", to_string(e.fn_class)},
                       {"description", e.description},
                       {"applicable", e.applicable}});
  }
  emit(cfg, Json{{"command", "catalog"}, {"entries", std::move(arr)}}, "catalog written", out);
  return 0;
}

// ------------------------------------------------------------ config file

// Turns a JSON config into command-line tokens. Keys present on the command
// line win.
std::vector<std::string> config_tokens(const std::string& path, const std::vector<std::string>& cli,
                                       bool cli_has_command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");

  std::set<std::string> given;
  for (const auto& t : cli)
    if (t.rfind("--", 0) == 0) given.insert(t.substr(2, t.find('=') == std::string::npos ? std::string::npos : t.find('=') - 2));

  std::vector<std::string> head, tail;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command" || key == "action") continue;
    if (given.count(key)) continue;
    auto scalar = [&](const nlohmann::json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
      }
      throw ConfigError("config key '" + key + "' has an unsupported value");
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) tail.push_back("--" + key);
      continue;
    }
    tail.push_back("--" + key);
    if (value.is_array()) {
      for (const auto& v : value) tail.push_back(scalar(v));
    } else {
      tail.push_back(scalar(value));
    }
  }
  if (!cli_has_command) {
    if (!cfg.contains("command")) throw ConfigError("config file needs a \"command\"");
    head.push_back(cfg["command"].get<std::string>());
    if (cfg.contains("action")) head.push_back(cfg["action"].get<std::string>());
  }
  std::vector<std::string> out = head;
  out.insert(out.end(), cli.begin(), cli.end());
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"holodyn: iteration of entire and meromorphic functions"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with the run configuration");
  app.add_option("--threads", cfg.threads, "worker threads (fallback: TD_THREADS)");
  app.add_option("--rng-seed", cfg.rng_seed, "seed for lattice jitter");
  app.add_flag("--jitter", cfg.jitter, "jitter lattice seeds within their cells");

  auto add_fn = [&](CLI::App* s) {
    s->add_option("--fn", cfg.fn, "function expression in z");
    s->add_option("--catalog", cfg.catalog_key, "catalog key (see 'catalog')");
    s->add_option("--class", cfg.fn_class, "class annotation overriding the syntactic class");
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", cfg.out, "write the JSON report here"); };
  auto add_box = [&](CLI::App* s) {
    s->add_option("--box", cfg.box, "re_min re_max im_min im_max")->expected(4);
  };

  CLI::App* orbit = app.add_subcommand("orbit", "forward orbit, or preimages with --target");
  add_fn(orbit);
  add_out(orbit);
  add_box(orbit);
  orbit->add_option("--seed", cfg.seed, "starting point (constant expression)");
  orbit->add_option("--iters", cfg.iters, "maximum number of orbit points");
  orbit->add_option("--target", cfg.target, "preimage target: constant or 'inf'");
  orbit->add_option("--depth", cfg.depth, "preimage depth");
  orbit->add_option("--grid", cfg.grid, "seed lattice size per axis");
  orbit->add_flag("--no-points", cfg.no_points, "omit the orbit points from the report");

  CLI::App* periodic = app.add_subcommand("periodic", "periodic points of a given minimal period");
  add_fn(periodic);
  add_out(periodic);
  add_box(periodic);
  periodic->add_option("--period", cfg.period, "minimal period");
  periodic->add_option("--grid", cfg.grid, "seed lattice size per axis");

  CLI::App* classify = app.add_subcommand("classify", "function class and Fatou fate of a seed");
  add_fn(classify);
  add_out(classify);
  CLI::Option* seed_opt = classify->add_option("--seed", cfg.seed, "seed to classify");
  classify->add_option("--budget", cfg.budget, "iteration budget");
  classify->add_flag("--rate", cfg.rate, "also run the escape-rate check");
  classify->add_option("--hint", cfg.hint, "simply connected hint for the rate check (true/false)");

  CLI::App* julia = app.add_subcommand("julia", "Julia set rasters");
  add_fn(julia);
  add_out(julia);
  add_box(julia);
  julia->add_option("--px", cfg.px, "pixels per side");
  julia->add_option("--width", cfg.width, "pixel columns (overrides --px)");
  julia->add_option("--height", cfg.height, "pixel rows (overrides --px)");
  julia->add_option("--method", cfg.method, "escape, boundary or preimage");
  julia->add_option("--iters", cfg.iters, "escape-time iterations");
  julia->add_option("--depth", cfg.depth, "preimage depth");
  julia->add_option("--target", cfg.target, "preimage target (default inf)");
  julia->add_option("--grid", cfg.grid, "preimage seed lattice size per axis");
  julia->add_option("--image", cfg.image, "PGM output path (sidecar JSON next to it)");
  julia->add_flag("--png", cfg.png, "also write a PNG");

  CLI::App* newton = app.add_subcommand("newton", "Newton and relaxed Newton maps");
  newton->require_subcommand(1);
  for (const char* action : {"setup", "smale", "flow", "basins"}) {
    CLI::App* s = newton->add_subcommand(action);
    s->callback([&cfg, action] { cfg.action = action; });
    s->set_help_flag("--help", "print help");
    add_out(s);
    add_box(s);
    s->add_option("--g", cfg.g, "target function g");
    s->add_option("--catalog", cfg.catalog_key, "catalog key used as g");
    s->add_option("--p", cfg.p, "integral form: polynomial p");
    s->add_option("--q", cfg.q, "integral form: polynomial q");
    s->add_option("--c", cfg.c, "integral form: constant c");
    s->add_option("--h", cfg.h, "relaxation parameter");
    s->add_option("--iters", cfg.iters, "iteration cap");
    s->add_option("--seed", cfg.seed, "flow seed");
    s->add_option("--t-max", cfg.t_max, "flow time limit");
    s->add_option("--dt", cfg.dt, "flow step");
    s->add_option("--hs", cfg.hs, "relaxation sweep for basins");
    s->add_option("--px", cfg.px, "pixels per side");
    s->add_option("--width", cfg.width, "pixel columns");
    s->add_option("--height", cfg.height, "pixel rows");
    s->add_flag("--flow", cfg.flow, "basins: include flow fractions");
    s->add_option("--image", cfg.image, "basins: PGM of the first sweep value");
    s->add_flag("--png", cfg.png, "also write a PNG");
  }

  CLI::App* bouquet = app.add_subcommand("bouquet", "symbolic dynamics of lambda e^z");
  bouquet->require_subcommand(1);
  for (const char* action : {"configure", "itinerary", "endpoint", "verify"}) {
    CLI::App* s = bouquet->add_subcommand(action);
    s->callback([&cfg, action] { cfg.action = action; });
    add_out(s);
    s->add_option("--lambda", cfg.lambda, "0 < lambda < 1/e");
    s->add_option("--N", cfg.N, "symbol bound");
    s->add_option("--z", cfg.z, "point (itinerary)");
    s->add_option("--k", cfg.k, "itinerary length / shift check length");
    s->add_option("--symbols", cfg.symbols, "itinerary symbols");
  }

  CLI::App* cat = app.add_subcommand("catalog", "list the example maps");
  add_out(cat);

  int code = 0;
  try {
    // Pull --config out first so file values can be merged under the flags.
    std::vector<std::string> args;
    std::string cfg_file;
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (input[i] == "--config" && i + 1 < input.size()) {
        cfg_file = input[++i];
      } else if (input[i].rfind("--config=", 0) == 0) {
        cfg_file = input[i].substr(9);
      } else {
        args.push_back(input[i]);
      }
    }
    if (!cfg_file.empty()) {
      static const std::set<std::string> commands{"orbit", "periodic", "classify", "julia",
                                                  "newton", "bouquet", "catalog"};
      bool has_command = false;
      for (const auto& a : args) has_command = has_command || commands.count(a) > 0;
      args = config_tokens(cfg_file, args, has_command);
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }
    set_thread_count(resolve_threads(cfg.threads > 0 ? std::optional<int>(cfg.threads) : std::nullopt));

    if (orbit->parsed()) code = cmd_orbit(cfg, out);
    else if (periodic->parsed()) code = cmd_periodic(cfg, out);
    else if (classify->parsed()) code = cmd_classify(cfg, out, seed_opt->count() > 0);
    else if (julia->parsed()) code = cmd_julia(cfg, out);
    else if (newton->parsed()) code = cmd_newton(cfg, out);
    else if (bouquet->parsed()) code = cmd_bouquet(cfg, out);
    else if (cat->parsed()) code = cmd_catalog(cfg, out);
  } catch (const ConfigError& e) {
    error_json(err, e.kind(), e.what(), 1);
    return 1;
  } catch (const Error& e) {
    error_json(err, e.kind(), e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    error_json(err, "RuntimeError", e.what(), 2);
    return 2;
  }
  return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace holodyn::cli
