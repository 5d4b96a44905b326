// svp: batch front end over libsvp.
//
//   svp synth  --n 8 --scenes 5 --seed 1 -o scenes/ [--tables]
//   svp grid   --n 4608 -o grid.so3g
//   svp solve  --scenes scenes/ -o pred/ [--tables scenes/] [--translation gt|constant-z|file]
//   svp eval   --pred pred/ --gt scenes/ -o report/
//   svp report -o summary.csv a/report.csv b/report.csv
//
// Exit codes: 0 ok, 1 other failure, 2 IO, 3 format / corrupt table,
// 4 consistency. Failures print one JSON object per line on stderr.
#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svp/svp.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitIo = 2;
constexpr int kExitFormat = 3;
constexpr int kExitConsistency = 4;

struct CliError {
  int exit_code;
  std::string kind;
  std::string message;
};

int ExitCodeFor(svp_status status) {
  switch (status) {
    case SVP_OK: return kExitOk;
    case SVP_ERR_IO: return kExitIo;
    case SVP_ERR_FORMAT:
    case SVP_ERR_CORRUPT_TABLE: return kExitFormat;
    case SVP_ERR_CONSISTENCY: return kExitConsistency;
    default: return kExitOther;
  }
}

void Check(svp_status status, const std::string& context) {
  if (status == SVP_OK) return;
  throw CliError{ExitCodeFor(status), svp_status_name(status),
                 context + ": " + svp_last_error()};
}

[[noreturn]] void Fail(int exit_code, const std::string& kind, const std::string& message) {
  throw CliError{exit_code, kind, message};
}

void PrintError(const CliError& e) {
  ordered_json line;
  line["error"] = e.kind;
  line["exit_code"] = e.exit_code;
  line["message"] = e.message;
  std::cerr << line.dump() << "\n";
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GridPtr = std::unique_ptr<svp_grid, Deleter<svp_grid, svp_grid_free>>;
using ScenePtr = std::unique_ptr<svp_scene, Deleter<svp_scene, svp_scene_free>>;
using ScorerPtr = std::unique_ptr<svp_scorer, Deleter<svp_scorer, svp_scorer_free>>;
using TablePtr = std::unique_ptr<svp_table, Deleter<svp_table, svp_table_free>>;
using ReportSetPtr =
    std::unique_ptr<svp_report_set, Deleter<svp_report_set, svp_report_set_free>>;

// ---- files

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    Fail(kExitIo, "io", "cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

void EnsureParent(const fs::path& file) {
  if (file.has_parent_path()) EnsureDir(file.parent_path());
}

void WriteTextAtomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) Fail(kExitIo, "io", "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    Fail(kExitIo, "io", "cannot rename into " + path.string());
  }
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(kExitIo, "io", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

// ---- manifests: {"scenes": [{"id": ..., "file": ...}, ...]}

struct ManifestEntry {
  std::string id;
  std::string file;
};

std::vector<ManifestEntry> ReadManifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  const std::string text = ReadText(path);
  std::vector<ManifestEntry> entries;
  try {
    const json doc = json::parse(text);
    for (const json& e : doc.at("scenes")) {
      entries.push_back({e.at("id").get<std::string>(), e.at("file").get<std::string>()});
    }
  } catch (const json::exception& e) {
    Fail(kExitFormat, "format", "malformed manifest " + path.string() + ": " + e.what());
  }
  return entries;
}

void WriteManifest(const fs::path& dir, const std::vector<ManifestEntry>& entries) {
  ordered_json doc;
  doc["scenes"] = ordered_json::array();
  for (const ManifestEntry& e : entries) {
    doc["scenes"].push_back({{"id", e.id}, {"file", e.file}});
  }
  WriteTextAtomic(dir / "manifest.json", Dump(doc));
}

ScenePtr LoadScene(const fs::path& path) {
  svp_scene* raw = nullptr;
  Check(svp_scene_load(path.string().c_str(), &raw), "loading " + path.string());
  return ScenePtr(raw);
}

// ---- concurrency

// Runs fn(k) for k in [0, count) on up to `jobs` threads. Every index runs;
// the failure with the lowest index is rethrown so errors do not depend on
// scheduling.
template <typename Fn>
void ForEachScene(size_t count, size_t jobs, Fn&& fn) {
  std::vector<std::unique_ptr<CliError>> failures(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < count; k = next++) {
      try {
        fn(k);
      } catch (const CliError& e) {
        failures[k] = std::make_unique<CliError>(e);
      } catch (const std::exception& e) {
        failures[k] = std::make_unique<CliError>(CliError{kExitOther, "internal", e.what()});
      }
    }
  };
  const size_t threads = std::max<size_t>(1, std::min(jobs, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& f : failures) {
    if (f) throw *f;
  }
}

size_t ResolveJobs(size_t jobs) {
  if (jobs > 0) return jobs;
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

// SVP_SEED replaces whatever seed the flags or config selected.
void ApplySeedOverride(uint64_t& seed) {
  const char* env = std::getenv("SVP_SEED");
  if (env == nullptr || *env == '\0') return;
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 0);
  if (errno != 0 || *end != '\0' || env[0] == '-') {
    Fail(kExitOther, "invalid-argument", std::string("SVP_SEED is not an unsigned integer: ") + env);
  }
  seed = value;
}

// ---- run configs
//
// Every subcommand that writes a directory also writes run_config.json there:
// the subcommand name plus the effective value of each option keyed by its
// long flag name. `<subcommand> --config run_config.json` repeats the run;
// flags given explicitly on the command line take precedence.
// --jobs is deliberately absent since it never changes outputs.

bool GivenExplicitly(const std::vector<std::string>& args, const CLI::Option& opt) {
  std::vector<std::string> names;
  for (const std::string& l : opt.get_lnames()) names.push_back("--" + l);
  for (const std::string& s : opt.get_snames()) names.push_back("-" + s);
  for (const std::string& a : args) {
    for (const std::string& n : names) {
      if (a == n || a.rfind(n + "=", 0) == 0) return true;
    }
  }
  return false;
}

// args excludes the program name.
std::vector<std::string> ExpandRunConfig(const CLI::App& app, std::vector<std::string> args) {
  std::string path;
  bool found = false;
  for (size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) Fail(kExitOther, "usage", "--config needs a file");
      path = args[k + 1];
      args.erase(args.begin() + static_cast<long>(k), args.begin() + static_cast<long>(k) + 2);
      found = true;
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<long>(k));
      found = true;
      break;
    }
  }
  if (!found) return args;

  json doc;
  try {
    doc = json::parse(ReadText(path));
  } catch (const json::exception& e) {
    Fail(kExitFormat, "format", "run config is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) Fail(kExitFormat, "format", "run config must be a JSON object");
  if (args.empty() || args[0].rfind("-", 0) == 0) {
    Fail(kExitOther, "usage", "--config must follow a subcommand");
  }
  const CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) Fail(kExitOther, "usage", "unknown subcommand " + args[0]);
  if (doc.contains("subcommand") && doc["subcommand"] != args[0]) {
    Fail(kExitOther, "usage", "run config was written by " + doc["subcommand"].dump() + ", not " +
                                  args[0]);
  }
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    Fail(kExitFormat, "format", "run config values must be scalars or arrays of scalars");
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "subcommand") continue;
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || key == "config") Fail(kExitOther, "usage", "unknown run config key " + key);
    if (GivenExplicitly(args, *opt)) continue;
    if (value.is_array()) {
      for (const json& v : value) args.push_back(flag + "=" + scalar(v));
    } else if (!value.is_null() && !(value.is_string() && value.get<std::string>().empty())) {
      args.push_back(flag + "=" + scalar(value));
    }
  }
  return args;
}

void AddConfigOption(CLI::App* app) {
  // Expanded before parsing; registered so it shows up in --help.
  app->add_option("--config", "Replay a run_config.json written by an earlier run");
}

// ---- shared option groups

struct GridOptions {
  uint32_t n = 4608;
  std::string generator = "super_fibonacci";
  uint64_t seed = 0;

  void Add(CLI::App* app, const std::string& prefix) {
    app->add_option("--" + prefix + "n", n, "Grid size")->capture_default_str();
    app->add_option("--" + prefix + "generator", generator, "super_fibonacci | random_uniform")
        ->capture_default_str();
    app->add_option("--" + prefix + "seed", seed, "Seed for random_uniform grids")
        ->capture_default_str();
  }

  GridPtr Build() const {
    svp_grid_generator gen;
    Check(svp_grid_generator_parse(generator.c_str(), &gen), "grid generator");
    svp_grid* raw = nullptr;
    Check(svp_grid_build(n, gen, seed, &raw), "building grid");
    return GridPtr(raw);
  }

  void ToJson(ordered_json& doc, const std::string& prefix) const {
    doc[prefix + "n"] = n;
    doc[prefix + "generator"] = generator;
    doc[prefix + "seed"] = seed;
  }
};

struct ScorerOptions {
  double kappa = 50.0;
  double noise = 0.0;
  std::vector<std::string> symmetries;

  void Add(CLI::App* app) {
    app->add_option("--kappa", kappa, "Synthetic energy concentration (1/rad^2)")
        ->capture_default_str();
    app->add_option("--noise", noise, "Max perturbation of each synthetic mode (rad)")
        ->capture_default_str();
    app->add_option("--symmetry", symmetries,
                    "Pair symmetry i,j,k[,ax,ay,az] (world axis, default z); repeatable");
  }

  std::vector<svp_pair_symmetry> Parse() const {
    std::vector<svp_pair_symmetry> out;
    for (const std::string& text : symmetries) {
      std::vector<double> v;
      std::stringstream ss(text);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          size_t used = 0;
          v.push_back(std::stod(cell, &used));
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          Fail(kExitOther, "invalid-argument", "bad --symmetry value '" + text + "'");
        }
      }
      if (v.size() != 3 && v.size() != 6) {
        Fail(kExitOther, "invalid-argument", "--symmetry takes i,j,k or i,j,k,ax,ay,az");
      }
      svp_pair_symmetry s{};
      s.i = static_cast<size_t>(v[0]);
      s.j = static_cast<size_t>(v[1]);
      s.k = static_cast<int>(v[2]);
      s.axis[0] = v.size() == 6 ? v[3] : 0.0;
      s.axis[1] = v.size() == 6 ? v[4] : 0.0;
      s.axis[2] = v.size() == 6 ? v[5] : 1.0;
      out.push_back(s);
    }
    return out;
  }

  // Noise draws for scene k come from their own stream of the run seed.
  ScorerPtr ForScene(const svp_scene* scene, uint64_t run_seed, size_t k) const {
    const std::vector<svp_pair_symmetry> syms = Parse();
    svp_scorer_options options;
    svp_scorer_options_default(&options);
    options.kappa = kappa;
    options.noise_angle = noise;
    options.seed = svp_derive_seed(svp_derive_seed(run_seed, 0x5C0E), k);
    options.symmetries = syms.data();
    options.num_symmetries = syms.size();
    svp_scorer* raw = nullptr;
    Check(svp_scorer_from_scene(scene, &options, &raw), "building scorer");
    return ScorerPtr(raw);
  }

  void ToJson(ordered_json& doc) const {
    doc["kappa"] = kappa;
    doc["noise"] = noise;
    doc["symmetry"] = symmetries;
  }
};

std::string SceneId(size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%03zu", k);
  return buf;
}

// ---- synth

struct SynthArgs {
  uint32_t num_cameras = 8;
  size_t scenes = 5;
  uint64_t seed = 0;
  std::string output;
  double radius_min = 1.0;
  double radius_max = 1.0;
  double jitter = 0.0;
  bool tables = false;
  GridOptions grid;
  ScorerOptions scorer;
  size_t jobs = 1;
};

void RunSynth(SynthArgs a) {
  ApplySeedOverride(a.seed);
  const fs::path out(a.output);
  EnsureDir(out);

  GridPtr grid;
  if (a.tables) grid = a.grid.Build();

  std::vector<ManifestEntry> entries(a.scenes);
  const size_t jobs = ResolveJobs(a.jobs);
  ForEachScene(a.scenes, jobs, [&](size_t k) {
    const std::string id = SceneId(k);
    svp_rig_spec spec{};
    spec.num_cameras = a.num_cameras;
    spec.radius_min = a.radius_min;
    spec.radius_max = a.radius_max;
    spec.jitter = a.jitter;
    spec.seed = svp_derive_seed(a.seed, k);
    svp_scene* raw = nullptr;
    Check(svp_scene_generate(&spec, id.c_str(), &raw), "generating " + id);
    ScenePtr scene(raw);
    Check(svp_scene_save(scene.get(), (out / (id + ".json")).string().c_str()), "writing " + id);
    if (a.tables) {
      ScorerPtr scorer = a.scorer.ForScene(scene.get(), a.seed, k);
      svp_table* table = nullptr;
      Check(svp_table_tabulate(scorer.get(), a.num_cameras, grid.get(), 1, &table),
            "tabulating " + id);
      TablePtr owned(table);
      Check(svp_table_save(owned.get(), (out / (id + ".rpet")).string().c_str()),
            "writing table for " + id);
    }
    entries[k] = {id, id + ".json"};
  });
  WriteManifest(out, entries);

  ordered_json config;
  config["subcommand"] = "synth";
  config["n"] = a.num_cameras;
  config["scenes"] = a.scenes;
  config["seed"] = a.seed;
  config["output"] = a.output;
  config["radius-min"] = a.radius_min;
  config["radius-max"] = a.radius_max;
  config["jitter"] = a.jitter;
  config["tables"] = a.tables;
  a.grid.ToJson(config, "grid-");
  a.scorer.ToJson(config);
  WriteTextAtomic(out / "run_config.json", Dump(config));
}

// ---- grid

struct GridArgs {
  GridOptions grid;
  std::string output;
};

void RunGrid(GridArgs a) {
  ApplySeedOverride(a.grid.seed);
  GridPtr grid = a.grid.Build();
  EnsureParent(a.output);
  Check(svp_grid_save(grid.get(), a.output.c_str()), "writing grid");
  ordered_json info;
  info["n"] = a.grid.n;
  info["generator"] = a.grid.generator;
  info["seed"] = a.grid.seed;
  info["covering_radius"] = svp_grid_covering_radius(grid.get());
  info["output"] = a.output;
  std::cout << info.dump() << "\n";
}

// ---- solve

// Tables of one run normally share a grid; build each spec once.
class GridCache {
 public:
  std::shared_ptr<svp_grid> Get(uint32_t n, svp_grid_generator generator, uint64_t seed) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(n, static_cast<int>(generator), seed);
    auto it = grids_.find(key);
    if (it != grids_.end()) return it->second;
    svp_grid* raw = nullptr;
    Check(svp_grid_build(n, generator, seed, &raw), "building table grid");
    std::shared_ptr<svp_grid> grid(raw, svp_grid_free);
    grids_.emplace(key, grid);
    return grid;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<uint32_t, int, uint64_t>, std::shared_ptr<svp_grid>> grids_;
};

struct SolveArgs {
  std::string scenes;
  std::string output;
  std::string tables;
  std::string solver_config;
  uint64_t seed = 0;
  GridOptions grid;
  ScorerOptions scorer;
  size_t max_sweeps = 50;
  size_t patience = 1;
  size_t escape_candidates = 8;
  std::string directional = "auto";
  std::string translation = "gt";
  std::string translation_dir;
  size_t jobs = 1;

  CLI::App* app = nullptr;
  bool Given(const std::string& flag) const { return app->get_option(flag)->count() > 0; }
};

int ParseDirectional(const std::string& value) {
  if (value == "auto") return -1;
  if (value == "true") return 1;
  if (value == "false") return 0;
  Fail(kExitOther, "invalid-argument", "--directional must be auto, true or false");
}

std::string DirectionalName(int value) {
  return value < 0 ? "auto" : (value ? "true" : "false");
}

void RunSolve(SolveArgs a) {
  ApplySeedOverride(a.seed);

  // A solver config file supplies defaults; explicit flags win.
  if (!a.solver_config.empty()) {
    svp_solver_run_config file;
    svp_solver_run_config_default(&file);
    Check(svp_solver_run_config_load(a.solver_config.c_str(), &file), "loading solver config");
    if (!a.Given("--grid-n")) a.grid.n = file.grid_n;
    if (!a.Given("--grid-generator")) a.grid.generator = svp_grid_generator_name(file.grid_generator);
    if (!a.Given("--grid-seed")) a.grid.seed = file.grid_seed;
    if (!a.Given("--max-sweeps")) a.max_sweeps = file.solver.max_sweeps;
    if (!a.Given("--patience")) a.patience = file.solver.patience;
    if (!a.Given("--escape-candidates")) a.escape_candidates = file.solver.escape_candidates;
    if (!a.Given("--directional")) a.directional = DirectionalName(file.solver.directional);
  }
  svp_solver_config solver;
  svp_solver_config_default(&solver);
  solver.max_sweeps = a.max_sweeps;
  solver.patience = a.patience;
  solver.escape_candidates = a.escape_candidates;
  solver.directional = ParseDirectional(a.directional);

  if (a.translation == "file" && a.translation_dir.empty()) {
    Fail(kExitOther, "invalid-argument", "--translation file needs --translation-dir");
  }

  const fs::path scene_dir(a.scenes);
  const fs::path out(a.output);
  const std::vector<ManifestEntry> entries = ReadManifest(scene_dir);
  EnsureDir(out);

  const bool from_tables = !a.tables.empty();
  GridCache grids;
  GridPtr shared_grid;
  if (!from_tables) shared_grid = a.grid.Build();

  const size_t jobs = ResolveJobs(a.jobs);
  const size_t scene_threads = std::max<size_t>(1, std::min(jobs, entries.size()));
  solver.workers = std::max<size_t>(1, jobs / scene_threads);

  std::vector<ManifestEntry> written(entries.size());
  ForEachScene(entries.size(), jobs, [&](size_t k) {
    const ManifestEntry& entry = entries[k];
    ScenePtr gt = LoadScene(scene_dir / entry.file);
    if (entry.id != svp_scene_id(gt.get())) {
      Fail(kExitConsistency, "consistency",
           "manifest id " + entry.id + " does not match scene id " + svp_scene_id(gt.get()));
    }
    const size_t n = svp_scene_num_cameras(gt.get());

    ScorerPtr scorer;
    std::shared_ptr<svp_grid> table_grid;
    const svp_grid* grid = shared_grid.get();
    if (from_tables) {
      const fs::path table_path = fs::path(a.tables) / (entry.id + ".rpet");
      svp_table* raw = nullptr;
      Check(svp_table_load(table_path.string().c_str(), &raw), "loading " + table_path.string());
      TablePtr table(raw);
      if (svp_table_num_cameras(table.get()) != n) {
        Fail(kExitConsistency, "consistency",
             "energy table " + table_path.string() + " covers " +
                 std::to_string(svp_table_num_cameras(table.get())) + " cameras, scene has " +
                 std::to_string(n));
      }
      svp_grid_generator gen;
      uint32_t grid_n = 0;
      uint64_t grid_seed = 0;
      Check(svp_table_grid_spec(table.get(), &grid_n, &gen, &grid_seed), "reading table grid");
      // The grid comes from the table; explicit grid flags must agree with it.
      const bool mismatch = (a.Given("--grid-n") && grid_n != a.grid.n) ||
                            (a.Given("--grid-generator") &&
                             a.grid.generator != svp_grid_generator_name(gen)) ||
                            (a.Given("--grid-seed") && grid_seed != a.grid.seed);
      if (mismatch) {
        Fail(kExitConsistency, "consistency",
             "energy table " + table_path.string() + " was tabulated on a different grid");
      }
      table_grid = grids.Get(grid_n, gen, grid_seed);
      svp_scorer* s = nullptr;
      Check(svp_scorer_from_table(table.get(), table_grid.get(), &s),
            "loading " + table_path.string());
      scorer.reset(s);
      grid = table_grid.get();
    } else {
      scorer = a.scorer.ForScene(gt.get(), a.seed, k);
    }

    std::vector<double> rotations(9 * n);
    double energy = 0.0;
    size_t sweeps = 0;
    Check(svp_solve(scorer.get(), n, grid, &solver, rotations.data(), &energy, &sweeps),
          "solving " + entry.id);

    std::vector<double> translations(3 * n, 0.0);
    if (a.translation == "gt") {
      for (size_t i = 0; i < n; ++i) {
        Check(svp_scene_pose(gt.get(), i, nullptr, translations.data() + 3 * i), "reading pose");
      }
    } else if (a.translation == "constant-z") {
      for (size_t i = 0; i < n; ++i) translations[3 * i + 2] = 1.0;
    } else {
      ScenePtr source = LoadScene(fs::path(a.translation_dir) / (entry.id + ".json"));
      if (svp_scene_num_cameras(source.get()) != n) {
        Fail(kExitConsistency, "consistency",
             "translation file for " + entry.id + " has the wrong number of cameras");
      }
      for (size_t i = 0; i < n; ++i) {
        Check(svp_scene_pose(source.get(), i, nullptr, translations.data() + 3 * i),
              "reading pose");
      }
    }

    svp_scene* raw = nullptr;
    Check(svp_scene_create(entry.id.c_str(), n, rotations.data(), translations.data(), &raw),
          "building prediction for " + entry.id);
    ScenePtr pred(raw);
    Check(svp_scene_set_solver_info(pred.get(), energy, sweeps, a.translation.c_str()),
          "recording diagnostics");
    Check(svp_scene_save(pred.get(), (out / (entry.id + ".json")).string().c_str()),
          "writing prediction for " + entry.id);
    written[k] = {entry.id, entry.id + ".json"};
  });
  WriteManifest(out, written);

  ordered_json config;
  config["subcommand"] = "solve";
  config["scenes"] = a.scenes;
  config["output"] = a.output;
  config["tables"] = a.tables;
  config["seed"] = a.seed;
  a.grid.ToJson(config, "grid-");
  a.scorer.ToJson(config);
  config["max-sweeps"] = a.max_sweeps;
  config["patience"] = a.patience;
  config["escape-candidates"] = a.escape_candidates;
  config["directional"] = a.directional;
  config["translation"] = a.translation;
  config["translation-dir"] = a.translation_dir;
  WriteTextAtomic(out / "run_config.json", Dump(config));
}

// ---- eval

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string output;
  bool sweep = true;
  size_t jobs = 1;
};

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string out;
  for (const std::string& id : ids) out += (out.empty() ? "" : ",") + id;
  return out;
}

void RunEval(EvalArgs a) {
  const fs::path pred_dir(a.pred);
  const fs::path gt_dir(a.gt);
  const std::vector<ManifestEntry> gt_entries = ReadManifest(gt_dir);
  const std::vector<ManifestEntry> pred_entries = ReadManifest(pred_dir);

  std::map<std::string, std::string> pred_files;
  for (const ManifestEntry& e : pred_entries) {
    if (!pred_files.emplace(e.id, e.file).second) {
      Fail(kExitConsistency, "consistency", "duplicate prediction id " + e.id);
    }
  }
  std::set<std::string> gt_ids;
  std::vector<std::string> missing;
  for (const ManifestEntry& e : gt_entries) {
    if (!gt_ids.insert(e.id).second) {
      Fail(kExitConsistency, "consistency", "duplicate ground-truth id " + e.id);
    }
    if (!pred_files.count(e.id)) missing.push_back(e.id);
  }
  std::vector<std::string> unexpected;
  for (const ManifestEntry& e : pred_entries) {
    if (!gt_ids.count(e.id)) unexpected.push_back(e.id);
  }
  if (!missing.empty() || !unexpected.empty()) {
    std::string message = "prediction and ground-truth ids differ";
    if (!missing.empty()) message += "; missing predictions: " + JoinIds(missing);
    if (!unexpected.empty()) message += "; predictions without ground truth: " + JoinIds(unexpected);
    Fail(kExitConsistency, "consistency", message);
  }
  if (gt_entries.empty()) Fail(kExitConsistency, "consistency", "no scenes to evaluate");

  const fs::path out(a.output);
  EnsureDir(out);

  std::vector<ScenePtr> gts(gt_entries.size());
  std::vector<ScenePtr> preds(gt_entries.size());
  ForEachScene(gt_entries.size(), ResolveJobs(a.jobs), [&](size_t k) {
    const ManifestEntry& e = gt_entries[k];
    gts[k] = LoadScene(gt_dir / e.file);
    preds[k] = LoadScene(pred_dir / pred_files.at(e.id));
    if (svp_scene_num_cameras(gts[k].get()) != svp_scene_num_cameras(preds[k].get())) {
      Fail(kExitConsistency, "consistency", "camera count differs for scene " + e.id);
    }
  });

  svp_report_set* raw = nullptr;
  Check(svp_report_set_create(&raw), "creating report");
  ReportSetPtr reports(raw);
  for (size_t k = 0; k < gts.size(); ++k) {
    double sigma = 0.0;
    Check(svp_scene_sigma(gts[k].get(), &sigma), "scene scale of " + gt_entries[k].id);
    Check(svp_report_set_add_evaluation(reports.get(), preds[k].get(), gts[k].get(), sigma),
          "evaluating " + gt_entries[k].id);
  }
  Check(svp_report_set_write_json(reports.get(), (out / "report.json").string().c_str()),
        "writing report.json");
  Check(svp_report_set_write_csv(reports.get(), (out / "report.csv").string().c_str(), 1),
        "writing report.csv");
  if (a.sweep) {
    Check(svp_report_set_write_sweep(reports.get(), (out / "sweep.csv").string().c_str()),
          "writing sweep.csv");
  }

  ordered_json config;
  config["subcommand"] = "eval";
  config["pred"] = a.pred;
  config["gt"] = a.gt;
  config["output"] = a.output;
  config["sweep"] = a.sweep;
  WriteTextAtomic(out / "run_config.json", Dump(config));
}

// ---- report

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::string json_output;
};

// One row per input CSV holding that run's mean, plus a mean-of-means row.
void RunReport(const ReportArgs& a) {
  svp_report_set* raw = nullptr;
  Check(svp_report_set_create(&raw), "creating report");
  ReportSetPtr summary(raw);
  for (const std::string& input : a.inputs) {
    svp_report_set* part_raw = nullptr;
    Check(svp_report_set_create(&part_raw), "creating report");
    ReportSetPtr part(part_raw);
    Check(svp_report_set_load_csv(part.get(), input.c_str()), "reading " + input);
    svp_eval_report mean;
    Check(svp_report_set_mean(part.get(), &mean), "averaging " + input);
    const std::string id = fs::path(input).replace_extension("").generic_string();
    Check(svp_report_set_add(summary.get(), id.c_str(), &mean), "adding " + input);
  }
  EnsureParent(a.output);
  Check(svp_report_set_write_csv(summary.get(), a.output.c_str(), 1), "writing " + a.output);
  if (!a.json_output.empty()) {
    EnsureParent(a.json_output);
    Check(svp_report_set_write_json(summary.get(), a.json_output.c_str()),
          "writing " + a.json_output);
  }
}

void AddJobsOption(CLI::App* app, size_t& jobs) {
  app->add_option("-j,--jobs", jobs, "Scenes processed concurrently (0 = all cores)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera pose recovery from pairwise rotation energies"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", svp_version());

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate synthetic scenes (and energy tables)");
  synth_cmd->add_option("--n", synth.num_cameras, "Cameras per scene")->capture_default_str();
  synth_cmd->add_option("--scenes", synth.scenes, "Number of scenes")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Base seed")->capture_default_str();
  synth_cmd->add_option("-o,--output", synth.output, "Output directory")->required();
  synth_cmd->add_option("--radius-min", synth.radius_min)->capture_default_str();
  synth_cmd->add_option("--radius-max", synth.radius_max)->capture_default_str();
  synth_cmd->add_option("--jitter", synth.jitter, "Max look-at tilt (rad)")->capture_default_str();
  synth_cmd->add_flag("--tables{true},!--no-tables", synth.tables,
                      "Also tabulate synthetic energies into <id>.rpet");
  synth.grid.Add(synth_cmd, "grid-");
  synth.scorer.Add(synth_cmd);
  AddJobsOption(synth_cmd, synth.jobs);
  AddConfigOption(synth_cmd);

  GridArgs grid;
  CLI::App* grid_cmd = app.add_subcommand("grid", "Build an SO(3) grid file");
  grid.grid.Add(grid_cmd, "");
  grid_cmd->add_option("-o,--output", grid.output, "Grid file")->required();

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Recover rotations for every scene");
  solve.app = solve_cmd;
  solve_cmd->add_option("--scenes", solve.scenes, "Scene directory (with manifest.json)")
      ->required();
  solve_cmd->add_option("-o,--output", solve.output, "Prediction directory")->required();
  solve_cmd->add_option("--tables", solve.tables,
                        "Directory of <id>.rpet energy tables; default: synthetic energies");
  solve_cmd->add_option("--solver-config", solve.solver_config, "Solver JSON config");
  solve_cmd->add_option("--seed", solve.seed, "Seed for synthetic energies")->capture_default_str();
  solve.grid.Add(solve_cmd, "grid-");
  solve.scorer.Add(solve_cmd);
  solve_cmd->add_option("--max-sweeps", solve.max_sweeps)->capture_default_str();
  solve_cmd->add_option("--patience", solve.patience)->capture_default_str();
  solve_cmd->add_option("--escape-candidates", solve.escape_candidates,
                        "Escape moves per camera after ascent stalls (0 = off)")
      ->capture_default_str();
  solve_cmd->add_option("--directional", solve.directional, "auto | true | false")
      ->check(CLI::IsMember({"auto", "true", "false"}))
      ->capture_default_str();
  solve_cmd->add_option("--translation", solve.translation, "gt | constant-z | file")
      ->check(CLI::IsMember({"gt", "constant-z", "file"}))
      ->capture_default_str();
  solve_cmd->add_option("--translation-dir", solve.translation_dir,
                        "Pose files supplying translations for --translation file");
  AddJobsOption(solve_cmd, solve.jobs);
  AddConfigOption(solve_cmd);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  eval_cmd->add_option("--pred", eval.pred, "Prediction directory")->required();
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth scene directory")->required();
  eval_cmd->add_option("-o,--output", eval.output, "Report directory")->required();
  eval_cmd->add_flag("--sweep{true},!--no-sweep", eval.sweep, "Write sweep.csv")
      ->capture_default_str();
  AddJobsOption(eval_cmd, eval.jobs);
  AddConfigOption(eval_cmd);

  ReportArgs report;
  CLI::App* report_cmd = app.add_subcommand("report", "Aggregate report CSVs from several runs");
  report_cmd->add_option("inputs", report.inputs, "report.csv files")->required();
  report_cmd->add_option("-o,--output", report.output, "Summary CSV")->required();
  report_cmd->add_option("--json", report.json_output, "Also write the summary as JSON");

  try {
    std::vector<std::string> args = ExpandRunConfig(app, std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    const bool io = dynamic_cast<const CLI::FileError*>(&e) != nullptr;
    PrintError({io ? kExitIo : kExitOther, io ? "io" : "usage", e.what()});
    return io ? kExitIo : kExitOther;
  } catch (const CliError& e) {
    PrintError(e);
    return e.exit_code;
  }

  try {
    if (synth_cmd->parsed()) RunSynth(synth);
    if (grid_cmd->parsed()) RunGrid(grid);
    if (solve_cmd->parsed()) RunSolve(solve);
    if (eval_cmd->parsed()) RunEval(eval);
    if (report_cmd->parsed()) RunReport(report);
  } catch (const CliError& e) {
    PrintError(e);
    return e.exit_code;
  } catch (const std::exception& e) {
    PrintError({kExitOther, "internal", e.what()});
    return kExitOther;
  }
  return kExitOk;
}
