// jvmd: command-line front end for decomposition, benchmarks and data generation.
//
// Exit codes: 0 success, 1 runtime failure (I/O, format, divergence),
// 2 finished without converging (results still written), 64 usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jvmd/jvmd_all.hpp"

#ifndef JVMD_VERSION_TOKEN
#define JVMD_VERSION_TOKEN "unknown"
#endif

namespace fs = std::filesystem;
namespace b = jvmd::bench;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitUsage = 64;

// Bumped whenever a CSV header below changes.
constexpr int kCsvSchemaVersion = 1;
constexpr const char* kModesHeader = "sample,time_s,mode_0,...";
constexpr const char* kPsdHeader = "mode,bin,frequency_hz,power_db";
constexpr const char* kKappaHeader = "iteration,kappa";
constexpr const char* kToneHeader = "algo,snr_db,mean_eta,std_eta,trials";
constexpr const char* kSeiHeader = "algo,m,snr_db,accuracy,correct,total";
constexpr const char* kComplexityHeader = "k,m,jvmd_us_per_iter,repeated_vmd_us_per_iter,ratio";
constexpr const char* kFitHeader = "k,jvmd_slope,repeated_vmd_slope";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string iso8601_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("JVMD_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "jvmd_out";
}

void write_text(const fs::path& path, const std::string& text) {
  jvmd::detail::atomic_write(path, std::vector<char>(text.begin(), text.end()));
}

json manifest(const std::string& subcommand, json config, std::uint64_t seed,
              const json& headers, const std::optional<std::string>& warning) {
  json m;
  m["subcommand"] = subcommand;
  m["config"] = std::move(config);
  m["seed"] = seed;
  m["version"] = JVMD_VERSION_TOKEN;
  m["timestamp"] = iso8601_now();
  m["csv_schema_version"] = kCsvSchemaVersion;
  m["csv_headers"] = headers;
  m["warning"] = warning ? json(*warning) : json(nullptr);
  return m;
}

void write_manifest(const fs::path& dir, const json& m) {
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  return s.str();
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeOptions {
  std::string input;
  std::string algo = "jvmd";
  std::size_t k = 3;
  double alpha = 2000.0;
  std::optional<double> epsilon;
  double tau = 0.0;
  double dual_step = 0.0;
  std::size_t max_iters = 500;
  double tol = 1e-7;
  std::size_t m = 1;
  std::size_t start = 0;
  std::optional<std::string> init;
  std::string lambda_rule = "cube-root";
  std::uint64_t seed = 0;
  double csv_fs = 1.0;
  std::string out;
};

template <typename R>
void write_decomposition(const fs::path& dir, const R& r) {
  const std::size_t l = r.modes.front().size();
  const double fs_hz = r.sample_rate_hz;
  std::string modes = "sample,time_s";
  for (std::size_t k = 0; k < r.modes.size(); ++k) modes += ",mode_" + std::to_string(k);
  modes += "\n";
  for (std::size_t n = 0; n < l; ++n) {
    modes += std::to_string(n) + "," + num(static_cast<double>(n) / fs_hz);
    for (const auto& m : r.modes) modes += "," + num(m[n]);
    modes += "\n";
  }
  write_text(dir / "modes.csv", modes);

  std::string psd = std::string(kPsdHeader) + "\n";
  for (std::size_t k = 0; k < r.mode_spectra.size(); ++k) {
    const auto& s = r.mode_spectra[k];
    for (std::size_t i = 0; i < s.positive_bins(); ++i) {
      const double p = std::norm(s[i]);
      const double db = p > 0.0 ? 10.0 * std::log10(p) : -3000.0;
      psd += std::to_string(k) + "," + std::to_string(i) + "," + num(s.frequency(i) * fs_hz) + "," +
             num(db) + "\n";
    }
  }
  write_text(dir / "psd.csv", psd);

  json om;
  om["omegas_cycles_per_sample"] = r.omegas;
  std::vector<double> hz;
  for (double w : r.omegas) hz.push_back(w * fs_hz);
  om["omegas_hz"] = hz;
  om["iterations"] = r.iterations;
  om["converged"] = r.converged;
  write_text(dir / "omegas.json", om.dump(2) + "\n");

  std::string kappa = std::string(kKappaHeader) + "\n";
  for (std::size_t i = 0; i < r.kappa_history.size(); ++i) {
    kappa += std::to_string(i + 2) + "," + num(r.kappa_history[i]) + "\n";
  }
  write_text(dir / "kappa.csv", kappa);
}

int run_decompose(const DecomposeOptions& o) {
  const auto set = jvmd::load_frames(o.input, o.csv_fs);
  const bool joint = b::parse_algo(o.algo) == b::Algo::jvmd;
  const std::size_t m = joint ? o.m : 1;
  if (o.start + m > set.size()) {
    throw jvmd::InvalidConfig("input has " + std::to_string(set.size()) + " frames; need " +
                              std::to_string(o.start + m));
  }
  const fs::path dir = o.out.empty() ? default_out_dir() : fs::path(o.out);
  fs::create_directories(dir);

  json cfg;
  cfg["input"] = o.input;
  cfg["algo"] = o.algo;
  cfg["k"] = o.k;
  cfg["alpha"] = o.alpha;
  cfg["max_iters"] = o.max_iters;
  cfg["tol"] = o.tol;
  cfg["start"] = o.start;
  cfg["csv_fs"] = o.csv_fs;

  bool converged = false;
  std::uint64_t seed = o.seed;
  if (joint) {
    jvmd::JvmdConfig c;
    c.num_modes = o.k;
    c.alpha = o.alpha;
    c.epsilon = o.epsilon;
    c.max_iters = o.max_iters;
    c.tol = o.tol;
    c.omega_init = jvmd::parse_omega_init(o.init.value_or("zero"));
    c.lambda_rule = jvmd::parse_lambda_rule(o.lambda_rule);
    c.dual_step = o.dual_step;
    c.seed = seed;
    c.validate();
    std::vector<jvmd::RealFrame> frames;
    for (std::size_t j = 0; j < m; ++j) frames.push_back(set[o.start + j].frame);
    const auto r = jvmd::jvmd_decompose(jvmd::FrameBatch(std::move(frames)), c);
    write_decomposition(dir, r);
    converged = r.converged;
    cfg["m"] = m;
    cfg["epsilon"] = c.effective_epsilon();
    cfg["init"] = jvmd::to_string(c.omega_init);
    cfg["lambda_rule"] = jvmd::to_string(c.lambda_rule);
    cfg["dual_step"] = c.dual_step;
  } else {
    jvmd::VmdConfig c;
    c.num_modes = o.k;
    c.alpha = o.alpha;
    c.tau = o.tau;
    c.max_iters = o.max_iters;
    c.tol = o.tol;
    c.omega_init = jvmd::parse_omega_init(o.init.value_or("uniform"));
    c.seed = seed;
    c.validate();
    const auto r = jvmd::vmd_decompose(set[o.start].frame, c);
    write_decomposition(dir, r);
    converged = r.converged;
    cfg["tau"] = c.tau;
    cfg["init"] = jvmd::to_string(c.omega_init);
  }
  std::optional<std::string> warning;
  if (!converged) warning = "did not converge within max_iters";
  json headers;
  headers["modes.csv"] = kModesHeader;
  headers["psd.csv"] = kPsdHeader;
  headers["kappa.csv"] = kKappaHeader;
  write_manifest(dir, manifest("decompose", cfg, seed, headers, warning));
  if (warning) {
    std::cerr << "warning: " << *warning << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tone-bench

struct ToneOptions {
  b::ToneBenchConfig cfg;
  std::vector<std::string> algos{"vmd", "jvmd"};
  std::string vmd_init = "uniform";
  std::string jvmd_init = "zero";
  std::string lambda_rule = "cube-root";
  std::string out;
};

int run_tone(ToneOptions o) {
  o.cfg.algos.clear();
  for (const auto& a : o.algos) o.cfg.algos.push_back(b::parse_algo(a));
  o.cfg.vmd_init = jvmd::parse_omega_init(o.vmd_init);
  o.cfg.jvmd_init = jvmd::parse_omega_init(o.jvmd_init);
  o.cfg.lambda_rule = jvmd::parse_lambda_rule(o.lambda_rule);
  const fs::path dir = o.out.empty() ? default_out_dir() : fs::path(o.out);
  fs::create_directories(dir);

  const auto rows = b::run_tone_bench(o.cfg);
  std::string csv = std::string(kToneHeader) + "\n";
  for (const auto& r : rows) {
    csv += b::to_string(r.algo) + "," + num(r.snr_db) + "," + num(r.mean_eta) + "," +
           num(r.std_eta) + "," + std::to_string(r.trials) + "\n";
  }
  write_text(dir / "tone_bench.csv", csv);

  const auto& c = o.cfg;
  json cfg;
  cfg["snr_grid"] = c.snr_grid;
  cfg["trials"] = c.trials;
  cfg["m"] = c.frames;
  cfg["algos"] = o.algos;
  cfg["length"] = c.length;
  cfg["sample_rate_hz"] = c.sample_rate_hz;
  cfg["alpha"] = c.alpha;
  cfg["tol"] = c.tol;
  cfg["max_iters"] = c.max_iters;
  cfg["epsilon"] = opt_json(c.epsilon);
  cfg["tau"] = c.tau;
  cfg["vmd_init"] = jvmd::to_string(c.vmd_init);
  cfg["jvmd_init"] = jvmd::to_string(c.jvmd_init);
  cfg["lambda_rule"] = jvmd::to_string(c.lambda_rule);
  cfg["vmd_frames_per_trial"] = 1;
  json headers;
  headers["tone_bench.csv"] = kToneHeader;
  write_manifest(dir, manifest("tone-bench", cfg, c.seed, headers, std::nullopt));
  std::cout << csv;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sei-bench

struct SeiOptions {
  b::SeiBenchConfig cfg;
  std::string dataset = "synthetic";
  double csv_fs = 1.0;
  std::vector<std::string> algos{"vmd", "jvmd"};
  std::string lambda_rule = "cube-root";
  std::string init = "uniform";
  std::string out;
};

int run_sei(SeiOptions o) {
  o.cfg.algos.clear();
  for (const auto& a : o.algos) o.cfg.algos.push_back(b::parse_algo(a));
  o.cfg.lambda_rule = jvmd::parse_lambda_rule(o.lambda_rule);
  o.cfg.omega_init = jvmd::parse_omega_init(o.init);
  if (o.dataset != "synthetic") o.cfg.dataset = jvmd::load_frames(o.dataset, o.csv_fs);
  const fs::path dir = o.out.empty() ? default_out_dir() : fs::path(o.out);
  fs::create_directories(dir);

  const auto rows = b::run_sei_bench(o.cfg);
  std::string csv = std::string(kSeiHeader) + "\n";
  json confusion = json::array();
  for (const auto& r : rows) {
    csv += b::to_string(r.algo) + "," + std::to_string(r.frames) + "," + num(r.snr_db) + "," +
           num(r.report.accuracy) + "," + std::to_string(r.report.correct) + "," +
           std::to_string(r.report.total) + "\n";
    json cell;
    cell["algo"] = b::to_string(r.algo);
    cell["m"] = r.frames;
    cell["snr_db"] = r.snr_db;
    cell["classes"] = r.report.classes;
    cell["confusion"] = r.report.confusion;
    cell["accuracy"] = r.report.accuracy;
    confusion.push_back(cell);
  }
  write_text(dir / "sei_accuracy.csv", csv);
  write_text(dir / "confusion.json", confusion.dump(2) + "\n");

  const auto& c = o.cfg;
  json cfg;
  cfg["dataset"] = o.dataset;
  cfg["csv_fs"] = o.csv_fs;
  cfg["classes"] = c.classes;
  cfg["train_per_class"] = c.train_per_class;
  cfg["test_per_class"] = c.test_per_class;
  cfg["m_list"] = c.m_list;
  cfg["snr_grid"] = c.snr_grid;
  cfg["algos"] = o.algos;
  cfg["sparsity"] = c.sparsity;
  cfg["k"] = c.num_modes;
  cfg["bands"] = c.bands;
  cfg["alpha"] = c.alpha;
  cfg["epsilon"] = opt_json(c.epsilon);
  cfg["tol"] = c.tol;
  cfg["max_iters"] = c.max_iters;
  cfg["lambda_rule"] = jvmd::to_string(c.lambda_rule);
  cfg["init"] = jvmd::to_string(c.omega_init);
  cfg["frame_length"] = c.frame_length;
  cfg["separation"] = c.separation;
  json headers;
  headers["sei_accuracy.csv"] = kSeiHeader;
  write_manifest(dir, manifest("sei-bench", cfg, c.seed, headers, std::nullopt));
  std::cout << csv;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// complexity-bench

struct ComplexityOptions {
  b::ComplexityBenchConfig cfg;
  std::string out;
};

int run_complexity(const ComplexityOptions& o) {
  const fs::path dir = o.out.empty() ? default_out_dir() : fs::path(o.out);
  fs::create_directories(dir);
  const auto rep = b::run_complexity_bench(o.cfg);
  std::string csv = std::string(kComplexityHeader) + "\n";
  for (const auto& r : rep.rows) {
    csv += std::to_string(r.modes) + "," + std::to_string(r.frames) + "," +
           num(r.jvmd_us_per_iter) + "," + num(r.repeated_vmd_us_per_iter) + "," +
           num(r.jvmd_us_per_iter / r.repeated_vmd_us_per_iter) + "\n";
  }
  write_text(dir / "complexity.csv", csv);
  std::string fit = std::string(kFitHeader) + "\n";
  for (const auto& f : rep.fits) {
    fit += std::to_string(f.modes) + "," + num(f.jvmd_slope) + "," + num(f.repeated_vmd_slope) + "\n";
  }
  write_text(dir / "complexity_fit.csv", fit);

  json cfg;
  cfg["k_list"] = o.cfg.k_list;
  cfg["m_list"] = o.cfg.m_list;
  cfg["length"] = o.cfg.length;
  cfg["iters"] = o.cfg.iters;
  cfg["repeats"] = o.cfg.repeats;
  json headers;
  headers["complexity.csv"] = kComplexityHeader;
  headers["complexity_fit.csv"] = kFitHeader;
  write_manifest(dir, manifest("complexity-bench", cfg, o.cfg.seed, headers,
                               std::string("timings vary between runs and machines")));
  std::cout << csv << fit;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  std::string kind = "tone";
  std::size_t length = 1500;
  double fs = 1500.0;
  std::size_t frames = 8;
  double snr_db = jvmd::kNoNoise;
  std::uint64_t seed = 1;
  std::size_t classes = 10;
  double separation = 1.5;
  std::string output;
};

int run_generate(const GenerateOptions& o) {
  jvmd::LabeledFrameSet set;
  if (o.kind == "tone") {
    const auto clean = jvmd::tone_mixture(o.length, o.fs);
    for (std::size_t j = 0; j < o.frames; ++j) {
      set.add("tone", jvmd::add_awgn(clean, o.snr_db, jvmd::derive_seed(o.seed, j)));
    }
  } else if (o.kind == "emitters") {
    const auto profiles = b::default_emitter_profiles(o.classes, o.separation);
    const auto msg = b::default_base_message(o.length, o.fs);
    for (std::size_t e = 0; e < profiles.size(); ++e) {
      const auto batch = jvmd::synth_emitter_frames(profiles[e], msg, o.frames, o.snr_db,
                                                    jvmd::derive_seed(o.seed, e));
      for (const auto& f : batch.frames()) set.add(profiles[e].emitter_id, f);
    }
  } else {
    throw jvmd::InvalidConfig("unknown kind '" + o.kind + "' (tone or emitters)");
  }
  const fs::path out(o.output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  if (out.extension() == ".csv") {
    jvmd::write_frames_csv(set, out);
  } else {
    jvmd::write_frames(set, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational mode decomposition (single-frame and joint) with benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", JVMD_VERSION_TOKEN);

  DecomposeOptions dec;
  auto* d = app.add_subcommand("decompose", "Decompose frames from a file");
  d->add_option("input", dec.input, "Frame file (binary, or .csv with one frame per row)")
      ->required()
      ->check(CLI::ExistingFile);
  d->add_option("--algo", dec.algo, "vmd or jvmd")->check(CLI::IsMember({"vmd", "jvmd"}))->capture_default_str();
  d->add_option("--k", dec.k, "Number of modes")->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--alpha", dec.alpha, "Bandwidth penalty")->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--epsilon", dec.epsilon, "Noise weight for jvmd (default 1/alpha)")->check(CLI::PositiveNumber);
  d->add_option("--tau", dec.tau, "Dual step for vmd")->check(CLI::NonNegativeNumber)->capture_default_str();
  d->add_option("--dual-step", dec.dual_step, "Multiplier step for jvmd --lambda-rule dual-ascent")
      ->check(CLI::NonNegativeNumber);
  d->add_option("--max-iters", dec.max_iters, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--tol", dec.tol, "Stopping tolerance on kappa")->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--m", dec.m, "Frames decomposed jointly (jvmd)")->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--start", dec.start, "Index of the first frame used")->capture_default_str();
  d->add_option("--init", dec.init, "zero, uniform or seeded-random (default: uniform for vmd, zero for jvmd)")
      ->check(CLI::IsMember({"zero", "uniform", "seeded-random"}));
  d->add_option("--lambda-rule", dec.lambda_rule, "cube-root or dual-ascent")
      ->check(CLI::IsMember({"cube-root", "dual-ascent"}))
      ->capture_default_str();
  d->add_option("--seed", dec.seed, "Seed for seeded-random init")->capture_default_str();
  d->add_option("--csv-fs", dec.csv_fs, "Sample rate for CSV input")->check(CLI::PositiveNumber);
  d->add_option("--out", dec.out, "Output directory (default $JVMD_OUT_DIR or ./jvmd_out)");

  ToneOptions tone;
  auto* t = app.add_subcommand("tone-bench", "Center-frequency error vs SNR on the three-tone mixture");
  t->add_option("--snr-grid", tone.cfg.snr_grid, "SNR points in dB")->delimiter(',')->capture_default_str();
  t->add_option("--trials", tone.cfg.trials, "Trials per point")->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--m", tone.cfg.frames, "Frames for jvmd")->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--algo-list", tone.algos, "Algorithms")->delimiter(',')->check(CLI::IsMember({"vmd", "jvmd"}));
  t->add_option("--seed", tone.cfg.seed, "Seed")->capture_default_str();
  t->add_option("--alpha", tone.cfg.alpha, "Bandwidth penalty")->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--epsilon", tone.cfg.epsilon, "Noise weight for jvmd (default 1/alpha)")->check(CLI::PositiveNumber);
  t->add_option("--tau", tone.cfg.tau, "Dual step for vmd")->check(CLI::NonNegativeNumber);
  t->add_option("--tol", tone.cfg.tol, "Stopping tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--max-iters", tone.cfg.max_iters, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--vmd-init", tone.vmd_init, "Init for vmd")->check(CLI::IsMember({"zero", "uniform", "seeded-random"}));
  t->add_option("--jvmd-init", tone.jvmd_init, "Init for jvmd")->check(CLI::IsMember({"zero", "uniform", "seeded-random"}));
  t->add_option("--lambda-rule", tone.lambda_rule, "cube-root or dual-ascent")
      ->check(CLI::IsMember({"cube-root", "dual-ascent"}));
  t->add_option("--out", tone.out, "Output directory");

  SeiOptions sei;
  auto* s = app.add_subcommand("sei-bench", "Emitter identification accuracy vs SNR and M");
  s->add_option("--dataset", sei.dataset, "'synthetic' or a frame file")->capture_default_str();
  s->add_option("--csv-fs", sei.csv_fs, "Sample rate for CSV datasets")->check(CLI::PositiveNumber);
  s->add_option("--classes", sei.cfg.classes, "Synthetic emitters")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--train-per-class", sei.cfg.train_per_class, "Training samples per class")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--test-per-class", sei.cfg.test_per_class, "Test samples per class")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--m-list", sei.cfg.m_list, "Frames per jvmd sample")->delimiter(',')->check(CLI::PositiveNumber);
  s->add_option("--snr-grid", sei.cfg.snr_grid, "SNR points in dB")->delimiter(',');
  s->add_option("--algo-list", sei.algos, "Algorithms")->delimiter(',')->check(CLI::IsMember({"vmd", "jvmd"}));
  s->add_option("--sparsity", sei.cfg.sparsity, "OMP atom budget")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--seed", sei.cfg.seed, "Seed")->capture_default_str();
  s->add_option("--k", sei.cfg.num_modes, "Modes per decomposition")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--bands", sei.cfg.bands, "Feature bands per mode")->check(CLI::Range(4, 1 << 20));
  s->add_option("--alpha", sei.cfg.alpha, "Bandwidth penalty")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--epsilon", sei.cfg.epsilon, "Noise weight for jvmd")->check(CLI::PositiveNumber);
  s->add_option("--tol", sei.cfg.tol, "Stopping tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--max-iters", sei.cfg.max_iters, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--lambda-rule", sei.lambda_rule, "cube-root or dual-ascent")
      ->check(CLI::IsMember({"cube-root", "dual-ascent"}));
  s->add_option("--init", sei.init, "Omega init")->check(CLI::IsMember({"zero", "uniform", "seeded-random"}));
  s->add_option("--frame-length", sei.cfg.frame_length, "Synthetic frame length")->check(CLI::PositiveNumber);
  s->add_option("--separation", sei.cfg.separation, "Spread of synthetic impairments")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  s->add_option("--out", sei.out, "Output directory");

  ComplexityOptions cx;
  auto* c = app.add_subcommand("complexity-bench", "Per-iteration time of jvmd vs repeated vmd");
  c->add_option("--k-list", cx.cfg.k_list, "Mode counts")->delimiter(',')->check(CLI::PositiveNumber);
  c->add_option("--m-list", cx.cfg.m_list, "Frame counts")->delimiter(',')->check(CLI::PositiveNumber);
  c->add_option("--l", cx.cfg.length, "Frame length")->check(CLI::PositiveNumber)->capture_default_str();
  c->add_option("--iters", cx.cfg.iters, "Iterations per timed run")->check(CLI::Range(8, 1 << 20))->capture_default_str();
  c->add_option("--repeats", cx.cfg.repeats, "Repeats (median taken)")->check(CLI::PositiveNumber)->capture_default_str();
  c->add_option("--seed", cx.cfg.seed, "Seed")->capture_default_str();
  c->add_option("--out", cx.out, "Output directory");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic frame file");
  g->add_option("kind", gen.kind, "tone or emitters")->required()->check(CLI::IsMember({"tone", "emitters"}));
  g->add_option("output", gen.output, "Destination (.csv for CSV, binary otherwise)")->required();
  g->add_option("--l", gen.length, "Frame length")->capture_default_str();
  g->add_option("--fs", gen.fs, "Sample rate (Hz)")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--m", gen.frames, "Frames (per emitter for 'emitters')")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--snr", gen.snr_db, "SNR in dB (omit for noiseless)");
  g->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  g->add_option("--classes", gen.classes, "Emitters")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--separation", gen.separation, "Spread of impairments")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*d) return run_decompose(dec);
    if (*t) return run_tone(tone);
    if (*s) return run_sei(sei);
    if (*c) return run_complexity(cx);
    if (*g) return run_generate(gen);
  } catch (const jvmd::InvalidConfig& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
