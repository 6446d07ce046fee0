// phaserep command line: synthesize benchmark scenes, fit onset-phase models,
// separate mixtures, and sweep the method grid over a scene directory.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phaserep/io.hpp"
#include "phaserep/pipeline.hpp"
#include "phaserep/unwrap.hpp"
#include "phaserep/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phaserep;

namespace {

std::string out_dir_default() {
  const char* env = std::getenv("PHASEREP_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : ".";
}

SceneKind parse_kind(const std::string& name) {
  if (name == "disjoint") return SceneKind::disjoint;
  if (name == "overlapped") return SceneKind::overlapped;
  if (name == "three") return SceneKind::three_source;
  throw CLI::ValidationError("--kind", "expected disjoint, overlapped, or three");
}

// Config-file keys mirror the long option names; explicitly passed options win.
void apply_config(const CLI::App& app, const std::string& path, double* sigma,
                  std::size_t* iterations, double* threshold, std::size_t* min_gap) {
  const auto cfg = read_config(path);
  const auto take = [&](const char* key, auto* slot) {
    if (slot == nullptr) return;
    const auto it = cfg.find(key);
    if (it == cfg.end()) return;
    const CLI::Option* opt = app.get_option_no_throw(std::string("--") + key);
    if (opt != nullptr && opt->count() > 0) return;  // flag beats file
    std::istringstream in(it->second);
    in >> *slot;
    require(!in.fail(), std::string("config: bad value for ") + key);
  };
  take("sigma", sigma);
  take("iterations", iterations);
  take("threshold", threshold);
  take("min-gap", min_gap);
}

json scene_sidecar(const Scene& scene, std::uint64_t seed,
                   const std::vector<std::string>& source_files) {
  json j;
  j["kind"] = scene.kind == SceneKind::disjoint      ? "disjoint"
              : scene.kind == SceneKind::overlapped ? "overlapped"
                                                    : "three";
  j["seed"] = seed;
  j["sample_rate"] = scene.cfg.sample_rate;
  j["window"] = scene.cfg.window;
  j["hop"] = scene.cfg.hop;
  j["bins"] = scene.cfg.bins;
  j["onset_frames"] = scene.onset_frames;
  j["sources"] = source_files;
  json notes = json::array();
  for (const SceneNote& n : scene.notes)
    notes.push_back({{"source", n.source},
                     {"onset", n.onset_index},
                     {"sample", n.sample},
                     {"gain", n.gain}});
  j["notes"] = notes;
  return j;
}

int cmd_synth(const std::string& kind_name, std::uint64_t seed, const std::string& out_dir) {
  const SceneKind kind = parse_kind(kind_name);
  const Scene scene = make_scene(kind, seed);
  fs::create_directories(out_dir);

  write_wav(out_dir + "/mixture.wav", scene.mixture, scene.cfg.sample_rate);
  std::vector<std::string> source_files;
  for (std::size_t k = 0; k < scene.sources.size(); ++k) {
    const std::string name = "source_" + std::to_string(k) + ".wav";
    write_wav(out_dir + "/" + name, scene.sources[k], scene.cfg.sample_rate);
    source_files.push_back(name);
  }
  write_onset_list(out_dir + "/onsets.txt", scene.onset_frames);
  write_text_file(out_dir + "/scene.json",
                  scene_sidecar(scene, seed, source_files).dump(2) + "\n");
  std::cout << "wrote " << kind_name << " scene (" << scene.sources.size() << " sources, "
            << scene.onset_frames.size() << " onsets) to " << out_dir << "\n";
  return 0;
}

SeparationInput load_input(const std::string& mixture_path,
                           const std::vector<std::string>& source_paths,
                           const std::string& onsets_path, const OnsetConfig& onset_cfg) {
  SeparationInput in;
  const WavData mix = read_wav(mixture_path);
  in.mixture = mix.samples;
  in.cfg.sample_rate = mix.sample_rate;
  in.onset_cfg = onset_cfg;
  for (const std::string& p : source_paths) {
    const WavData s = read_wav(p);
    require(s.sample_rate == mix.sample_rate, "sample rate mismatch: " + p);
    require(s.samples.size() == in.mixture.size(), "length mismatch: " + p);
    in.references.push_back(s.samples);
  }
  if (!onsets_path.empty()) in.onset_frames = read_onset_list(onsets_path);
  return in;
}

int cmd_estimate(const SeparationInput& in, const std::string& mode_name,
                 const EstimationConfig& cfg, const std::string& out_dir) {
  const Spectrogram mix = stft(in.mixture, in.cfg);
  std::vector<std::size_t> frames = in.onset_frames;
  if (frames.empty()) frames = detect_onsets(mix, in.onset_cfg);
  require(!frames.empty(), "no onsets found in the mixture");

  const OnsetMatrix y = extract_onset_matrix(mix, frames);
  std::vector<Mat<double>> onset_mags;
  for (const auto& r : in.references)
    onset_mags.push_back(gather_columns(magnitudes(stft(r, in.cfg)), frames));

  const PhaseParams init = default_init(y, std::move(onset_mags));
  const EstimationResult res = mode_name == "strict" ? run_strict(y, init, cfg)
                                                     : run_relaxed(y, init, cfg);

  fs::create_directories(out_dir);
  write_params(out_dir + "/params.txt", res.params);
  write_text_file(out_dir + "/cost_trace.csv", cost_trace_csv(res.cost_trace));
  write_onset_list(out_dir + "/onsets.txt", frames);
  std::cout << "fit " << res.params.sources() << " sources at " << frames.size()
            << " onsets; final cost " << format_double(res.cost_trace.back()) << "\n";
  return 0;
}

int cmd_separate(const SeparationInput& in, const std::string& method,
                 const EstimationConfig& cfg, const std::string& mode_name,
                 const std::string& dataset, const std::string& out_dir) {
  SeparationOutput out;
  if (method == "mask") {
    out = separate_mask(in);
  } else if (method == "unwrap") {
    const EstimationMode mode =
        mode_name == "strict" ? EstimationMode::strict : EstimationMode::relaxed;
    out = separate_unwrap(in, cfg, mode);
  } else {
    throw CLI::ValidationError("--method", "expected mask or unwrap");
  }

  fs::create_directories(out_dir);
  std::vector<ScoreRow> rows;
  for (std::size_t k = 0; k < out.estimates.size(); ++k) {
    write_wav(out_dir + "/estimate_" + std::to_string(k) + ".wav", out.estimates[k],
              in.cfg.sample_rate);
    rows.push_back({dataset, method, k, out.scores[k]});
  }
  write_text_file(out_dir + "/scores.csv", scores_csv(rows));
  if (!out.cost_trace.empty())
    write_text_file(out_dir + "/cost_trace.csv", cost_trace_csv(out.cost_trace));
  for (const ScoreRow& r : rows)
    std::cout << r.method << " source " << r.source << ": sdr " << format_double(r.scores.sdr)
              << " sir " << format_double(r.scores.sir) << " sar "
              << format_double(r.scores.sar) << "\n";
  return 0;
}

// A bench directory holds scene subdirectories as written by `synth`.
int cmd_bench(const std::string& dir, std::size_t iterations, const std::string& out_path) {
  std::vector<fs::path> scene_dirs;
  require(fs::is_directory(dir), "bench: not a directory: " + dir);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory() && fs::exists(entry.path() / "mixture.wav"))
      scene_dirs.push_back(entry.path());
  std::sort(scene_dirs.begin(), scene_dirs.end());
  require(!scene_dirs.empty(), "bench: no scene directories under " + dir);

  const std::vector<double> sigma_grid = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  std::vector<ScoreRow> rows;
  for (const fs::path& sd : scene_dirs) {
    const std::string sidecar = (sd / "scene.json").string();
    require(fs::exists(sidecar), "bench: missing scene.json in " + sd.string());
    const json meta = json::parse(read_text_file(sidecar));
    std::vector<std::string> source_paths;
    for (const auto& name : meta.at("sources"))
      source_paths.push_back((sd / name.get<std::string>()).string());
    require(!source_paths.empty(), "bench: scene.json lists no sources in " + sd.string());

    SeparationInput in =
        load_input((sd / "mixture.wav").string(), source_paths, (sd / "onsets.txt").string(),
                   OnsetConfig{});
    const std::string dataset = sd.filename().string();

    const SeparationOutput mask = separate_mask(in);
    for (std::size_t k = 0; k < mask.scores.size(); ++k)
      rows.push_back({dataset, "mask", k, mask.scores[k]});

    EstimationConfig cfg;
    cfg.iterations = iterations;
    for (const std::string mode : {"strict", "relaxed"}) {
      for (double sigma : sigma_grid) {
        cfg.sigma = sigma;
        const SeparationOutput out = separate_unwrap(
            in, cfg, mode == "strict" ? EstimationMode::strict : EstimationMode::relaxed);
        for (std::size_t k = 0; k < out.scores.size(); ++k)
          rows.push_back({dataset, mode + "-s" + format_double(sigma), k, out.scores[k]});
        if (mode == "strict") break;  // sigma does not enter the strict path
      }
    }
  }
  write_text_file(out_path, scores_csv(rows));
  std::cout << "wrote " << rows.size() << " score rows to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"onset-phase modeling and source separation toolkit"};
  app.require_subcommand(1);

  std::string out_dir = out_dir_default();
  std::string config_path;
  double sigma = 0.2;
  std::size_t iterations = 100;
  double threshold = 0.3;
  std::size_t min_gap = 4;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory (default: $PHASEREP_OUT_DIR or .)");
    sub->add_option("--config", config_path, "key=value config file");
  };
  const auto add_estimation = [&](CLI::App* sub) {
    sub->add_option("--sigma", sigma, "onset-phase pull weight (relaxed mode)");
    sub->add_option("--iterations", iterations, "coordinate sweeps");
    sub->add_option("--threshold", threshold, "onset flux threshold, relative");
    sub->add_option("--min-gap", min_gap, "minimum frames between onsets");
  };

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic scene");
  std::string kind = "disjoint";
  std::uint64_t seed = 1;
  synth->add_option("--kind", kind, "disjoint | overlapped | three");
  synth->add_option("--seed", seed, "scene seed");
  add_common(synth);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "fit onset phases to a mixture");
  std::string mixture_path, onsets_path, mode = "relaxed";
  std::vector<std::string> source_paths;
  estimate->add_option("--mixture", mixture_path, "mixture wav")->required();
  estimate->add_option("--source", source_paths, "reference wav (repeat per source)")
      ->required();
  estimate->add_option("--onsets", onsets_path, "onset list (default: detect)");
  estimate->add_option("--mode", mode, "strict | relaxed");
  add_estimation(estimate);
  add_common(estimate);

  // separate
  auto* separate = app.add_subcommand("separate", "split a mixture into sources");
  std::string method = "unwrap", dataset = "scene";
  separate->add_option("--mixture", mixture_path, "mixture wav")->required();
  separate->add_option("--source", source_paths, "reference wav (repeat per source)")
      ->required();
  separate->add_option("--onsets", onsets_path, "onset list (default: detect)");
  separate->add_option("--method", method, "mask | unwrap");
  separate->add_option("--mode", mode, "strict | relaxed (unwrap only)");
  separate->add_option("--dataset", dataset, "dataset label for scores.csv");
  add_estimation(separate);
  add_common(separate);

  // bench
  auto* bench = app.add_subcommand("bench", "score every method over a scene directory");
  std::string bench_dir;
  bench->add_option("--dir", bench_dir, "directory of synth outputs")->required();
  bench->add_option("--iterations", iterations, "coordinate sweeps");
  bench->add_option("--out", out_dir, "output csv path (default: <dir>/bench.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty())
      apply_config(*sub, config_path, &sigma, &iterations, &threshold, &min_gap);
    if (mode != "strict" && mode != "relaxed")
      throw CLI::ValidationError("--mode", "expected strict or relaxed");
    if (mode == "strict" && sub->count("--sigma") > 0)
      std::cerr << "warning: --sigma has no effect in strict mode\n";

    EstimationConfig cfg;
    cfg.sigma = sigma;
    cfg.iterations = iterations;
    OnsetConfig onset_cfg;
    onset_cfg.threshold = threshold;
    onset_cfg.min_gap = min_gap;

    if (sub == synth) return cmd_synth(kind, seed, out_dir);
    if (sub == estimate)
      return cmd_estimate(load_input(mixture_path, source_paths, onsets_path, onset_cfg),
                          mode, cfg, out_dir);
    if (sub == separate)
      return cmd_separate(load_input(mixture_path, source_paths, onsets_path, onset_cfg),
                          method, cfg, mode, dataset, out_dir);
    if (sub == bench) {
      const std::string out_path =
          bench->count("--out") > 0 ? out_dir : bench_dir + "/bench.csv";
      return cmd_bench(bench_dir, iterations, out_path);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
