// sqkit: deterministic sound-quality workflows from the command line.
//
// Verbs: synth, analyze, dataset, train, eval, pca, repro.
// Exit codes: 0 success, 2 usage/parameter error, 3 I/O error,
// 4 dataset/model mismatch.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqkit/sqkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sqkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitMismatch = 4;

std::string join_command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

StimulusClass parse_class(std::string name) {
  for (char& c : name) {
    if (c == '-') c = '_';
  }
  return class_from_name(name);
}

/// Pinned analysis configuration, echoed in manifests and hashed into every
/// metric record.
json analysis_params() {
  return {
      {"welch", {{"segment", kWelchSegment}, {"overlap", kWelchOverlap}, {"window", "hann"}}},
      {"bark_bands", kBarkBands},
      {"loudness_ref_dbfs", kLoudnessRefDbfs},
      {"specific_loudness_exponent", kSpecificLoudnessExponent},
      {"sharpness_knee_bark", kSharpnessKnee},
      {"roughness_band_hz", {kRoughnessBandLo, kRoughnessBandHi}},
      {"fluctuation_cutoff_hz", kFluctuationCutoff},
      {"tonal_smoothing_bark", kTonalSmoothingBark},
      {"tonal_threshold_db", kTonalProminenceThresholdDb},
      {"tonal_delta_l_ref_db", kTonalDeltaLRefDb},
      {"filter_order", kFilterOrder},
      {"interior_trim_fraction", kInteriorTrimFraction},
  };
}

std::string analysis_params_hash() {
  return fnv1a64_hex(analysis_params().dump());
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  fs::path p(path);
  p.replace_extension(ext);
  return p.string();
}

std::string manifest_path_for(const std::string& primary_output) {
  fs::path p(primary_output);
  return (p.parent_path() / (p.stem().string() + ".manifest.json")).string();
}

json spec_to_json(const StimulusSpec& spec) {
  json j;
  j["class"] = class_name(spec.class_label);
  j["seed"] = spec.seed;
  j["duration_s"] = spec.duration_s;
  j["sample_rate"] = spec.sample_rate;
  if (const auto* p = std::get_if<EngineBoomParams>(&spec.params)) {
    j["params"] = {{"f0_hz", p->f0_hz},
                   {"n_harmonics", p->n_harmonics},
                   {"harmonic_rolloff_db", p->harmonic_rolloff_db},
                   {"mod_freq_hz", p->mod_freq_hz},
                   {"mod_depth", p->mod_depth}};
  } else if (const auto* p = std::get_if<WindWhistleParams>(&spec.params)) {
    j["params"] = {{"tone_freq_hz", p->tone_freq_hz},
                   {"tone_level_dbfs", p->tone_level_dbfs},
                   {"noise_level_dbfs", p->noise_level_dbfs}};
  } else if (const auto* p = std::get_if<RoadNoiseParams>(&spec.params)) {
    j["params"] = {{"cutoff_hz", p->cutoff_hz}, {"level_dbfs", p->level_dbfs}};
  }
  j["level_conventions"] = {{"tone", "peak amplitude dBFS"}, {"noise", "RMS dBFS"}};
  return j;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::string cls;
  std::uint64_t seed = 0;
  std::string out = "stimulus.wav";
  double duration = kDefaultStimulusDuration;
  int rate = kCanonicalSampleRate;
  std::optional<double> f0, mod_freq, mod_depth, rolloff;
  std::optional<int> harmonics;
  std::optional<double> tone_freq, tone_level, noise_level;
  std::optional<double> cutoff, level;
};

int run_synth(const SynthArgs& a, const std::string& command_line) {
  StimulusSpec spec = jittered_spec(parse_class(a.cls), a.seed, 0);
  spec.duration_s = a.duration;
  spec.sample_rate = a.rate;

  if (auto* p = std::get_if<EngineBoomParams>(&spec.params)) {
    if (a.f0) p->f0_hz = *a.f0;
    if (a.harmonics) p->n_harmonics = *a.harmonics;
    if (a.rolloff) p->harmonic_rolloff_db = *a.rolloff;
    if (a.mod_freq) p->mod_freq_hz = *a.mod_freq;
    if (a.mod_depth) p->mod_depth = *a.mod_depth;
  } else if (auto* p = std::get_if<WindWhistleParams>(&spec.params)) {
    if (a.tone_freq) p->tone_freq_hz = *a.tone_freq;
    if (a.tone_level) p->tone_level_dbfs = *a.tone_level;
    if (a.noise_level) p->noise_level_dbfs = *a.noise_level;
  } else if (auto* p = std::get_if<RoadNoiseParams>(&spec.params)) {
    if (a.cutoff) p->cutoff_hz = *a.cutoff;
    if (a.level) p->level_dbfs = *a.level;
  }

  const Signal signal = synth(spec);
  write_wav(signal, a.out);
  const std::string sidecar = replace_extension(a.out, ".json");
  write_text_file(sidecar, spec_to_json(spec).dump(2) + "\n");

  RunManifest manifest(command_line);
  manifest.set_param("spec", spec_to_json(spec));
  manifest.add_output(a.out);
  manifest.add_output(sidecar);
  manifest.write(manifest_path_for(a.out));

  std::cout << "wrote " << a.out << " (" << signal.samples.size() << " samples @ "
            << signal.sample_rate << " Hz)\n";
  return kExitOk;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string input;
  std::string format = "json";
  std::string out;
  double s0 = 0.0, r0 = 0.0, f0 = 0.0;
};

json metric_record(const std::string& name, const MetricValue& m, const std::string& hash) {
  return {{"metric", name},
          {"value", m.value},
          {"unit", m.unit},
          {"variant", m.variant},
          {"params_hash", hash}};
}

int run_analyze(const AnalyzeArgs& a, const std::string& command_line) {
  Signal signal;
  try {
    if (a.input == "-") {
      std::ostringstream buffer;
      buffer << std::cin.rdbuf();
      std::istringstream stream(buffer.str());
      signal = read_wav(stream);
    } else {
      signal = read_wav(a.input);
    }
  } catch (const IoError& e) {
    // Unreadable input is a usage error for analyze; exit 3 stays reserved
    // for output failures.
    throw ParamError(std::string("analyze: ") + e.what());
  }

  const AnnoyanceThresholds th{a.s0, a.r0, a.f0};
  const FeatureVector fv = analyze_all(signal, th);
  const MetricValue rms_metric = loudness_rms(signal);
  const auto lufs_metric = lufs_integrated(signal);

  const std::string hash = analysis_params_hash();
  json records = json::array();
  records.push_back(metric_record("loudness_rms", rms_metric, hash));
  records.push_back(metric_record("loudness", {fv.n, "sone-proxy", "bark24-powerlaw023"}, hash));
  if (lufs_metric) {
    records.push_back(metric_record("lufs_integrated", *lufs_metric, hash));
  } else {
    json r = metric_record("lufs_integrated", {0.0, "LUFS", "bs1770-integrated"}, hash);
    r["value"] = nullptr;  // fully gated out: undefined loudness
    records.push_back(r);
  }
  records.push_back(
      metric_record("sharpness", {fv.s, "acum-proxy", "bark-weighted-centroid"}, hash));
  records.push_back(
      metric_record("roughness", {fv.r, "asper-proxy", "envelope-bandpass-15-300"}, hash));
  records.push_back(metric_record(
      "fluctuation_strength", {fv.f, "vacil-proxy", "envelope-lowpass-20-variance"}, hash));
  records.push_back(metric_record("tonality", {fv.t, "tonality-units", "psd-prominence-db"}, hash));
  records.push_back(metric_record("annoyance", {fv.pa, "pa-units", "zwicker-pa"}, hash));

  std::string rendered;
  if (a.format == "json") {
    json out;
    out["source"] = a.input;
    out["sample_rate"] = signal.sample_rate;
    out["duration_s"] = signal.duration_s();
    out["thresholds"] = {{"s0", th.s0}, {"r0", th.r0}, {"f0", th.f0}};
    out["metrics"] = records;
    rendered = out.dump(2) + "\n";
  } else if (a.format == "csv") {
    rendered = "metric,value,unit,variant,params_hash\n";
    for (const auto& r : records) {
      const std::string value =
          r.at("value").is_null() ? "" : format_double(r.at("value").get<double>());
      rendered += csv_row({r.at("metric").get<std::string>(), value,
                           r.at("unit").get<std::string>(), r.at("variant").get<std::string>(),
                           r.at("params_hash").get<std::string>()});
    }
  } else {
    throw ParamError("analyze: unknown format '" + a.format + "'");
  }

  if (a.out.empty()) {
    std::cout << rendered;
  } else {
    write_text_file(a.out, rendered);
    RunManifest manifest(command_line);
    manifest.set_param("analysis", analysis_params());
    manifest.set_param("thresholds", {{"s0", th.s0}, {"r0", th.r0}, {"f0", th.f0}});
    manifest.set_param("input", a.input);
    manifest.add_output(a.out);
    manifest.write(manifest_path_for(a.out));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- dataset

struct DatasetArgs {
  std::size_t n = kDefaultPerClass;
  std::uint64_t seed = kDefaultBaseSeed;
  double s0 = 0.0, r0 = 0.0, f0 = 0.0;
  std::string prefix = "dataset";
};

int run_dataset(const DatasetArgs& a, const std::string& command_line) {
  const AnnoyanceThresholds th{a.s0, a.r0, a.f0};
  const Dataset ds = build_dataset(a.n, a.seed, th);

  const std::string csv_path = a.prefix + ".csv";
  const std::string sidecar_path = a.prefix + ".json";
  save_dataset(ds, csv_path, sidecar_path);

  RunManifest manifest(command_line);
  manifest.set_param("n_per_class", a.n);
  manifest.set_param("base_seed", a.seed);
  manifest.set_param("thresholds", {{"s0", th.s0}, {"r0", th.r0}, {"f0", th.f0}});
  manifest.set_param("train_fraction", kTrainFraction);
  manifest.set_param("analysis", analysis_params());
  manifest.add_output(csv_path);
  manifest.add_output(sidecar_path);
  manifest.write(a.prefix + ".manifest.json");

  std::cout << "wrote " << csv_path << " (" << ds.rows.size() << " rows, "
            << ds.split.train.size() << " train / " << ds.split.test.size() << " test)\n";
  return kExitOk;
}

Dataset load_dataset_artifact(const std::string& prefix) {
  return load_dataset(prefix + ".csv", prefix + ".json");
}

// ------------------------------------------------------------------ train

struct TrainArgs {
  std::string kind;
  std::string dataset_prefix;
  std::string out = "model.json";
  // forest
  std::size_t trees = 100;
  std::size_t mtry = 2;
  bool no_bootstrap = false;
  std::uint64_t seed = 123;
  // logreg
  double lr = 0.1;
  std::size_t iters = 2000;
  double l2 = 1e-3;
  // svm
  std::size_t epochs = 200;
  double lambda = 1e-3;
};

int run_train(const TrainArgs& a, const std::string& command_line) {
  const Dataset ds = load_dataset_artifact(a.dataset_prefix);

  TrainedModel model;
  json hyper;
  if (a.kind == "logreg") {
    LogRegOptions opts{a.lr, a.iters, a.l2};
    model = train_logreg(ds, opts);
    hyper = {{"learning_rate", a.lr}, {"iterations", a.iters}, {"l2", a.l2}};
  } else if (a.kind == "rf" || a.kind == "random-forest") {
    ForestOptions opts;
    opts.n_trees = a.trees;
    opts.mtry = a.mtry;
    opts.bootstrap = !a.no_bootstrap;
    opts.seed = a.seed;
    model = train_random_forest(ds, opts);
    hyper = {{"n_trees", a.trees},
             {"mtry", a.mtry},
             {"bootstrap", !a.no_bootstrap},
             {"seed", a.seed}};
  } else if (a.kind == "svm") {
    SvmOptions opts{a.epochs, a.lambda, a.seed};
    model = train_svm(ds, opts);
    hyper = {{"epochs", a.epochs}, {"lambda", a.lambda}, {"seed", a.seed}};
  } else {
    throw ParamError("train: unknown model kind '" + a.kind + "' (logreg|rf|svm)");
  }

  save_model(model, a.out);

  RunManifest manifest(command_line);
  manifest.set_param("kind", model.kind);
  manifest.set_param("hyperparameters", hyper);
  manifest.set_param("dataset", a.dataset_prefix);
  manifest.set_param("dataset_fingerprint", model.dataset_fp);
  manifest.add_output(a.out);
  manifest.write(manifest_path_for(a.out));

  std::cout << "trained " << model.kind << " on " << ds.split.train.size() << " rows -> "
            << a.out << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string model_path;
  std::string dataset_prefix;
  std::string out = "eval_report.json";
  std::string confusion_csv;
};

std::string confusion_to_csv(const EvalReport& report) {
  std::string csv = "true\\predicted,engine_boom,wind_whistle,road_noise\n";
  const char* names[3] = {"engine_boom", "wind_whistle", "road_noise"};
  for (std::size_t r = 0; r < 3; ++r) {
    std::vector<std::string> fields{names[r]};
    for (std::size_t c = 0; c < 3; ++c) fields.push_back(std::to_string(report.confusion[r][c]));
    csv += csv_row(fields);
  }
  return csv;
}

int run_eval(const EvalArgs& a, const std::string& command_line) {
  const Dataset ds = load_dataset_artifact(a.dataset_prefix);
  const TrainedModel model = load_model(a.model_path);
  const EvalReport report = evaluate(model, ds);

  write_text_file(a.out, report_to_json(report).dump(2) + "\n");
  const std::string confusion_path =
      a.confusion_csv.empty() ? replace_extension(a.out, "") + "_confusion.csv" : a.confusion_csv;
  write_text_file(confusion_path, confusion_to_csv(report));

  RunManifest manifest(command_line);
  manifest.set_param("model", a.model_path);
  manifest.set_param("dataset", a.dataset_prefix);
  manifest.set_param("accuracy", report.accuracy);
  if (report.spearman_pa) manifest.set_param("spearman_pa", *report.spearman_pa);
  manifest.add_output(a.out);
  manifest.add_output(confusion_path);
  manifest.write(manifest_path_for(a.out));

  std::printf("accuracy %.2f\n", report.accuracy);
  if (report.spearman_pa) std::printf("spearman_pa %.4f\n", *report.spearman_pa);
  return kExitOk;
}

// -------------------------------------------------------------------- pca

struct PcaArgs {
  std::string dataset_prefix;
  std::size_t components = 2;
  std::string out = "pca_scatter.csv";
  std::string model_out;
};

int run_pca(const PcaArgs& a, const std::string& command_line) {
  const Dataset ds = load_dataset_artifact(a.dataset_prefix);
  const auto features = standardized_features(ds);

  Matrix train_rows;
  for (std::size_t idx : ds.split.train) {
    train_rows.emplace_back(features[idx].begin(), features[idx].end());
  }
  const PcaModel model = pca_fit(train_rows, a.components);

  std::string csv;
  for (std::size_t c = 0; c < a.components; ++c) csv += (c ? ",pc" : "pc") + std::to_string(c + 1);
  csv += ",label\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::vector<double> row(features[i].begin(), features[i].end());
    const auto projected = pca_project(model, row);
    std::vector<std::string> fields;
    for (double v : projected) fields.push_back(format_double(v));
    fields.push_back(class_name(ds.labels[i]));
    csv += csv_row(fields);
  }
  write_text_file(a.out, csv);

  json model_json = {{"components", model.components},
                     {"explained_variance", model.explained_variance},
                     {"explained_fraction", model.explained_fraction},
                     {"mean", model.mean},
                     {"informative", model.informative}};
  const std::string model_path =
      a.model_out.empty() ? replace_extension(a.out, "") + "_components.json" : a.model_out;
  write_text_file(model_path, model_json.dump(2) + "\n");

  RunManifest manifest(command_line);
  manifest.set_param("dataset", a.dataset_prefix);
  manifest.set_param("components", a.components);
  manifest.set_param("explained_fraction", model.explained_fraction);
  manifest.add_output(a.out);
  manifest.add_output(model_path);
  manifest.write(manifest_path_for(a.out));

  double explained = 0.0;
  for (double f : model.explained_fraction) explained += f;
  std::printf("explained variance fraction %.4f with %zu components\n", explained, a.components);
  return kExitOk;
}

// ------------------------------------------------------------------ repro

struct ReproArgs {
  std::string out_dir;
  std::size_t n = kDefaultPerClass;
  std::uint64_t seed = kDefaultBaseSeed;
};

void write_waveform_csv_svg(const Signal& s, const std::string& base, const std::string& title,
                            RunManifest& manifest) {
  const std::size_t stride = std::max<std::size_t>(1, s.samples.size() / 3000);
  std::string csv = "t_s,amplitude\n";
  SvgSeries series;
  series.label = title;
  for (std::size_t i = 0; i < s.samples.size(); i += stride) {
    const double t = static_cast<double>(i) / s.sample_rate;
    csv += csv_row({format_double(t), format_double(s.samples[i])});
    series.points.emplace_back(t, s.samples[i]);
  }
  write_text_file(base + ".csv", csv);
  write_text_file(base + ".svg", svg_chart(title, "time [s]", "amplitude", {series}));
  manifest.add_output(base + ".csv", fs::path(base + ".csv").filename().string());
  manifest.add_output(base + ".svg", fs::path(base + ".svg").filename().string());
}

int run_repro(const ReproArgs& a, const std::string& command_line) {
  fs::create_directories(a.out_dir);
  const auto path_in = [&](const std::string& name) {
    return (fs::path(a.out_dir) / name).string();
  };

  RunManifest manifest(command_line);
  manifest.set_param("n_per_class", a.n);
  manifest.set_param("base_seed", a.seed);
  manifest.set_param("analysis", analysis_params());
  const auto record = [&manifest](const std::string& full) {
    manifest.add_output(full, fs::path(full).filename().string());
  };

  // Showcase stimuli: item 0 of each class stream, as in the dataset.
  const char* cases[3] = {"engine_boom", "wind_whistle", "road_noise"};
  std::vector<Signal> showcase;
  for (int c = 0; c < 3; ++c) {
    const StimulusSpec spec =
        jittered_spec(static_cast<StimulusClass>(c), a.seed, static_cast<std::uint64_t>(c) * a.n);
    showcase.push_back(synth(spec));
    write_waveform_csv_svg(showcase.back(), path_in(std::string("waveform_") + cases[c]),
                           std::string("waveform: ") + cases[c], manifest);
  }

  // Per-case metric summary.
  {
    std::string csv = "case,n,s,r,f,t,pa,lufs,rms\n";
    std::vector<std::vector<std::string>> table_rows;
    for (int c = 0; c < 3; ++c) {
      const FeatureVector fv = analyze_all(showcase[static_cast<std::size_t>(c)]);
      const auto lufs = lufs_integrated_value(showcase[static_cast<std::size_t>(c)]);
      const double rms_v = loudness_rms(showcase[static_cast<std::size_t>(c)]).value;
      std::vector<std::string> fields{cases[c],
                                      format_double(fv.n),
                                      format_double(fv.s),
                                      format_double(fv.r),
                                      format_double(fv.f),
                                      format_double(fv.t),
                                      format_double(fv.pa),
                                      lufs ? format_double(*lufs) : "",
                                      format_double(rms_v)};
      csv += csv_row(fields);
      table_rows.push_back(fields);
    }
    write_text_file(path_in("metrics_summary.csv"), csv);
    write_text_file(path_in("metrics_summary.svg"),
                    svg_table("psychoacoustic metrics by case",
                              {"case", "N", "S", "R", "F", "T", "PA", "LUFS", "RMS"}, table_rows));
    record(path_in("metrics_summary.csv"));
    record(path_in("metrics_summary.svg"));
  }

  // Dataset, PCA scatter, random-forest confusion.
  const Dataset ds = build_dataset(a.n, a.seed);
  const auto features = standardized_features(ds);
  {
    Matrix train_rows;
    for (std::size_t idx : ds.split.train) {
      train_rows.emplace_back(features[idx].begin(), features[idx].end());
    }
    const PcaModel pca = pca_fit(train_rows, 2);
    manifest.set_param("pca_explained_fraction", pca.explained_fraction);

    std::string csv = "pc1,pc2,label\n";
    std::vector<SvgSeries> series(3);
    for (int c = 0; c < 3; ++c) {
      series[static_cast<std::size_t>(c)].label = cases[c];
      series[static_cast<std::size_t>(c)].line = false;
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
      const std::vector<double> row(features[i].begin(), features[i].end());
      const auto p = pca_project(pca, row);
      csv += csv_row({format_double(p[0]), format_double(p[1]), class_name(ds.labels[i])});
      series[static_cast<std::size_t>(ds.labels[i])].points.emplace_back(p[0], p[1]);
    }
    write_text_file(path_in("pca_scatter.csv"), csv);
    write_text_file(path_in("pca_scatter.svg"),
                    svg_chart("feature-space PCA", "pc1", "pc2", series));
    record(path_in("pca_scatter.csv"));
    record(path_in("pca_scatter.svg"));
  }

  {
    const TrainedModel model = train_random_forest(ds);
    const EvalReport report = evaluate(model, ds);
    manifest.set_param("classifier", "random_forest");
    manifest.set_param("n_trees", std::size_t{100});
    manifest.set_param("accuracy", report.accuracy);
    if (report.spearman_pa) manifest.set_param("spearman_pa", *report.spearman_pa);

    write_text_file(path_in("confusion.csv"), confusion_to_csv(report));
    std::vector<std::vector<double>> cells(3, std::vector<double>(3));
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) cells[r][c] = static_cast<double>(report.confusion[r][c]);
    }
    const std::vector<std::string> labels{cases[0], cases[1], cases[2]};
    write_text_file(path_in("confusion.svg"),
                    svg_heatmap("random forest confusion (test split)", labels, labels, cells));
    write_text_file(path_in("eval_report.json"), report_to_json(report).dump(2) + "\n");
    record(path_in("confusion.csv"));
    record(path_in("confusion.svg"));
    record(path_in("eval_report.json"));
    std::printf("accuracy %.2f\n", report.accuracy);
  }

  // Concept curves.
  {
    const auto nprime = specific_loudness(showcase[0]);
    std::string csv = "bark_band_center,specific_loudness\n";
    SvgSeries series{"engine_boom", {}, true};
    for (int z = 0; z < kBarkBands; ++z) {
      const double zc = z + 0.5;
      csv += csv_row({format_double(zc), format_double(nprime[static_cast<std::size_t>(z)])});
      series.points.emplace_back(zc, nprime[static_cast<std::size_t>(z)]);
    }
    write_text_file(path_in("concept_bark_loudness.csv"), csv);
    write_text_file(path_in("concept_bark_loudness.svg"),
                    svg_chart("specific loudness across Bark bands", "critical-band rate [Bark]",
                              "N' (sone-proxy per band)", {series}));
    record(path_in("concept_bark_loudness.csv"));
    record(path_in("concept_bark_loudness.svg"));
  }
  {
    std::string csv = "bark,weight\n";
    SvgSeries series{"g(z)", {}, true};
    for (double z = 0.0; z <= 24.0 + 1e-9; z += 0.1) {
      csv += csv_row({format_double(z), format_double(sharpness_g(z))});
      series.points.emplace_back(z, sharpness_g(z));
    }
    write_text_file(path_in("concept_sharpness_weighting.csv"), csv);
    write_text_file(path_in("concept_sharpness_weighting.svg"),
                    svg_chart("sharpness weighting", "critical-band rate [Bark]", "g(z)",
                              {series}));
    record(path_in("concept_sharpness_weighting.csv"));
    record(path_in("concept_sharpness_weighting.svg"));
  }
  {
    std::string csv = "mod_freq_hz,roughness\n";
    SvgSeries series{"R(f_mod)", {}, true};
    for (double fm = 1.0; fm <= 512.0; fm *= std::sqrt(2.0)) {
      const double r = roughness_proxy(am_tone(1000.0, fm, 1.0, 2.0)).value;
      csv += csv_row({format_double(fm), format_double(r)});
      series.points.emplace_back(std::log2(fm), r);
    }
    write_text_file(path_in("concept_roughness_band.csv"), csv);
    write_text_file(path_in("concept_roughness_band.svg"),
                    svg_chart("roughness vs modulation frequency", "log2(f_mod [Hz])",
                              "asper-proxy", {series}));
    record(path_in("concept_roughness_band.csv"));
    record(path_in("concept_roughness_band.svg"));
  }
  {
    const PowerSpectralDensity psd = welch_psd(showcase[1]);  // wind whistle
    const SmoothedPsdDb smoothed = smoothed_psd_db(psd);
    std::string csv = "freq_hz,psd_db,baseline_db\n";
    SvgSeries psd_series{"PSD", {}, true};
    SvgSeries base_series{"2-Bark baseline", {}, true};
    for (std::size_t k = 0; k < psd.psd.size() && psd.bin_freqs[k] <= 8000.0; k += 2) {
      csv += csv_row({format_double(psd.bin_freqs[k]), format_double(smoothed.db[k]),
                      format_double(smoothed.baseline[k])});
      psd_series.points.emplace_back(psd.bin_freqs[k], smoothed.db[k]);
      base_series.points.emplace_back(psd.bin_freqs[k], smoothed.baseline[k]);
    }
    write_text_file(path_in("concept_tonal_prominence.csv"), csv);
    write_text_file(path_in("concept_tonal_prominence.svg"),
                    svg_chart("tonal prominence over smoothed baseline", "frequency [Hz]",
                              "PSD [dB/Hz]", {psd_series, base_series}));
    record(path_in("concept_tonal_prominence.csv"));
    record(path_in("concept_tonal_prominence.svg"));
  }

  manifest.write(path_in("manifest.json"));
  std::cout << "regenerated figure data in " << a.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqkit: psychoacoustic sound-quality metrics, synthetic NVH stimuli, and "
               "seeded ML workflows"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file ([subcommand] key=value)");
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

  const std::string command_line = join_command_line(argc, argv);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic NVH stimulus");
  synth_cmd->add_option("class", synth_args.cls, "engine-boom | wind-whistle | road-noise")
      ->required();
  synth_cmd->add_option("--seed", synth_args.seed, "Base seed for the jittered parameters");
  synth_cmd->add_option("-o,--out", synth_args.out, "Output WAV path");
  synth_cmd->add_option("--duration", synth_args.duration, "Duration in seconds");
  synth_cmd->add_option("--rate", synth_args.rate, "Sample rate in Hz");
  synth_cmd->add_option("--f0", synth_args.f0, "Engine boom fundamental [Hz]");
  synth_cmd->add_option("--harmonics", synth_args.harmonics, "Engine boom harmonic count");
  synth_cmd->add_option("--rolloff", synth_args.rolloff, "Engine boom rolloff [dB/harmonic]");
  synth_cmd->add_option("--mod-freq", synth_args.mod_freq, "Engine boom modulation [Hz]");
  synth_cmd->add_option("--mod-depth", synth_args.mod_depth, "Engine boom modulation depth");
  synth_cmd->add_option("--tone-freq", synth_args.tone_freq, "Wind whistle tone [Hz]");
  synth_cmd->add_option("--tone-level", synth_args.tone_level, "Wind whistle tone [dBFS]");
  synth_cmd->add_option("--noise-level", synth_args.noise_level, "Wind whistle noise [dBFS]");
  synth_cmd->add_option("--cutoff", synth_args.cutoff, "Road noise cutoff [Hz]");
  synth_cmd->add_option("--level", synth_args.level, "Road noise level [dBFS]");

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute all metrics for a WAV file");
  analyze_cmd->add_option("input", analyze_args.input, "WAV path, or '-' for stdin")->required();
  analyze_cmd->add_option("--format", analyze_args.format, "json | csv");
  analyze_cmd->add_option("-o,--out", analyze_args.out, "Write to file instead of stdout");
  analyze_cmd->add_option("--s0", analyze_args.s0, "Annoyance sharpness threshold");
  analyze_cmd->add_option("--r0", analyze_args.r0, "Annoyance roughness threshold");
  analyze_cmd->add_option("--f0", analyze_args.f0, "Annoyance fluctuation threshold");

  DatasetArgs dataset_args;
  auto* dataset_cmd = app.add_subcommand("dataset", "Build the labeled feature dataset");
  dataset_cmd->add_option("--n", dataset_args.n, "Stimuli per class");
  dataset_cmd->add_option("--seed", dataset_args.seed, "Base seed");
  dataset_cmd->add_option("--s0", dataset_args.s0, "Annoyance sharpness threshold");
  dataset_cmd->add_option("--r0", dataset_args.r0, "Annoyance roughness threshold");
  dataset_cmd->add_option("--f0", dataset_args.f0, "Annoyance fluctuation threshold");
  dataset_cmd->add_option("-o,--out", dataset_args.prefix,
                          "Artifact prefix (writes <prefix>.csv and <prefix>.json)");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Fit a classifier on a dataset artifact");
  train_cmd->add_option("kind", train_args.kind, "logreg | rf | svm")->required();
  train_cmd->add_option("--dataset", train_args.dataset_prefix, "Dataset artifact prefix")
      ->required();
  train_cmd->add_option("-o,--out", train_args.out, "Model JSON path");
  train_cmd->add_option("--trees", train_args.trees, "Random forest: tree count");
  train_cmd->add_option("--mtry", train_args.mtry, "Random forest: features per split");
  train_cmd->add_flag("--no-bootstrap", train_args.no_bootstrap,
                      "Random forest: disable bootstrap resampling");
  train_cmd->add_option("--seed", train_args.seed, "Training seed (rf, svm)");
  train_cmd->add_option("--lr", train_args.lr, "Logreg: learning rate");
  train_cmd->add_option("--iters", train_args.iters, "Logreg: iterations");
  train_cmd->add_option("--l2", train_args.l2, "Logreg: L2 strength");
  train_cmd->add_option("--epochs", train_args.epochs, "SVM: epochs");
  train_cmd->add_option("--lambda", train_args.lambda, "SVM: regularization");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on its dataset's test split");
  eval_cmd->add_option("--model", eval_args.model_path, "Model JSON path")->required();
  eval_cmd->add_option("--dataset", eval_args.dataset_prefix, "Dataset artifact prefix")
      ->required();
  eval_cmd->add_option("-o,--out", eval_args.out, "Report JSON path");
  eval_cmd->add_option("--confusion-csv", eval_args.confusion_csv, "Confusion matrix CSV path");

  PcaArgs pca_args;
  auto* pca_cmd = app.add_subcommand("pca", "Project a dataset onto principal components");
  pca_cmd->add_option("--dataset", pca_args.dataset_prefix, "Dataset artifact prefix")->required();
  pca_cmd->add_option("--components", pca_args.components, "Component count");
  pca_cmd->add_option("-o,--out", pca_args.out, "Scatter CSV path");
  pca_cmd->add_option("--model-out", pca_args.model_out, "Components JSON path");

  ReproArgs repro_args;
  auto* repro_cmd = app.add_subcommand("repro", "Regenerate the full figure-data set");
  repro_cmd->add_option("-o,--out-dir", repro_args.out_dir, "Output directory")->required();
  repro_cmd->add_option("--n", repro_args.n, "Stimuli per class");
  repro_cmd->add_option("--seed", repro_args.seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(synth_cmd)) return run_synth(synth_args, command_line);
    if (app.got_subcommand(analyze_cmd)) return run_analyze(analyze_args, command_line);
    if (app.got_subcommand(dataset_cmd)) return run_dataset(dataset_args, command_line);
    if (app.got_subcommand(train_cmd)) return run_train(train_args, command_line);
    if (app.got_subcommand(eval_cmd)) return run_eval(eval_args, command_line);
    if (app.got_subcommand(pca_cmd)) return run_pca(pca_args, command_line);
    if (app.got_subcommand(repro_cmd)) return run_repro(repro_args, command_line);
  } catch (const MismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
