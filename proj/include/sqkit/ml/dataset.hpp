#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqkit/errors.hpp"
#include "sqkit/io/csv.hpp"
#include "sqkit/metrics.hpp"
#include "sqkit/rng.hpp"
#include "sqkit/stimuli.hpp"

namespace sqkit {

inline constexpr std::size_t kDefaultPerClass = 100;
inline constexpr std::uint64_t kDefaultBaseSeed = 123;
inline constexpr double kTrainFraction = 0.7;
inline constexpr int kNumClasses = 3;

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-feature z-scoring statistics, train rows only. Features whose train
/// standard deviation vanishes are centered but not scaled (scaled = false).
struct Standardization {
  std::array<double, 6> mean{};
  std::array<double, 6> stddev{};
  std::array<bool, 6> scaled{};
};

/// Labeled feature matrix with a frozen stratified split and the seed that
/// produced it.
struct Dataset {
  std::vector<FeatureVector> rows;
  std::vector<StimulusClass> labels;
  SplitIndices split;
  std::uint64_t base_seed = kDefaultBaseSeed;
  std::size_t n_per_class = kDefaultPerClass;
  AnnoyanceThresholds thresholds;
  Standardization standardization;
};

namespace ml_detail {

inline std::array<double, 6> to_array(const FeatureVector& fv) {
  return {fv.n, fv.s, fv.r, fv.f, fv.t, fv.pa};
}

inline constexpr std::uint64_t kSplitSalt = 0x53504c4954ull;  // "SPLIT"

}  // namespace ml_detail

/// Verifies that pa is consistent with the annoyance composite recomputed
/// from (n, s, r, f) and the dataset thresholds.
inline void validate_feature_vector(const FeatureVector& fv, const AnnoyanceThresholds& th) {
  for (double v : ml_detail::to_array(fv)) {
    if (!std::isfinite(v)) throw ParamError("feature vector contains non-finite value");
  }
  const double expected = annoyance(fv.n, fv.s, fv.r, fv.f, th).value;
  if (std::abs(expected - fv.pa) > 1e-9 * std::max(1.0, std::abs(expected))) {
    throw ParamError("feature vector pa inconsistent with its components");
  }
}

namespace ml_detail {

inline Standardization fit_standardization(const Dataset& ds) {
  Standardization st;
  const std::size_t m = ds.split.train.size();
  if (m < 2) throw ParamError("standardize: train split too small");
  for (int j = 0; j < 6; ++j) {
    double acc = 0.0;
    for (std::size_t idx : ds.split.train) acc += to_array(ds.rows[idx])[static_cast<std::size_t>(j)];
    const double mu = acc / static_cast<double>(m);
    double var = 0.0;
    for (std::size_t idx : ds.split.train) {
      const double d = to_array(ds.rows[idx])[static_cast<std::size_t>(j)] - mu;
      var += d * d;
    }
    var /= static_cast<double>(m);
    const double sd = std::sqrt(var);
    st.mean[static_cast<std::size_t>(j)] = mu;
    st.stddev[static_cast<std::size_t>(j)] = sd;
    st.scaled[static_cast<std::size_t>(j)] = sd > 1e-12;
  }
  return st;
}

}  // namespace ml_detail

/// Builds the default labeled dataset: n_per_class jittered stimuli per
/// class, analyzed to feature vectors, with a stratified 70/30 split drawn
/// from the pinned generator. Bitwise deterministic in (n_per_class,
/// base_seed, thresholds).
inline Dataset build_dataset(std::size_t n_per_class = kDefaultPerClass,
                             std::uint64_t base_seed = kDefaultBaseSeed,
                             const AnnoyanceThresholds& thresholds = {}) {
  if (n_per_class < 10) throw ParamError("build_dataset: n_per_class must be >= 10");

  Dataset ds;
  ds.base_seed = base_seed;
  ds.n_per_class = n_per_class;
  ds.thresholds = thresholds;

  for (int c = 0; c < kNumClasses; ++c) {
    const auto cls = static_cast<StimulusClass>(c);
    for (std::size_t i = 0; i < n_per_class; ++i) {
      // Global index keeps the three per-class streams disjoint.
      const std::uint64_t index = static_cast<std::uint64_t>(c) * n_per_class + i;
      const StimulusSpec spec = jittered_spec(cls, base_seed, index);
      try {
        ds.rows.push_back(analyze_all(synth(spec), thresholds));
      } catch (const Error& e) {
        throw ParamError("build_dataset: analysis failed for class=" +
                         std::string(class_name(cls)) + " seed=" + std::to_string(spec.seed) +
                         " index=" + std::to_string(index) + ": " + e.what());
      }
      ds.labels.push_back(cls);
    }
  }

  // Stratified split: shuffle each class block, round(0.7 n) to train.
  Xoshiro256ss rng(mix_seed(base_seed ^ ml_detail::kSplitSalt));
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> idx(n_per_class);
    std::iota(idx.begin(), idx.end(), static_cast<std::size_t>(c) * n_per_class);
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i + 1));
      std::swap(idx[i], idx[j]);
    }
    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(kTrainFraction * static_cast<double>(n_per_class)));
    ds.split.train.insert(ds.split.train.end(), idx.begin(),
                          idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    ds.split.test.insert(ds.split.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                         idx.end());
  }
  std::sort(ds.split.train.begin(), ds.split.train.end());
  std::sort(ds.split.test.begin(), ds.split.test.end());

  ds.standardization = ml_detail::fit_standardization(ds);
  return ds;
}

/// Applies the train-fitted z-scoring to one row.
inline std::array<double, 6> standardize_row(const Dataset& ds, const FeatureVector& fv) {
  std::array<double, 6> x = ml_detail::to_array(fv);
  for (std::size_t j = 0; j < 6; ++j) {
    x[j] -= ds.standardization.mean[j];
    if (ds.standardization.scaled[j]) x[j] /= ds.standardization.stddev[j];
  }
  return x;
}

/// Standardized feature matrix for all rows (train statistics only).
inline std::vector<std::array<double, 6>> standardized_features(const Dataset& ds) {
  std::vector<std::array<double, 6>> out;
  out.reserve(ds.rows.size());
  for (const FeatureVector& fv : ds.rows) out.push_back(standardize_row(ds, fv));
  return out;
}

/// Stable fingerprint over rows, labels, split and seed; stored in trained
/// models to detect dataset/model mismatches.
inline std::uint64_t dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
  };
  const auto mix_double = [&](double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    mix(bits);
  };
  mix(ds.base_seed);
  mix(ds.rows.size());
  for (const FeatureVector& fv : ds.rows) {
    for (double v : ml_detail::to_array(fv)) mix_double(v);
  }
  for (StimulusClass c : ds.labels) mix(static_cast<std::uint64_t>(c));
  for (std::size_t i : ds.split.train) mix(i);
  for (std::size_t i : ds.split.test) mix(i);
  return h;
}

// Serialization: CSV feature table plus a JSON sidecar holding everything
// needed to reproduce the exact split and scaling.

inline const char* kDatasetCsvHeader = "n,s,r,f,t,pa,label";

inline void save_dataset(const Dataset& ds, const std::string& csv_path,
                         const std::string& sidecar_path) {
  std::string csv = std::string(kDatasetCsvHeader) + "\n";
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    const auto x = ml_detail::to_array(ds.rows[i]);
    std::vector<std::string> fields;
    for (double v : x) fields.push_back(format_double(v));
    fields.push_back(class_name(ds.labels[i]));
    csv += csv_row(fields);
  }
  write_text_file(csv_path, csv);

  nlohmann::json j;
  j["base_seed"] = ds.base_seed;
  j["n_per_class"] = ds.n_per_class;
  j["thresholds"] = {{"s0", ds.thresholds.s0}, {"r0", ds.thresholds.r0}, {"f0", ds.thresholds.f0}};
  j["split"] = {{"train", ds.split.train}, {"test", ds.split.test}};
  j["standardization"] = {
      {"mean", ds.standardization.mean},
      {"stddev", ds.standardization.stddev},
      {"scaled", ds.standardization.scaled},
  };
  j["variants"] = {{"n", "bark24-powerlaw023"},
                   {"s", "bark-weighted-centroid"},
                   {"r", "envelope-bandpass-15-300"},
                   {"f", "envelope-lowpass-20-variance"},
                   {"t", "psd-prominence-db"},
                   {"pa", "zwicker-pa"}};
  write_text_file(sidecar_path, j.dump(2) + "\n");
}

inline Dataset load_dataset(const std::string& csv_path, const std::string& sidecar_path) {
  Dataset ds;
  const auto rows = read_csv(csv_path);
  if (rows.empty() || csv_row(rows.front()) != std::string(kDatasetCsvHeader) + "\n") {
    throw FormatError("dataset: unexpected CSV header in '" + csv_path + "'");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 7) throw FormatError("dataset: row with wrong field count");
    FeatureVector fv;
    fv.n = parse_double(r[0]);
    fv.s = parse_double(r[1]);
    fv.r = parse_double(r[2]);
    fv.f = parse_double(r[3]);
    fv.t = parse_double(r[4]);
    fv.pa = parse_double(r[5]);
    ds.rows.push_back(fv);
    ds.labels.push_back(class_from_name(r[6]));
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(sidecar_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("dataset: sidecar '" + sidecar_path + "' is not valid JSON: " + e.what());
  }
  try {
    ds.base_seed = j.at("base_seed").get<std::uint64_t>();
    ds.n_per_class = j.at("n_per_class").get<std::size_t>();
    ds.thresholds.s0 = j.at("thresholds").at("s0").get<double>();
    ds.thresholds.r0 = j.at("thresholds").at("r0").get<double>();
    ds.thresholds.f0 = j.at("thresholds").at("f0").get<double>();
    ds.split.train = j.at("split").at("train").get<std::vector<std::size_t>>();
    ds.split.test = j.at("split").at("test").get<std::vector<std::size_t>>();
    const auto& st = j.at("standardization");
    for (std::size_t k = 0; k < 6; ++k) {
      ds.standardization.mean[k] = st.at("mean").at(k).get<double>();
      ds.standardization.stddev[k] = st.at("stddev").at(k).get<double>();
      ds.standardization.scaled[k] = st.at("scaled").at(k).get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("dataset: sidecar '" + sidecar_path + "' missing fields: " + e.what());
  }

  for (std::size_t i : ds.split.train) {
    if (i >= ds.rows.size()) throw FormatError("dataset: split index out of range");
  }
  for (std::size_t i : ds.split.test) {
    if (i >= ds.rows.size()) throw FormatError("dataset: split index out of range");
  }
  return ds;
}

}  // namespace sqkit
