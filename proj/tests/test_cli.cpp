#include <catch2/catch_amalgamated.hpp>

#include "sqkit/io/csv.hpp"
#include "sqkit/manifest.hpp"
#include "sqkit/metrics.hpp"
#include "sqkit/stimuli.hpp"
#include "sqkit/wav.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

using namespace sqkit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "sqkit_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string in_dir(const std::string& name) { return (work_dir() / name).string(); }

int run_cli(const std::string& args, const std::string& capture = "/dev/null") {
  const std::string cmd =
      std::string(SQKIT_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("synth is deterministic across invocations") {
  REQUIRE(run_cli("synth engine-boom --seed 7 -o " + in_dir("a.wav")) == 0);
  REQUIRE(run_cli("synth engine-boom --seed 7 -o " + in_dir("b.wav")) == 0);
  REQUIRE(hash_file(in_dir("a.wav")) == hash_file(in_dir("b.wav")));
  REQUIRE(fs::exists(in_dir("a.json")));
  REQUIRE(fs::exists(in_dir("a.manifest.json")));

  const json manifest = json::parse(read_text_file(in_dir("a.manifest.json")));
  REQUIRE(manifest.at("outputs").contains(in_dir("a.wav")));
  REQUIRE(manifest.at("outputs").at(in_dir("a.wav")).at("fnv1a64").get<std::string>() ==
          hash_file(in_dir("a.wav")));
}

TEST_CASE("synth rejects parameters above Nyquist with exit 2") {
  REQUIRE(run_cli("synth wind-whistle --tone-freq 9000 --rate 16000 -o " + in_dir("bad.wav")) ==
          2);
  REQUIRE(run_cli("synth no-such-class -o " + in_dir("bad.wav")) == 2);
}

TEST_CASE("synth reports unwritable output with exit 3") {
  REQUIRE(run_cli("synth road-noise --seed 1 -o /nonexistent_dir/x.wav") == 3);
}

TEST_CASE("analyze of a generated stimulus emits eight finite metric records") {
  REQUIRE(run_cli("synth road-noise --seed 1 -o " + in_dir("r.wav")) == 0);
  REQUIRE(run_cli("analyze " + in_dir("r.wav"), in_dir("r_metrics.json")) == 0);

  const json out = json::parse(read_text_file(in_dir("r_metrics.json")));
  REQUIRE(out.at("metrics").size() == 8);
  for (const auto& record : out.at("metrics")) {
    REQUIRE(record.contains("metric"));
    REQUIRE(record.contains("unit"));
    REQUIRE(record.contains("variant"));
    REQUIRE(record.contains("params_hash"));
    if (!record.at("value").is_null()) {
      REQUIRE(std::isfinite(record.at("value").get<double>()));
    }
  }
}

TEST_CASE("analyze equals the library pipeline bitwise") {
  const std::string wav = in_dir("bitwise.wav");
  write_wav(synth(jittered_spec(StimulusClass::kWindWhistle, 3, 0)), wav);
  REQUIRE(run_cli("analyze " + wav, in_dir("bitwise.json")) == 0);

  const json out = json::parse(read_text_file(in_dir("bitwise.json")));
  const FeatureVector fv = analyze_all(read_wav(wav));
  const auto value_of = [&](const std::string& name) {
    for (const auto& r : out.at("metrics")) {
      if (r.at("metric") == name) return r.at("value").get<double>();
    }
    FAIL("missing metric " + name);
    return 0.0;
  };
  REQUIRE(value_of("loudness") == fv.n);
  REQUIRE(value_of("sharpness") == fv.s);
  REQUIRE(value_of("roughness") == fv.r);
  REQUIRE(value_of("fluctuation_strength") == fv.f);
  REQUIRE(value_of("tonality") == fv.t);
  REQUIRE(value_of("annoyance") == fv.pa);
}

TEST_CASE("analyze of silence exits 2 naming the failing metric") {
  write_wav(silence(2.0), in_dir("silence.wav"));
  REQUIRE(run_cli("analyze " + in_dir("silence.wav"), in_dir("silence_err.txt")) == 2);
  const std::string err = read_text_file(in_dir("silence_err.txt"));
  REQUIRE(err.find("sharpness") != std::string::npos);
}

TEST_CASE("analyze reads stdin with '-'") {
  write_wav(sine_tone(1000.0, 0.5, 1.5), in_dir("pipe.wav"));
  const std::string cmd = std::string(SQKIT_CLI_PATH) + " analyze - < " + in_dir("pipe.wav") +
                          " > " + in_dir("pipe.json") + " 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(WEXITSTATUS(rc) == 0);
  const json out = json::parse(read_text_file(in_dir("pipe.json")));
  REQUIRE(out.at("metrics").size() == 8);
}

TEST_CASE("analyze csv format has the record schema") {
  REQUIRE(run_cli("analyze " + in_dir("r.wav") + " --format csv", in_dir("r.csv")) == 0);
  const auto rows = read_csv(in_dir("r.csv"));
  REQUIRE(rows.size() == 9);  // header + 8 metrics
  REQUIRE(rows[0] == std::vector<std::string>{"metric", "value", "unit", "variant",
                                              "params_hash"});
}

TEST_CASE("dataset artifact has the documented shape and reruns identically") {
  REQUIRE(run_cli("dataset --n 10 --seed 123 -o " + in_dir("ds")) == 0);
  const auto rows = read_csv(in_dir("ds.csv"));
  REQUIRE(rows.size() == 31);  // header + 30 rows
  REQUIRE(rows[0] == std::vector<std::string>{"n", "s", "r", "f", "t", "pa", "label"});

  const std::string csv_hash = hash_file(in_dir("ds.csv"));
  const std::string sidecar_hash = hash_file(in_dir("ds.json"));
  REQUIRE(run_cli("dataset --n 10 --seed 123 -o " + in_dir("ds")) == 0);
  REQUIRE(hash_file(in_dir("ds.csv")) == csv_hash);
  REQUIRE(hash_file(in_dir("ds.json")) == sidecar_hash);
}

TEST_CASE("train then eval emits accuracy and confusion artifacts") {
  REQUIRE(run_cli("train rf --trees 100 --seed 123 --dataset " + in_dir("ds") + " -o " +
                  in_dir("rf.json")) == 0);
  REQUIRE(run_cli("eval --model " + in_dir("rf.json") + " --dataset " + in_dir("ds") + " -o " +
                  in_dir("report.json"), in_dir("eval_out.txt")) == 0);

  const std::string out = read_text_file(in_dir("eval_out.txt"));
  REQUIRE(out.find("accuracy ") == 0);
  REQUIRE(out[9] != '\0');  // two-decimal value follows
  const json report = json::parse(read_text_file(in_dir("report.json")));
  REQUIRE(report.at("confusion").size() == 3);
  REQUIRE(fs::exists(in_dir("report_confusion.csv")));

  // Confusion CSV trace / total matches the reported accuracy.
  const auto conf_rows = read_csv(in_dir("report_confusion.csv"));
  double trace = 0.0, total = 0.0;
  for (std::size_t r = 1; r < conf_rows.size(); ++r) {
    for (std::size_t c = 1; c < conf_rows[r].size(); ++c) {
      const double v = parse_double(conf_rows[r][c]);
      total += v;
      if (r == c) trace += v;
    }
  }
  REQUIRE(report.at("accuracy").get<double>() == trace / total);
}

TEST_CASE("eval against the wrong dataset exits 4") {
  REQUIRE(run_cli("dataset --n 10 --seed 99 -o " + in_dir("ds99")) == 0);
  REQUIRE(run_cli("eval --model " + in_dir("rf.json") + " --dataset " + in_dir("ds99") +
                  " -o " + in_dir("bad_report.json")) == 4);
}

TEST_CASE("train validates the model kind and dataset artifact") {
  REQUIRE(run_cli("train mystery --dataset " + in_dir("ds") + " -o " + in_dir("m.json")) == 2);
  REQUIRE(run_cli("train rf --dataset " + in_dir("nope") + " -o " + in_dir("m.json")) == 3);
}

TEST_CASE("pca writes the scatter with one row per dataset row") {
  REQUIRE(run_cli("pca --dataset " + in_dir("ds") + " -o " + in_dir("scatter.csv")) == 0);
  const auto rows = read_csv(in_dir("scatter.csv"));
  REQUIRE(rows.size() == 31);
  REQUIRE(rows[0] == std::vector<std::string>{"pc1", "pc2", "label"});
  REQUIRE(fs::exists(in_dir("scatter_components.json")));
}

TEST_CASE("config file values apply with flag precedence") {
  write_text_file(in_dir("sq.ini"), "[synth]\nseed=9\nduration=1.0\n");
  REQUIRE(run_cli("--config " + in_dir("sq.ini") + " synth engine-boom -o " + in_dir("c1.wav")) ==
          0);
  REQUIRE(run_cli("synth engine-boom --seed 9 --duration 1.0 -o " + in_dir("c2.wav")) == 0);
  REQUIRE(hash_file(in_dir("c1.wav")) == hash_file(in_dir("c2.wav")));

  // Explicit flag beats the config value.
  REQUIRE(run_cli("--config " + in_dir("sq.ini") + " synth engine-boom --seed 11 -o " +
                  in_dir("c3.wav")) == 0);
  REQUIRE(run_cli("synth engine-boom --seed 11 --duration 1.0 -o " + in_dir("c4.wav")) == 0);
  REQUIRE(hash_file(in_dir("c3.wav")) == hash_file(in_dir("c4.wav")));
  REQUIRE(hash_file(in_dir("c3.wav")) != hash_file(in_dir("c1.wav")));
}

TEST_CASE("usage errors exit 2") {
  REQUIRE(run_cli("frobnicate") == 2);
  REQUIRE(run_cli("train rf") == 2);  // missing required --dataset
  REQUIRE(run_cli("") == 2);          // subcommand required
}
