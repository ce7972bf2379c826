#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "gaitid/cli/config.hpp"
#include "gaitid/cli/pipeline.hpp"
#include "gaitid/gaitsim/capture.hpp"
#include "json.hpp"

using namespace gaitid;
using namespace gaitid::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gaitid_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string validation_key(const std::string& text) {
  try {
    config_from_json(text);
  } catch (const ValidationError& e) {
    return e.key();
  }
  return "";
}

int run_exe(const std::string& args) {
  const char* exe = std::getenv("GAITID_EXE");
  REQUIRE_MESSAGE(exe != nullptr, "GAITID_EXE is not set");
  const int status = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

PipelineConfig small_config(int subjects, double minutes) {
  PipelineConfig c;
  c.cohort.n_subjects = subjects;
  c.cohort.minutes = minutes;
  return c;
}

// Every regular file under `dir` with its bytes, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("config defaults round trip and unknown keys are named") {
  const PipelineConfig def;
  const auto text = config_to_json(def);
  CHECK(config_from_json(text) == def);
  CHECK(config_to_json(config_from_json(text)) == text);
  CHECK(config_from_json("{}") == def);

  auto j = nlohmann::json::parse(text);
  j["slicer"]["threshold"] = 0.2;
  j["net"]["encoder"]["embedding_dim"] = 32;
  const auto edited = config_from_json(j.dump());
  CHECK(edited.slicer.threshold == 0.2);
  CHECK(edited.net.train.encoder.embedding_dim == 32);
  CHECK(config_from_json(config_to_json(edited)) == edited);

  CHECK(validation_key(R"({"slicer": {"kernal": [3, 3]}})") == "slicer.kernal");
  CHECK(validation_key(R"({"net": {"encoder": {"depth": 5}}})") == "net.encoder.depth");
  CHECK(validation_key(R"({"radr": {}})") == "radr");
  CHECK(validation_key(R"({"slicer": {"threshold": 2.0}})") == "slicer.threshold");
  CHECK(validation_key(R"({"dsp": {"hop_chirps": 0}})") == "dsp.hop_chirps");
  CHECK(validation_key(R"({"dsp": {"omega": {"n_omega_bins": 1}}})") == "dsp.omega.n_omega_bins");
  CHECK(validation_key(R"({"net": {"triplet": {"K": 1}}})") == "net.triplet.K");
  CHECK(validation_key(R"({"cohort": {"n_subjects": 1}})") == "cohort.n_subjects");
  CHECK(validation_key(R"({"net": {"encoder": {"stage_channels": [8, 16, 32, 60]}}})") ==
        "net.encoder.stage_channels");
  CHECK_THROWS_AS(config_from_json("{oops"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("raw cubes and spectrograms round trip through files") {
  const auto dir = scratch("io");
  const auto plan = plan_captures(small_config(2, 0.05));
  REQUIRE(plan.size() >= 2u);
  CHECK(capture_from_json(capture_to_json(plan[0], gaitsim::RadarConfig{})).source == plan[0].source);
  const auto back = capture_from_json(capture_to_json(plan[1], gaitsim::RadarConfig{}));
  CHECK(back.seed == plan[1].seed);
  CHECK(back.scenario.duration == plan[1].scenario.duration);
  CHECK(back.model.subject_id == plan[1].model.subject_id);

  const gaitsim::RadarConfig radar;
  auto walk = plan[0].scenario;
  walk.duration = 0.6;  // stays within the chirp budget
  const auto cube = gaitsim::simulate_capture(plan[0].model, walk, radar, plan[0].seed);
  write_raw_cube(dir / "c.rten", cube);
  const auto again = read_raw_cube(dir / "c.rten", radar);
  REQUIRE(again.n_chirps() == cube.n_chirps());
  bool same = true;
  for (std::size_t c = 0; c < cube.n_chirps(); c += 97) {
    for (int ch = 0; ch < cube.n_channels(); ++ch) {
      for (int s = 0; s < cube.n_samples(); ++s) same = same && again.at(c, ch, s) == cube.at(c, ch, s);
    }
  }
  CHECK(same);
  gaitsim::RadarConfig other = radar;
  other.samples_per_chirp *= 2;
  CHECK_THROWS(read_raw_cube(dir / "c.rten", other));

  const auto pair = compute_spectra(cube, PipelineConfig{});
  write_spectrogram(dir, "ud", pair.ud);
  const auto ud = read_spectrogram(dir, "ud");
  CHECK(ud.values == pair.ud.values);
  CHECK(ud.freq_axis == pair.ud.freq_axis);
  CHECK(ud.t0 == pair.ud.t0);
  CHECK(ud.hop_s == pair.ud.hop_s);
  CHECK(ud.kind == pair.ud.kind);
  fs::remove_all(dir);
}

TEST_CASE("simulate, spectrogram and slice chain on 2 subjects x 1 min") {
  const auto dir = scratch("chain");
  cmd_simulate(small_config(2, 1.0), dir / "sim");
  CHECK(fs::exists(dir / "sim" / "config.json"));
  CHECK(fs::exists(dir / "sim" / "captures.jsonl"));
  cmd_spectrogram(dir / "sim", dir / "spec");
  cmd_slice(dir / "spec", dir / "data");
  const auto set = read_slices(dir / "data");
  MESSAGE(set.size() << " slices");
  CHECK(set.size() >= 100u);
  CHECK(set.distinct_labels().size() == 2u);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double d = set.t_end[i] - set.t_start[i];
    CHECK((d >= 0.25 - 1e-9 && d <= 0.9 + 1e-9));
  }
  double walked = 0;
  for (double s : set.capture_seconds) walked += s;
  CHECK(walked >= 2 * 60.0 - 1e-6);
  fs::remove_all(dir);
}

TEST_CASE("dataset-build is reproducible byte for byte") {
  const auto dir = scratch("build");
  const auto cfg = small_config(2, 0.2);
  cmd_dataset_build(cfg, dir / "a");
  cmd_dataset_build(cfg, dir / "b");
  const auto a = snapshot(dir / "a");
  const auto b = snapshot(dir / "b");
  CHECK(a.size() > 5u);
  CHECK(a == b);
  CHECK(load_config((dir / "a" / "config.json").string()) == cfg);
  CHECK(read_all_spectra(dir / "a").size() == plan_captures(cfg).size());
  fs::remove_all(dir);
}

TEST_CASE("command-line driver: exit codes, train, eval and embed") {
  const auto dir = scratch("exe");
  CHECK(run_exe("--help") == 0);
  CHECK(run_exe("no-such-command") == 1);
  CHECK(run_exe("config --defaults") == 0);

  spit(dir / "bad.json", R"({"slicer": {"kernal": [3, 3]}})");
  CHECK(run_exe("config --check " + (dir / "bad.json").string()) == 1);
  CHECK(run_exe("dataset-build --config " + (dir / "bad.json").string() + " --out " + (dir / "x").string()) == 1);
  CHECK(run_exe("train --dataset " + (dir / "missing").string() + " --out " + (dir / "ck").string()) == 2);

  // Tiny network and schedule so the driver path runs in seconds.
  auto j = nlohmann::json::parse(config_to_json(small_config(3, 0.5)));
  j["slicer"]["out_size"] = {16, 16};
  j["net"]["encoder"]["stage_channels"] = {8, 8, 8, 8};
  j["net"]["encoder"]["embedding_dim"] = 8;
  j["net"]["epochs"] = 2;
  j["net"]["batches_per_epoch"] = 2;
  j["net"]["triplet"]["K"] = 4;
  j["eval"]["seeds"] = {1};
  j["eval"]["minutes"] = {0.1, 0.2, 0.3, 0.4};
  spit(dir / "tiny.json", j.dump(2));
  CHECK(run_exe("config --check " + (dir / "tiny.json").string()) == 0);

  const auto data = (dir / "data").string();
  REQUIRE(run_exe("--serial dataset-build --config " + (dir / "tiny.json").string() + " --out " + data) == 0);
  REQUIRE(run_exe("train --dataset " + data + " --out " + (dir / "ck").string()) == 0);
  CHECK(fs::exists(dir / "ck" / "architecture.json"));
  CHECK(fs::exists(dir / "ck" / "history.csv"));

  REQUIRE(run_exe("eval --dataset " + data + " --checkpoint " + (dir / "ck").string() +
                  " --experiment size --out " + (dir / "rep").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "rep" / "size.json"));
  CHECK(rep["rows"].size() == 4u);
  CHECK(!fs::exists(dir / "rep" / "window.json"));

  REQUIRE(run_exe("embed --dataset " + data + " --checkpoint " + (dir / "ck").string() + " --out " +
                  (dir / "z.csv").string()) == 0);
  std::ifstream z(dir / "z.csv");
  std::string header;
  std::getline(z, header);
  CHECK(header.rfind("subject,direction,z_1", 0) == 0);
  std::size_t lines = 0;
  for (std::string l; std::getline(z, l);) ++lines;
  CHECK(lines == read_slices(data).size());
  fs::remove_all(dir);
}
