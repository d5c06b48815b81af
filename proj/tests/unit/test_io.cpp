// Copyright 2026 The trajforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <functional>
#include <string>

#include "doctest.h"
#include "trajforge/config.hpp"
#include "trajforge/dataset.hpp"
#include "trajforge/errors.hpp"
#include "trajforge/io.hpp"
#include "trajforge/report.hpp"
#include "trajforge/simulator.hpp"

using namespace trajforge;
namespace fs = std::filesystem;

namespace {

std::string parse_error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("doubles round-trip") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0}) CHECK(std::stod(format_double(v)) == v);
    CHECK_THROWS_AS(format_double(std::nan("")), InputError);
  }

  TEST_CASE("detections and trajectories round-trip") {
    SceneConfig sc;
    const auto scene = generate_scene(sc, "scene-000003");
    CHECK(parse_trajectories(trajectories_to_jsonl(scene), "x") == scene);
    const auto det = detect(gt_frames(scene), DetectorProfile{}, 3);
    CHECK(parse_detections(detections_to_jsonl(det), "x") == det);
  }

  TEST_CASE("samples round-trip") {
    SceneConfig sc;
    const auto set = window_samples(generate_scene(sc, "scene-000004"), WindowConfig{});
    REQUIRE(!set.empty());
    auto scored = set;
    scored.samples[0].score = 0.25;
    scored.samples[0].provenance = Provenance::pseudo("moderate");
    const auto back = parse_samples(samples_to_jsonl(scored), "x");
    CHECK(back.samples == scored.samples);
    CHECK(back.past_len == set.past_len);
  }

  TEST_CASE("parse errors carry file, line and field") {
    const std::string bad =
        "{\"scene_id\":\"s\",\"t\":0,\"boxes\":[]}\n"
        "{\"scene_id\":\"s\",\"t\":0.1,\"boxes\":[{\"cx\":\"oops\"}]}\n";
    const std::string msg = parse_error_text([&] { parse_detections(bad, "dets.jsonl"); });
    CHECK(msg.find("dets.jsonl:2") != std::string::npos);
    CHECK(msg.find("boxes[0].cx") != std::string::npos);
    CHECK_FALSE(parse_error_text([] { parse_trajectories("not json\n", "t.jsonl"); }).empty());
  }

  TEST_CASE("checkpoint round-trip") {
    Checkpoint c;
    c.params = ForecasterParams::initialize({4, 5, 6, 2}, {{1, 0}, {0, 1}}, 3);
    c.seed = 42;
    c.provenance = "finetune<-abc";
    const auto bytes = encode_checkpoint(c);
    CHECK(bytes.rfind("TFGCKPT1", 0) == 0);
    CHECK(decode_checkpoint(bytes, "m") == c);
    CHECK_THROWS_AS(decode_checkpoint(bytes.substr(0, bytes.size() - 3), "m"), Error);
    CHECK_THROWS_AS(decode_checkpoint("garbage", "m"), Error);
  }

  TEST_CASE("csv") {
    CsvTable t{{"a", "b"}, {{"1", "x,y"}, {"2", "say \"hi\""}}};
    CHECK(parse_csv(to_csv(t), "t.csv") == t);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n", "t.csv"), ParseError);
  }

  TEST_CASE("reports round-trip") {
    MetricsReport m{10, 0.5, 1.25, 1.5, 0.2};
    const auto back = parse_metrics_report(to_json(m), "r");
    CHECK(back.n_samples == 10);
    CHECK(back.brier_fde == 1.5);
    QualityReport q;
    q.metrics = m;
    q.n_matched = 7;
    q.match_rate = 0.7;
    q.empty = false;
    CHECK(parse_quality_report(to_json(q), "q").match_rate == 0.7);
    E2EReport e;
    e.map_f = 0.625;
    e.n_true_positives = 5;
    CHECK(parse_e2e_report(to_json(e), "e").map_f == 0.625);
  }

  TEST_CASE("digests and manifest") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const fs::path dir = fs::temp_directory_path() / "trajforge_io_test";
    fs::remove_all(dir);
    write_file_atomic(dir / "sub" / "a.txt", "abc");
    CHECK(read_file(dir / "sub" / "a.txt") == "abc");
    CHECK(file_sha256(dir / "sub" / "a.txt") == sha256_hex("abc"));

    StageRecord s{"simulate", {}, {{"gt.jsonl", sha256_hex("x")}}, 1.5};
    update_manifest(dir / "manifest.json", "h1", s);
    s.wall_seconds = 2.0;
    update_manifest(dir / "manifest.json", "h1", s);
    update_manifest(dir / "manifest.json", "h1", {"track", {{"gt.jsonl", "y"}}, {{"t.jsonl", "z"}}, 0.5});
    const auto m = parse_manifest(read_file(dir / "manifest.json"), "manifest.json");
    REQUIRE(m.stages.size() == 2);
    CHECK(m.stages[0].wall_seconds == 2.0);
    CHECK(m.config_hash == "h1");
    CHECK(parse_manifest(to_json(m), "m") == m);
    fs::remove_all(dir);
  }

  TEST_CASE("history table") {
    TrainRun run;
    EpochRecord e;
    e.epoch = 1;
    e.train_loss = 2.0;
    e.has_val = true;
    e.val.brier_fde = 3.0;
    run.history = {e};
    const auto t = history_table(run);
    CHECK(t.header.front() == "epoch");
    CHECK(t.rows.size() == 2);
  }
}

TEST_SUITE("config") {
  TEST_CASE("defaults validate and round-trip through INI") {
    PipelineConfig a;
    a.validate();
    a.set("tracker.max-age", "3");
    a.set("detector.moderate.pos_sigma", "0.25");
    a.set("experiment.fractions", "0.05, 1");
    PipelineConfig b;
    apply_ini(b, a.to_ini(), "a.ini");
    CHECK(b.to_ini() == a.to_ini());
    CHECK(b.hash() == a.hash());
    CHECK(b.get("tracker.max_age") == "3");
    CHECK(b.profile("moderate").pos_sigma == 0.25);
    CHECK(a.hash() != PipelineConfig{}.hash());
  }

  TEST_CASE("unknown keys and bad values") {
    PipelineConfig c;
    CHECK_THROWS_AS(c.set("tracker.nope", "1"), ConfigError);
    CHECK_THROWS_AS(c.set("tracker.max_age", "many"), ConfigError);
    const std::string msg = parse_error_text([] {
      PipelineConfig p;
      apply_ini(p, "[tracker]\nmax_age = 2\nbogus = 1\n", "c.ini");
    });
    CHECK(msg.find("c.ini:3") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
  }

  TEST_CASE("new detector sections start from moderate") {
    PipelineConfig c;
    apply_ini(c, "[detector.noisy]\npos_sigma = 0.4\n", "c.ini");
    CHECK(c.profile("noisy").pos_sigma == 0.4);
    CHECK(c.profile("noisy").fp_rate == c.profile("moderate").fp_rate);
  }

  TEST_CASE("benchmark resolution") {
    PipelineConfig c;
    c.seed = 7;
    const auto b = c.benchmark();
    CHECK(b.train.seed == 7);
    CHECK(b.profiles.front().profile_id == "moderate");
    CHECK(b.profiles[b.diversity_profile_a].profile_id == "skew_ccw");
    CHECK(b.profiles[b.diversity_profile_b].profile_id == "skew_cw");
    c.set("experiment.pseudo_source", "skew_cw");
    CHECK(c.benchmark().profiles.front().profile_id == "skew_cw");
  }
}

TEST_SUITE("report") {
  TEST_CASE("tables and charts") {
    PptExperiment ex;
    for (std::uint64_t seed : {0, 1}) {
      for (const char* method : {"scratch", "ppt"}) {
        PptRow r;
        r.fraction = 0.1;
        r.seed = seed;
        r.method = method;
        r.val.brier_fde = 2.0 + seed;
        if (std::string(method) == "ppt") r.rel_brier_fde = -10.0;
        ex.rows.push_back(r);
      }
    }
    CHECK(ppt_table(ex).rows.size() == 4);
    const auto f = fraction_table(ex);
    REQUIRE(f.rows.size() == 2);
    CHECK(f.rows[0][3] == "2.5");
    const auto svg = fraction_chart(ex);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
  }
}
