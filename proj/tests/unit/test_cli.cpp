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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "trajforge/io.hpp"

using namespace trajforge;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() : dir(fs::temp_directory_path() / ("trajforge_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file_atomic(dir / "small.ini",
                      "[experiment]\nlabeled_scenes = 3\nval_scenes = 2\npseudo_scenes = 3\n"
                      "diversity_scenes = 3\npretrain_epochs = 1\n[train]\nepochs = 1\n");
  }
  ~Sandbox() { fs::remove_all(dir); }

  // Exit status of the CLI run inside the sandbox; output goes to out.txt.
  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" + TRAJFORGE_CLI + "' " + args +
                            " >out.txt 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string output() const { return read_file(dir / "out.txt"); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 2") {
    Sandbox s;
    CHECK(s.run("") == 2);
    CHECK(s.run("frobnicate") == 2);
    CHECK(s.run("simulate") == 2);
    CHECK(s.run("simulate --out gt.jsonl --tracker.nope 1") == 2);
    CHECK(s.run("simulate --out gt.jsonl --tracker.max-age lots") == 2);
    CHECK(s.run("simulate --out gt.jsonl", "TRAJFORGE_SEED=abc") == 2);
    CHECK(s.run("--help") == 0);
  }

  TEST_CASE("missing inputs") {
    Sandbox s;
    CHECK(s.run("--config small.ini simulate --out gt.jsonl") == 0);
    CHECK(s.run("--config small.ini build-dataset --in gt.jsonl --out d.jsonl") == 0);
    CHECK(s.run("--config small.ini train --mode finetune --init none.ckpt --data d.jsonl --out m.ckpt") == 2);
    CHECK(s.output().find("checkpoint not found") != std::string::npos);
    CHECK(s.run("--config small.ini eval --model none.ckpt --data d.jsonl --out e.json") != 0);
    CHECK(s.run("--config small.ini track --in absent.jsonl --out t.jsonl") == 1);
  }

  TEST_CASE("empty detections give an empty track file") {
    Sandbox s;
    write_file_atomic(s.dir / "empty.jsonl", "");
    CHECK(s.run("track --in empty.jsonl --out t.jsonl") == 0);
    CHECK(s.output().find("warning") != std::string::npos);
    CHECK(fs::exists(s.dir / "t.jsonl"));
    CHECK(read_file(s.dir / "t.jsonl").empty());
  }

  TEST_CASE("seed environment variable") {
    Sandbox s;
    CHECK(s.run("--config small.ini simulate --out a.jsonl") == 0);
    CHECK(s.run("--config small.ini simulate --out b.jsonl") == 0);
    CHECK(s.run("--config small.ini simulate --out c.jsonl", "TRAJFORGE_SEED=99") == 0);
    CHECK(file_sha256(s.dir / "a.jsonl") == file_sha256(s.dir / "b.jsonl"));
    CHECK(file_sha256(s.dir / "a.jsonl") != file_sha256(s.dir / "c.jsonl"));
    CHECK(fs::exists(s.dir / "manifest.json"));
  }

  TEST_CASE("experiment writes its tables") {
    Sandbox s;
    REQUIRE(s.run("--config small.ini --experiment.fractions 0.5,1 --experiment.seeds 0 experiment ppt --out-dir exp") == 0);
    const auto t = parse_csv(read_file(s.dir / "exp" / "ppt.csv"), "ppt.csv");
    CHECK(t.rows.size() == 4);
    CHECK(fs::exists(s.dir / "exp" / "ppt_convergence.csv"));
  }
}
