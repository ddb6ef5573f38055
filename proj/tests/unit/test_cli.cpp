// Copyright 2026 The MultiQ-NLP Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "multiq/features.hpp"
#include "unit/support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "multiq-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Runs the binary with stdout captured to a file; stderr is discarded.
Run run(const std::string &args) {
    const auto out = fs::temp_directory_path() / "multiq-cli-tests" / "stdout.txt";
    fs::create_directories(out.parent_path());
    const std::string cmd = std::string("\"") + MULTIQ_BIN + "\" " + args +
                            " > \"" + out.string() + "\" 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    return r;
}

std::string quoted(const fs::path &p) { return "\"" + p.string() + "\""; }

} // namespace

TEST_CASE("parse prints the reduction", "[cli]") {
    const auto r = run("parse \"Dogs chase cats\"");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.at("cups").size() == 2);
    REQUIRE(j.at("result") == "s");
}

TEST_CASE("Bad input exits nonzero", "[cli]") {
    REQUIRE(run("parse \"Dogs chase zebras\"").status == 1);
    REQUIRE(run("parse \"Dogs cats\"").status == 1);
    REQUIRE(run("diagram \"Dogs chase cats\" --model tree").status != 0);
    REQUIRE(run("no-such-command").status != 0);

    const auto dir = scratch("schema");
    {
        std::ofstream out(dir / "bad.jsonl");
        out << R"({"sentence": "Dogs chase cats", "pos_image": "x"})" << '\n';
    }
    const auto r = run("train --task unstructured --synthetic-seed 1 --data " +
                       quoted(dir / "bad.jsonl") + " --lexicon " +
                       quoted(testing::data_dir() / "lexicon.tsv"));
    REQUIRE(r.status == 1);
}

TEST_CASE("diagram and compile emit JSON", "[cli]") {
    const auto d = run("diagram \"Dogs chase cats\" --model cfg --image img");
    REQUIRE(d.status == 0);
    REQUIRE(nlohmann::json::parse(d.out).contains("boxes"));
    const auto c = run("compile \"Dogs chase cats\" --image img --synthetic-seed 3");
    REQUIRE(c.status == 0);
    const auto j = nlohmann::json::parse(c.out);
    REQUIRE(j.at("circuit").at("n_qubits") == 10);
    REQUIRE(run("compile \"Dogs chase cats\" --synthetic-seed 3").status != 0);
}

TEST_CASE("features gen writes a loadable table", "[cli]") {
    const auto dir = scratch("features");
    const auto path = dir / "features.csv";
    const auto r = run("features gen --data " +
                       quoted(testing::data_dir() / "structured_sample.jsonl") +
                       " --task structured --out " + quoted(path));
    REQUIRE(r.status == 0);
    const auto t = multiq::load_features(path, 20);
    REQUIRE(t.size() > 0);
}

TEST_CASE("train and report", "[cli]") {
    const auto dir = scratch("train");
    const auto r = run("train --model seq --task structured --synthetic-seed 2 "
                       "--epochs 2 --seeds 1,2 --data " +
                       quoted(testing::data_dir() / "structured_sample.jsonl") +
                       " --out " + quoted(dir / "run"));
    REQUIRE(r.status == 0);
    REQUIRE(fs::exists(dir / "run" / "results.json"));
    REQUIRE(fs::exists(dir / "run" / "seed-2" / "metrics.csv"));
    const auto rep = run("report " + quoted(dir / "run"));
    REQUIRE(rep.status == 0);
    // Header plus epochs 0, 1 and 2.
    REQUIRE(std::count(rep.out.begin(), rep.out.end(), '\n') == 4);
}
