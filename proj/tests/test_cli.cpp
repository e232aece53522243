// End-to-end checks of the cprep binary (path injected via CPREP_BIN).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cprep/ckpt.hpp"

namespace {

using nlohmann::json;

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("cprep_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_path = "/dev/null") {
    const std::string cmd = std::string(CPREP_BIN) + " " + args + " > " + stdout_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t line_count(const std::string& path) {
    const std::string text = read_all(path);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("clean subcommand filters a bitext file") {
    TempDir dir;
    const std::string in = dir.file("in.tsv");
    {
        std::ofstream out(in, std::ios::binary);
        out << "eng\tfra\tA first ordinary sentence that is long enough here.\tUne premiere "
               "phrase ordinaire suffisamment longue ici.\n";
        out << "eng\tfra\tHi.\tSalut.\n";
    }
    const std::string report = dir.file("report.json");
    const int status = run("clean --in " + in + " --out " + dir.file("out.tsv") + " --report " +
                           report);
    CHECK(status == 0);
    CHECK(line_count(dir.file("out.tsv")) == 1);

    const json doc = json::parse(read_all(report));
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["records_in"] == 2);
    CHECK(doc["records_out"] == 1);
}

TEST_CASE("run subcommand honors config files plus --set overrides") {
    TempDir dir;
    const std::string in = dir.file("in.tsv");
    {
        std::ofstream out(in, std::ios::binary);
        out << "eng\tfra\tA first ordinary sentence that is long enough here.\tUne premiere "
               "phrase ordinaire suffisamment longue ici.\n";
        out << "eng\tfra\tShortish but above twenty.\tCourte mais au dessus de vingt.\n";
    }
    const std::string config = dir.file("pipeline.conf");
    {
        std::ofstream out(config);
        out << "input = " << in << "\n";
        out << "output = " << dir.file("out.tsv") << "\n";
        out << "report = " << dir.file("report.json") << "\n";
        out << "stages = clean-pair\n";
        out << "clean.min_chars = 20\n";
    }
    CHECK(run("run --config " + config) == 0);
    CHECK(line_count(dir.file("out.tsv")) == 2);

    // Tighten the limit from the command line; one record now drops.
    CHECK(run("run --config " + config + " --set clean.min_chars=30") == 0);
    CHECK(line_count(dir.file("out.tsv")) == 1);
}

TEST_CASE("dump-default-config emits a loadable config") {
    TempDir dir;
    const std::string dumped = dir.file("defaults.conf");
    CHECK(run("run --dump-default-config", dumped) == 0);
    const std::string text = read_all(dumped);
    CHECK(text.find("clean.min_chars = 30") != std::string::npos);
    CHECK(text.find("mdl.c = 2") != std::string::npos);
    CHECK(text.find("threshold.min_laser = 1.06") != std::string::npos);
}

TEST_CASE("shuffle subcommand prints a JSON summary and permutes records") {
    TempDir dir;
    const std::string in = dir.file("in.txt");
    {
        std::ofstream out(in, std::ios::binary);
        for (int i = 0; i < 100; ++i) out << "line-" << i << "\n";
    }
    const std::string summary = dir.file("summary.json");
    CHECK(run("shuffle --in " + in + " --out " + dir.file("out.txt") +
                  " --pointers 4 --buffer 16 --seed 3",
              summary) == 0);
    const json doc = json::parse(read_all(summary));
    CHECK(doc["records"] == 100);
    CHECK(line_count(dir.file("out.txt")) == 100);

    CHECK(run("static-shuffle --in " + in + " --out " + dir.file("static.txt") + " --seed 5",
              summary) == 0);
    CHECK(json::parse(read_all(summary))["records"] == 100);
    CHECK(line_count(dir.file("static.txt")) == 100);
}

TEST_CASE("vocab-merge and vocab-verify work end to end") {
    TempDir dir;
    const std::string old_vocab = dir.file("old.vocab");
    const std::string new_vocab = dir.file("new.vocab");
    {
        std::ofstream out(old_vocab);
        out << "a\t-1\nb\t-1.2\n";
    }
    {
        std::ofstream out(new_vocab);
        out << "ab\t-0.5\nc\t-0.7\n";
    }
    const std::string merged = dir.file("merged.vocab");
    CHECK(run("vocab-merge --old " + old_vocab + " --new " + new_vocab + " --out " + merged) ==
          0);
    const std::string text = read_all(merged);
    CHECK(text.find("c\t-11.2") != std::string::npos);
    CHECK(text.find("ab\t") == std::string::npos);

    const std::string corpus = dir.file("corpus.txt");
    {
        std::ofstream out(corpus);
        out << "abba\nbaab\naaaa\n";
    }
    const std::string verify_out = dir.file("verify.json");
    CHECK(run("vocab-verify --old " + old_vocab + " --merged " + merged + " --corpus " + corpus,
              verify_out) == 0);
    const json doc = json::parse(read_all(verify_out));
    CHECK(doc["checked"] == 3);
    CHECK(doc["mismatches"] == 0);
}

TEST_CASE("avg-ckpt averages the trailing checkpoints") {
    TempDir dir;
    std::vector<std::string> files;
    for (int i = 0; i < 3; ++i) {
        cprep::Checkpoint ckpt;
        ckpt.tensors["w"] = {{2}, {static_cast<float>(i), static_cast<float>(2 * i)}};
        files.push_back(dir.file("c" + std::to_string(i) + ".cavg"));
        cprep::save_checkpoint(ckpt, files.back());
    }
    const std::string out = dir.file("avg.cavg");
    CHECK(run("avg-ckpt -k 2 --out " + out + " " + files[0] + " " + files[1] + " " + files[2]) ==
          0);
    const cprep::Checkpoint averaged = cprep::load_checkpoint(out);
    // Last two checkpoints: means of {1,2} and {2,4}.
    CHECK(averaged.tensors.at("w").values[0] == doctest::Approx(1.5));
    CHECK(averaged.tensors.at("w").values[1] == doctest::Approx(3.0));
}

TEST_CASE("route and tag subcommands expose the language plumbing") {
    TempDir dir;
    const std::string out = dir.file("route.json");
    CHECK(run("route --src fuv --tgt fon", out) == 0);
    json doc = json::parse(read_all(out));
    CHECK(doc["route"] == "pivot");
    CHECK(doc["via"] == "eng");

    CHECK(run("route --src fra --tgt swh", out) == 0);
    CHECK(json::parse(read_all(out))["route"] == "direct");

    const std::string pairs = dir.file("pairs.tsv");
    {
        std::ofstream o(pairs, std::ios::binary);
        o << "eng\tfra\thello\tbonjour\n";
    }
    const std::string tagged = dir.file("tagged.tsv");
    CHECK(run("tag --in " + pairs + " --out " + tagged) == 0);
    CHECK(read_all(tagged) == "<fra> hello\t<fra> bonjour\n");
}

TEST_CASE("stats aggregates reports from multiple runs") {
    TempDir dir;
    const std::string in = dir.file("in.tsv");
    {
        std::ofstream out(in, std::ios::binary);
        out << "eng\tfra\tHi.\tSalut.\n";
        out << "eng\tfra\tHello again my friend.\tRebonjour mon ami la.\n";
    }
    const std::string r1 = dir.file("r1.json");
    const std::string r2 = dir.file("r2.json");
    CHECK(run("clean --in " + in + " --out " + dir.file("o1.tsv") + " --report " + r1) == 0);
    CHECK(run("clean --in " + in + " --out " + dir.file("o2.tsv") + " --report " + r2) == 0);

    const std::string agg = dir.file("agg.out");
    CHECK(run("stats " + r1 + " " + r2 + " --json", agg) == 0);
    // Two runs, two TooShort drops each.
    const std::string text = read_all(agg);
    const auto doc = json::parse(text);
    CHECK(doc["records_in"] == 4);
    bool found = false;
    for (const auto& stage : doc["stages"]) {
        if (stage["name"] == "clean-pair") {
            CHECK(stage["dropped"]["TooShort"] == 4);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("fatal errors exit nonzero") {
    TempDir dir;
    CHECK(run("clean --in /nonexistent/input.tsv --out " + dir.file("out.tsv")) != 0);
    CHECK(run("run --config /nonexistent/config.conf") != 0);
}
