#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "generators.hpp"
#include "riskyish/bundled.hpp"
#include "riskyish/cli.hpp"

using namespace riskyish;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

struct Sandbox {
    fs::path dir;
    Sandbox() {
        static int counter = 0;
        dir = fs::temp_directory_path() / ("riskyish_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    std::string file(const std::string& name, const std::string& text) const {
        const auto p = dir / name;
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }

    Run run(std::vector<std::string> args, const std::string& stdin_text = {}) const {
        args.insert(args.begin(), {"--store", (dir / "store.json").string()});
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        const int code = run_cli(args, in, out, err);
        return {code, out.str(), err.str()};
    }
};

std::string fixture(const char* name) { return testing::read_file(std::string(RISKYISH_FIXTURES) + "/" + name); }

std::string header() {
    std::string h = "name";
    for (const auto& d : canonical_rubric().dimensions()) h += "," + d.id;
    return h;
}

std::string size_row(const std::string& name, int size) {
    std::string r = name + "," + std::to_string(size);
    for (int i = 1; i < 25; ++i) r += ",";
    return r;
}

} // namespace

TEST_CASE("help exits 0 for the app and every subcommand") {
    Sandbox box;
    CHECK(box.run({"--help"}).code == 0);
    for (const char* sub : {"score", "import", "export", "cluster", "dendrogram", "stats", "rubric", "serve"}) {
        CAPTURE(sub);
        const auto r = box.run({sub, "--help"});
        CHECK(r.code == 0);
        CHECK_FALSE(r.out.empty());
    }
}

TEST_CASE("usage errors exit 1") {
    Sandbox box;
    CHECK(box.run({}).code == 1);
    CHECK(box.run({"frobnicate"}).code == 1);
    CHECK(box.run({"cluster", "--k", "x"}).code == 1);
}

TEST_CASE("score") {
    Sandbox box;
    json scores = json::object();
    for (const auto& d : canonical_rubric().dimensions()) scores[d.id] = 4;
    const auto path = box.file("e.json", json{{"name", "max"}, {"scores", scores}}.dump());
    const auto r = box.run({"score", path});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["value"] == 4.0);

    const auto text = box.run({"score", "-", "--format", "text", "--policy", "answered"},
                              R"({"name":"p","scores":{"size":4,"weaponry":2}})");
    CHECK(text.code == 0);
    CHECK(text.out.find("value 3.00") != std::string::npos);

    CHECK(box.run({"score", box.file("bad.json", R"({"name":"x","scores":{"size":9}})")}).code == 2);
    CHECK(box.run({"score", (box.dir / "missing.json").string()}).code == 3);
}

TEST_CASE("import, export, cluster, dendrogram") {
    Sandbox box;
    const auto csv = box.file("in.csv", header() + "\n" + size_row("a", 0) + "\n" + size_row("b", 1) + "\n" +
                                            size_row("c", 4) + "\n");
    const auto imported = box.run({"import", csv});
    REQUIRE(imported.code == 0);
    CHECK(json::parse(imported.out)["imported"] == 3);

    const auto exported = box.run({"export"});
    CHECK(exported.code == 0);
    CHECK(exported.out.starts_with(header() + "\n"));

    const auto clustered = box.run({"cluster", "--k", "2"});
    REQUIRE(clustered.code == 0);
    const auto doc = json::parse(clustered.out);
    CHECK(doc["labels"] == json::array({0, 0, 1}));
    CHECK(doc["manifest"]["revision"] == 1);
    CHECK(std::abs(doc["linkage"]["steps"][1]["height"].get<double>() - std::sqrt(49.0 / 3.0)) < 1e-12);

    const auto newick = box.run({"dendrogram", "--format", "newick"});
    CHECK(newick.code == 0);
    CHECK(newick.out == "((a:1,b:1):3.041452,c:4.041452);\n");

    const auto ascii = box.run({"dendrogram", "--width", "20"});
    CHECK(ascii.code == 0);
    CHECK(ascii.out.find("c") != std::string::npos);

    CHECK(box.run({"cluster", "--k", "5"}).code == 4);

    const auto partial = box.file("partial.csv", header() + "\n" + size_row("d", 2) + "\n" + size_row("e", 9) + "\n");
    const auto p = box.run({"import", partial});
    CHECK(p.code == 2);
    CHECK(json::parse(p.out)["imported"] == 1);
}

TEST_CASE("cluster without enough entities exits 4") {
    Sandbox box;
    CHECK(box.run({"cluster"}).code == 4);
}

TEST_CASE("corrupt store exits 3") {
    Sandbox box;
    box.file("store.json", "{\"format\": ");
    CHECK(box.run({"export"}).code == 3);
}

TEST_CASE("demo dendrogram") {
    Sandbox box;
    const auto r = box.run({"dendrogram", "--demo"});
    REQUIRE(r.code == 0);
    for (const auto& e : demo_entities()) CHECK(r.out.find(e.name) != std::string::npos);
}

TEST_CASE("stats reproduces the question table") {
    Sandbox box;
    const auto path = box.file("resp.csv", fixture("ethnographic.csv"));
    const auto r = box.run({"stats", path, "--format", "tsv", "--layout", "columns", "--order", "input", "--moments"});
    CHECK(r.code == 0);
    CHECK(r.out == fixture("survey_background.tsv"));

    const auto j = box.run({"stats", path, "--frequencies"});
    REQUIRE(j.code == 0);
    const auto doc = json::parse(j.out);
    CHECK(doc["rows"][0]["label"] == "Professional Experience");
    CHECK(doc["rows"][0]["frequencies"][2]["percentage"] == 46.43);
    CHECK(box.run({"stats", box.file("bad.csv", "q\nx\n")}).code == 2);
}

TEST_CASE("rubric subcommand") {
    Sandbox box;
    const auto anchor = box.run({"rubric", "--anchor", "size", "4"});
    CHECK(anchor.code == 0);
    CHECK(anchor.out == "18 Wheeler, Tank, or larger\n");
    CHECK(box.run({"rubric", "--anchor", "wingspan", "1"}).code == 2);
    CHECK(box.run({"rubric", "--lexicon"}).out.starts_with("# Lexicon"));
    CHECK(load_rubric(box.run({"rubric"}).out) == canonical_rubric());

    const auto bad = box.file("r.json", "{\"version\": 1}");
    CHECK(box.run({"--rubric", bad, "rubric"}).code == 2);
}

TEST_CASE("the built binary reports exit codes") {
    const std::string bin = RISKYISH_CLI_PATH;
    auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status(bin + " --help") == 0);
    CHECK(status(bin + " nosuch") == 1);
    CHECK(status(bin + " rubric --anchor size 9") == 2);
    CHECK(status(bin + " --store /nonexistent/dir/s.json cluster --demo --k 3") == 0);
}
