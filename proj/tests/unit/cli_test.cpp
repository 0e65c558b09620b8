#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "eavfoil/cli/runner.hpp"
#include "test_support.hpp"

namespace eavfoil::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

// Runs the built CLI binary in batch mode over `script` text.
CliRun run_cli(const std::string& script, const std::string& extra = "") {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("eavfoil_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path n = dir / std::to_string(++counter);
  std::ofstream(n.string() + ".script") << script;
  const std::string cmd = std::string("\"") + EAVFOIL_CLI_PATH + "\" --scene " + testing::data_path("scenes/showcase.json") +
                          " --embeddings " + testing::data_path("embeddings/toy.vec") + " --patterns " +
                          testing::data_path("nlu/patterns.txt") + " --batch " + n.string() + ".script " + extra +
                          " >" + n.string() + ".out 2>" + n.string() + ".err";
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(n.string() + ".out"), read_file(n.string() + ".err")};
}

std::string showcase_script() { return read_file(testing::data_path("scripts/showcase.script")); }

TEST(CliBinary, ShowcaseSucceeds) {
  CliRun r = run_cli(showcase_script());
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("expectations: 18 passed, 0 failed; errors: 0"), std::string::npos);
  EXPECT_NE(r.out.find("human: the white mug on the table\nrobot: I see, the white mug is on the table\n"),
            std::string::npos);
}

TEST(CliBinary, OutputIsDeterministic) {
  EXPECT_EQ(run_cli(showcase_script()).out, run_cli(showcase_script()).out);
}

TEST(CliBinary, FailedExpectationExitsTwo) {
  CliRun r = run_cli(showcase_script() + "\n:induce owner mary\nexpect rule \"mary(A,B,C,D) :- toy(C).\"\n");
  EXPECT_EQ(r.code, kExitAssertion);
  EXPECT_NE(r.out.find("FAIL: expect rule"), std::string::npos);
}

TEST(CliBinary, ErrorExitsOne) {
  CliRun r = run_cli("hello\n:induce owner nobody\nexpect reply \"Hi there!\"\n");
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.out.find("error: "), std::string::npos);
  EXPECT_NE(r.out.find("empty example set"), std::string::npos);
  EXPECT_NE(r.out.find("1 passed, 0 failed; errors: 1"), std::string::npos);
}

TEST(CliBinary, MissingFileNamesPath) {
  CliRun r = run_cli("hello\n", "--kb /nonexistent/kb.json");
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("/nonexistent/kb.json"), std::string::npos);
}

service::Session& session_for_repl() {
  static auto s = [] {
    CliConfig c;
    c.scene_path = testing::data_path("scenes/showcase.json");
    c.embeddings_path = testing::data_path("embeddings/toy.vec");
    c.patterns_path = testing::data_path("nlu/patterns.txt");
    return open_session(c);
  }();
  return *s;
}

TEST(CliRepl, ContinuesAfterErrorsAndQuits) {
  CliConfig c;
  c.scene_path = testing::data_path("scenes/showcase.json");
  c.embeddings_path = testing::data_path("embeddings/toy.vec");
  c.patterns_path = testing::data_path("nlu/patterns.txt");
  std::istringstream in(":induce owner nobody\n:bogus\nhello\n:quit\nhello\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(c, in, out, err), kExitOk);
  const std::string text = out.str();
  EXPECT_NE(text.find("error: empty example set"), std::string::npos);
  EXPECT_NE(text.find("error: unknown command ':bogus'"), std::string::npos);
  EXPECT_EQ(text.find("robot: Hi there!"), text.rfind("robot: Hi there!"));
}

TEST(CliRunner, Expectations) {
  service::Session& s = session_for_repl();
  std::ostringstream out;
  Runner r(s, out);
  EXPECT_EQ(r.execute("expect norule"), Runner::Status::assertion_failed);
  EXPECT_EQ(r.execute("hello"), Runner::Status::ok);
  EXPECT_EQ(r.execute("expect reply \"Hi there!\""), Runner::Status::ok);
  EXPECT_EQ(r.execute("expect reply \"Hi\""), Runner::Status::assertion_failed);
  EXPECT_EQ(r.execute("expect value obj1 color white"), Runner::Status::ok);
  EXPECT_EQ(r.execute("expect value obj1 owner mary"), Runner::Status::assertion_failed);
  EXPECT_EQ(r.execute("expect value obj1 colour white"), Runner::Status::error);
  EXPECT_EQ(r.execute("expect rule mary"), Runner::Status::assertion_failed);
  EXPECT_EQ(r.execute("# comment"), Runner::Status::ok);
  EXPECT_EQ(r.passes(), 2u);
  EXPECT_EQ(r.failures(), 4u);
  EXPECT_EQ(r.errors(), 1u);
}

TEST(CliFormat, Helpers) {
  EXPECT_EQ(format_number(2.5 / 3), "0.8333");
  EXPECT_EQ(format_number(2), "2");
  EXPECT_EQ(clause_key("  a(A) :- b(A).  "), "a(A) :- b(A)");
  EXPECT_EQ(clause_key("a(A) :- b(A)"), "a(A) :- b(A)");
}

}  // namespace
}  // namespace eavfoil::cli
