#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "qbo/cli.hpp"

using nlohmann::json;

namespace {

const std::string kData = QBO_DATA_DIR;

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = qbo::cli_run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << body;
}

const char* kProductProblem = R"({
  "N": 1, "M": 1, "A": [[1]],
  "G": [{"coeffs": [0, 1, 0], "sense": "nonneg"},
        {"coeffs": [1, -1, 0], "sense": "nonneg"}],
  "K": [{"coeffs": [0, 0, 1], "sense": "nonneg"},
        {"coeffs": [1, 0, -1], "sense": "nonneg"}]
})";

}  // namespace

TEST_CASE("game subcommand reports value, oracle and audit") {
  std::string text;
  const std::vector<std::string> args = {"game",     "--file", kData + "/chsh.json",
                                         "--hierarchy", "npa",    "--oracle",
                                         "--seedless"};
  REQUIRE(run_cli(args, &text) == 0);
  const json j = json::parse(text);
  CHECK(j.at("command") == "game");
  CHECK(j.at("status") == "Optimal");
  CHECK(std::abs(j.at("value").get<double>() - 0.85355) <= 5e-4);
  CHECK(j.at("oracle") == "3/4");
  CHECK(j.at("oracle_value") == 0.75);
  CHECK(j.at("verified") == true);
  CHECK(j.at("wall_time_s") == 0.0);
  CHECK(j.at("instance").at("variables") == 33);

  std::string again;
  REQUIRE(run_cli(args, &again) == 0);
  CHECK(text == again);  // deterministic end to end
}

TEST_CASE("channel subcommand at pair level one") {
  std::string text;
  REQUIRE(run_cli({"channel", "--file", kData + "/subset_channel.json",
                   "--hierarchy", "new", "--level", "1", "--oracle", "--seedless"},
                  &text) == 0);
  const json j = json::parse(text);
  CHECK(j.at("status") == "Optimal");
  CHECK(std::abs(j.at("value").get<double>() - 0.908248) <= 5e-4);
  CHECK(j.at("oracle") == "5/6");
}

TEST_CASE("exported instances solve to the same value after reimport") {
  const std::string sdpa = "/tmp/qbo_cli_chsh.sdpa";
  std::string direct;
  REQUIRE(run_cli({"game", "--file", kData + "/chsh.json", "--hierarchy", "npa",
                   "--export-sdpa", sdpa, "--seedless"},
                  &direct) == 0);
  std::ifstream probe(sdpa);
  REQUIRE(probe.good());

  std::string reimported;
  REQUIRE(run_cli({"solve-file", "--file", sdpa, "--seedless"}, &reimported) == 0);
  const double v1 = json::parse(direct).at("value").get<double>();
  const double v2 = json::parse(reimported).at("value").get<double>();
  CHECK(std::abs(v1 - v2) <= 1e-9);
}

TEST_CASE("solve-file handles problem json with an oracle") {
  const std::string path = "/tmp/qbo_cli_product.json";
  write_file(path, kProductProblem);
  std::string text;
  REQUIRE(run_cli({"solve-file", "--file", path, "--hierarchy", "new", "--level",
                   "2", "--oracle", "--seedless"},
                  &text) == 0);
  const json j = json::parse(text);
  CHECK(j.at("hierarchy") == "new");
  CHECK(j.at("level") == 2);
  CHECK(j.at("oracle") == "1");
  CHECK(std::abs(j.at("value").get<double>() - 1.0) <= 1e-5);
}

TEST_CASE("cone membership drives the exit code") {
  std::string text;
  REQUIRE(run_cli({"csplus", "--file", kData + "/identity5.json", "--level", "2",
                   "--seedless"},
                  &text) == 0);
  CHECK(json::parse(text).at("membership") == "FeasibleAtLevel");

  const std::string neg = "/tmp/qbo_cli_neg.json";
  write_file(neg, R"({"N": 2, "K": [[1, -1], [-1, 1]]})");
  std::string outside;
  REQUIRE(run_cli({"csplus", "--file", neg, "--level", "3", "--seedless"},
                  &outside) == 2);
  const json j = json::parse(outside);
  CHECK(j.at("membership") == "CertifiedOutside");
  CHECK(j.at("margin").get<double>() >= 1e-6);
}

TEST_CASE("extractor subcommand reports the classical oracle") {
  std::string text;
  REQUIRE(run_cli({"extractor", "--file", kData + "/parity_extractor.json",
                   "--variant", "simplified", "--oracle", "--seedless"},
                  &text) == 0);
  const json j = json::parse(text);
  CHECK(j.at("variant") == "simplified");
  CHECK(j.at("oracle") == "1/2");
  CHECK(std::abs(j.at("value").get<double>() - 0.5) <= 1e-4);
}

TEST_CASE("bad inputs surface as error reports, not crashes") {
  const std::string garbage = "/tmp/qbo_cli_garbage.json";
  write_file(garbage, "not json at all{{{");
  std::string text;
  CHECK(run_cli({"game", "--file", garbage, "--seedless"}, &text) == 1);
  const json j = json::parse(text);
  CHECK(j.count("error") == 1);
  CHECK(j.at("error_code").get<std::string>().size() > 0);

  std::string err;
  CHECK(run_cli({"game"}, nullptr, &err) == 1);  // missing --file
  CHECK(!err.empty());
  CHECK(run_cli({"frobnicate"}, nullptr, &err) == 1);

  std::string help;
  CHECK(run_cli({"--help"}, &help) == 0);
  CHECK(help.find("game") != std::string::npos);
}

TEST_CASE("reports can be written to a file and fan out over workers") {
  const std::string path = "/tmp/qbo_cli_product2.json";
  write_file(path, kProductProblem);
  const std::string out_path = "/tmp/qbo_cli_report.json";
  REQUIRE(run_cli({"solve-file", "--file", path, "--seedless", "--out", out_path}) == 0);
  std::ifstream f(out_path);
  REQUIRE(f.good());
  const json j = json::parse(f);
  CHECK(j.at("status") == "Optimal");

  std::string text;
  REQUIRE(run_cli({"solve-file", "--file", path, "--file", path, "--jobs", "2",
                   "--seedless"},
                  &text) == 0);
  const json arr = json::parse(text);
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 2);
  CHECK(arr[0].at("file") == path);
  CHECK(arr[0].at("value") == arr[1].at("value"));

  std::string err;
  CHECK(run_cli({"solve-file", "--file", path, "--file", path, "--export-sdpa",
                 "/tmp/qbo_cli_two.sdpa"},
                nullptr, &err) == 1);
  CHECK(!err.empty());
}
