#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "doctest.h"
#include "treepark/config.hpp"
#include "treepark/errors.hpp"

using namespace treepark;

namespace {

nlohmann::json canonical_config(double alpha) {
  return nlohmann::json{
      {"model",
       {{"offspring", {{"family", "geometric"}, {"K_max", 40}}},
        {"arrivals",
         {{"mode", "uniform"},
          {"family", "poisson"},
          {"params", {{"alpha", alpha}}},
          {"truncation", 30}}}}},
      {"seed", 42}};
}

std::filesystem::path write_temp(const nlohmann::json& j, const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p);
  out << j.dump(2);
  return p;
}

}  // namespace

TEST_CASE("config: canonical model loads") {
  const LoadedConfig cfg = load_config(canonical_config(0.325));
  CHECK(cfg.seed == 42);
  CHECK(theta(cfg.model) == doctest::Approx(0.244375).epsilon(1e-9));
}

TEST_CASE("config: unknown keys rejected everywhere") {
  auto j = canonical_config(0.325);
  j["modell"] = 1;
  CHECK_THROWS_AS(load_config(j), Error);
  auto j2 = canonical_config(0.325);
  j2["model"]["offspring"]["Kmax"] = 40;
  CHECK_THROWS_AS(load_config(j2), Error);
  auto j3 = canonical_config(0.325);
  j3["model"]["arrivals"]["alpha"] = 0.3;
  CHECK_THROWS_AS(load_config(j3), Error);
}

TEST_CASE("config: per-degree and leaf-only arrivals") {
  nlohmann::json j{
      {"model",
       {{"offspring", {{"family", "binary"}}},
        {"arrivals",
         {{"mode", "per-degree"},
          {"laws",
           {{"0", {{"family", "deterministic"}, {"params", {{"value", 2}}}}},
            {"2", {{"family", "deterministic"}, {"params", {{"value", 0}}}}}}}}}}}};
  const LoadedConfig cfg = load_config(j);
  CHECK(cfg.model.arrival_law(0).is_delta(2));
  CHECK(cfg.model.arrival_law(2).is_delta(0));
  CHECK(theta(cfg.model) == doctest::Approx(0.0).epsilon(1e-12));

  nlohmann::json leaf{
      {"model",
       {{"offspring", {{"family", "geometric"}, {"K_max", 30}}},
        {"arrivals",
         {{"mode", "leaf-only"}, {"family", "bernoulli"}, {"params", {{"p", 0.5}}}}}}}};
  const LoadedConfig lc = load_config(leaf);
  CHECK(lc.model.arrival_law(0).mean() == doctest::Approx(0.5));
  CHECK(lc.model.arrival_law(1).is_delta(0));
}

TEST_CASE("config: degenerate models rejected with model errors") {
  nlohmann::json j{
      {"model",
       {{"offspring", {{"family", "custom"}, {"probs", {0.0, 1.0}}}},
        {"arrivals",
         {{"mode", "uniform"}, {"family", "deterministic"}, {"params", {{"value", 0}}}}}}}};
  CHECK_THROWS_AS(load_config(j), Error);  // nu = delta_1
}

TEST_CASE("cli: classify prints theta and regime") {
  const auto p = write_temp(canonical_config(0.325), "tp_classify.json");
  CHECK(cli::run({"classify", "--config", p.string()}) == 0);
  CHECK(cli::run({"classify", "--config", p.string(), "--json"}) == 0);
}

TEST_CASE("cli: classify on nu = delta_1 exits 2") {
  nlohmann::json j{
      {"model",
       {{"offspring", {{"family", "custom"}, {"probs", {0.0, 1.0}}}},
        {"arrivals",
         {{"mode", "uniform"}, {"family", "poisson"}, {"params", {{"alpha", 0.3}}}}}}}};
  const auto p = write_temp(j, "tp_delta1.json");
  CHECK(cli::run({"classify", "--config", p.string()}) == 2);
}

TEST_CASE("cli: park on the figure-1 fixture") {
  const std::filesystem::path fixture =
      std::filesystem::path(TREEPARK_FIXTURES_DIR) / "figure1.txt";
  CHECK(cli::run({"park", "--input", fixture.string()}) == 0);
  CHECK(cli::run({"park", "--input", fixture.string(), "--json"}) == 0);
  CHECK(cli::run({"park", "--input", "/nonexistent/file"}) == 2);
}

TEST_CASE("cli: law emits CSV and JSON summaries") {
  auto j = canonical_config(0.325);
  j["experiment"] = {{"name", "law"}, {"N", 64}, {"tol", 1e-10}, {"window", 8}};
  const auto p = write_temp(j, "tp_law.json");
  const auto out = std::filesystem::temp_directory_path() / "tp_law_out";
  std::filesystem::remove_all(out);
  CHECK(cli::run({"law", "--config", p.string(), "--out", out.string()}) == 0);
  CHECK(std::filesystem::exists(out / "law.csv"));
  CHECK(std::filesystem::exists(out / "law.json"));
  std::ifstream csv(out / "law.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,p_k\r");
  std::filesystem::remove_all(out);
}

TEST_CASE("cli: simulate root_parked small run") {
  auto j = canonical_config(0.325);
  j["experiment"] = {{"name", "root_parked"}, {"reps", 20000}, {"size_cap", 1000000}};
  const auto p = write_temp(j, "tp_sim.json");
  CHECK(cli::run({"simulate", "--config", p.string(), "--threads", "2"}) == 0);
}

TEST_CASE("cli: series subcommand") {
  auto j = canonical_config(0.325);
  j["experiment"] = {{"name", "series"}, {"D", 6}, {"w_order", 32}, {"window", 8}};
  const auto p = write_temp(j, "tp_series.json");
  CHECK(cli::run({"series", "--config", p.string()}) == 0);
  CHECK(cli::run({"series", "--config", p.string(), "--emit-f"}) == 0);
}

TEST_CASE("cli: unknown subcommand or missing config exits 2") {
  CHECK(cli::run({"frobnicate"}) == 2);
  CHECK(cli::run({"classify"}) == 2);
  CHECK(cli::run({"classify", "--config", "/nonexistent.json"}) == 2);
}
