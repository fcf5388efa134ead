#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "tgc/cli.hpp"

namespace cli = tgc::cli;
using tgc::ErrorCode;

namespace {

const char* kDiscs = R"({"n":1,"sets":{"K0":{"kind":"log_generators","data":[[-1]]},
                                      "K1":{"kind":"log_generators","data":[[-2]]}}})";
const char* kTwoGen = R"({"n":2,"sets":{"K0":{"kind":"log_generators","data":[[-1,-2],[-2,-1]]},
                                       "K1":{"kind":"log_generators","data":[[-1,-1]]}}})";

ErrorCode parse_error(const std::string& text) {
  try {
    cli::parse_spec(text);
  } catch (const tgc::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::EmptyGenerators;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::string& name, std::vector<std::string> sets, const cli::RunConfig& cfg,
            const std::string& spec) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run({name, "spec.json", std::move(sets)}, cfg, spec, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(ParseSpec, TwoDiscs) {
  const auto spec = cli::parse_spec(kDiscs);
  EXPECT_EQ(spec.dim, 1u);
  ASSERT_EQ(spec.sets.size(), 2u);
  EXPECT_EQ(spec.find("K0").body.generators(), (std::vector<tgc::Point>{{-1}}));
  EXPECT_EQ(spec.find("K1").body.generators(), (std::vector<tgc::Point>{{-2}}));
}

TEST(ParseSpec, PolyradiiBecomeLogs) {
  const auto spec =
      cli::parse_spec(R"({"n":2,"sets":{"P":{"kind":"polyradii","data":[[0.5,0.25]]}}})");
  const auto& y = spec.find("P").body.generators().front();
  EXPECT_NEAR(y[0], -0.6931, 1e-4);
  EXPECT_NEAR(y[1], -1.3863, 1e-4);
  EXPECT_DOUBLE_EQ(y[0], std::log(0.5));
}

TEST(ParseSpec, Errors) {
  EXPECT_EQ(parse_error(R"({"n":2,"sets":{"P":{"kind":"polyradii","data":[[0.5,1.0]]}}})"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(parse_error(R"({"n":1,"sets":{)"), ErrorCode::MalformedJson);
  EXPECT_EQ(parse_error(R"({"n":0,"sets":{"A":{"kind":"log_generators","data":[[-1]]}}})"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(parse_error(R"({"n":1,"sets":{"A":{"kind":"boxes","data":[[-1]]}}})"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(parse_error(R"({"n":2,"sets":{"A":{"kind":"log_generators","data":[[-1]]}}})"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(parse_error(R"({"n":1,"sets":{"A":{"kind":"log_generators","data":[[0.5]]}}})"),
            ErrorCode::NonNegativeCoordinate);
  EXPECT_EQ(parse_error(R"({"n":1,"sets":{"A":{"kind":"log_generators","data":[]}}})"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(parse_error(R"({"n":1,"extra":1,"sets":{"A":{"kind":"log_generators","data":[[-1]]}}})"),
            ErrorCode::SchemaViolation);
}

TEST(ParseSpec, ErrorsCarryPathAndSetName) {
  try {
    cli::parse_spec(R"({"n":2,"sets":{"P":{"kind":"polyradii","data":[[0.5,1.0]]}}})");
  } catch (const tgc::Error& e) {
    EXPECT_NE(std::string(e.what()).find("/sets/P/data/0/1"), std::string::npos) << e.what();
  }
  try {
    cli::parse_spec(R"({"n":1,"sets":{"A":{"kind":"log_generators","data":[[0.5]]}}})");
  } catch (const tgc::Error& e) {
    EXPECT_NE(std::string(e.what()).find("set 'A'"), std::string::npos) << e.what();
  }
}

TEST(ApplyGrid, CountAndList) {
  cli::RunConfig cfg;
  cli::apply_grid_option(cfg, "5");
  EXPECT_EQ(cfg.grid().size(), 5u);
  cli::apply_grid_option(cfg, "0,0.3,1");
  EXPECT_EQ(cfg.grid(), (std::vector<double>{0, 0.3, 1}));
  EXPECT_THROW(cli::apply_grid_option(cfg, "1"), tgc::Error);
  EXPECT_THROW(cli::apply_grid_option(cfg, "0,x,1"), tgc::Error);
}

TEST(Run, SweepOfDiscs) {
  cli::RunConfig cfg;
  cfg.method = tgc::Method::Exact;
  cfg.grid_count = 5;
  const auto r = run("sweep", {"K0", "K1"}, cfg, kDiscs);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("# tgc sweep", 0), 0u);
  EXPECT_NE(line.find("seed=0"), std::string::npos);
  std::getline(lines, line);
  EXPECT_EQ(line, "t,cap,cap_err,log_cap,linear_bound,geometric_bound,margin_log");
  for (int i = 0; i < 5; ++i) {
    std::getline(lines, line);
    const double t = std::stod(line.substr(0, line.find(',')));
    const double cap = std::stod(line.substr(line.find(',') + 1));
    EXPECT_NEAR(cap, 1.0 / (1.0 + t), 1e-15);
  }
}

TEST(Run, CapacityAndGeodesic) {
  cli::RunConfig cfg;
  auto r = run("capacity", {"K0"}, cfg, kTwoGen);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("K0,2,exact,0.66666666666666663,0,"), std::string::npos) << r.out;
  cfg.point = {-1.0};
  cfg.format = cli::Format::Json;
  r = run("geodesic", {"K0", "K1"}, cfg, kDiscs);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto doc = cli::Json::parse(r.out);
  EXPECT_EQ(doc["records"][0]["value"].get<double>(), -0.75);
  EXPECT_EQ(doc["records"][0]["a_1"].get<double>(), 0.5);
  EXPECT_EQ(doc["config"]["point"][0].get<double>(), -1.0);
}

TEST(Run, ExitCodes) {
  cli::RunConfig cfg;
  EXPECT_EQ(run("capacity", {"missing"}, cfg, kDiscs).code, cli::kExitInputError);
  EXPECT_EQ(run("capacity", {"K0"}, cfg, "{").code, cli::kExitInputError);
  EXPECT_EQ(run("sweep", {"K0"}, cfg, kDiscs).code, cli::kExitInputError);
  EXPECT_EQ(run("frobnicate", {"K0"}, cfg, kDiscs).code, cli::kExitInputError);
  cfg.point = {0.5};
  EXPECT_EQ(run("geodesic", {"K0", "K1"}, cfg, kDiscs).code, cli::kExitInputError);
  cli::RunConfig few;
  few.mc_samples = 10;
  const auto r = run("capacity", {"K0"}, few, kDiscs);
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_EQ(r.err.rfind("error: ParameterOutOfRange", 0), 0u) << r.err;
  cli::RunConfig exact3;
  exact3.method = tgc::Method::Exact;
  const char* three = R"({"n":3,"sets":{"A":{"kind":"log_generators","data":[[-1,-2,-1],[-2,-1,-1]]}}})";
  EXPECT_EQ(run("capacity", {"A"}, exact3, three).code, cli::kExitInputError);
}

TEST(Run, CheckBmPassesOnTwoGeneratorPair) {
  cli::RunConfig cfg;
  cfg.grid_count = 5;
  const auto r = run("check-bm", {"K0", "K1"}, cfg, kTwoGen);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err << r.out;
  EXPECT_NE(r.out.find("# volume_log_concave=true"), std::string::npos);
  EXPECT_NE(r.out.find("# equality_dichotomy_holds=true"), std::string::npos);
}

TEST(Run, JsonRoundTripIsBitExact) {
  cli::RunConfig cfg;
  cfg.format = cli::Format::Json;
  cfg.method = tgc::Method::MonteCarlo;
  cfg.mc_samples = 20'000;
  cfg.grid_count = 4;
  const auto r = run("check-bm", {"K0", "K1"}, cfg, kTwoGen);
  ASSERT_NE(r.code, cli::kExitInputError) << r.err;
  const auto doc = cli::Json::parse(r.out);
  // Recompute directly and compare every numeric field bit for bit.
  const auto spec = cli::parse_spec(kTwoGen);
  const auto caps = tgc::sweep(spec.find("K0").body, spec.find("K1").body, cfg.grid(),
                               cfg.method, cfg.budget());
  ASSERT_EQ(doc["records"].size(), caps.records.size());
  for (std::size_t i = 0; i < caps.records.size(); ++i) {
    const auto& rec = caps.records[i];
    const auto& row = doc["records"][i];
    EXPECT_EQ(row["t"].get<double>(), rec.t);
    EXPECT_EQ(row["cap"].get<double>(), rec.cap);
    EXPECT_EQ(row["cap_err"].get<double>(), rec.cap_err);
    EXPECT_EQ(row["log_cap"].get<double>(), rec.log_cap);
    EXPECT_EQ(row["linear_bound"].get<double>(), rec.linear_bound);
    EXPECT_EQ(row["geometric_bound"].get<double>(), rec.geometric_bound);
    EXPECT_EQ(row["margin_log"].get<double>(), rec.margin_log);
  }
  // Re-serialising the parsed document reproduces the bytes.
  EXPECT_EQ(doc.dump(2) + "\n", r.out);
}

TEST(Run, SameSeedSameBytes) {
  cli::RunConfig cfg;
  cfg.method = tgc::Method::MonteCarlo;
  cfg.mc_samples = 50'000;
  cfg.seed = 99;
  cfg.grid_count = 3;
  const auto a = run("sweep", {"K0", "K1"}, cfg, kTwoGen);
  const auto b = run("sweep", {"K0", "K1"}, cfg, kTwoGen);
  EXPECT_EQ(a.out, b.out);
  cfg.seed = 100;
  EXPECT_NE(run("sweep", {"K0", "K1"}, cfg, kTwoGen).out, a.out);
}
