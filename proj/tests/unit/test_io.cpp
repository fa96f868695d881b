#include <gtest/gtest.h>

#include <filesystem>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/error.hpp"
#include "dirgamma/io.hpp"

using namespace dirgamma;

TEST(Csv, RoundTripIsExact) {
  const DataMatrix x = dg_sample(200, DGParams({2, 2, 3}, {1.1, 1.2}, {1.5, 2.8}), RngSeed{1});
  EXPECT_EQ(parse_csv(format_csv(x)), x);
  const auto path = std::filesystem::temp_directory_path() / "dirgamma_io_roundtrip.csv";
  write_csv(path, x);
  EXPECT_EQ(read_csv(path), x);
  std::filesystem::remove(path);
}

TEST(Csv, AcceptsCrLfAndBlankLines) {
  const DataMatrix x = parse_csv("x1,x2\r\n0.5,1.5\r\n\r\n2,3\r\n");
  EXPECT_EQ(x, DataMatrix(2, 2, {0.5, 1.5, 2, 3}));
}

TEST(Csv, ErrorsCarryLineNumbers) {
  const auto line_of = [](const char* text) {
    try {
      parse_csv(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("a,b\n1,2\n"), 1u);
  EXPECT_EQ(line_of("x1,x2\n1,2\n3\n"), 3u);
  EXPECT_EQ(line_of("x1,x2\n1,2\n3,abc\n"), 3u);
  EXPECT_EQ(line_of("x1,x2\n1,-2\n"), 2u);
  EXPECT_EQ(line_of("x1,x2\n1,2\n\n4,0\n"), 4u);
  EXPECT_EQ(line_of("x1,x2\n"), 1u);
  EXPECT_EQ(line_of("x1\n1e999\n"), 2u);
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_THROW(read_file("/nonexistent/dir/file.csv"), IoError);
  EXPECT_THROW(write_file("/nonexistent/dir/file.csv", "x"), IoError);
}

TEST(Hash, GitBlobIds) {
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Json, FitResultFields) {
  FitResult fit;
  fit.model = Model::Dirichlet;
  fit.p = 2;
  fit.estimates = {1, 2, 3};
  fit.names = {"alpha1", "alpha2", "alpha3"};
  fit.loglik = -51.41;
  fit.n_params = 3;
  fit.n_obs = 30;
  const auto ic = information_criteria(fit.loglik, 3, 30);
  fit.aic = ic.aic;
  fit.bic = ic.bic;
  const Json j = to_json(fit);
  EXPECT_EQ(j["model"], "dirichlet");
  EXPECT_EQ(j["n_params"], 3);
  EXPECT_NEAR(j["aic"].get<double>(), 108.820, 1e-9);
  EXPECT_NEAR(j["bic"].get<double>(), 113.023, 1e-3);
  EXPECT_EQ(j["estimates"]["alpha2"], 2.0);
}
