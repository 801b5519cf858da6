#include "stablevol/config.hpp"
#include "stablevol/csv.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using stablevol::ExperimentConfig;
using stablevol::apply_config_entry;
using stablevol::emit_csv;
using stablevol::format_double;
using stablevol::parse_double;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
    for (const double v : {0.99951171875, 1.0 / 3.0, 0x1.0p-16, 6.02e23, -0.0, 0.0001}) {
        const std::string s = format_double(v);
        EXPECT_EQ(parse_double(s), v) << s;
    }
    EXPECT_EQ(format_double(0.99951171875), "0.99951171875");
}

TEST(ParseDouble, RejectsJunk) {
    EXPECT_THROW(parse_double("abc"), std::domain_error);
    EXPECT_THROW(parse_double("1.5x"), std::domain_error);
    EXPECT_THROW(parse_double(""), std::domain_error);
}

TEST(EmitCsv, HeaderOnlyForEmptyRecordSet) {
    const auto path = temp_file("stablevol_empty.csv");
    const std::vector<std::string> header = {"a", "b"};
    const std::vector<std::vector<std::string>> rows;
    emit_csv(header, rows, path);
    EXPECT_EQ(slurp(path), "a,b\n");
    std::filesystem::remove(path);
}

TEST(EmitCsv, LfLineEndingsAndExactReals) {
    const auto path = temp_file("stablevol_vals.csv");
    const std::vector<std::string> header = {"index", "value"};
    const std::vector<std::vector<std::string>> rows = {
        {"0", format_double(0.99951171875)},
        {"1", format_double(0x1.0p-16)},
    };
    emit_csv(header, rows, path);
    const std::string text = slurp(path);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text, "index,value\n0,0.99951171875\n1,1.52587890625e-05\n");
    std::filesystem::remove(path);
}

TEST(EmitCsv, UnwritablePathNamesThePath) {
    const std::vector<std::string> header = {"a"};
    const std::vector<std::vector<std::string>> rows;
    try {
        emit_csv(header, rows, "/nonexistent-dir/deep/file.csv");
        FAIL() << "expected a throw";
    } catch (const stablevol::IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/deep/file.csv"),
                  std::string::npos);
    }
}

TEST(EmitCsv, RejectsEmptySchemaAndRaggedRows) {
    const auto path = temp_file("stablevol_bad.csv");
    const std::vector<std::string> empty_header;
    const std::vector<std::vector<std::string>> rows;
    EXPECT_THROW(emit_csv(empty_header, rows, path), std::domain_error);
    const std::vector<std::string> header = {"a", "b"};
    const std::vector<std::vector<std::string>> ragged = {{"1"}};
    EXPECT_THROW(emit_csv(header, ragged, path), std::domain_error);
    std::filesystem::remove(path);
}

TEST(Config, DefaultsMatchDeskScale) {
    const ExperimentConfig cfg;
    EXPECT_EQ(cfg.horizon, 1.0);
    EXPECT_EQ(cfg.q, 1.0);
    EXPECT_EQ(cfg.beta, 0.0);
    EXPECT_EQ(cfg.m, 500);
    EXPECT_EQ(cfg.delta_ref, 0x1.0p-15);
    ASSERT_EQ(cfg.deltas.size(), 5u);
    EXPECT_EQ(cfg.deltas.front(), 0x1.0p-13);
    EXPECT_EQ(cfg.deltas.back(), 0x1.0p-9);
}

TEST(Config, PresetTable1) {
    ExperimentConfig cfg = stablevol::preset_config("table1");
    EXPECT_EQ(cfg.mu, 1.5);
    EXPECT_EQ(cfg.lambda, 2.0);
    EXPECT_EQ(cfg.kappa, 0.5);
    EXPECT_EQ(cfg.x0, 1.0);
    const std::vector<double> alphas = {1.8, 1.6, 1.4, 1.1};
    EXPECT_EQ(cfg.alphas, alphas);
    // full-size grid engages behind the scale switch
    cfg.apply_paper_scale();
    EXPECT_EQ(cfg.m, 1000);
    EXPECT_EQ(cfg.delta_ref, 0x1.0p-16);
    ASSERT_EQ(cfg.deltas.size(), 5u);
    EXPECT_EQ(cfg.deltas.front(), 0x1.0p-14);
    EXPECT_EQ(cfg.deltas.back(), 0x1.0p-10);
}

TEST(Config, PresetTables2And3) {
    const ExperimentConfig t2 = stablevol::preset_config("table2");
    EXPECT_EQ(t2.mu, 2.0);
    EXPECT_EQ(t2.lambda, 3.0);
    EXPECT_EQ(t2.kappa, 0.5);
    const ExperimentConfig t3 = stablevol::preset_config("table3");
    EXPECT_EQ(t3.mu, 2.0);
    EXPECT_EQ(t3.lambda, 3.0);
    EXPECT_EQ(t3.kappa, 0.2);
    EXPECT_THROW(stablevol::preset_config("table9"), std::domain_error);
}

TEST(Config, RoundTripThroughSerialization) {
    ExperimentConfig cfg = stablevol::preset_config("table3");
    cfg.alphas = {1.8, 1.1};
    cfg.beta = 0.25;
    cfg.m = 123;
    cfg.master_seed = 9999;
    cfg.out_dir = "some/dir";
    cfg.threads = 4;
    cfg.sup_over_grid = true;
    cfg.deltas = {0x1.0p-11, 0x1.0p-10};
    cfg.delta_ref = 0x1.0p-14;

    const std::string text = stablevol::serialize_config(cfg);
    const auto path = temp_file("stablevol_cfg.txt");
    {
        std::ofstream out(path, std::ios::binary);
        out << text;
    }
    ExperimentConfig parsed;  // defaults differ; the file must override all
    stablevol::load_config_file(parsed, path);
    EXPECT_EQ(stablevol::serialize_config(parsed), text);
    EXPECT_EQ(parsed.alphas, cfg.alphas);
    EXPECT_EQ(parsed.deltas, cfg.deltas);
    EXPECT_EQ(parsed.delta_ref, cfg.delta_ref);
    EXPECT_EQ(parsed.m, cfg.m);
    EXPECT_EQ(parsed.master_seed, cfg.master_seed);
    EXPECT_EQ(parsed.out_dir, cfg.out_dir);
    EXPECT_EQ(parsed.threads, cfg.threads);
    EXPECT_EQ(parsed.sup_over_grid, cfg.sup_over_grid);
    std::filesystem::remove(path);
}

TEST(Config, DyadicNotationAccepted) {
    ExperimentConfig cfg;
    apply_config_entry(cfg, "deltas", "2^-10, 2^-9");
    ASSERT_EQ(cfg.deltas.size(), 2u);
    EXPECT_EQ(cfg.deltas[0], 0x1.0p-10);
    EXPECT_EQ(cfg.deltas[1], 0x1.0p-9);
    apply_config_entry(cfg, "ref", "2^-15");
    EXPECT_EQ(cfg.delta_ref, 0x1.0p-15);
}

TEST(Config, UnknownKeyListsValidKeys) {
    ExperimentConfig cfg;
    try {
        apply_config_entry(cfg, "lamda", "2");
        FAIL() << "expected a throw";
    } catch (const std::domain_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("lamda"), std::string::npos);
        EXPECT_NE(msg.find("lambda"), std::string::npos);
        EXPECT_NE(msg.find("deltas"), std::string::npos);
        EXPECT_NE(msg.find("seed"), std::string::npos);
    }
}

TEST(Config, ZeroLambdaRejectedByName) {
    ExperimentConfig cfg;
    cfg.lambda = 0.0;
    try {
        stablevol::validate_config(cfg);
        FAIL() << "expected a throw";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("lambda > 0"), std::string::npos);
    }
}

TEST(Config, NonDyadicDeltaRejected) {
    ExperimentConfig cfg;
    cfg.deltas = {0.001};
    EXPECT_THROW(stablevol::validate_config(cfg), std::domain_error);
    cfg = ExperimentConfig{};
    cfg.delta_ref = 0.0003;
    EXPECT_THROW(stablevol::validate_config(cfg), std::domain_error);
}

TEST(Config, StepOutsideWindowRejectedWithWindow) {
    ExperimentConfig cfg;
    cfg.deltas = {0.5};  // delta_max = 0.25 for table1 parameters
    cfg.delta_ref = 0x1.0p-4;
    try {
        stablevol::validate_config(cfg);
        FAIL() << "expected a throw";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("0.25"), std::string::npos);
    }
}

TEST(Config, CommentsAndBlanksIgnored) {
    const auto path = temp_file("stablevol_cfg2.txt");
    {
        std::ofstream out(path, std::ios::binary);
        out << "# experiment parameters\n\nmu = 2 # drift\nlambda=3\n";
    }
    ExperimentConfig cfg;
    stablevol::load_config_file(cfg, path);
    EXPECT_EQ(cfg.mu, 2.0);
    EXPECT_EQ(cfg.lambda, 3.0);
    std::filesystem::remove(path);
}

TEST(Config, ValidatesEveryAlphaAgainstQ) {
    ExperimentConfig cfg;
    cfg.q = 1.2;  // violates q < alpha for alpha = 1.1
    EXPECT_THROW(stablevol::validate_config(cfg), std::domain_error);
    cfg.alphas = {1.8, 1.6};
    EXPECT_NO_THROW(stablevol::validate_config(cfg));
}
