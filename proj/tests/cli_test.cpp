#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "simfuse/error.hpp"
#include "simfuse/text_io.hpp"
#include "toy_data.hpp"

namespace simfuse::cli {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(fs::temp_directory_path() / "simfuse_cli_test");
    fs::remove_all(*root_);
    fs::create_directories(*root_);
    std::ofstream pairs(*root_ / "train.tsv");
    write_pair_file(pairs, testing::toy_dataset());
    pairs.close();
    std::ofstream emb(*root_ / "emb.txt");
    write_text_embeddings(emb, testing::toy_embeddings());
    emb.close();
    RunResult r = run_cli({"train", "--pairs", path("train.tsv"), "--embeddings", path("emb.txt"), "--out",
                           path("model"), "--epochs", "30", "--n-max", "16"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    fs::remove_all(*root_);
    delete root_;
  }

  static std::string path(const std::string& name) { return (*root_ / name).string(); }

  static fs::path* root_;
};

fs::path* CliTest::root_ = nullptr;

TEST_F(CliTest, TrainWritesBundleAndProgress) {
  for (const char* f : {"embeddings.txt", "cnn.params", "fusion.params", "stats.tsv"}) {
    EXPECT_TRUE(fs::exists(*root_ / "model" / f)) << f;
  }
  RunResult r = run_cli({"train", "--pairs", path("train.tsv"), "--embeddings", path("emb.txt"), "--out",
                         path("model_log"), "--epochs", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = lines_of(r.out);
  std::size_t cnn_epochs = 0;
  bool weights = false;
  for (const auto& l : lines) {
    cnn_epochs += l.rfind("cnn_epoch\t", 0) == 0;
    weights |= l.rfind("weights\t", 0) == 0;
  }
  EXPECT_EQ(cnn_epochs, 3u);
  EXPECT_TRUE(weights);
  EXPECT_EQ(lines.back(), "bundle\t" + path("model_log"));
}

TEST_F(CliTest, TrainTwiceIsByteIdentical) {
  std::vector<std::string> args{"train", "--pairs", path("train.tsv"), "--embeddings", path("emb.txt"),
                                "--epochs", "10", "--out"};
  auto a = args, b = args;
  a.push_back(path("det_a"));
  b.push_back(path("det_b"));
  ASSERT_EQ(run_cli(a).code, 0);
  ASSERT_EQ(run_cli(b).code, 0);
  for (const char* f : {"embeddings.txt", "cnn.params", "fusion.params", "stats.tsv"}) {
    EXPECT_EQ(slurp(*root_ / "det_a" / f), slurp(*root_ / "det_b" / f)) << f;
  }
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"train", "--embeddings", path("emb.txt"), "--out", path("x")}).code, 2);
  EXPECT_EQ(run_cli({"score", "--model", path("model"), "--pairs", path("train.tsv"), "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, MissingEmbeddingsIsUsageErrorUnlessEnvSet) {
  ::unsetenv("SIMFUSE_EMBEDDINGS");
  RunResult none = run_cli({"train", "--pairs", path("train.tsv"), "--out", path("noemb"), "--epochs", "1"});
  EXPECT_EQ(none.code, 2);
  ::setenv("SIMFUSE_EMBEDDINGS", path("emb.txt").c_str(), 1);
  RunResult env = run_cli({"train", "--pairs", path("train.tsv"), "--out", path("envemb"), "--epochs", "1"});
  ::unsetenv("SIMFUSE_EMBEDDINGS");
  EXPECT_EQ(env.code, 0) << env.err;
}

TEST_F(CliTest, MalformedLineIsReportedByNumber) {
  std::string text;
  for (int i = 1; i <= 6; ++i) text += "p" + std::to_string(i) + "\tw1 w2\tw1 w3\t1\n";
  text += "p7\tonly three columns\t1\n";
  spit(*root_ / "bad.tsv", text);
  RunResult r = run_cli({"train", "--pairs", path("bad.tsv"), "--embeddings", path("emb.txt"), "--out",
                         path("bad_model"), "--epochs", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 7"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigFileAndUnknownKey) {
  spit(*root_ / "good.conf", "# settings\nepochs = 2\nembedding_path = " + path("emb.txt") + "\n");
  RunResult ok = run_cli({"train", "--pairs", path("train.tsv"), "--config", path("good.conf"), "--out",
                          path("conf_model")});
  ASSERT_EQ(ok.code, 0) << ok.err;
  std::size_t epochs = 0;
  for (const auto& l : lines_of(ok.out)) epochs += l.rfind("cnn_epoch\t", 0) == 0;
  EXPECT_EQ(epochs, 2u);

  spit(*root_ / "bad.conf", "epochs = 2\ndropout = 0.5\n");
  RunResult bad = run_cli({"train", "--pairs", path("train.tsv"), "--embeddings", path("emb.txt"),
                           "--config", path("bad.conf"), "--out", path("conf_bad")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("dropout"), std::string::npos);
}

TEST(CliConfig, ApplySettingValidates) {
  CliConfig c;
  apply_setting(c, "learning_rate", "0.1");
  apply_setting(c, "label_convention", "zero_is_similar");
  apply_setting(c, "fusion_mode", "weighted_sum");
  apply_setting(c, "weighting_factor", "f1");
  EXPECT_EQ(c.learning_rate, 0.1);
  EXPECT_EQ(c.label_convention, LabelConvention::ZeroIsSimilar);
  EXPECT_EQ(c.fusion_mode, FusionMode::WeightedSum);
  EXPECT_EQ(c.weighting_factor, WeightingFactor::F1);
  EXPECT_THROW(apply_setting(c, "epochs", "0"), ConfigError);
  EXPECT_THROW(apply_setting(c, "learning_rate", "-1"), ConfigError);
  EXPECT_THROW(apply_setting(c, "fusion_mode", "mean"), ConfigError);
  EXPECT_THROW(apply_setting(c, "colour", "red"), ConfigError);
}

TEST_F(CliTest, ScoreTsvRecordsAndRefuse) {
  spit(*root_ / "three.tsv", "a\tw1 w2 w3\tw1 w2 w3\t1\nb\tw1 w2\tw30 w31\t0\nc\tw5 w6 w7\tw5 w8\t1\n");
  RunResult r = run_cli({"score", "--model", path("model"), "--pairs", path("three.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "id\tjaccard\tw2vcnn\ttfidf\tfused\tpredicted");

  ModelBundle bundle = load_bundle(path("model"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = text::split(lines[i], '\t');
    ASSERT_EQ(f.size(), 6u);
    EXPECT_EQ(f[0], std::string(1, "abc"[i - 1]));
    ScoreTriple t{*text::parse_double(f[1]), *text::parse_double(f[2]), *text::parse_double(f[3])};
    const double fused = *text::parse_double(f[4]);
    EXPECT_EQ(fuse(t, bundle.weights, bundle.fusion), fused);
    EXPECT_EQ(f[5], to_string(classify(fused)));
  }
  auto first = text::split(lines[1], '\t');
  EXPECT_EQ(first[1], "1");
  EXPECT_EQ(first[3], "1");
}

TEST_F(CliTest, ScoreJsonLines) {
  RunResult r = run_cli({"score", "--model", path("model"), "--pairs", path("train.tsv"), "--format", "json",
                         "--threads", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 100u);
  auto j = nlohmann::json::parse(lines[0]);
  for (const char* key : {"id", "jaccard", "w2vcnn", "tfidf", "fused", "predicted"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["id"], "s0");
  EXPECT_EQ(j.size(), 6u);
}

TEST_F(CliTest, ScoreMissingBundleFile) {
  fs::create_directories(*root_ / "broken");
  fs::copy(*root_ / "model", *root_ / "broken", fs::copy_options::overwrite_existing);
  fs::remove(*root_ / "broken" / "cnn.params");
  RunResult r = run_cli({"score", "--model", path("broken"), "--pairs", path("train.tsv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("cnn.params"), std::string::npos);
}

TEST_F(CliTest, EvalBinary) {
  RunResult r = run_cli({"eval", "--model", path("model"), "--pairs", path("train.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = lines_of(r.out);
  EXPECT_EQ(lines[0], "pairs\t100");
  EXPECT_NE(r.out.find("accuracy\t"), std::string::npos);
  EXPECT_NE(r.out.find("f1\t"), std::string::npos);
}

TEST_F(CliTest, EvalPerfectBinaryPredictions) {
  // Relabel the toy pairs with the model's own verdicts.
  RunResult scored = run_cli({"score", "--model", path("model"), "--pairs", path("train.tsv")});
  ASSERT_EQ(scored.code, 0);
  auto lines = lines_of(scored.out);
  std::ifstream in(path("train.tsv"));
  Dataset d = parse_pair_file(in, LabelKind::Binary);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.pairs[i].label = text::split(lines[i + 1], '\t')[5] == "similar" ? 1.0 : 0.0;
  }
  std::ofstream out(path("own.tsv"));
  write_pair_file(out, d);
  out.close();
  RunResult r = run_cli({"eval", "--model", path("model"), "--pairs", path("own.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* m : {"accuracy\t1.0000", "precision\t1.0000", "recall\t1.0000", "f1\t1.0000"}) {
    EXPECT_NE(r.out.find(m), std::string::npos) << m << "\n" << r.out;
  }
}

TEST_F(CliTest, EvalGradedPerfectCorrelation) {
  RunResult scored = run_cli({"score", "--model", path("model"), "--pairs", path("train.tsv")});
  ASSERT_EQ(scored.code, 0);
  auto lines = lines_of(scored.out);
  std::ifstream in(path("train.tsv"));
  Dataset d = parse_pair_file(in, LabelKind::Binary);
  d.label_kind = LabelKind::Graded;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.pairs[i].label = 5.0 * *text::parse_double(text::split(lines[i + 1], '\t')[4]);
  }
  std::ofstream out(path("graded.tsv"));
  write_pair_file(out, d);
  out.close();
  RunResult r = run_cli({"eval", "--model", path("model"), "--pairs", path("graded.tsv"), "--graded"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pearson/spearman\t100.0 / 100.0"), std::string::npos) << r.out;
}

TEST_F(CliTest, EvalErrors) {
  RunResult graded_on_binary =
      run_cli({"eval", "--model", path("model"), "--pairs", path("train.tsv"), "--graded"});
  EXPECT_EQ(graded_on_binary.code, 1);
  spit(*root_ / "empty.tsv", "# nothing here\n\n");
  RunResult empty = run_cli({"eval", "--model", path("model"), "--pairs", path("empty.tsv")});
  EXPECT_EQ(empty.code, 1);
  EXPECT_FALSE(empty.err.empty());
}

}  // namespace
}  // namespace simfuse::cli
