#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "simfuse/error.hpp"
#include "simfuse/text_io.hpp"

namespace simfuse::cli {
namespace {

constexpr const char* kOverridable[] = {"n_max",          "seed",          "learning_rate",
                                        "epochs",         "batch_size",    "label_convention",
                                        "fusion_mode",    "weighting_factor"};

std::size_t positive_size(const std::string& key, const std::string& value) {
  auto v = text::parse_int(text::trim(value));
  if (!v || *v < 1) throw ConfigError(key + " must be a positive integer, got '" + value + "'");
  return static_cast<std::size_t>(*v);
}

std::string flag_name(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

Dataset read_pairs(const std::string& path, LabelKind kind, LabelConvention convention) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return parse_pair_file(in, kind, convention);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what(), e.line());
  }
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

// Options shared by commands that accept configuration overrides.
struct Overrides {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    for (const char* key : kOverridable) {
      options[key] = app->add_option(flag_name(key), values[key], std::string("override config key ") + key);
    }
  }

  void apply(CliConfig& config) const {
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) apply_setting(config, key, values.at(key));
    }
  }
};

int cmd_train(const std::string& pairs_path, const std::string& out_dir, const std::string& config_path,
              const std::string& embeddings_flag, const std::string& validation_path,
              const Overrides& overrides, std::ostream& out, std::ostream& err) {
  CliConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw Error("cannot open " + config_path);
    apply_config_file(config, in);
  }
  overrides.apply(config);

  std::string embeddings = embeddings_flag;
  if (embeddings.empty() && config.embedding_path) embeddings = *config.embedding_path;
  if (embeddings.empty()) {
    if (const char* env = std::getenv("SIMFUSE_EMBEDDINGS")) embeddings = env;
  }
  if (embeddings.empty()) {
    err << "usage error: --embeddings, embedding_path or SIMFUSE_EMBEDDINGS is required\n";
    return 2;
  }

  Dataset train = read_pairs(pairs_path, LabelKind::Binary, config.label_convention);
  std::optional<Dataset> validation;
  if (!validation_path.empty()) {
    validation = read_pairs(validation_path, LabelKind::Binary, config.label_convention);
  }
  std::ifstream emb_in(embeddings);
  if (!emb_in) throw Error("cannot open " + embeddings);
  EmbeddingTable table = load_text_embeddings(emb_in);

  TrainOptions options{
      TrainConfig(config.learning_rate, config.epochs, config.batch_size, config.seed),
      TrainConfig(config.learning_rate, config.epochs, config.batch_size, config.seed + 1),
      CnnShape{},
      config.n_max,
      config.fusion_mode,
      config.weighting_factor,
  };
  ModelBundle bundle =
      train_bundle(train, std::move(table), options, validation ? &*validation : nullptr, &out);
  save_bundle(bundle, out_dir);
  out << "bundle\t" << out_dir << '\n';
  (void)err;
  return 0;
}

int cmd_score(const std::string& model_dir, const std::string& pairs_path, const std::string& format,
              std::size_t threads, std::ostream& out) {
  ModelBundle bundle = load_bundle(model_dir);
  // Labels are not used for scoring; the graded reader accepts both 0/1 and [0,5].
  Dataset data = read_pairs(pairs_path, LabelKind::Graded, LabelConvention::OneIsSimilar);
  const auto scores = score_all(data, bundle, threads);
  if (format == "json") {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      nlohmann::ordered_json j;
      j["id"] = data.pairs[i].id;
      j["jaccard"] = scores[i].jaccard;
      j["w2vcnn"] = scores[i].w2vcnn;
      j["tfidf"] = scores[i].tfidf;
      j["fused"] = scores[i].fused;
      j["predicted"] = std::string(to_string(scores[i].predicted));
      out << j.dump() << '\n';
    }
    return 0;
  }
  out << "id\tjaccard\tw2vcnn\ttfidf\tfused\tpredicted\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const PairScores& s = scores[i];
    out << data.pairs[i].id << '\t' << text::shortest(s.jaccard) << '\t' << text::shortest(s.w2vcnn)
        << '\t' << text::shortest(s.tfidf) << '\t' << text::shortest(s.fused) << '\t'
        << to_string(s.predicted) << '\n';
  }
  return 0;
}

int cmd_eval(const std::string& model_dir, const std::string& pairs_path, bool graded,
             LabelConvention convention, std::size_t threads, std::ostream& out) {
  ModelBundle bundle = load_bundle(model_dir);
  Dataset data = read_pairs(pairs_path, graded ? LabelKind::Graded : LabelKind::Binary, convention);
  if (data.empty()) throw EmptyEval();
  if (graded) {
    bool looks_binary = true;
    for (const LabeledPair& p : data.pairs) {
      if (p.label != 0.0 && p.label != 1.0) looks_binary = false;
    }
    if (looks_binary) throw LabelKindError(pairs_path + ": --graded given but every label is 0 or 1");
  }
  const MetricReport r = evaluate(data, bundle, threads);
  out << "pairs\t" << data.size() << '\n';
  if (graded) {
    const double p = *r.pearson * 100.0;
    const double s = *r.spearman * 100.0;
    out << "pearson_x100\t" << fixed(p, 1) << '\n';
    out << "spearman_x100\t" << fixed(s, 1) << '\n';
    out << "pearson/spearman\t" << fixed(p, 1) << " / " << fixed(s, 1) << '\n';
    return 0;
  }
  out << "tp\t" << r.counts.tp << "\ntn\t" << r.counts.tn << "\nfp\t" << r.counts.fp << "\nfn\t"
      << r.counts.fn << '\n';
  out << "accuracy\t" << fixed(r.accuracy, 4) << '\n';
  out << "precision\t" << fixed(r.precision, 4) << '\n';
  out << "recall\t" << fixed(r.recall, 4) << '\n';
  out << "f1\t" << fixed(r.f1, 4) << '\n';
  return 0;
}

}  // namespace

void apply_setting(CliConfig& config, const std::string& key, const std::string& raw) {
  const std::string value(text::trim(raw));
  if (key == "embedding_path") {
    if (value.empty()) throw ConfigError("embedding_path must not be empty");
    config.embedding_path = value;
  } else if (key == "n_max") {
    config.n_max = positive_size(key, value);
  } else if (key == "seed") {
    auto v = text::parse_int(value);
    if (!v || *v < 0) throw ConfigError("seed must be a non-negative integer, got '" + value + "'");
    config.seed = static_cast<std::uint64_t>(*v);
  } else if (key == "learning_rate") {
    auto v = text::parse_double(value);
    if (!v || !std::isfinite(*v) || *v <= 0.0) throw ConfigError("learning_rate must be positive");
    config.learning_rate = *v;
  } else if (key == "epochs") {
    config.epochs = positive_size(key, value);
  } else if (key == "batch_size") {
    config.batch_size = positive_size(key, value);
  } else if (key == "label_convention") {
    auto v = parse_label_convention(value);
    if (!v) throw ConfigError("label_convention must be one_is_similar or zero_is_similar");
    config.label_convention = *v;
  } else if (key == "fusion_mode") {
    auto v = parse_fusion_mode(value);
    if (!v) throw ConfigError("fusion_mode must be weighted_sum or learned");
    config.fusion_mode = *v;
  } else if (key == "weighting_factor") {
    auto v = parse_weighting_factor(value);
    if (!v) throw ConfigError("weighting_factor must be accuracy, precision, recall or f1");
    config.weighting_factor = *v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config_file(CliConfig& config, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(config, std::string(text::trim(view.substr(0, eq))),
                    std::string(text::trim(view.substr(eq + 1))));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sentence-pair similarity from TF-IDF, role-weighted Jaccard and an attention CNN",
               "simfuse"};
  app.require_subcommand(1);

  std::string pairs;
  std::string model;
  std::string out_dir;
  std::string config_path;
  std::string embeddings;
  std::string validation;
  std::string format = "tsv";
  std::string convention_name = "one_is_similar";
  std::size_t threads = 1;
  bool graded = false;

  auto* train = app.add_subcommand("train", "train a model bundle");
  train->add_option("--pairs", pairs, "labeled pair file (TSV)")->required();
  train->add_option("--embeddings", embeddings, "word vectors in word2vec text format");
  train->add_option("--out", out_dir, "output bundle directory")->required();
  train->add_option("--config", config_path, "key = value config file");
  train->add_option("--validation", validation, "pair file used for weight calibration");
  Overrides overrides;
  overrides.attach(train);

  auto* score = app.add_subcommand("score", "score sentence pairs");
  score->add_option("--model", model, "bundle directory")->required();
  score->add_option("--pairs", pairs, "pair file (TSV)")->required();
  score->add_option("--format", format, "output format")->check(CLI::IsMember({"tsv", "json"}));
  score->add_option("--threads", threads, "scoring threads")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "evaluate a bundle on a labeled pair file");
  eval->add_option("--model", model, "bundle directory")->required();
  eval->add_option("--pairs", pairs, "labeled pair file (TSV)")->required();
  eval->add_flag("--graded", graded, "labels are 0-5 similarity scores");
  eval->add_option("--label-convention", convention_name, "binary label meaning")
      ->check(CLI::IsMember({"one_is_similar", "zero_is_similar"}));
  eval->add_option("--threads", threads, "scoring threads")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_store{"simfuse"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*train) {
      return cmd_train(pairs, out_dir, config_path, embeddings, validation, overrides, out, err);
    }
    if (*score) return cmd_score(model, pairs, format, threads, out);
    if (*eval) {
      return cmd_eval(model, pairs, graded, *parse_label_convention(convention_name), threads, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace simfuse::cli
