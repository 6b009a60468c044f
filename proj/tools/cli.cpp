#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "sieve/corpus_io.hpp"
#include "sieve/cross_validation.hpp"
#include "sieve/dump_reader.hpp"
#include "sieve/embedding.hpp"
#include "sieve/error.hpp"
#include "sieve/features.hpp"
#include "sieve/log.hpp"
#include "sieve/metrics.hpp"
#include "sieve/ranking.hpp"
#include "sieve/svm.hpp"
#include "sieve/tfidf.hpp"
#include "sieve/trainer.hpp"

namespace sieve::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
  if (!out) throw DataError("write error on '" + path + "'");
}

// Every option of the subcommand with its effective value, in `key = value`
// form so the file can be fed back through --config.
void write_resolved_config(const CLI::App& sub, const std::string& path) {
  std::ostringstream out;
  out << "# sieve " << sub.get_name() << '\n';
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->reduced_results()) {
        if (!value.empty()) value += ',';
        value += r;
      }
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) out << name << " = " << value << '\n';
  }
  write_file(path, out.str());
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long long k = 0;
    try {
      k = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || k == 0) throw DataError("bad K value '" + item + "'");
    ks.push_back(static_cast<std::size_t>(k));
  }
  if (ks.empty()) throw DataError("empty K list");
  return ks;
}

const std::map<std::string, LogLevel> kLogLevels = {{"debug", LogLevel::Debug},
                                                    {"info", LogLevel::Info},
                                                    {"warn", LogLevel::Warn},
                                                    {"error", LogLevel::Error},
                                                    {"off", LogLevel::Off}};

const std::map<std::string, OovPolicy> kOovPolicies = {{"ignore", OovPolicy::Ignore},
                                                       {"zero", OovPolicy::ZeroVector},
                                                       {"lowfreq", OovPolicy::LowFreqAverage}};

const std::map<std::string, Aggregation> kAggregations = {{"max", Aggregation::Max},
                                                          {"mean", Aggregation::Mean}};

const std::map<std::string, SourcePlatform> kSources = {{"se", SourcePlatform::StackExchangeSE},
                                                        {"so", SourcePlatform::StackOverflow},
                                                        {"other", SourcePlatform::Other}};

template <typename T>
std::vector<std::string> keys_of(const std::map<std::string, T>& m) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : m) keys.push_back(k);
  return keys;
}

struct IngestArgs {
  std::vector<std::string> posts;
  std::vector<std::string> comments;
  std::string source = "se";
  std::string output;
};

struct TrainArgs {
  std::string input;
  std::string output;
  TrainingConfig config;
};

struct RankArgs {
  std::string method = "embedding";
  std::string model;
  std::string tweets;
  std::string source;
  std::string output;
  std::string aggregation = "max";
  std::string oov = "ignore";
  std::size_t max_chars = 140;
  std::size_t sample_size = 1000;
  std::uint64_t seed = 1;
  std::string labels;
  std::string k = "50,100,200";
  int threads = 0;
};

struct ClassifyArgs {
  std::string features = "embedding";
  std::string model;
  std::string comments;
  std::string output;
  std::string oov = "ignore";
  std::size_t min_df = 2;
  std::string kernel = "puk";
  double c = 1.0;
  double omega = 1.0;
  double sigma = 1.0;
  double gamma = 1.0;
  double tol = 1e-3;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::string svm_out;
  int threads = 0;
};

struct KappaArgs {
  std::string a;
  std::string b;
  std::string output;
};

struct NeighborsArgs {
  std::string model;
  std::string word;
  std::size_t k = 10;
};

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int cmd_ingest(const IngestArgs& a, const CLI::App& sub, std::ostream& out) {
  if (a.posts.empty() && a.comments.empty()) {
    throw DataError("ingest: give at least one --posts or --comments dump");
  }
  const SourcePlatform source = kSources.at(a.source);
  std::vector<CleanSentence> sentences;
  std::size_t posts = 0;
  std::size_t comments = 0;
  std::size_t rows_read = 0;
  std::size_t rows_skipped = 0;
  std::size_t documents = 0;
  auto read_all = [&](const std::string& path, DocumentKind kind, std::size_t& counter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    DumpReader reader(in, kind, source);
    try {
      while (auto doc = reader.next()) {
        ++documents;
        auto pieces = preprocess_document(doc->body, doc->id);
        sentences.insert(sentences.end(), std::make_move_iterator(pieces.begin()),
                         std::make_move_iterator(pieces.end()));
      }
    } catch (const ParseError& e) {
      throw DataError(path + ": " + e.what());
    }
    counter += reader.rows_read() - reader.skipped_rows();
    rows_read += reader.rows_read();
    rows_skipped += reader.skipped_rows();
  };
  for (const auto& p : a.posts) read_all(p, DocumentKind::Post, posts);
  for (const auto& p : a.comments) read_all(p, DocumentKind::Comment, comments);
  if (sentences.empty()) throw DataError("ingest: no sentences in the input dumps");

  {
    auto file = open_output(a.output);
    write_sentences(file, sentences);
    if (!file) throw DataError("write error on '" + a.output + "'");
  }
  std::ostringstream stats;
  stats << "source=" << a.source << '\n'
        << "posts=" << posts << '\n'
        << "comments=" << comments << '\n'
        << "rows_read=" << rows_read << '\n'
        << "rows_skipped=" << rows_skipped << '\n'
        << "documents=" << documents << '\n'
        << "sentences=" << sentences.size() << '\n';
  write_file(a.output + ".stats", stats.str());
  write_resolved_config(sub, a.output + ".config");
  out << stats.str();
  return kExitOk;
}

int cmd_train(const TrainArgs& a, const CLI::App& sub, std::ostream& out) {
  const auto corpus = load_sentences(a.input);
  if (corpus.empty()) throw DataError("train: '" + a.input + "' has no sentences");
  SgnsTrainer trainer(corpus, a.config);
  log(LogLevel::Info, "train: " + std::to_string(trainer.scheduled_updates()) + " scheduled updates");
  trainer.train();
  const EmbeddingModel model = std::move(trainer).release();
  save_model(model, a.output);
  write_resolved_config(sub, a.output + ".config");
  out << "vocabulary size: " << model.size() << '\n' << "dimension: " << model.dim() << '\n';
  return kExitOk;
}

int cmd_rank(const RankArgs& a, const CLI::App& sub, std::ostream& out) {
  apply_threads(a.threads);
  const auto tweets = load_tweets(a.tweets);
  const auto original = read_lines(a.tweets);
  const auto source = load_sentences(a.source);
  QuerySet query = select_instances(source, a.max_chars, a.sample_size, a.seed);
  const Aggregation aggregation = kAggregations.at(a.aggregation);

  RankedList ranked;
  if (a.method == "embedding") {
    if (a.model.empty()) throw DataError("rank: --model is required for the embedding method");
    const EmbeddingModel model = load_model(a.model);
    const SentenceEncoder encoder(model, kOovPolicies.at(a.oov));
    embed_queries(query, encoder);
    ranked = rank(tweets, query, encoder, aggregation);
  } else {
    const TfidfModel model = TfidfModel::fit(source);
    ranked = rank_tfidf(tweets, query, model, aggregation);
  }
  {
    auto file = open_output(a.output);
    write_ranked_tsv(file, ranked, original);
    if (!file) throw DataError("write error on '" + a.output + "'");
  }
  write_resolved_config(sub, a.output + ".config");
  out << "queries: " << query.sentences.size() << '\n' << "ranked: " << ranked.entries.size() << '\n';

  if (!a.labels.empty()) {
    const auto labels = load_relevance_labels(a.labels);
    const auto ks = parse_k_list(a.k);
    const MetricReport report = accuracy_report(ranked, labels, ks);
    write_file(a.output + ".metrics.txt", report.to_key_value());
    write_file(a.output + ".metrics.json", report.to_json());
    out << report.to_key_value();
  }
  return kExitOk;
}

KernelSpec kernel_from(const ClassifyArgs& a) {
  if (a.kernel == "linear") return LinearKernel{};
  if (a.kernel == "rbf") return RbfKernel{a.gamma};
  return PukKernel{a.omega, a.sigma};
}

int cmd_classify(const ClassifyArgs& a, const CLI::App& sub, std::ostream& out) {
  apply_threads(a.threads);
  const auto comments = load_labeled_comments(a.comments);
  std::optional<EmbeddingModel> model;
  std::unique_ptr<FeatureSpace> features;
  if (a.features == "embedding") {
    if (a.model.empty()) throw DataError("classify: --model is required for embedding features");
    model.emplace(load_model(a.model));
    features = std::make_unique<EmbeddingFeatures>(*model, kOovPolicies.at(a.oov));
  } else {
    features = std::make_unique<NormalizedTfFeatures>(a.min_df);
  }

  CvConfig config;
  config.folds = a.folds;
  config.seed = a.seed;
  config.smo.C = a.c;
  config.smo.kernel = kernel_from(a);
  config.smo.tol = a.tol;
  config.smo.seed = a.seed;
  const CvReport report = cross_validate(comments, *features, config);

  write_file(a.output, report.aggregate.to_key_value());
  write_file(a.output + ".json", report.aggregate.to_json());
  write_resolved_config(sub, a.output + ".config");
  out << "features: " << features->name() << '\n'
      << "examples: " << comments.size() << '\n'
      << "folds: " << config.folds << '\n'
      << report.aggregate.to_key_value();

  if (!a.svm_out.empty()) {
    features->fit(comments);
    DenseMatrix<double> x(0, features->dim());
    std::vector<int> labels;
    for (const auto& c : comments) {
      x.append_row(features->features(c.sentence.tokens));
      labels.push_back(c.label == CommentLabel::Informative ? 1 : -1);
    }
    const SmoResult trained = train_smo(x, labels, config.smo);
    save_svm(trained.model, a.svm_out);
    if (auto* ntf = dynamic_cast<NormalizedTfFeatures*>(features.get())) {
      std::string vocab;
      for (const auto& w : ntf->vocabulary()) vocab += w + '\n';
      write_file(a.svm_out + ".vocab", vocab);
    }
    out << "support vectors: " << trained.model.dual_coefs.size() << '\n';
  }
  return kExitOk;
}

int cmd_kappa(const KappaArgs& a, const CLI::App& sub, std::ostream& out) {
  const auto la = load_binary_labels(a.a);
  const auto lb = load_binary_labels(a.b);
  MetricReport report;
  report.kappa = cohen_kappa(la, lb);
  if (!a.output.empty()) {
    write_file(a.output, report.to_key_value());
    write_file(a.output + ".json", report.to_json());
    write_resolved_config(sub, a.output + ".config");
  }
  out << report.to_key_value();
  return kExitOk;
}

int cmd_neighbors(const NeighborsArgs& a, std::ostream& out) {
  const EmbeddingModel model = load_model(a.model);
  for (const auto& [word, score] : nearest_neighbors(model, a.word, a.k)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", score);
    out << word << '\t' << buf << '\n';
  }
  return kExitOk;
}

// Inserts `--key value` pairs from the --config file right after the
// subcommand name. Keys also given on the command line are dropped so the
// command line wins.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  if (args.size() < 2) return args;
  std::size_t sub_pos = 1;
  while (sub_pos < args.size() && args[sub_pos].rfind("-", 0) == 0) {
    // Global options take one value.
    sub_pos += args[sub_pos].find('=') == std::string::npos ? 2 : 1;
  }
  if (sub_pos >= args.size()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[sub_pos]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::string config_path;
  std::set<std::string> given;
  for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) != 0) continue;
    const auto eq = arg.find('=');
    const std::string name = arg.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(normalize_key(name));
    if (name == "config") {
      if (eq != std::string::npos) config_path = arg.substr(eq + 1);
      else if (i + 1 < args.size()) config_path = args[i + 1];
    }
  }
  if (config_path.empty()) return args;

  std::vector<std::string> injected;
  for (auto [key, value] : read_config_file(config_path)) {
    key = normalize_key(key);
    if (key == "config") throw DataError(config_path + ": nested 'config' key");
    if (sub->get_option_no_throw("--" + key) == nullptr) {
      throw CLI::ValidationError(config_path + ": unknown key '" + key + "' for '" + sub->get_name() + "'");
    }
    if (given.count(key) != 0) continue;
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  std::vector<std::string> expanded(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos + 1));
  expanded.insert(expanded.end(), injected.begin(), injected.end());
  expanded.insert(expanded.end(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos + 1), args.end());
  return expanded;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw LineError(path, line_no, "expected 'key = value'");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw LineError(path, line_no, "empty key");
    if (value.empty()) continue;
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SIEVE: find software-related tweets and informative comments", "sieve"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "Diagnostics threshold")
      ->check(CLI::IsMember(keys_of(kLogLevels)));
  std::string config_path;

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Dump XML -> cleaned sentence file");
  ingest_cmd->add_option("--config", config_path, "key = value file with defaults for this command");
  ingest_cmd->add_option("--posts", ingest.posts, "Posts.xml dump (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',')
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--comments", ingest.comments, "Comments.xml dump (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',')
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--source", ingest.source, "Source platform")
      ->check(CLI::IsMember(keys_of(kSources)));
  ingest_cmd->add_option("--output", ingest.output, "Sentence file to write")->required();

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train skip-gram embeddings on a sentence file");
  train_cmd->add_option("--config", config_path, "key = value file with defaults for this command");
  train_cmd->add_option("--input", train_args.input, "Sentence file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--output", train_args.output, "word2vec text model to write")->required();
  train_cmd->add_option("--dim", train_args.config.dim, "Vector dimension");
  train_cmd->add_option("--window", train_args.config.window, "Context window radius");
  train_cmd->add_option("--negatives", train_args.config.negatives, "Negative samples per pair");
  train_cmd->add_option("--min-count", train_args.config.min_count, "Minimum word frequency");
  train_cmd->add_option("--epochs", train_args.config.epochs, "Passes over the corpus");
  train_cmd->add_option("--lr", train_args.config.initial_lr, "Initial learning rate");
  train_cmd->add_option("--chunk-size", train_args.config.chunk_size, "Sentences per work unit");
  train_cmd->add_option("--workers", train_args.config.workers, "Training threads");
  train_cmd->add_option("--subsample", train_args.config.subsample, "Frequent-word subsampling (0 = off)");
  train_cmd->add_option("--seed", train_args.config.seed, "Random seed");

  RankArgs rank_args;
  auto* rank_cmd = app.add_subcommand("rank", "Rank tweets by similarity to source sentences");
  rank_cmd->add_option("--config", config_path, "key = value file with defaults for this command");
  rank_cmd->add_option("--method", rank_args.method, "Similarity space")
      ->check(CLI::IsMember({"embedding", "tfidf"}));
  rank_cmd->add_option("--model", rank_args.model, "word2vec text model (embedding method)")
      ->check(CLI::ExistingFile);
  rank_cmd->add_option("--tweets", rank_args.tweets, "Tweets, one per line")->required()->check(CLI::ExistingFile);
  rank_cmd->add_option("--source", rank_args.source, "Source-platform sentence file")
      ->required()
      ->check(CLI::ExistingFile);
  rank_cmd->add_option("--output", rank_args.output, "Ranked TSV to write")->required();
  rank_cmd->add_option("--aggregation", rank_args.aggregation, "Per-query score aggregation")
      ->check(CLI::IsMember(keys_of(kAggregations)));
  rank_cmd->add_option("--oov", rank_args.oov, "Out-of-vocabulary policy")
      ->check(CLI::IsMember(keys_of(kOovPolicies)));
  rank_cmd->add_option("--max-chars", rank_args.max_chars, "Longest eligible query sentence");
  rank_cmd->add_option("--sample-size", rank_args.sample_size, "Number of query sentences");
  rank_cmd->add_option("--seed", rank_args.seed, "Query sampling seed");
  rank_cmd->add_option("--labels", rank_args.labels, "id<TAB>label file for accuracy@K")
      ->check(CLI::ExistingFile);
  rank_cmd->add_option("--k", rank_args.k, "Comma-separated K values");
  rank_cmd->add_option("--threads", rank_args.threads, "OpenMP threads (0 = runtime default)");

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Cross-validate an SVM on labeled comments");
  classify_cmd->add_option("--config", config_path, "key = value file with defaults for this command");
  classify_cmd->add_option("--features", classify_args.features, "Feature space")
      ->check(CLI::IsMember({"embedding", "ntf"}));
  classify_cmd->add_option("--model", classify_args.model, "word2vec text model (embedding features)")
      ->check(CLI::ExistingFile);
  classify_cmd->add_option("--comments", classify_args.comments, "label<TAB>text file")
      ->required()
      ->check(CLI::ExistingFile);
  classify_cmd->add_option("--output", classify_args.output, "Metric report to write")->required();
  classify_cmd->add_option("--oov", classify_args.oov, "Out-of-vocabulary policy")
      ->check(CLI::IsMember(keys_of(kOovPolicies)));
  classify_cmd->add_option("--min-df", classify_args.min_df, "Minimum document frequency (ntf)");
  classify_cmd->add_option("--kernel", classify_args.kernel, "SVM kernel")
      ->check(CLI::IsMember({"puk", "rbf", "linear"}));
  classify_cmd->add_option("--C", classify_args.c, "Box constraint");
  classify_cmd->add_option("--omega", classify_args.omega, "PUK omega");
  classify_cmd->add_option("--sigma", classify_args.sigma, "PUK sigma");
  classify_cmd->add_option("--gamma", classify_args.gamma, "RBF gamma");
  classify_cmd->add_option("--tol", classify_args.tol, "SMO stopping tolerance");
  classify_cmd->add_option("--folds", classify_args.folds, "Cross-validation folds");
  classify_cmd->add_option("--seed", classify_args.seed, "Fold and solver seed");
  classify_cmd->add_option("--svm-out", classify_args.svm_out, "Also train on all data and save the SVM");
  classify_cmd->add_option("--threads", classify_args.threads, "OpenMP threads (0 = runtime default)");

  KappaArgs kappa_args;
  auto* kappa_cmd = app.add_subcommand("kappa", "Cohen's kappa between two label files");
  kappa_cmd->add_option("--config", config_path, "key = value file with defaults for this command");
  kappa_cmd->add_option("--a", kappa_args.a, "First rater, one 0/1 per line")->required()->check(CLI::ExistingFile);
  kappa_cmd->add_option("--b", kappa_args.b, "Second rater, one 0/1 per line")->required()->check(CLI::ExistingFile);
  kappa_cmd->add_option("--output", kappa_args.output, "Optional report file");

  NeighborsArgs neighbors_args;
  auto* neighbors_cmd = app.add_subcommand("neighbors", "Nearest words by cosine similarity");
  neighbors_cmd->add_option("--config", config_path, "key = value file with defaults for this command");
  neighbors_cmd->add_option("--model", neighbors_args.model, "word2vec text model")->required()->check(CLI::ExistingFile);
  neighbors_cmd->add_option("--word", neighbors_args.word, "Query word")->required();
  neighbors_cmd->add_option("--k", neighbors_args.k, "Number of neighbors");

  try {
    std::vector<std::string> expanded = expand_config(args, app);
    std::reverse(expanded.begin(), expanded.end());
    expanded.pop_back();  // program name
    app.parse(expanded);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }

  set_log_level(kLogLevels.at(log_level));
  try {
    if (*ingest_cmd) return cmd_ingest(ingest, *ingest_cmd, out);
    if (*train_cmd) return cmd_train(train_args, *train_cmd, out);
    if (*rank_cmd) return cmd_rank(rank_args, *rank_cmd, out);
    if (*classify_cmd) return cmd_classify(classify_args, *classify_cmd, out);
    if (*kappa_cmd) return cmd_kappa(kappa_args, *kappa_cmd, out);
    if (*neighbors_cmd) return cmd_neighbors(neighbors_args, out);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace sieve::cli
