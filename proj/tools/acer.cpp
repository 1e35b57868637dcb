// acer: index a source corpus, reformulate change-request queries, train the
// candidate-selection model and evaluate retrieval techniques.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 internal error.
// Errors are single-line "error: <category>: <message>" on stderr.

#include <algorithm>
#include <cstdio>
#include <memory>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acer/corpus.hpp"
#include "acer/eval.hpp"
#include "acer/extract.hpp"
#include "acer/graph.hpp"
#include "acer/index.hpp"
#include "acer/learner.hpp"
#include "acer/pipeline.hpp"
#include "acer/quality.hpp"
#include "acer/util.hpp"

namespace fs = std::filesystem;
using namespace acer;

namespace {

std::string single_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return text;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item += c;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

struct RankArgs {
  double damping = 0.85;
  double epsilon = 0.0001;
  int max_iterations = 100;
};

void add_rank_options(CLI::App* cmd, RankArgs& args) {
  cmd->add_option("--damping", args.damping, "graph ranking damping factor")
      ->capture_default_str();
  cmd->add_option("--epsilon", args.epsilon, "graph ranking convergence threshold")
      ->capture_default_str();
  cmd->add_option("--max-iterations", args.max_iterations, "graph ranking iteration cap")
      ->capture_default_str();
}

struct SessionArgs {
  std::string index_file;
  std::string corpus_root;  // override of the root recorded in the index
  int feedback_size = 10;
  int reformulation_size = 10;
  int coherence_depth = 10;
  RankArgs rank;
};

void add_session_options(CLI::App* cmd, SessionArgs& args) {
  cmd->add_option("-i,--index", args.index_file, "index file produced by the index command")
      ->required();
  cmd->add_option("--corpus-root", args.corpus_root,
                  "override the corpus root recorded in the index");
  cmd->add_option("-K,--feedback-size", args.feedback_size,
                  "pseudo-relevance feedback documents per query")
      ->capture_default_str();
  cmd->add_option("-k,--expansion-size", args.reformulation_size,
                  "expansion terms per reformulation candidate")
      ->capture_default_str();
  cmd->add_option("--coherence-depth", args.coherence_depth,
                  "documents per term for the coherence metric")
      ->capture_default_str();
  add_rank_options(cmd, args.rank);
}

// The reformulator keeps a pointer into the loaded index, so both live
// behind stable heap addresses.
struct Session {
  std::unique_ptr<LoadedIndex> loaded;
  std::unique_ptr<Reformulator> reformulator;

  const Index& index() const { return loaded->index; }
  const IndexConfig& config() const { return loaded->config; }
  Reformulator& ref() const { return *reformulator; }
};

ReformulationParams make_params(const SessionArgs& args) {
  ReformulationParams params;
  params.coherence_depth = static_cast<size_t>(args.coherence_depth);
  params.rank.damping = args.rank.damping;
  params.rank.epsilon = args.rank.epsilon;
  params.rank.max_iterations = args.rank.max_iterations;
  return params;
}

Session open_session(const SessionArgs& args) {
  Session session;
  session.loaded = std::make_unique<LoadedIndex>(load_index(args.index_file));
  if (!args.corpus_root.empty()) session.loaded->config.corpus_root = args.corpus_root;
  Preprocessor pp = session.loaded->config.make_preprocessor();
  auto provider = make_file_provider(fs::path(session.loaded->config.corpus_root));
  session.reformulator = std::make_unique<Reformulator>(session.loaded->index, std::move(pp),
                                                        std::move(provider), make_params(args));
  return session;
}

// Provenance digest over everything that shapes a run's numbers; filesystem
// locations stay out so the same data hashes identically anywhere.
std::string run_config_hash(const IndexConfig& config, const SessionArgs& args,
                            const std::string& extra) {
  std::string canon = "index=" + config_fingerprint(config);
  canon += ";K=" + std::to_string(args.feedback_size);
  canon += ";k=" + std::to_string(args.reformulation_size);
  canon += ";coherence=" + std::to_string(args.coherence_depth);
  canon += ";damping=" + format_double(args.rank.damping);
  canon += ";epsilon=" + format_double(args.rank.epsilon);
  canon += ";iters=" + std::to_string(args.rank.max_iterations);
  if (!extra.empty()) canon += ";" + extra;
  return hex64(fnv1a64(canon));
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << single_line(w) << '\n';
  }
}

// ---------------------------------------------------------------------------
// index

struct IndexArgs {
  std::string corpus_root;
  std::string output;
  std::string extension = ".java";
  std::string stopword_file;
  std::string keyword_file;
  bool stemming = false;
  int min_term_length = 3;
  bool no_original_tokens = false;
  bool use_lexicon = false;
  int lexicon_min_freq = 2;
};

void cmd_index(const IndexArgs& args) {
  IndexConfig config;
  config.corpus_root = fs::path(args.corpus_root).generic_string();
  config.extension = args.extension;
  config.options.stemming = args.stemming;
  config.options.min_term_length = args.min_term_length;
  config.options.keep_original_tokens = !args.no_original_tokens;
  config.stopwords =
      args.stopword_file.empty() ? default_stopwords() : load_word_list(args.stopword_file);
  config.keywords =
      args.keyword_file.empty() ? default_java_keywords() : load_word_list(args.keyword_file);
  config.use_lexicon = args.use_lexicon;
  config.lexicon_min_freq = args.lexicon_min_freq;

  Corpus corpus = load_corpus(args.corpus_root, config.make_preprocessor(), config.extension);
  print_warnings(corpus.load_report.skipped);
  if (corpus.docs.empty()) {
    throw DataError("no '" + config.extension + "' files found under " + args.corpus_root);
  }
  if (config.use_lexicon) {
    std::vector<std::string> terms;
    for (const SourceDocument& doc : corpus.docs) {
      terms.insert(terms.end(), doc.body_terms.begin(), doc.body_terms.end());
    }
    SplitLexicon lexicon;
    lexicon.build_from_terms(terms, config.lexicon_min_freq);
    config.lexicon = lexicon.words();
    corpus = load_corpus(args.corpus_root, config.make_preprocessor(), config.extension);
  }

  Index index = Index::build(corpus);
  save_index(index, config, args.output);
  std::cout << "indexed " << index.doc_count() << " documents (" << index.total_terms()
            << " term occurrences) -> " << args.output << '\n';
  std::cout << "config: " << config_fingerprint(config) << '\n';
}

// ---------------------------------------------------------------------------
// reformulate

struct ReformulateArgs {
  SessionArgs session;
  std::string query_text;
  std::string query_id = "query";
  std::string model_file;
  std::string output;
  bool candidates_only = false;
};

void cmd_reformulate(const ReformulateArgs& args) {
  Session session = open_session(args.session);

  std::optional<Ensemble> model;
  if (!args.model_file.empty()) model = load_model(args.model_file);
  if (!model && !args.candidates_only) {
    throw UsageError("reformulate needs --model unless --candidates-only is given");
  }

  ReformulationRequest request;
  request.query_id = args.query_id;
  request.query_text = args.query_text;
  request.feedback_size = args.session.feedback_size;
  request.reformulation_size = args.session.reformulation_size;

  const Ensemble* selector = (model && !args.candidates_only) ? &*model : nullptr;
  ReformulatedQuery record = session.ref().reformulate(request, selector);
  if (!record.warning.empty()) std::cerr << "warning: " << single_line(record.warning) << '\n';

  std::string line = reformulated_query_to_json_text(record) + "\n";
  if (args.output.empty()) {
    std::cout << line;
  } else {
    write_text_file(args.output, line);
    std::cout << "reformulation written to " << args.output << '\n';
  }
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  SessionArgs session;
  std::string dataset;
  std::string model_out;
  std::string training_data_out;
  uint64_t seed = 1;
  int resamples = 50;
  int max_depth = 8;
  int min_leaf = 2;
  int result_depth = 5000;
  int cv_folds = 0;
};

// Measures one executed candidate: expansion candidates are combined with
// the initial query, the baseline candidate is the initial query itself.
CandidateOutcome measure_candidate(const Index& index, const ReformulatedQuery& record,
                                   const ReformulationCandidate& cand,
                                   const std::set<std::string>& goldset, size_t depth) {
  std::vector<std::string> query_terms =
      cand.kind == CandidateKind::baseline
          ? record.initial_terms
          : Reformulator::combine(record.initial_terms, cand.terms());
  QueryRun run = run_query(index, candidate_kind_name(cand.kind), record.query_id, query_terms,
                           goldset, depth);
  return CandidateOutcome{cand.kind, cand.quality.values, run.qe};
}

void cmd_train(const TrainArgs& args) {
  Session session = open_session(args.session);
  const Index& index = session.index();

  IngestStats stats;
  std::vector<ChangeRequest> requests = ingest_dataset(args.dataset, index, &stats);
  print_warnings(stats.warnings);

  std::vector<LabeledQuery> queries;
  for (const ChangeRequest& request : requests) {
    ReformulationRequest req;
    req.query_id = request.id;
    req.query_text = request.title;
    req.feedback_size = args.session.feedback_size;
    req.reformulation_size = args.session.reformulation_size;

    ReformulatedQuery record;
    try {
      record = session.ref().reformulate(req, nullptr);
    } catch (const UsageError& e) {
      std::cerr << "warning: skipping " << request.id << ": " << single_line(e.what()) << '\n';
      continue;
    }

    std::set<std::string> goldset(request.goldset.begin(), request.goldset.end());
    LabeledQuery labeled;
    labeled.query_id = request.id;
    for (const ReformulationCandidate& cand : record.candidates) {
      if (!cand.has_quality) continue;
      labeled.candidates.push_back(
          measure_candidate(index, record, cand, goldset, static_cast<size_t>(args.result_depth)));
    }
    queries.push_back(std::move(labeled));
  }
  if (queries.empty()) throw DataError("no trainable queries in " + args.dataset);

  LabelReport label_report;
  std::vector<TrainingRow> rows = label_rows(queries, &label_report);
  for (const std::string& id : label_report.all_none_queries) {
    std::cerr << "warning: no candidate of " << id << " retrieved its goldset\n";
  }

  EnsembleConfig config;
  config.resample_count = args.resamples;
  config.tree.max_depth = args.max_depth;
  config.tree.min_leaf = args.min_leaf;

  Ensemble ensemble = Ensemble::train(rows, config, args.seed);
  save_model(ensemble, args.model_out);
  if (!args.training_data_out.empty()) write_training_rows(rows, args.training_data_out);

  std::string hash = run_config_hash(session.config(), args.session,
                                     "depth=" + std::to_string(args.result_depth) +
                                         ";seed=" + std::to_string(args.seed) +
                                         ";resamples=" + std::to_string(args.resamples) +
                                         ";maxdepth=" + std::to_string(args.max_depth) +
                                         ";minleaf=" + std::to_string(args.min_leaf));
  std::cout << "trained " << ensemble.trees().size() << " trees on " << rows.size()
            << " rows from " << queries.size() << " queries (seed " << args.seed << ") -> "
            << args.model_out << '\n';
  if (!args.training_data_out.empty()) {
    std::cout << "training rows written to " << args.training_data_out << '\n';
  }
  if (args.cv_folds >= 2) {
    CrossValidation cv = cross_validate(rows, config, args.seed, args.cv_folds);
    std::printf("cross-validation: %d/%d best-candidate hits over %d folds (accuracy %.4f)\n",
                cv.correct, cv.queries, cv.folds, cv.accuracy);
  }
  std::cout << "config: " << hash << '\n';
}

// ---------------------------------------------------------------------------
// evaluate

struct TechniqueSpec {
  std::string name;
  enum class Kind { acer, baseline, feedback } kind = Kind::feedback;
  BaselineMethod method = BaselineMethod::tf;
  BaselineScope scope = BaselineScope::all;
};

constexpr const char* kValidTechniques =
    "acer, baseline, tf, tf_msig, tf_fsig, tf_comb, tfidf, tfidf_msig, tfidf_fsig, "
    "tfidf_comb, rocchio, rsv";

TechniqueSpec parse_technique(const std::string& name) {
  TechniqueSpec spec;
  spec.name = name;
  if (name == "acer") {
    spec.kind = TechniqueSpec::Kind::acer;
    return spec;
  }
  if (name == "baseline") {
    spec.kind = TechniqueSpec::Kind::baseline;
    return spec;
  }
  std::string method = name;
  std::string scope = "all";
  if (size_t pos = name.find('_'); pos != std::string::npos) {
    method = name.substr(0, pos);
    scope = name.substr(pos + 1);
  }
  std::optional<BaselineMethod> m = parse_baseline_method(method);
  std::optional<BaselineScope> s = parse_baseline_scope(scope);
  if (!m || !s) {
    throw UsageError("unknown technique '" + name + "'; valid techniques: " + kValidTechniques);
  }
  if ((*m == BaselineMethod::rocchio || *m == BaselineMethod::rsv) &&
      *s != BaselineScope::all) {
    throw UsageError("technique '" + name + "': rocchio and rsv work on whole documents only");
  }
  spec.method = *m;
  spec.scope = *s;
  return spec;
}

struct EvaluateArgs {
  SessionArgs session;
  std::string dataset;
  std::string model_file;
  std::string techniques = "acer";
  std::string query_set = "hard";
  std::string k_list = "1,5,10";
  std::string output_prefix = "report";
  int result_depth = 5000;
};

std::vector<long long> parse_k_list(const std::string& text) {
  std::vector<long long> ks;
  for (const std::string& item : split_csv(text)) {
    try {
      size_t used = 0;
      long long k = std::stoll(item, &used);
      if (used != item.size() || k < 1) throw std::invalid_argument(item);
      ks.push_back(k);
    } catch (const std::exception&) {
      throw UsageError("invalid cutoff '" + item + "' in --k-list; expected positive integers");
    }
  }
  if (ks.empty()) throw UsageError("--k-list needs at least one cutoff");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

void cmd_evaluate(const EvaluateArgs& args) {
  std::vector<TechniqueSpec> specs;
  std::set<std::string> seen;
  for (const std::string& name : split_csv(args.techniques)) {
    if (!seen.insert(name).second) throw UsageError("duplicate technique '" + name + "'");
    specs.push_back(parse_technique(name));
  }
  if (specs.empty()) {
    throw UsageError("--techniques needs at least one name; valid techniques: " +
                     std::string(kValidTechniques));
  }
  std::optional<QuerySet> query_set = parse_query_set(args.query_set);
  if (!query_set) {
    throw UsageError("unknown query set '" + args.query_set + "'; valid sets: hard, extended");
  }
  std::vector<long long> ks = parse_k_list(args.k_list);

  bool wants_acer = std::any_of(specs.begin(), specs.end(), [](const TechniqueSpec& s) {
    return s.kind == TechniqueSpec::Kind::acer;
  });
  if (wants_acer && args.model_file.empty()) {
    throw UsageError("technique 'acer' needs --model");
  }

  Session session = open_session(args.session);
  const Index& index = session.index();
  std::optional<Ensemble> model;
  if (wants_acer) model = load_model(args.model_file);

  IngestStats stats;
  std::vector<ChangeRequest> requests = ingest_dataset(args.dataset, index, &stats);
  print_warnings(stats.warnings);

  const size_t depth = static_cast<size_t>(args.result_depth);
  std::map<std::string, std::optional<long long>> baseline_qe;
  std::map<std::string, QueryRun> baseline_by_id;
  std::vector<ChangeRequest> usable;
  for (const ChangeRequest& request : requests) {
    std::vector<std::string> terms;
    try {
      terms = session.ref().preprocess_query(request.title);
    } catch (const UsageError& e) {
      std::cerr << "warning: skipping " << request.id << ": " << single_line(e.what()) << '\n';
      continue;
    }
    std::set<std::string> goldset(request.goldset.begin(), request.goldset.end());
    QueryRun run = run_query(index, "baseline", request.id, terms, goldset, depth);
    baseline_qe[request.id] = run.qe;
    baseline_by_id[request.id] = std::move(run);
    usable.push_back(request);
  }

  std::vector<ChangeRequest> selected = select_query_set(usable, baseline_qe, *query_set);
  if (selected.empty()) {
    throw DataError("the hard query set is empty; rerun with --query-set extended");
  }

  std::vector<QueryRun> baseline_runs;
  for (const ChangeRequest& request : selected) {
    baseline_runs.push_back(baseline_by_id.at(request.id));
  }

  std::vector<std::vector<QueryRun>> technique_runs;
  std::vector<std::string> audit_lines;
  for (const TechniqueSpec& spec : specs) {
    std::vector<QueryRun> runs;
    for (const ChangeRequest& request : selected) {
      std::set<std::string> goldset(request.goldset.begin(), request.goldset.end());
      switch (spec.kind) {
        case TechniqueSpec::Kind::baseline: {
          QueryRun run = baseline_by_id.at(request.id);
          runs.push_back(std::move(run));
          break;
        }
        case TechniqueSpec::Kind::acer: {
          ReformulationRequest req;
          req.query_id = request.id;
          req.query_text = request.title;
          req.feedback_size = args.session.feedback_size;
          req.reformulation_size = args.session.reformulation_size;
          ReformulatedQuery record = session.ref().reformulate(req, &*model);
          if (!record.warning.empty()) {
            std::cerr << "warning: " << request.id << ": " << single_line(record.warning) << '\n';
          }
          audit_lines.push_back(reformulated_query_to_json_text(record));
          runs.push_back(
              run_query(index, spec.name, request.id, record.final_terms, goldset, depth));
          break;
        }
        case TechniqueSpec::Kind::feedback: {
          BaselineReformulation ref = session.ref().baseline_reformulate(
              spec.method, spec.scope, request.title, args.session.feedback_size,
              args.session.reformulation_size);
          runs.push_back(run_query(index, spec.name, request.id, ref.final_terms, goldset, depth));
          break;
        }
      }
    }
    technique_runs.push_back(std::move(runs));
  }

  EvaluationReport report = build_report(baseline_runs, technique_runs, ks, depth);

  std::string extra = "depth=" + std::to_string(args.result_depth) +
                      ";set=" + query_set_name(*query_set) + ";techniques=" + args.techniques;
  {
    std::string canon_ks = "ks=";
    for (long long k : ks) canon_ks += std::to_string(k) + ",";
    extra += ";" + canon_ks;
  }
  if (model) extra += ";model_seed=" + std::to_string(model->seed());
  std::string hash = run_config_hash(session.config(), args.session, extra);

  fs::path tsv_path = args.output_prefix + ".tsv";
  fs::path json_path = args.output_prefix + ".json";
  fs::path runs_path = args.output_prefix + "_runs.tsv";
  fs::path audit_path = args.output_prefix + "_reformulations.jsonl";

  std::string header =
      "# config: " + hash + "\n# query set: " + query_set_name(*query_set) + "\n";
  write_text_file(tsv_path, header + report_to_tsv(report));

  nlohmann::json j = nlohmann::json::parse(report_to_json_text(report));
  j["config"] = hash;
  j["query_set"] = query_set_name(*query_set);
  write_text_file(json_path, j.dump(1) + "\n");

  std::vector<QueryRun> all_runs = baseline_runs;
  for (const std::vector<QueryRun>& runs : technique_runs) {
    all_runs.insert(all_runs.end(), runs.begin(), runs.end());
  }
  write_text_file(runs_path, header + runs_to_tsv(all_runs, ks.back()));

  if (wants_acer) {
    std::string audit;
    for (const std::string& line : audit_lines) audit += line + "\n";
    write_text_file(audit_path, audit);
  }

  std::cout << "evaluated " << selected.size() << " queries (" << query_set_name(*query_set)
            << " set) with " << specs.size() << " technique" << (specs.size() == 1 ? "" : "s")
            << '\n';
  std::cout << "reports: " << tsv_path.string() << ' ' << json_path.string() << ' '
            << runs_path.string();
  if (wants_acer) std::cout << ' ' << audit_path.string();
  std::cout << '\n';
  std::cout << "config: " << hash << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"query reformulation for concept location in source code"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; flags take precedence");

  IndexArgs index_args;
  CLI::App* index_cmd = app.add_subcommand("index", "index a source corpus for retrieval");
  index_cmd->add_option("corpus-root", index_args.corpus_root, "directory of source files")
      ->required();
  index_cmd->add_option("-o,--output", index_args.output, "index file to write")->required();
  index_cmd->add_option("--extension", index_args.extension, "source file extension to index")
      ->capture_default_str();
  index_cmd->add_option("--stopwords", index_args.stopword_file,
                        "stopword list file, one word per line (default: bundled English list)");
  index_cmd->add_option("--keywords", index_args.keyword_file,
                        "language keyword file, one word per line (default: bundled Java list)");
  index_cmd->add_flag("--stemming", index_args.stemming, "stem terms while preprocessing");
  index_cmd
      ->add_option("--min-term-length", index_args.min_term_length, "shortest term kept")
      ->capture_default_str();
  index_cmd->add_flag("--no-original-tokens", index_args.no_original_tokens,
                      "index split pieces only, dropping unsplit identifiers");
  index_cmd->add_flag("--lexicon", index_args.use_lexicon,
                      "build a corpus lexicon to split same-case compounds");
  index_cmd
      ->add_option("--lexicon-min-freq", index_args.lexicon_min_freq,
                   "corpus frequency needed for a lexicon word")
      ->capture_default_str();

  ReformulateArgs ref_args;
  CLI::App* ref_cmd = app.add_subcommand("reformulate", "reformulate one query");
  ref_cmd->add_option("-q,--query", ref_args.query_text, "query text to reformulate")->required();
  ref_cmd->add_option("--query-id", ref_args.query_id, "identifier echoed into the record")
      ->capture_default_str();
  add_session_options(ref_cmd, ref_args.session);
  ref_cmd->add_option("-m,--model", ref_args.model_file, "selection model file");
  ref_cmd->add_flag("--candidates-only", ref_args.candidates_only,
                    "emit every candidate without selecting one");
  ref_cmd->add_option("-o,--output", ref_args.output, "output file (default: stdout)");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "train the candidate-selection model");
  train_cmd->add_option("-d,--dataset", train_args.dataset, "change-request dataset, JSONL")
      ->required();
  add_session_options(train_cmd, train_args.session);
  train_cmd->add_option("-o,--output", train_args.model_out, "model file to write")->required();
  train_cmd->add_option("--seed", train_args.seed, "bootstrap random seed")
      ->capture_default_str();
  train_cmd->add_option("--resamples", train_args.resamples, "bootstrap resamples in the ensemble")
      ->capture_default_str();
  train_cmd->add_option("--max-depth", train_args.max_depth, "decision tree depth cap")
      ->capture_default_str();
  train_cmd->add_option("--min-leaf", train_args.min_leaf, "minimum rows per tree leaf")
      ->capture_default_str();
  train_cmd
      ->add_option("--depth", train_args.result_depth,
                   "retrieval depth when measuring candidate ranks")
      ->capture_default_str();
  train_cmd->add_option("--training-data", train_args.training_data_out,
                        "also write the labeled training rows, TSV");
  train_cmd
      ->add_option("--cv-folds", train_args.cv_folds,
                   "grouped cross-validation folds (0 disables)")
      ->capture_default_str();

  EvaluateArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "compare retrieval techniques on a dataset");
  eval_cmd->add_option("-d,--dataset", eval_args.dataset, "change-request dataset, JSONL")
      ->required();
  add_session_options(eval_cmd, eval_args.session);
  eval_cmd->add_option("-m,--model", eval_args.model_file, "selection model file");
  eval_cmd
      ->add_option("--techniques", eval_args.techniques,
                   std::string("comma-separated techniques to evaluate; valid: ") +
                       kValidTechniques)
      ->capture_default_str();
  eval_cmd->add_option("--query-set", eval_args.query_set, "hard or extended")
      ->capture_default_str();
  eval_cmd->add_option("--k-list", eval_args.k_list, "cutoffs for mrr and top-k accuracy")
      ->capture_default_str();
  eval_cmd->add_option("--depth", eval_args.result_depth, "retrieval depth per query")
      ->capture_default_str();
  eval_cmd
      ->add_option("-o,--output-prefix", eval_args.output_prefix,
                   "prefix for the emitted report files")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (index_cmd->parsed()) {
      cmd_index(index_args);
    } else if (ref_cmd->parsed()) {
      cmd_reformulate(ref_args);
    } else if (train_cmd->parsed()) {
      cmd_train(train_args);
    } else if (eval_cmd->parsed()) {
      cmd_evaluate(eval_args);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      const CLI::App* target = &app;
      while (true) {
        auto subs = target->get_subcommands(
            [](const CLI::App* sub) { return sub->parsed(); });
        if (subs.empty()) break;
        target = subs.front();
      }
      std::cout << target->help();
      return 0;
    }
    std::cerr << "error: usage: " << single_line(e.what()) << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: usage: " << single_line(e.what()) << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: data: " << single_line(e.what()) << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << single_line(e.what()) << '\n';
    return 4;
  }
}
