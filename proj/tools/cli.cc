// Copyright 2026 The CoRA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cora/checkpoint.h"
#include "cora/config.h"
#include "cora/corpus.h"
#include "cora/errors.h"
#include "cora/evaluation.h"
#include "cora/file_util.h"
#include "cora/grad_check.h"
#include "cora/hierarchy.h"
#include "cora/metrics.h"
#include "cora/model.h"
#include "cora/synthetic.h"
#include "cora/training.h"

namespace cora::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kTrainFile = "train.jsonl";
constexpr const char* kTestFile = "test.jsonl";
constexpr const char* kManifestFile = "manifest.tsv";
constexpr const char* kRelationsFile = "relations.txt";
constexpr const char* kModelFile = "model.ckpt";

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Options shared by the config-driven verbs.
struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> m_levels;
  bool no_sent2rel = false;
  bool no_attention_pool = false;
  bool no_aux_obj = false;
  bool no_entity_emb = false;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App* cmd, CommonOptions& o, const std::string& default_config) {
  o.config = default_config;
  cmd->add_option("--config", o.config, "Preset (tiny, synthetic, nyt) or config file")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Root seed for every random stream");
  cmd->add_option("--m-levels", o.m_levels, "Coarse hierarchy levels M");
  cmd->add_flag("--no-sent2rel", o.no_sent2rel, "Ablate sentence-to-relation attention");
  cmd->add_flag("--no-attention-pool", o.no_attention_pool, "Mean-pool instead");
  cmd->add_flag("--no-aux-obj", o.no_aux_obj, "Drop the auxiliary attention loss");
  cmd->add_flag("--no-entity-emb", o.no_entity_emb, "Drop the entity-aware embedding gate");
  cmd->add_option("--set", o.overrides, "Config override key=value (repeatable)");
}

void ApplyCommon(ExperimentConfig& cfg, const CommonOptions& o) {
  for (const auto& kv : o.overrides) ApplyOverride(cfg, kv);
  if (o.seed) cfg.train.seed = *o.seed;
  if (o.m_levels) cfg.train.m_levels = *o.m_levels;
  auto& ab = cfg.train.ablations;
  ab.no_sent2rel = ab.no_sent2rel || o.no_sent2rel;
  ab.no_attention_pool = ab.no_attention_pool || o.no_attention_pool;
  ab.no_aux_obj = ab.no_aux_obj || o.no_aux_obj;
  ab.no_entity_emb = ab.no_entity_emb || o.no_entity_emb;
}

ExperimentConfig ResolveConfig(const CommonOptions& o) {
  ExperimentConfig cfg = LoadConfig(o.config);
  ApplyCommon(cfg, o);
  cfg.Validate();
  return cfg;
}

// A data directory holds the generated split files; a plain file is used for
// both splits.
std::string SplitPath(const std::string& data, const char* file) {
  if (fs::is_directory(data)) return (fs::path(data) / file).string();
  return data;
}

std::vector<SentenceRecord> LoadRecords(const std::string& path) {
  return LoadCorpus(path, GuessCorpusFormat(path)).records;
}

std::vector<std::string> LoadRelations(const std::string& data,
                                       const std::vector<SentenceRecord>& records) {
  if (fs::is_directory(data) && fs::exists(fs::path(data) / kRelationsFile)) {
    std::vector<std::string> out;
    std::istringstream in(ReadFile((fs::path(data) / kRelationsFile).string()));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) out.push_back(line);
    }
    return out;
  }
  return RelationInventory(records);
}

std::string OutPath(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

// ---------------------------------------------------------------- gen-synth

struct GenSynthOptions {
  CommonOptions common;
  std::string out;
};

int GenSynth(const GenSynthOptions& o, std::ostream& out) {
  ExperimentConfig cfg = ResolveConfig(o.common);
  SynthConfig synth = cfg.synth;
  synth.seed = SubSeed(cfg.train.seed, "data");
  const SynthCorpus corpus = GenerateSynthetic(synth);
  std::ostringstream train, test, manifest, relations;
  WriteCorpus(train, corpus.train, CorpusFormat::kJsonl);
  WriteCorpus(test, corpus.test, CorpusFormat::kJsonl);
  WriteManifest(manifest, corpus.manifest);
  std::vector<std::string> names = corpus.ranked_relations;
  names.push_back(kNaRelation);
  std::sort(names.begin(), names.end());
  for (const auto& n : names) relations << n << '\n';
  WriteFileAtomic(OutPath(o.out, kTrainFile), train.str());
  WriteFileAtomic(OutPath(o.out, kTestFile), test.str());
  WriteFileAtomic(OutPath(o.out, kManifestFile), manifest.str());
  WriteFileAtomic(OutPath(o.out, kRelationsFile), relations.str());
  WriteFileAtomic(OutPath(o.out, "config.txt"), FormatConfig(cfg));
  const auto counts = RelationCounts(corpus.train);
  out << "wrote " << corpus.train.size() << " train and " << corpus.test.size()
      << " test sentences to " << o.out << "\n";
  out << "long-tail fraction (<50 train sentences): "
      << LongTailFraction(counts, corpus.ranked_relations, 50) << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------- train

struct TrainOptions {
  CommonOptions common;
  std::string data;
  std::string out;
  std::string resume;
};

int TrainCommand(const TrainOptions& o, std::ostream& out) {
  std::optional<Checkpoint> resume;
  ExperimentConfig cfg;
  if (!o.resume.empty()) {
    resume = LoadCheckpoint(o.resume);
    cfg = resume->config;
    ApplyCommon(cfg, o.common);
    cfg.Validate();
  } else {
    cfg = ResolveConfig(o.common);
  }
  const auto records = LoadRecords(SplitPath(o.data, kTrainFile));
  if (records.empty()) throw InputError("train: no training sentences in " + o.data);
  const RelationHierarchy hierarchy(
      resume ? resume->relations : LoadRelations(o.data, records), cfg.train.m_levels);
  const Vocab vocab = resume ? resume->vocab : BuildVocab(records);
  const auto bags = BuildBags(records, BagGrouping::kPairRelation, hierarchy);
  const auto examples = MakeExamples(bags, records, vocab);

  const ModelConfig model_config = MakeModelConfig(cfg, hierarchy.level_sizes());
  std::optional<CoraModel> model;
  TrainProgress progress;
  if (resume) {
    model.emplace(model_config, resume->params);
    if (resume->progress) progress = *resume->progress;
  } else {
    model.emplace(model_config, vocab.size(), cfg.train.seed);
    if (!cfg.word_vectors.empty()) {
      std::ifstream vec(cfg.word_vectors);
      if (!vec) throw InputError("cannot open word vectors '" + cfg.word_vectors + "'");
      Rng rng(SubSeed(cfg.train.seed, "word_vectors"));
      const auto stats = LoadWordVectors(vec, vocab, model->params().Get("embed.words"), rng);
      out << "word vectors: " << stats.matched << " matched, " << stats.random_initialized
          << " random\n";
    }
  }

  std::ostringstream steps;
  std::ostringstream epochs;
  steps << "step\tL\tL_re\tL_att\n";
  epochs << "epoch\tmean_L\n";
  Train(
      *model, examples, cfg.train, progress,
      [&](const StepMetrics& m) {
        steps << m.step << '\t' << Num(m.loss) << '\t' << Num(m.loss_re) << '\t'
              << Num(m.loss_att) << '\n';
      },
      [&](std::size_t epoch, double mean, const TrainProgress& p) {
        epochs << epoch << '\t' << Num(mean) << '\n';
        out << "epoch " << epoch << " mean L " << Num(mean) << "\n";
        if (cfg.checkpoint_every > 0 && (epoch + 1) % cfg.checkpoint_every == 0 &&
            epoch + 1 < cfg.train.epochs) {
          SaveCheckpoint(OutPath(o.out, "checkpoint-epoch" + std::to_string(epoch + 1) + ".ckpt"),
                         cfg, vocab, hierarchy, model->params(), &p);
        }
      });
  SaveCheckpoint(OutPath(o.out, kModelFile), cfg, vocab, hierarchy, model->params(), &progress);
  WriteFileAtomic(OutPath(o.out, "metrics.tsv"), steps.str());
  WriteFileAtomic(OutPath(o.out, "epochs.tsv"), epochs.str());
  out << "trained " << examples.size() << " bags for " << cfg.train.epochs << " epochs; wrote "
      << OutPath(o.out, kModelFile) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- eval

struct EvalOptionsCli {
  std::string checkpoint;
  std::string data;
  std::string out;
  std::string retention = "all";
  std::string scoring = "model";
  std::optional<std::uint64_t> seed;
};

int EvalCommand(const EvalOptionsCli& o, std::ostream& out) {
  const Checkpoint ck = LoadCheckpoint(o.checkpoint);
  const RelationHierarchy hierarchy = ck.Hierarchy();
  const CoraModel model = ck.Model();
  const auto test = LoadRecords(SplitPath(o.data, kTestFile));
  const auto bags = BuildBags(test, BagGrouping::kPair, hierarchy);
  if (bags.empty()) throw InputError("eval: no test bags in " + o.data);

  EvalOptions options;
  options.retention = ParseRetention(o.retention);
  options.seed = o.seed ? *o.seed : ck.config.train.seed;
  auto preds = PredictBags(model, bags, test, ck.vocab, hierarchy, options);
  if (o.scoring == "level0" || o.scoring == "product") {
    preds = PredictFromAttention(
        preds, o.scoring == "level0" ? AttentionScoring::kLevel0 : AttentionScoring::kProduct,
        &hierarchy);
  } else if (o.scoring != "model") {
    throw ConfigError("unknown scoring '" + o.scoring + "' (model, level0, product)");
  }

  const std::string header = "# retention=" + o.retention + " seed=" +
                              std::to_string(options.seed) + " scoring=" + o.scoring + "\n";
  std::ostringstream pred_text, curve_text, summary;
  pred_text << header;
  WritePredictions(pred_text, preds);
  const PrCurve curve = PrecisionRecallCurve(preds);
  WriteCurve(curve_text, curve);

  summary << header << "metric\tvalue\n";
  summary << "bags\t" << preds.size() << "\n";
  summary << "gold_facts\t" << CountGoldFacts(preds) << "\n";
  summary << "auc\t" << Num(curve.auc) << "\n";
  const std::size_t pairs = curve.points.size() - 1;
  double p_sum = 0.0;
  for (std::size_t n : {100, 200, 300}) {
    if (n > pairs) continue;
    const double p = PrecisionAtN(preds, n);
    p_sum += p;
    summary << "p@" << n << "\t" << Num(p) << "\n";
  }
  if (pairs >= 300) summary << "p@mean\t" << Num(p_sum / 3.0) << "\n";
  std::optional<std::vector<std::size_t>> train_counts;
  const std::string train_path = SplitPath(o.data, kTrainFile);
  if (fs::is_directory(o.data) && fs::exists(train_path)) {
    train_counts = TrainCounts(LoadRecords(train_path), hierarchy);
  }
  if (train_counts) {
    for (std::size_t threshold : {50, 100, 200}) {
      for (std::size_t k : {2, 10, 15, 20}) {
        try {
          summary << "hits@" << k << "<" << threshold << "\t"
                  << Num(HitsAtKMacro(preds, *train_counts, threshold, k)) << "\n";
        } catch (const InputError&) {
          summary << "n/a\n";
        }
      }
    }
  }
  WriteFileAtomic(OutPath(o.out, "predictions.tsv"), pred_text.str());
  WriteFileAtomic(OutPath(o.out, "pr_curve.tsv"), curve_text.str());
  if (!preds.empty() && !preds[0].alphas.empty()) {
    const auto stats = AttentionDiagnostics(preds);
    std::ostringstream hist;
    hist << header;
    WriteHistogram(hist, stats);
    WriteFileAtomic(OutPath(o.out, "attention_hist.tsv"), hist.str());
    for (const auto& st : stats) {
      summary << "attention_accuracy@" << st.level << "\t" << Num(st.accuracy()) << "\n";
    }
  }
  WriteFileAtomic(OutPath(o.out, "summary.tsv"), summary.str());
  out << "AUC " << Num(curve.auc) << " over " << preds.size() << " bags; wrote " << o.out
      << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- grad-check

struct GradCheckCli {
  CommonOptions common;
  double tolerance = 1e-3;
};

int GradCheckCommand(const GradCheckCli& o, std::ostream& out) {
  ExperimentConfig cfg = ResolveConfig(o.common);
  cfg.train.dropout_p = 0.0;
  SynthConfig synth = cfg.synth;
  synth.seed = SubSeed(cfg.train.seed, "data");
  synth.min_bag_size = 2;
  synth.max_bag_size = 2;
  synth.na_fraction = 0.0;
  const SynthCorpus corpus = GenerateSynthetic(synth);
  std::vector<std::string> relations = corpus.ranked_relations;
  const RelationHierarchy hierarchy(relations, cfg.train.m_levels);
  const Vocab vocab = BuildVocab(corpus.train);
  auto bags = BuildBags(corpus.train, BagGrouping::kPairRelation, hierarchy);
  bags.erase(std::remove_if(bags.begin(), bags.end(),
                            [](const Bag& b) { return b.record_indices.size() < 2; }),
             bags.end());
  if (bags.size() < 2) throw InputError("grad-check: synthetic corpus has fewer than 2 bags");
  bags.resize(2);
  for (Bag& b : bags) b.record_indices.resize(2);
  const auto examples = MakeExamples(bags, corpus.train, vocab);
  CoraModel model(MakeModelConfig(cfg, hierarchy.level_sizes()), vocab.size(), cfg.train.seed);
  std::vector<const TrainingExample*> batch = {&examples[0], &examples[1]};
  GradCheckOptions options;
  options.tolerance = o.tolerance;
  options.seed = SubSeed(cfg.train.seed, "grad_check");
  const bool aux = !cfg.train.ablations.no_aux_obj;
  const GradCheckReport report = CheckGradients(
      model.params(), [&](Graph& g) { return JointObjective(g, model, batch, aux); }, options);
  out << "levels " << hierarchy.num_levels() << ", N0 " << hierarchy.size(0) << ", "
      << batch.size() << " bags x 2 sentences\n";
  out << report.ToString();
  return report.passed ? kExitOk : kExitInternal;
}

// -------------------------------------------------------- inspect-attention

struct InspectOptions {
  std::string checkpoint;
  std::string data;
  std::vector<std::string> bags;
  std::size_t k = 3;
};

int InspectCommand(const InspectOptions& o, std::ostream& out) {
  const Checkpoint ck = LoadCheckpoint(o.checkpoint);
  const RelationHierarchy hierarchy = ck.Hierarchy();
  const CoraModel model = ck.Model();
  if (model.config().ablations.no_sent2rel) {
    throw ConfigError("inspect-attention: model was trained without sent2rel attention");
  }
  if (o.k == 0) throw ConfigError("inspect-attention: k must be positive");
  const auto records = LoadRecords(SplitPath(o.data, kTestFile));
  const auto bags = BuildBags(records, BagGrouping::kPair, hierarchy);
  std::map<std::string, const Bag*> by_key;
  for (const Bag& b : bags) by_key[b.key] = &b;
  for (const auto& key : o.bags) {
    auto it = by_key.find(key);
    if (it == by_key.end()) throw InputError("inspect-attention: unknown bag key '" + key + "'");
    const Bag& bag = *it->second;
    BagInput input;
    for (std::size_t idx : bag.record_indices) input.push_back(ToSentenceInput(records[idx], ck.vocab));
    const BagPrediction pred = model.Predict(input);
    out << "bag " << bag.key << "\n";
    for (std::size_t s = 0; s < bag.record_indices.size(); ++s) {
      const SentenceRecord& r = records[bag.record_indices[s]];
      out << "sentence " << s << " [" << r.relation << "]:";
      for (const auto& t : r.tokens) out << ' ' << t;
      out << "\n";
      // Column per level, k rows of (relation, score).
      std::vector<std::vector<std::string>> columns;
      std::vector<std::size_t> widths;
      for (std::size_t l = 0; l < pred.alphas[s].size(); ++l) {
        const auto& alpha = pred.alphas[s][l].data();
        std::vector<std::size_t> order(alpha.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return alpha[a] > alpha[b]; });
        std::vector<std::string> cells = {"level " + std::to_string(l)};
        for (std::size_t i = 0; i < o.k && i < order.size(); ++i) {
          char score[32];
          std::snprintf(score, sizeof(score), "%.12f", alpha[order[i]]);
          cells.push_back(hierarchy.Name(l, order[i]) + " " + score);
        }
        std::size_t w = 0;
        for (const auto& c : cells) w = std::max(w, c.size());
        widths.push_back(w);
        columns.push_back(std::move(cells));
      }
      std::size_t rows = 0;
      for (const auto& c : columns) rows = std::max(rows, c.size());
      for (std::size_t row = 0; row < rows; ++row) {
        out << (row == 0 ? "rank" : std::to_string(row));
        for (std::size_t c = 0; c < columns.size(); ++c) {
          std::string cell = row < columns[c].size() ? columns[c][row] : "";
          cell.resize(widths[c], ' ');
          out << "  " << cell;
        }
        out << "\n";
      }
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------------ convert

struct ConvertOptions {
  std::string in;
  std::string out;
  std::string from;
  std::string to;
};

int ConvertCommand(const ConvertOptions& o, std::ostream& out) {
  const CorpusFormat from = o.from.empty() ? GuessCorpusFormat(o.in) : ParseCorpusFormat(o.from);
  const CorpusFormat to = o.to.empty() ? GuessCorpusFormat(o.out) : ParseCorpusFormat(o.to);
  const auto loaded = LoadCorpus(o.in, from);
  std::ostringstream text;
  WriteCorpus(text, loaded.records, to);
  WriteFileAtomic(o.out, text.str());
  out << "converted " << loaded.records.size() << " records (" << loaded.malformed.size()
      << " malformed lines skipped)\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CoRA relation extraction toolkit", "cora"};
  app.require_subcommand(1);

  GenSynthOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-synth", "Generate a synthetic distant-supervision corpus");
  AddCommon(gen_cmd, gen.common, "synthetic");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  AddCommon(train_cmd, train.common, "synthetic");
  train_cmd->add_option("--data", train.data, "Data directory or training corpus")->required();
  train_cmd->add_option("--out", train.out, "Output directory")->required();
  train_cmd->add_option("--checkpoint", train.resume, "Resume from this checkpoint");

  EvalOptionsCli eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on held-out bags");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Model checkpoint")->required();
  eval_cmd->add_option("--data", eval.data, "Data directory or test corpus")->required();
  eval_cmd->add_option("--out", eval.out, "Output directory")->required();
  eval_cmd->add_option("--retention", eval.retention, "Sentences kept per bag: one, two, all")
      ->capture_default_str();
  eval_cmd->add_option("--scoring", eval.scoring, "model, level0 or product")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Retention seed (default: checkpoint seed)");

  GradCheckCli grad;
  auto* grad_cmd = app.add_subcommand("grad-check", "Compare analytic and numeric gradients");
  AddCommon(grad_cmd, grad.common, "tiny");
  grad_cmd->add_option("--tolerance", grad.tolerance, "Max relative error")
      ->capture_default_str();

  InspectOptions inspect;
  auto* inspect_cmd =
      app.add_subcommand("inspect-attention", "Top-k sent2rel attention per level");
  inspect_cmd->add_option("--checkpoint", inspect.checkpoint, "Model checkpoint")->required();
  inspect_cmd->add_option("--data", inspect.data, "Data directory or corpus")->required();
  inspect_cmd->add_option("--bag", inspect.bags, "Bag key head|tail (repeatable)")->required();
  inspect_cmd->add_option("--k", inspect.k, "Rows per level")->capture_default_str();

  ConvertOptions convert;
  auto* convert_cmd = app.add_subcommand("convert", "Convert between corpus formats");
  convert_cmd->add_option("--in", convert.in, "Input corpus")->required();
  convert_cmd->add_option("--out", convert.out, "Output corpus")->required();
  convert_cmd->add_option("--from", convert.from, "nyt-text or jsonl (default: by extension)");
  convert_cmd->add_option("--to", convert.to, "nyt-text or jsonl (default: by extension)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return kExitInput;
  }

  try {
    if (gen_cmd->parsed()) return GenSynth(gen, out);
    if (train_cmd->parsed()) return TrainCommand(train, out);
    if (eval_cmd->parsed()) return EvalCommand(eval, out);
    if (grad_cmd->parsed()) return GradCheckCommand(grad, out);
    if (inspect_cmd->parsed()) return InspectCommand(inspect, out);
    if (convert_cmd->parsed()) return ConvertCommand(convert, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}

}  // namespace cora::cli
