// Command-line front end for the chord label personalization pipeline.

#include <array>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chordlab/errors.hpp"
#include "chordlab/pipeline.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chord label personalization: synthesize corpora, train profile "
               "models, decode annotator-specific labels and evaluate them"};
  app.require_subcommand(1);

  chordlab::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Corpus seed");
  synth_cmd->add_option("--songs", synth.n_songs, "Number of songs");
  synth_cmd->add_option("--duration", synth.song_seconds, "Song length in seconds");
  synth_cmd->add_option("--sample-rate", synth.sample_rate, "Sample rate in Hz");

  chordlab::TrainOptions train;
  std::string train_annotators;
  std::vector<double> train_ratios;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a corpus manifest");
  train_cmd->add_option("--manifest", train.manifest, "Corpus manifest path")->required();
  train_cmd->add_option("--model", train.model_out, "Model output path")->required();
  train_cmd->add_option("--history", train.history_out, "Training history output path");
  train_cmd->add_option("--annotators", train_annotators,
                        "Comma-separated annotator ids (default: all)");
  train_cmd->add_option("--seed", [&train](const std::vector<std::string>& v) {
    train.seed = std::stoull(v.front());
    return true;
  }, "Split/init seed (default: manifest seed)");
  train_cmd->add_option("--ratios", train_ratios, "Train,val,test ratios")->expected(3)->delimiter(',');
  train_cmd->add_option("--max-epochs", train.max_epochs, "Maximum training epochs");
  train_cmd->add_option("--batch", train.batch_size, "Mini-batch size");
  train_cmd->add_option("--patience", train.patience_epochs, "Early-stopping patience");
  train_cmd->add_option("--cache", train.cache_dir, "Feature cache directory");

  chordlab::PersonalizeOptions pers;
  auto* pers_cmd = app.add_subcommand("personalize",
                                      "Decode test-split labels for one annotator");
  pers_cmd->add_option("--manifest", pers.manifest, "Corpus manifest path")->required();
  pers_cmd->add_option("--model", pers.model, "Trained model path")->required();
  pers_cmd->add_option("--out", pers.out_dir, "Output directory for LAB files")->required();
  pers_cmd->add_option("--annotator", pers.annotator, "Target annotator id")->required();
  pers_cmd->add_option("--cache", pers.cache_dir, "Feature cache directory");

  chordlab::EvaluateOptions eval;
  std::string eval_annotators, eval_metrics;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score estimate LABs against references");
  eval_cmd->add_option("--manifest", eval.manifest, "Corpus manifest path")->required();
  eval_cmd->add_option("--estimates", eval.estimates_dir, "Estimate LAB directory")->required();
  eval_cmd->add_option("--out", eval.report_out, "Report output path (.tsv)")->required();
  eval_cmd->add_option("--annotators", eval_annotators,
                       "Comma-separated annotator ids (default: all)");
  eval_cmd->add_option("--metrics", eval_metrics,
                       "Comma-separated metrics from root,majmin,mirex,thirds,7ths");

  chordlab::ExperimentOptions exp;
  std::vector<double> exp_ratios;
  auto* exp_cmd = app.add_subcommand(
      "experiment", "Run the three-arm personalization comparison");
  exp_cmd->add_option("--manifest", exp.manifest, "Corpus manifest path")->required();
  exp_cmd->add_option("--out", exp.out_dir, "Output directory")->required();
  exp_cmd->add_option("--baseline", exp.baseline_annotator,
                      "Baseline annotator id (default: first)");
  exp_cmd->add_option("--seed", [&exp](const std::vector<std::string>& v) {
    exp.training.seed = std::stoull(v.front());
    return true;
  }, "Split/init seed (default: manifest seed)");
  exp_cmd->add_option("--ratios", exp_ratios, "Train,val,test ratios")->expected(3)->delimiter(',');
  exp_cmd->add_option("--max-epochs", exp.training.max_epochs, "Maximum training epochs");
  exp_cmd->add_option("--batch", exp.training.batch_size, "Mini-batch size");
  exp_cmd->add_option("--patience", exp.training.patience_epochs, "Early-stopping patience");
  exp_cmd->add_option("--cache", exp.training.cache_dir, "Feature cache directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth_cmd) {
      const auto manifest = chordlab::run_synth(synth);
      std::cout << "wrote " << manifest.string() << '\n';
    } else if (*train_cmd) {
      train.annotators = split_csv(train_annotators);
      if (!train_ratios.empty())
        train.ratios = {{train_ratios[0], train_ratios[1], train_ratios[2]}};
      chordlab::run_train(train);
      std::cout << "wrote " << train.model_out.string() << '\n';
    } else if (*pers_cmd) {
      chordlab::run_personalize(pers);
      std::cout << "wrote labels under " << pers.out_dir.string() << '\n';
    } else if (*eval_cmd) {
      eval.annotators = split_csv(eval_annotators);
      if (!eval_metrics.empty()) {
        eval.metrics.clear();
        for (const auto& name : split_csv(eval_metrics)) {
          bool found = false;
          for (chordlab::Metric m : chordlab::kAllMetrics)
            if (name == chordlab::metric_name(m)) {
              eval.metrics.push_back(m);
              found = true;
            }
          if (!found) throw chordlab::ConfigError("unknown metric '" + name + "'");
        }
      }
      const auto report = chordlab::run_evaluate(eval);
      std::cout << chordlab::report_tsv(report);
    } else if (*exp_cmd) {
      if (!exp_ratios.empty())
        exp.training.ratios = {{exp_ratios[0], exp_ratios[1], exp_ratios[2]}};
      const auto report = chordlab::run_experiment(exp);
      std::cout << report.to_tsv();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
