#include "surveq/cli.h"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "surveq/calibration.h"
#include "surveq/csv_io.h"
#include "surveq/equivalence.h"
#include "surveq/errors.h"
#include "surveq/hscore.h"
#include "surveq/krippendorff.h"
#include "surveq/report.h"
#include "surveq/synthetic.h"

namespace surveq::cli {
namespace {

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

std::optional<LabelSpace> DeclaredLabels(const std::vector<std::string>& labels) {
  if (labels.empty()) return std::nullopt;
  return LabelSpace(labels);
}

std::optional<LabelIndex> PositiveLabel(const std::string& name, const LabelSpace& space) {
  if (name.empty()) return std::nullopt;
  const auto index = space.Find(name);
  if (!index) throw UsageError("--positive-label " + name + " is not a label of the ratings");
  return index;
}

struct CurveArgs {
  RunConfig config;
  std::string positive;
  unsigned jobs = 1;
  std::string out;
  std::string plot;
};

int RunCurve(const CurveArgs& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig config = args.config;
  const RatingMatrix matrix = LoadRatingsCsv(config.ratings, DeclaredLabels(config.labels));
  const LabelSpace& space = matrix.label_space();
  config.labels = space.labels();
  if (!args.positive.empty()) config.positive_label = args.positive;
  const auto scorer = MakeScorer(config.scorer, space, PositiveLabel(args.positive, space));
  const auto combiner = MakeCombiner(config.combiner, space);

  SpcOptions options;
  options.subset_cap = config.subset_cap;
  options.reference_cap = config.subset_cap;
  options.reference_raters = config.ref_r;
  options.jobs = std::max(1u, args.jobs);
  const RandomSource random(config.seed);
  BootstrapOptions bootstrap;
  bootstrap.samples = config.bootstrap;

  PowerCurve curve;
  std::optional<EquivalenceResult> equivalence;
  if (!config.predictions.empty()) {
    const PredictionSet predictions = LoadPredictionsCsv(config.predictions, space, &matrix);
    if (!scorer->Accepts(predictions.kind())) {
      throw UsageError("--scorer " + config.scorer + " cannot score the " +
                       std::string(ToString(predictions.kind())) + " predictions in " +
                       config.predictions);
    }
    if (config.bootstrap > 0) {
      auto analysis = SeqWithBootstrap(predictions, matrix, *combiner, *scorer, random, options,
                                       bootstrap);
      curve = std::move(analysis.curves.point);
      equivalence = std::move(analysis.equivalence);
    } else {
      curve = Spc(matrix, *combiner, *scorer, random, options);
      const auto aligned = predictions.AlignTo(matrix);
      EquivalenceResult e;
      e.classifier_score =
          detail::HScoreOnRows(aligned, matrix, matrix.canonical_order(), *scorer, config.ref_r,
                               random, options.reference_cap, stream_tag::kPointSample)
              .value;
      e.value = Seq(e.classifier_score, curve);
      curve.classifier_score = e.classifier_score;
      equivalence = std::move(e);
    }
  } else if (config.bootstrap > 0) {
    curve = BootstrapPowerCurves(matrix, *combiner, *scorer, random, options, bootstrap).point;
  } else {
    curve = Spc(matrix, *combiner, *scorer, random, options);
  }

  const auto runtime = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  const std::string doc = ResultJson(config, curve, equivalence, runtime).dump(2) + "\n";
  if (args.out.empty()) {
    out << doc;
  } else {
    OpenOut(args.out) << doc;
  }
  if (!args.plot.empty()) {
    auto plot = OpenOut(args.plot);
    WritePlotCsv(plot, curve);
  }
  return kExitOk;
}

struct SynthArgs {
  std::string model;
  bool running_example = false;
  std::size_t items = 1000;
  std::size_t raters = 10;
  std::uint64_t seed = 1;
  std::string prefix;
};

int RunSynth(const SynthArgs& args, std::ostream& out) {
  SyntheticModel model = RunningExampleModel();
  if (!args.running_example) {
    std::ifstream in(args.model);
    if (!in) throw UsageError("--model: cannot open " + args.model);
    std::stringstream text;
    text << in.rdbuf();
    model = ParseModelJson(text.str());
  }
  const auto data = Generate(model, args.items, args.raters, RandomSource(args.seed));
  {
    auto f = OpenOut(args.prefix + "_ratings.csv");
    WriteRatingsCsv(f, data.ratings);
  }
  {
    auto f = OpenOut(args.prefix + "_trace.csv");
    WriteTraceCsv(f, data.trace);
  }
  if (data.hard) {
    auto f = OpenOut(args.prefix + "_hard.csv");
    WritePredictionsCsv(f, *data.hard);
  }
  if (data.soft) {
    auto f = OpenOut(args.prefix + "_soft.csv");
    WritePredictionsCsv(f, *data.soft);
  }
  out << "wrote " << args.items << " items x " << args.raters << " raters to " << args.prefix
      << "_*.csv\n";
  return kExitOk;
}

int RunAlpha(const std::string& ratings, const std::vector<std::string>& labels,
             std::ostream& out) {
  const RatingMatrix matrix = LoadRatingsCsv(ratings, DeclaredLabels(labels));
  const AlphaResult alpha = KrippendorffAlpha(matrix);
  nlohmann::json doc = {{"alpha", alpha.alpha}, {"degenerate", alpha.degenerate}};
  out << doc.dump() << "\n";
  return kExitOk;
}

int RunCalibrate(const std::string& ratings, const std::string& predictions,
                 const std::string& positive, const std::vector<std::string>& labels,
                 const std::string& out_path, std::ostream& out) {
  const RatingMatrix matrix = LoadRatingsCsv(ratings, DeclaredLabels(labels));
  const auto set = LoadPredictionsCsv(predictions, matrix.label_space(), &matrix);
  const auto result =
      CalibrateDiscrete(set, matrix, *PositiveLabel(positive, matrix.label_space()));
  {
    auto f = OpenOut(out_path);
    WritePredictionsCsv(f, result.calibrated);
  }
  for (const auto& b : result.buckets) {
    out << b.output << ": " << b.items << " items, " << b.labels << " labels, " << positive
        << " " << b.positive_frequency << "\n";
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Survey power curves and survey equivalence of classifiers"};
  app.require_subcommand(1);

  CurveArgs curve;
  curve.jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* c = app.add_subcommand("curve", "power curve, and survey equivalence of a classifier");
  c->add_option("--ratings", curve.config.ratings, "ratings CSV")->required();
  c->add_option("--predictions", curve.config.predictions, "classifier predictions CSV");
  c->add_option("--combiner", curve.config.combiner, "majority, plurality, frequency or abc")
      ->capture_default_str();
  c->add_option("--scorer", curve.config.scorer, "agreement, f1, auc, cross-entropy or dmi")
      ->capture_default_str();
  c->add_option("--bootstrap", curve.config.bootstrap, "bootstrap samples (0 disables)")
      ->capture_default_str();
  c->add_option("--subset-cap", curve.config.subset_cap, "max rater subsets per k")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--seed", curve.config.seed, "random seed")->capture_default_str();
  c->add_option("--positive-label", curve.positive, "positive label for f1 and auc");
  c->add_option("--ref-r", curve.config.ref_r, "reference raters per plurality reference")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--labels", curve.config.labels, "label order, e.g. C,D")->delimiter(',');
  c->add_option("--jobs", curve.jobs, "worker threads")->check(CLI::PositiveNumber);
  c->add_option("--out", curve.out, "result JSON (default stdout)");
  c->add_option("--plot", curve.plot, "plot CSV");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "generate a synthetic dataset");
  auto* model_opt = s->add_option("--model", synth.model, "model JSON");
  auto* running_opt =
      s->add_flag("--running-example", synth.running_example, "the three-state C/D model");
  model_opt->excludes(running_opt);
  s->add_option("--items", synth.items, "items")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--raters", synth.raters, "labels per item")->capture_default_str();
  s->add_option("--seed", synth.seed, "random seed")->capture_default_str();
  s->add_option("--out-prefix", synth.prefix, "output path prefix")->required();

  std::string alpha_ratings;
  std::vector<std::string> alpha_labels;
  auto* a = app.add_subcommand("alpha", "Krippendorff alpha of a ratings file");
  a->add_option("--ratings", alpha_ratings, "ratings CSV")->required();
  a->add_option("--labels", alpha_labels, "label order")->delimiter(',');

  std::string cal_ratings, cal_predictions, cal_positive, cal_out;
  std::vector<std::string> cal_labels;
  auto* k = app.add_subcommand("calibrate", "map discrete classifier outputs to label frequencies");
  k->add_option("--ratings", cal_ratings, "ratings CSV")->required();
  k->add_option("--predictions", cal_predictions, "predictions CSV")->required();
  k->add_option("--positive-label", cal_positive, "label whose frequency is reported")->required();
  k->add_option("--labels", cal_labels, "label order")->delimiter(',');
  k->add_option("--out", cal_out, "calibrated soft predictions CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (c->parsed()) return RunCurve(curve, out);
    if (s->parsed()) {
      if (synth.model.empty() && !synth.running_example) {
        throw UsageError("synth needs --model or --running-example");
      }
      return RunSynth(synth, out);
    }
    if (a->parsed()) return RunAlpha(alpha_ratings, alpha_labels, out);
    if (k->parsed()) {
      return RunCalibrate(cal_ratings, cal_predictions, cal_positive, cal_labels, cal_out, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInvalid;
}

int Main(int argc, char** argv) {
  return Run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace surveq::cli
