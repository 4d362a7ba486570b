#include "calib/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "calib/constructions.hpp"
#include "calib/error.hpp"
#include "calib/experiments.hpp"
#include "calib/io.hpp"
#include "calib/metrics.hpp"
#include "calib/omni.hpp"
#include "calib/partition.hpp"
#include "calib/smoothing.hpp"
#include "calib/transport.hpp"

namespace calib::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct Options {
  std::string out;
  std::string pld, task, mu, nu, loss, kappa;
  double h = kDefaultGridStep;
  double sigma = 0.1;
  bool label_preserving = false;
  bool exact = false;
  std::string mode;
  std::string name;
  double eps = 0.1;
  std::optional<double> construct_sigma;
  int k = 24;
  std::uint64_t seed = 0;
  std::optional<double> jitter;
  std::size_t n = 1000;
  DistinguishConfig experiment;
  std::string rule = "likelihood-ratio";
};

void emit(const Options& opt, const Json& j, std::ostream& out) {
  if (opt.out.empty()) {
    out << io::dump(j) << '\n';
  } else {
    io::write_json_file(opt.out, j);
  }
}

Json metrics(const Options& opt) {
  std::optional<FinitePredictionTask> task;
  if (!opt.task.empty()) task = io::task_from_json(io::read_json_file(opt.task));
  Pld pld = task ? pushforward(*task) : io::pld_from_json(io::read_json_file(opt.pld));
  Json j;
  j["tau"] = tau(pld);
  j["ece"] = ece(pld);
  j["smce"] = smce(pld).value;
  j["demc"] = demc(pld, opt.h);
  j["ldce"] = ldce(pld, opt.h);
  j["dce_marginal"] = dce_marginal_preserving(pld);
  std::size_t support = by_value(pld).size();
  if (support <= kMaxPartitionItems || opt.exact) {
    j["udce"] = udce_exact(pld).value;
  } else {
    j["udce"] = nullptr;
    j["udce_upper"] = udce_greedy_upper(pld).value;
  }
  if (task) {
    bool small = task->points.size() <= kMaxPartitionItems || opt.exact;
    j["true_dce"] = small ? Json(true_dce(*task)) : Json(nullptr);
  }
  j["support_size"] = support;
  j["grid_step"] = opt.h;
  return j;
}

Json wasserstein_cmd(const Options& opt) {
  Pld mu = io::pld_from_json(io::read_json_file(opt.mu));
  Pld nu = io::pld_from_json(io::read_json_file(opt.nu));
  TransportResult r = opt.label_preserving ? wasserstein_label_preserving(mu, nu) : wasserstein(mu, nu);
  Json j = io::to_json(r);
  j["label_preserving"] = opt.label_preserving;
  return j;
}

Json smooth_cmd(const Options& opt) {
  SmoothedPld s = smooth(io::pld_from_json(io::read_json_file(opt.pld)), opt.sigma);
  return {{"sigma", opt.sigma},
          {"law", io::to_json(smoothed_law(s))},
          {"posterior", io::to_json(posterior(s))}};
}

Json omni_cmd(const Options& opt) {
  Pld mu = io::pld_from_json(io::read_json_file(opt.mu));
  VMixtureLoss loss = io::loss_from_json(io::read_json_file(opt.loss));
  if (opt.mode == "best") return io::to_json(best_post_report(mu, loss, opt.sigma));
  if (opt.nu.empty()) throw Error(ErrorCode::InvalidArgument, "--nu is required for this mode");
  Pld nu = io::pld_from_json(io::read_json_file(opt.nu));
  if (opt.mode == "calibrated") return io::to_json(omni_regret_calibrated(mu, nu, loss, opt.sigma));
  PostProcessing kappa = opt.kappa.empty()
                             ? PostProcessing::identity()
                             : io::postprocessing_from_json(io::read_json_file(opt.kappa));
  return io::to_json(omni_regret(mu, nu, loss, kappa, opt.sigma));
}

Json expected_json(const ConstructionOutput& c) {
  Json j = Json::object();
  for (const auto& [key, ev] : c.expected) j[key] = {{"value", ev.value}, {"note", ev.note}};
  return j;
}

// Writes one construction's files with the given prefix; returns the file names.
Json write_construction(const ConstructionOutput& c, const fs::path& dir, const std::string& prefix) {
  Json files = Json::array();
  auto put = [&](const std::string& stem, const Json& j) {
    std::string name = prefix + stem + ".json";
    io::write_json_file(dir / name, j);
    files.push_back(name);
  };
  put("pld", io::to_json(c.pld));
  if (c.task) put("task", io::to_json(*c.task));
  for (const auto& [key, comp] : c.companions) put(key, io::to_json(comp));
  return files;
}

Json construct_cmd(const Options& opt) {
  fs::path dir(opt.out);
  fs::create_directories(dir);
  Json files = Json::array();
  Json expected = Json::object();
  auto single = [&](const ConstructionOutput& c) {
    files = write_construction(c, dir, "");
    expected = expected_json(c);
  };
  if (opt.name == "almost-balanced") {
    single(almost_balanced(opt.eps));
  } else if (opt.name == "two-point") {
    single(two_point_family(opt.eps));
  } else if (opt.name == "smoothing-necessity") {
    single(smoothing_necessity(opt.eps));
  } else if (opt.name == "lb1") {
    single(lb1(opt.eps, opt.construct_sigma));
  } else if (opt.name == "lb2") {
    if (!opt.construct_sigma) throw Error(ErrorCode::InvalidArgument, "lb2 needs --sigma");
    single(lb2(opt.eps, *opt.construct_sigma));
  } else if (opt.name == "udce-cases") {
    UdceCases cases = udce_cases(opt.eps, opt.k, opt.seed, opt.jitter);
    for (auto [tag, c] : {std::pair{"a", &cases.a}, {"b", &cases.b}, {"c", &cases.c}, {"d", &cases.d}}) {
      for (auto& f : write_construction(*c, dir, std::string(tag) + "_")) files.push_back(f);
      expected[tag] = expected_json(*c);
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown construction " + opt.name);
  }
  io::write_json_file(dir / "expected.json", expected);
  files.push_back("expected.json");
  return {{"construction", opt.name}, {"directory", dir.string()}, {"files", files}};
}

Json sample_cmd(const Options& opt) {
  Pld pld = io::pld_from_json(io::read_json_file(opt.pld));
  SampleSet s = sample(pld, opt.n, opt.seed);
  s.source = opt.pld;
  return io::to_json(s);
}

Json experiment_cmd(const Options& opt) {
  DistinguishConfig cfg = opt.experiment;
  cfg.seed = opt.seed;
  cfg.jitter_halfwidth = opt.jitter;
  cfg.rule = opt.rule == "pattern" ? Distinguisher::PatternMatch : Distinguisher::LikelihoodRatio;
  return io::to_json(udce_distinguish_experiment(cfg));
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SupportTooLarge: return kUnsupportedSize;
    case ErrorCode::NumericalFailure: return kSolverFailure;
    default: return kInvalidInput;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Calibration distances, smoothed omniprediction bounds and their constructions", "calib"};
  app.require_subcommand(1);
  // Frees -h for the grid step; subcommands inherit this help flag.
  app.set_help_flag("--help", "Print this help message and exit");

  auto* metrics_cmd = app.add_subcommand("metrics", "calibration metrics of a PLD or task");
  auto* pld_opt = metrics_cmd->add_option("--pld", opt.pld, "PLD JSON file");
  auto* task_opt = metrics_cmd->add_option("--task", opt.task, "prediction task JSON file");
  pld_opt->excludes(task_opt);
  metrics_cmd->add_option("--h", opt.h, "grid step for demc/ldce")->capture_default_str();
  metrics_cmd->add_flag("--exact", opt.exact, "fail instead of falling back when udce is out of reach");
  metrics_cmd->add_option("--out", opt.out, "output file (default stdout)");

  auto* w_cmd = app.add_subcommand("wasserstein", "earth mover's distance between two PLDs");
  w_cmd->add_option("--mu", opt.mu, "first PLD")->required();
  w_cmd->add_option("--nu", opt.nu, "second PLD")->required();
  w_cmd->add_flag("--label-preserving", opt.label_preserving, "forbid label changes (needs equal tau)");
  w_cmd->add_option("--out", opt.out, "output file (default stdout)");

  auto* s_cmd = app.add_subcommand("smooth", "law and posterior of the smoothed prediction");
  s_cmd->add_option("--pld", opt.pld, "PLD JSON file")->required();
  s_cmd->add_option("--sigma", opt.sigma, "noise half-width in (0,1]")->required();
  s_cmd->add_option("--out", opt.out, "output file (default stdout)");

  auto* o_cmd = app.add_subcommand("omni", "regret of the smoothed predictor against a benchmark");
  o_cmd->add_option("--mode", opt.mode,
                    "postprocessed: smoothed kappa(nu); calibrated: raw calibrated nu; "
                    "best: posterior post-processing of mu")
      ->required()
      ->check(CLI::IsMember({"postprocessed", "calibrated", "best"}));
  o_cmd->add_option("--mu", opt.mu, "predictor PLD")->required();
  o_cmd->add_option("--nu", opt.nu, "benchmark PLD");
  o_cmd->add_option("--loss", opt.loss, "loss JSON file")->required();
  o_cmd->add_option("--kappa", opt.kappa, "post-processing JSON file (default identity)");
  o_cmd->add_option("--sigma", opt.sigma, "noise half-width in (0,1]")->required();
  o_cmd->add_option("--out", opt.out, "output file (default stdout)");

  auto* c_cmd = app.add_subcommand("construct", "write a named construction to a directory");
  c_cmd->add_option("name", opt.name, "construction")
      ->required()
      ->check(CLI::IsMember(
          {"almost-balanced", "two-point", "smoothing-necessity", "lb1", "lb2", "udce-cases"}));
  c_cmd->add_option("--eps", opt.eps, "eps parameter")->required();
  c_cmd->add_option("--sigma", opt.construct_sigma, "sigma parameter (lb1, lb2)");
  c_cmd->add_option("--k", opt.k, "domain size (udce-cases)")->capture_default_str();
  c_cmd->add_option("--seed", opt.seed, "PRNG seed")->capture_default_str();
  c_cmd->add_option("--jitter", opt.jitter, "jitter half-width (udce-cases, default eps^2/2)");
  c_cmd->add_option("--out", opt.out, "output directory")->required();

  auto* sample_sub = app.add_subcommand("sample", "i.i.d. draws from a PLD");
  sample_sub->add_option("--pld", opt.pld, "PLD JSON file")->required();
  sample_sub->add_option("--n", opt.n, "number of draws")->capture_default_str();
  sample_sub->add_option("--seed", opt.seed, "PRNG seed")->capture_default_str();
  sample_sub->add_option("--out", opt.out, "output file (default stdout)");

  auto* e_cmd = app.add_subcommand("experiment", "simulation experiments");
  e_cmd->require_subcommand(1);
  auto* ud = e_cmd->add_subcommand("udce-distinguish", "case (c) vs (d) distinguishing experiment");
  ud->add_option("--eps", opt.experiment.eps, "eps parameter")->capture_default_str();
  ud->add_option("--k", opt.experiment.k, "domain size")->capture_default_str();
  ud->add_option("--s", opt.experiment.s, "samples per trial")->capture_default_str();
  ud->add_option("--trials", opt.experiment.trials, "number of trials")->capture_default_str();
  ud->add_option("--seed", opt.seed, "PRNG seed")->capture_default_str();
  ud->add_option("--jitter", opt.jitter, "jitter half-width (default eps^2/2)");
  ud->add_option("--rule", opt.rule, "distinguisher")
      ->check(CLI::IsMember({"likelihood-ratio", "pattern"}))
      ->capture_default_str();
  ud->add_option("--out", opt.out, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (metrics_cmd->parsed() && opt.pld.empty() && opt.task.empty()) {
      throw Error(ErrorCode::InvalidArgument, "metrics needs --pld or --task");
    }
    Json result;
    if (metrics_cmd->parsed()) {
      result = metrics(opt);
    } else if (w_cmd->parsed()) {
      result = wasserstein_cmd(opt);
    } else if (s_cmd->parsed()) {
      result = smooth_cmd(opt);
    } else if (o_cmd->parsed()) {
      result = omni_cmd(opt);
    } else if (c_cmd->parsed()) {
      out << io::dump(construct_cmd(opt)) << '\n';
      return kOk;
    } else if (sample_sub->parsed()) {
      result = sample_cmd(opt);
    } else if (ud->parsed()) {
      result = experiment_cmd(opt);
    }
    emit(opt, result, out);
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace calib::cli
