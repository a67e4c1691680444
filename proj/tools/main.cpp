// revfilt: filter, reverse, analyze and bench from the command line.
//
// Exit codes: 0 ok, 2 bad arguments, 3 I/O, 4 filter failure,
// 5 divergence under --strict, 6 filter has no kernel.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "revfilt/bench.hpp"
#include "revfilt/error.hpp"
#include "revfilt/filter_spec.hpp"
#include "revfilt/iteration_log.hpp"
#include "revfilt/metrics.hpp"
#include "revfilt/netpbm.hpp"
#include "revfilt/optimizers.hpp"
#include "revfilt/reverse.hpp"
#include "revfilt/spectral.hpp"

namespace fs = std::filesystem;
using namespace revfilt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitFilter = 4;
constexpr int kExitDiverged = 5;
constexpr int kExitNotLinear = 6;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ImageTooSmall:
    case ErrorKind::ZeroReference:
    case ErrorKind::MissingGroundTruth:
      return kExitUsage;
    case ErrorKind::MalformedFile:
    case ErrorKind::UnsupportedFormat:
    case ErrorKind::IoFailure:
      return kExitIo;
    case ErrorKind::NotLinear:
      return kExitNotLinear;
    case ErrorKind::Diverged:
      return kExitDiverged;
    default:
      return kExitFilter;
  }
}

void write_text(const std::string& text, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
}

// Keeps filter construction errors (bad specs) apart from runtime failures.
FilterPtr build_filter(const std::string& spec) { return make_filter(spec); }

struct FilterArgs {
  std::string input;
  std::string spec;
  std::string output;
};

int cmd_filter(const FilterArgs& a) {
  const FilterPtr g = build_filter(a.spec);
  const Image x = read_image(a.input);
  Image y;
  try {
    y = (*g)(x);
  } catch (const Error& e) {
    std::cerr << "revfilt: filter failed: " << e.what() << "\n";
    return kExitFilter;
  }
  write_image(y, a.output);
  return kExitOk;
}

struct ReverseArgs {
  std::string input;
  std::string spec;
  std::string output;
  std::string method = "tda";
  std::string agd;
  std::optional<double> lambda;
  double alpha = 1.0;
  int iters = 100;
  std::string stop = "two-pass";
  std::string log;
  std::string truth;
  bool strict = false;
  std::optional<double> beta;
  std::optional<double> beta1;
  std::optional<double> beta2;
  std::optional<double> epsilon;
  std::string bias = "table";
  double f_epsilon = 1e-6;
  std::optional<std::uint64_t> seed;
};

int cmd_reverse(const ReverseArgs& a) {
  const FilterPtr g = build_filter(a.spec);
  const Method method = parse_method(a.method);

  StoppingPolicy stop;
  stop.mode = parse_stop_mode(a.stop);
  if (stop.mode == StopMode::TwoPassRelativeError) stop.first_pass_iterations = a.iters;

  PowerIterationOptions power;
  power.seed = a.seed;

  MethodConfig mc;
  std::optional<OptimizerConfig> oc;
  if (a.agd.empty()) {
    mc.method = method;
    if (a.lambda) mc.lambda = *a.lambda;
    mc.alpha = a.alpha;
    mc.max_iterations = a.iters;
    mc.f_epsilon = a.f_epsilon;
    mc.power = power;
    mc.validate();
  } else {
    oc = OptimizerConfig::defaults(parse_scheme(a.agd));
    if (a.lambda) oc->lambda = *a.lambda;
    if (a.beta) oc->beta = *a.beta;
    if (a.beta1) oc->beta1 = *a.beta1;
    if (a.beta2) oc->beta2 = *a.beta2;
    if (a.epsilon) oc->epsilon = *a.epsilon;
    oc->bias_correction = parse_bias_correction(a.bias);
    oc->max_iterations = a.iters;
    oc->validate();
  }
  stop.validate();

  const Image b = read_image(a.input);
  std::optional<Image> truth;
  if (!a.truth.empty()) truth = read_image(a.truth);

  RunResult res;
  if (oc) {
    const ReverseOracle oracle(method, b, g, power);
    res = run_accelerated(*oc, oracle, b, truth, stop);
  } else {
    res = run(mc, b, *g, truth, stop);
  }

  if (!a.log.empty()) write_text(to_csv(res.log), a.log);
  if (a.output.empty()) {
    std::cout << encode_netpbm(res.image);
    std::cout.flush();
  } else {
    write_image(res.image, a.output);
  }

  std::cerr << "revfilt: returned iterate " << res.returned_iteration;
  if (res.log.diverged_at) std::cerr << " (diverged at " << *res.log.diverged_at << ")";
  std::cerr << "\n";
  if (res.log.diverged_at && a.strict) return kExitDiverged;
  return kExitOk;
}

struct AnalyzeArgs {
  std::string spec;
  std::string kernel_file;
  int grid_h = 256;
  int grid_w = 256;
  bool no_refine = false;
  std::string csv;
  std::optional<int> predict;
  std::string image;
  std::string method = "tda";
  std::string output;
};

int cmd_analyze(const AnalyzeArgs& a) {
  std::optional<Kernel> kernel;
  if (!a.kernel_file.empty()) {
    kernel = read_kernel_file(a.kernel_file);
  } else {
    const FilterPtr g = build_filter(a.spec);
    if (g->kernel() == nullptr) {
      throw Error(ErrorKind::NotLinear, "filter '" + g->name() + "' has no convolution kernel");
    }
    kernel = *g->kernel();
  }

  if (a.predict) {
    if (a.image.empty() || a.output.empty()) {
      throw Error(ErrorKind::InvalidParameter, "--predict needs --image and --out");
    }
    const Image x = read_image(a.image);
    write_image(predict_iterate(*kernel, x, parse_method(a.method), *a.predict), a.output);
  }

  AnalysisOptions opts;
  opts.grid_height = a.grid_h;
  opts.grid_width = a.grid_w;
  opts.refine = !a.no_refine;
  const SpectralReport report = analyze(*kernel, opts);
  if (!a.csv.empty()) write_text(report_to_csv(report), a.csv);
  std::cout << report_summary(report);
  return kExitOk;
}

struct BenchArgs {
  std::string corpus;
  std::string config;
  std::string out = ".";
  std::optional<int> jobs;
  std::string methods;
  std::string schemes;
  std::optional<int> iters;
};

int cmd_bench(const BenchArgs& a) {
  std::string text;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + a.config);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  // Command-line values override the file.
  BenchConfig cfg = BenchConfig::parse(text);
  if (!a.methods.empty()) cfg.methods = BenchConfig::parse("methods = " + a.methods).methods;
  if (!a.schemes.empty()) cfg.schemes = BenchConfig::parse("schemes = " + a.schemes).schemes;
  if (a.jobs) cfg.jobs = *a.jobs;
  if (a.iters) cfg.iterations = *a.iters;
  if (cfg.jobs < 1 || cfg.iterations < 1) {
    throw Error(ErrorKind::InvalidParameter, "--jobs and --iters must be >= 1");
  }

  const auto corpus = load_corpus(a.corpus);
  const auto records = run_matrix(corpus, cfg);
  fs::create_directories(a.out);
  write_text(records_to_csv(records), fs::path(a.out) / "results.csv");
  const std::string md = records_to_markdown(records);
  write_text(md, fs::path(a.out) / "summary.md");
  std::cout << md;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      std::cerr << "revfilt: " << r.filter << "/" << r.method << "/" << r.scheme << ": " << r.error << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reverse black-box image filters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "revfilt 0.1.0");

  FilterArgs fa;
  auto* filter = app.add_subcommand("filter", "Apply a filter to an image");
  filter->add_option("input", fa.input, "Input PGM/PPM")->required();
  filter->add_option("output", fa.output, "Output PGM/PPM")->required();
  filter->add_option("-f,--filter", fa.spec, "Filter spec name:key=val,...")->required();

  ReverseArgs ra;
  auto* reverse = app.add_subcommand("reverse", "Estimate the input of a filter from its output");
  reverse->add_option("input", ra.input, "Filtered image")->required();
  reverse->add_option("output", ra.output, "Restored image (stdout when omitted)");
  reverse->add_option("-f,--filter", ra.spec, "Filter spec")->required();
  reverse->add_option("--method", ra.method, "t|r|p|f|tda")->capture_default_str();
  reverse->add_option("--agd", ra.agd, "gd|mgd|nag|rmsprop|adam|adadelta");
  reverse->add_option("--lambda", ra.lambda, "Step size");
  reverse->add_option("--alpha", ra.alpha, "R-method weight")->capture_default_str();
  reverse->add_option("--iters", ra.iters, "Iteration budget")->capture_default_str();
  reverse->add_option("--stop", ra.stop, "fixed|two-pass|best")->capture_default_str();
  reverse->add_option("--log", ra.log, "Write the iteration log CSV here");
  reverse->add_option("--truth", ra.truth, "Ground truth for PSNR/SSIM columns");
  reverse->add_flag("--strict", ra.strict, "Exit 5 when the iteration diverges");
  reverse->add_option("--beta", ra.beta, "MGD/NAG/RMSprop/Adadelta decay");
  reverse->add_option("--beta1", ra.beta1, "ADAM first-moment decay");
  reverse->add_option("--beta2", ra.beta2, "ADAM second-moment decay");
  reverse->add_option("--epsilon", ra.epsilon, "RMSprop/ADAM/Adadelta epsilon");
  reverse->add_option("--bias", ra.bias, "ADAM bias correction: table|standard")->capture_default_str();
  reverse->add_option("--f-epsilon", ra.f_epsilon, "F-method denominator guard")->capture_default_str();
  reverse->add_option("--seed", ra.seed, "Random start for the P-method power iteration");

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "Frequency-domain stability of an LSI filter");
  auto* spec_opt = analyze_cmd->add_option("-f,--filter", aa.spec, "Filter spec");
  auto* kernel_opt = analyze_cmd->add_option("--kernel", aa.kernel_file, "Kernel text file");
  spec_opt->excludes(kernel_opt);
  analyze_cmd->add_option("--grid-h", aa.grid_h, "Frequency grid rows")->capture_default_str();
  analyze_cmd->add_option("--grid-w", aa.grid_w, "Frequency grid columns")->capture_default_str();
  analyze_cmd->add_flag("--no-refine", aa.no_refine, "Report grid values only");
  analyze_cmd->add_option("--csv", aa.csv, "Write |H0| grids here");
  analyze_cmd->add_option("--predict", aa.predict, "Closed-form iterate count");
  analyze_cmd->add_option("--image", aa.image, "Ground-truth image for --predict");
  analyze_cmd->add_option("--method", aa.method, "t|tda for --predict")->capture_default_str();
  analyze_cmd->add_option("--out", aa.output, "Predicted image path");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run the method x filter matrix over a corpus");
  bench->add_option("corpus", ba.corpus, "Directory of PGM/PPM images")->required();
  bench->add_option("--config", ba.config, "Bench config (defaults to the built-in presets)");
  bench->add_option("--out", ba.out, "Output directory")->capture_default_str();
  bench->add_option("--jobs", ba.jobs, "Worker threads");
  bench->add_option("--methods", ba.methods, "Comma-separated methods");
  bench->add_option("--schemes", ba.schemes, "Comma-separated schemes (none = plain)");
  bench->add_option("--iters", ba.iters, "Iteration budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  try {
    if (*filter) return cmd_filter(fa);
    if (*reverse) return cmd_reverse(ra);
    if (*analyze_cmd) {
      if (aa.spec.empty() && aa.kernel_file.empty()) {
        std::cerr << "revfilt: analyze needs --filter or --kernel\n" << analyze_cmd->help();
        return kExitUsage;
      }
      return cmd_analyze(aa);
    }
    if (*bench) return cmd_bench(ba);
  } catch (const Error& e) {
    std::cerr << "revfilt: " << e.what() << "\n";
    const int code = exit_code_for(e.kind());
    if (code == kExitUsage) std::cerr << app.help();
    return code;
  } catch (const std::exception& e) {
    std::cerr << "revfilt: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
