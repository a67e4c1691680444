#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revfilt/image.hpp"
#include "revfilt/optimizers.hpp"
#include "revfilt/reverse.hpp"

namespace revfilt {

struct BenchFilter {
  std::string label;
  /// Filter spec string understood by make_filter.
  std::string spec;
};

struct BenchConfig {
  std::vector<BenchFilter> filters;
  std::vector<Method> methods{Method::T, Method::P, Method::TDA};
  /// Empty optional means the plain method without an optimizer.
  std::vector<std::optional<Scheme>> schemes{std::nullopt};
  int iterations = 100;
  /// TDA / R step for plain methods.
  double lambda = 1.0;
  int jobs = 1;

  /// Parses `key = value` lines (iterations, methods, schemes, lambda, jobs)
  /// and a `[filters]` section of `label = spec` lines. `#` starts a comment.
  static BenchConfig parse(std::string_view text);
  static BenchConfig load(const std::filesystem::path& path);
};

/// The nine built-in bench filter settings.
std::vector<BenchFilter> table3_presets();

struct BenchmarkRecord {
  std::string image;
  std::string filter;
  std::string method;
  std::string scheme;
  double input_psnr = 0.0;
  /// NaN when any run of the cell diverged or failed.
  double final_psnr = 0.0;
  double best_psnr = 0.0;
  int best_iteration = 0;
  double improvement_pct = 0.0;
  double wall_time_s = 0.0;
  /// Empty unless a run of this cell failed outright.
  std::string error;
};

/// Sorted .pgm/.ppm files of a directory. Throws IoFailure when the
/// directory is unreadable or holds no images.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir);

struct CorpusImage {
  std::string name;
  Image image;
};

std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir);

/// One record per (filter, method, scheme) in declaration order, PSNR
/// averaged in dB over the corpus per iteration. Cell failures are recorded,
/// never thrown.
std::vector<BenchmarkRecord> run_matrix(const std::vector<CorpusImage>& corpus,
                                        const BenchConfig& config);
std::vector<BenchmarkRecord> run_matrix(const std::filesystem::path& corpus_dir,
                                        const BenchConfig& config);

/// `image,filter,method,scheme,input_psnr,final_psnr,best_psnr,best_iter,improvement_pct,wall_time_s`
std::string records_to_csv(const std::vector<BenchmarkRecord>& records);

/// One Markdown table per scheme: filters as rows, input PSNR and the final
/// PSNR of each method as columns.
std::string records_to_markdown(const std::vector<BenchmarkRecord>& records);

}  // namespace revfilt
