#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "revfilt/bench.hpp"
#include "revfilt/error.hpp"
#include "revfilt/filter_spec.hpp"
#include "revfilt/filters.hpp"
#include "revfilt/metrics.hpp"
#include "revfilt/reverse.hpp"
#include "revfilt/stopping.hpp"
#include "test_util.hpp"

using namespace revfilt;
namespace fs = std::filesystem;

namespace {

IterationLog log_from(const std::vector<double>& errors, std::optional<int> diverged = {}) {
  IterationLog log;
  for (std::size_t k = 0; k < errors.size(); ++k) log.samples.push_back({int(k), {}, {}, {}, errors[k]});
  log.diverged_at = diverged;
  return log;
}

IterationLog psnr_log(const std::vector<double>& p) {
  IterationLog log;
  for (std::size_t k = 0; k < p.size(); ++k) log.samples.push_back({int(k), 0.0, p[k], {}, 0.0});
  return log;
}

std::vector<CorpusImage> small_corpus() {
  return load_corpus(testutil::data_path("corpus"));
}

}  // namespace

TEST(StopMode, Names) {
  EXPECT_EQ(parse_stop_mode("two-pass"), StopMode::TwoPassRelativeError);
  EXPECT_EQ(parse_stop_mode("best"), StopMode::BestTracked);
  EXPECT_EQ(parse_stop_mode("fixed"), StopMode::Fixed);
  EXPECT_THROW(parse_stop_mode("early"), Error);
  StoppingPolicy p{StopMode::TwoPassRelativeError, 0};
  EXPECT_THROW(p.validate(), Error);
}

TEST(Argmin, TiesPrefixAndZero) {
  EXPECT_EQ(argmin_relative_error(log_from({0.0, 0.5, 0.2, 0.2, 0.3})), 2);
  EXPECT_EQ(argmin_relative_error(log_from({0.9, 0.5, 0.4, 0.3, 0.1}, 4)), 3);
  EXPECT_EQ(argmin_relative_error(log_from({0.9, 0.8, 0.7})), 2);
  EXPECT_EQ(argmin_relative_error(log_from({0.9}, 1)), 0);
}

TEST(TwoPass, ConvergentCaseUsesWholeFirstPass) {
  const auto g = make_gaussian(1.0, std::nullopt, Boundary::Circular);
  const Image truth = testutil::pattern_image(24, 24);
  const Image b = (*g)(truth);
  MethodConfig cfg;
  cfg.max_iterations = 15;
  const RunResult res = run(cfg, b, *g, truth, {StopMode::TwoPassRelativeError, 15});
  EXPECT_EQ(res.returned_iteration, 15);
  EXPECT_EQ(res.log.samples.size(), 16u);
}

TEST(TwoPass, IdentityStopsAtOne) {
  const Image b = testutil::random_image(8, 8, 1, 3);
  int calls = 0;
  std::vector<int> budgets;
  const Runner runner = [&](int iters) {
    ++calls;
    budgets.push_back(iters);
    MethodConfig cfg;
    cfg.method = Method::T;
    cfg.max_iterations = iters;
    return run(cfg, b, *make_identity());
  };
  const TwoPassResult r = two_pass_optimal(runner, {StopMode::TwoPassRelativeError, 10});
  EXPECT_EQ(r.best_iteration, 1);
  EXPECT_EQ(r.image, b);
  EXPECT_EQ(budgets.front(), 10);
  EXPECT_EQ(budgets.back(), 1);
  EXPECT_THROW(two_pass_optimal(runner, {StopMode::Fixed, 10}), Error);
}

TEST(TwoPass, SecondPassMatchesFirstPassSnapshot) {
  const auto g = make_rolling_guidance(3.0, 0.05, 4);
  const Image truth = testutil::cameraman_crop(60, 240, 48, 48);
  const Image b = (*g)(truth);
  MethodConfig cfg;
  cfg.max_iterations = 60;
  const RunResult best = run(cfg, b, *g, truth, {StopMode::BestTracked, 0});
  const RunResult two = run(cfg, b, *g, truth, {StopMode::TwoPassRelativeError, 60});
  EXPECT_EQ(best.returned_iteration, two.returned_iteration);
  EXPECT_TRUE(testutil::bit_equal(best.image, two.image));
  EXPECT_EQ(two.returned_iteration, argmin_relative_error(two.log));
}

TEST(TwoPass, DivergedFirstPassUsesPrefix) {
  const auto g = make_average(3, Boundary::Circular);
  const Image truth = testutil::cameraman_crop(60, 240, 32, 32);
  const Image b = (*g)(truth);
  MethodConfig cfg;
  cfg.method = Method::T;
  cfg.max_iterations = 400;
  const RunResult r = run(cfg, b, *g, truth, {StopMode::TwoPassRelativeError, 400});
  ASSERT_TRUE(r.log.diverged_at.has_value());
  EXPECT_LT(r.returned_iteration, *r.log.diverged_at);
  EXPECT_LT(r.image.max_abs(), 1e6);
}

TEST(Improvement, Examples) {
  EXPECT_DOUBLE_EQ(improvement_pct(25, 20), 25.0);
  EXPECT_DOUBLE_EQ(improvement_pct(27, 30), -10.0);
  for (const auto& [k, v] : improvement_curve(psnr_log({20, 20, 20}), 20)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(improvement_curve(log_from({0.1, 0.2}), 20), Error);
  try {
    improvement_curve(log_from({0.1}), 20);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingGroundTruth);
  }
}

TEST(Improvement, SubsamplingInvariant) {
  const IterationLog full = psnr_log({20, 21.5, 23, 22, 24.25, 25});
  IterationLog sub;
  for (std::size_t k = 0; k < full.samples.size(); k += 2) sub.samples.push_back(full.samples[k]);
  const auto a = improvement_curve(full, 20);
  const auto b = improvement_curve(sub, 20);
  for (const auto& [k, v] : b) EXPECT_EQ(v, a[k].second);
}

TEST(BenchConfig, ParseAndDefaults) {
  const BenchConfig d = BenchConfig::parse("");
  EXPECT_EQ(d.filters.size(), 9u);
  EXPECT_EQ(d.iterations, 100);
  const BenchConfig c = BenchConfig::parse(
      "iterations = 7  # short\nmethods = t, tda\nschemes = none,nag\njobs=2\n[filters]\nG = gaussian:sigma=1\n");
  EXPECT_EQ(c.iterations, 7);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::T, Method::TDA}));
  ASSERT_EQ(c.schemes.size(), 2u);
  EXPECT_FALSE(c.schemes[0].has_value());
  EXPECT_EQ(*c.schemes[1], Scheme::NAG);
  ASSERT_EQ(c.filters.size(), 1u);
  EXPECT_EQ(c.filters[0].spec, "gaussian:sigma=1");
  EXPECT_THROW(BenchConfig::parse("colour = blue"), Error);
  EXPECT_THROW(BenchConfig::parse("[filters]\nx = nosuch:a=1"), Error);
  EXPECT_THROW(BenchConfig::parse("iterations = 0"), Error);
}

TEST(BenchConfig, BundledPresetsLoad) {
  const BenchConfig c = BenchConfig::load(fs::path(REVFILT_TEST_DATA) / ".." / ".." / "configs" / "table3.presets");
  EXPECT_GE(c.filters.size(), 9u);
  for (const auto& f : c.filters) EXPECT_NO_THROW(make_filter(f.spec)) << f.label;
}

TEST(Corpus, EmptyOrMissingDirectory) {
  const fs::path empty = fs::temp_directory_path() / "revfilt_empty_corpus";
  fs::create_directories(empty);
  try {
    list_corpus(empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoFailure);
  }
  EXPECT_THROW(list_corpus(empty / "missing"), Error);
  EXPECT_EQ(list_corpus(testutil::data_path("corpus")).size(), 2u);
}

TEST(RunMatrix, IdentityIsAlreadyPerfect) {
  BenchConfig cfg = BenchConfig::parse("iterations = 3\nmethods = t\n[filters]\nid = identity\n");
  const auto corpus = small_corpus();
  const auto recs = run_matrix(std::vector<CorpusImage>{corpus.front()}, cfg);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].input_psnr, kMaxPsnr);
  EXPECT_EQ(recs[0].improvement_pct, 0.0);
  EXPECT_EQ(recs[0].image, "mean(1)");
  EXPECT_EQ(recs[0].scheme, "none");
}

TEST(RunMatrix, CardinalityAndDeterministicOrder) {
  BenchConfig cfg = BenchConfig::parse(
      "iterations = 4\nmethods = t,p,tda\nschemes = gd,mgd,nag,rmsprop,adam,adadelta\n"
      "[filters]\nG = gaussian:sigma=1\nB = average:n=3\n");
  const auto corpus = small_corpus();
  cfg.jobs = 1;
  const auto one = run_matrix(corpus, cfg);
  cfg.jobs = 4;
  const auto many = run_matrix(corpus, cfg);
  ASSERT_EQ(one.size(), 2u * 3u * 6u);
  ASSERT_EQ(many.size(), one.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].filter, many[i].filter);
    EXPECT_EQ(one[i].method, many[i].method);
    EXPECT_EQ(one[i].scheme, many[i].scheme);
    EXPECT_EQ(one[i].final_psnr, many[i].final_psnr);
  }
  EXPECT_EQ(one[0].filter, "G");
  EXPECT_EQ(one[0].method, "t");
  EXPECT_EQ(one[0].scheme, "gd");
  EXPECT_EQ(one[1].scheme, "mgd");
  EXPECT_EQ(one[6].method, "p");
}

TEST(RunMatrix, AveragesPsnrOverCorpus) {
  BenchConfig cfg = BenchConfig::parse("iterations = 5\nmethods = tda\n[filters]\nG = gaussian:sigma=1\n");
  const auto corpus = small_corpus();
  const auto rec = run_matrix(corpus, cfg).at(0);
  const auto g = make_gaussian(1.0);
  double in = 0, fin = 0;
  for (const auto& c : corpus) {
    const Image b = (*g)(c.image);
    MethodConfig mc;
    mc.max_iterations = 5;
    const RunResult r = run(mc, b, *g, c.image);
    in += psnr(c.image, b) / corpus.size();
    fin += *r.log.samples.back().psnr / corpus.size();
  }
  EXPECT_NEAR(rec.input_psnr, in, 1e-12);
  EXPECT_NEAR(rec.final_psnr, fin, 1e-12);
  EXPECT_NEAR(rec.improvement_pct, (fin - in) / in * 100, 1e-9);
}

TEST(RunMatrix, GuidedFilterTGainsTenDb) {
  BenchConfig cfg = BenchConfig::parse("iterations = 10\nmethods = t\n[filters]\nGF = guided:window=5,eps=0.1\n");
  const std::vector<CorpusImage> one{{"crop", testutil::cameraman_crop(60, 240, 128, 128)}};
  const auto rec = run_matrix(one, cfg).at(0);
  EXPECT_GT(rec.final_psnr, rec.input_psnr + 10.0);
}

TEST(RunMatrix, MedianDegrades) {
  BenchConfig cfg = BenchConfig::parse("iterations = 10\nmethods = t,p,tda\n[filters]\nM = median:n=5\n");
  for (const auto& rec : run_matrix(small_corpus(), cfg)) {
    EXPECT_LT(rec.final_psnr, rec.input_psnr) << rec.method;
  }
}

TEST(RunMatrix, FailuresAreRecorded) {
  BenchConfig cfg = BenchConfig::parse("iterations = 2\nmethods = t\n");
  cfg.filters = {{"bad", std::string("external:cmd=\"") + REVFILT_BOX_BLUR + " --fail\""},
                 {"div", "average:n=3,boundary=circular"}};
  cfg.methods = {Method::T};
  cfg.iterations = 300;
  const auto recs = run_matrix(small_corpus(), cfg);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_FALSE(recs[0].error.empty());
  EXPECT_TRUE(std::isnan(recs[0].final_psnr));
  EXPECT_TRUE(recs[1].error.empty());
  EXPECT_TRUE(std::isnan(recs[1].final_psnr));
  const std::string csv = records_to_csv(recs);
  EXPECT_EQ(csv.rfind("image,filter,method,scheme,input_psnr,final_psnr,best_psnr,best_iter,improvement_pct,wall_time_s\n", 0), 0u);
  EXPECT_NE(csv.find(",nan,"), std::string::npos);
}

TEST(RunMatrix, MarkdownShape) {
  std::vector<BenchmarkRecord> recs = {
      {"mean(2)", "GF", "t", "none", 30.0, 45.5, 46, 9, 51.6, 0.1, ""},
      {"mean(2)", "GF", "tda", "none", 30.0, 47.25, 47.25, 10, 57.5, 0.2, ""},
      {"mean(2)", "median", "t", "none", 33.0, NAN, 33.1, 1, NAN, 0.1, ""},
  };
  const std::string md = records_to_markdown(recs);
  EXPECT_NE(md.find("| Filter | Input | t | tda |"), std::string::npos);
  EXPECT_NE(md.find("| GF | 30.00 | 45.50 | 47.25 |"), std::string::npos);
  EXPECT_NE(md.find("| median | 33.00 | div | - |"), std::string::npos);
}
