#include "revfilt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "revfilt/error.hpp"
#include "revfilt/filter_spec.hpp"
#include "revfilt/metrics.hpp"
#include "revfilt/netpbm.hpp"

namespace revfilt {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(s)};
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  int out = 0;
  try {
    out = std::stoi(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw Error(ErrorKind::InvalidParameter, key + ": expected an integer");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw Error(ErrorKind::InvalidParameter, key + ": expected a number");
  return out;
}

}  // namespace

std::vector<BenchFilter> table3_presets() {
  return {
      {"RGF", "rgf:sigma_s=3,sigma_r=0.05,iters=4"},
      {"Gauss.", "gaussian:sigma=5"},
      {"LoG", "log:size=7,sigma=0.4"},
      {"BF", "bilateral:sigma_s=3,sigma_r=0.05"},
      {"disk", "disk:r=3"},
      {"motion", "motion:length=20,angle=45"},
      {"GF", "guided:window=5,eps=0.1"},
      {"GF+Gauss.", "guided_gauss:window=5,eps=0.1,sigma=5"},
      {"median", "median:n=5"},
  };
}

BenchConfig BenchConfig::parse(std::string_view text) {
  BenchConfig cfg;
  bool in_filters = false;
  bool saw_filters = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    // Comments start at a '#' outside double quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        raw.resize(i);
        break;
      }
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line != "[filters]") throw Error(ErrorKind::InvalidParameter, where + ": unknown section");
      in_filters = true;
      saw_filters = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidParameter, where + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) throw Error(ErrorKind::InvalidParameter, where + ": empty key or value");

    if (in_filters) {
      make_filter(value);  // validate early
      cfg.filters.push_back({key, value});
    } else if (key == "iterations") {
      cfg.iterations = parse_int(key, value);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(key, value);
    } else if (key == "jobs") {
      cfg.jobs = parse_int(key, value);
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& m : split_list(value)) cfg.methods.push_back(parse_method(m));
    } else if (key == "schemes") {
      cfg.schemes.clear();
      for (const auto& s : split_list(value)) {
        if (s == "none") {
          cfg.schemes.emplace_back(std::nullopt);
        } else {
          cfg.schemes.emplace_back(parse_scheme(s));
        }
      }
    } else {
      throw Error(ErrorKind::InvalidParameter, where + ": unknown key '" + key + "'");
    }
  }
  if (!saw_filters) cfg.filters = table3_presets();
  if (cfg.iterations < 1) throw Error(ErrorKind::InvalidParameter, "iterations must be >= 1");
  if (cfg.jobs < 1) throw Error(ErrorKind::InvalidParameter, "jobs must be >= 1");
  if (cfg.methods.empty() || cfg.schemes.empty() || cfg.filters.empty()) {
    throw Error(ErrorKind::InvalidParameter, "filters, methods and schemes must be non-empty");
  }
  return cfg;
}

BenchConfig BenchConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  std::vector<std::filesystem::path> out;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot read corpus " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".pgm" || ext == ".ppm")) out.push_back(entry.path());
  }
  if (out.empty()) throw Error(ErrorKind::IoFailure, "no .pgm/.ppm images in " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir) {
  std::vector<CorpusImage> out;
  for (const auto& p : list_corpus(dir)) out.push_back({p.filename().string(), read_image(p)});
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellRun {
  double input_psnr = kNaN;
  std::vector<double> psnr;  // per iteration, index 0 = the observed image
  bool diverged = false;
  double seconds = 0.0;
  std::string error;
};

struct Cell {
  std::size_t filter;
  Method method;
  std::optional<Scheme> scheme;
};

CellRun run_one(const Image& truth, const Filter& g, const FilterPtr& gptr, const Cell& cell,
                const BenchConfig& cfg) {
  CellRun out;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const Image b = g(truth);
    RunResult res;
    if (!cell.scheme) {
      MethodConfig mc;
      mc.method = cell.method;
      mc.lambda = cfg.lambda;
      mc.max_iterations = cfg.iterations;
      res = run(mc, b, g, truth);
    } else {
      OptimizerConfig oc = OptimizerConfig::defaults(*cell.scheme);
      oc.max_iterations = cfg.iterations;
      const ReverseOracle oracle(cell.method, b, gptr);
      res = run_accelerated(oc, oracle, b, truth);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.input_psnr = psnr(truth, b);
    for (const auto& s : res.log.samples) out.psnr.push_back(*s.psnr);
    out.diverged = res.log.diverged_at.has_value();
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

BenchmarkRecord summarize(const std::vector<CellRun>& runs, const BenchFilter& filter,
                          const Cell& cell) {
  BenchmarkRecord r;
  r.image = "mean(" + std::to_string(runs.size()) + ")";
  r.filter = filter.label;
  r.method = std::string(to_string(cell.method));
  r.scheme = cell.scheme ? std::string(to_string(*cell.scheme)) : "none";

  std::size_t common = std::numeric_limits<std::size_t>::max();
  bool failed = false;
  double input = 0.0;
  double seconds = 0.0;
  for (const auto& run : runs) {
    if (!run.error.empty()) {
      r.error = run.error;
      failed = true;
      continue;
    }
    failed = failed || run.diverged;
    common = std::min(common, run.psnr.size());
    input += run.input_psnr;
    seconds += run.seconds;
  }
  const std::size_t ok = std::count_if(runs.begin(), runs.end(), [](const CellRun& c) { return c.error.empty(); });
  if (ok == 0) {
    r.input_psnr = r.final_psnr = r.best_psnr = r.improvement_pct = kNaN;
    r.wall_time_s = kNaN;
    return r;
  }
  r.input_psnr = input / static_cast<double>(ok);
  r.wall_time_s = seconds / static_cast<double>(ok);

  // Mean PSNR curve over the prefix every run reached.
  std::vector<double> mean(common, 0.0);
  for (const auto& run : runs) {
    if (!run.error.empty()) continue;
    for (std::size_t k = 0; k < common; ++k) mean[k] += run.psnr[k] / static_cast<double>(ok);
  }
  r.best_psnr = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < common; ++k) {
    if (mean[k] > r.best_psnr) {
      r.best_psnr = mean[k];
      r.best_iteration = static_cast<int>(k);
    }
  }
  if (common <= 1) r.best_psnr = kNaN;
  r.final_psnr = failed ? kNaN : mean.back();
  r.improvement_pct = failed ? kNaN : improvement_pct(r.final_psnr, r.input_psnr);
  return r;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<BenchmarkRecord> run_matrix(const std::vector<CorpusImage>& corpus,
                                        const BenchConfig& config) {
  if (corpus.empty()) throw Error(ErrorKind::IoFailure, "empty corpus");
  std::vector<FilterPtr> filters;
  for (const auto& f : config.filters) filters.push_back(make_filter(f.spec));

  std::vector<Cell> cells;
  for (std::size_t f = 0; f < filters.size(); ++f) {
    for (Method m : config.methods) {
      for (const auto& s : config.schemes) cells.push_back({f, m, s});
    }
  }

  const std::size_t n_images = corpus.size();
  const std::size_t n_jobs = cells.size() * n_images;
  std::vector<CellRun> results(n_jobs);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t j = next++; j < n_jobs; j = next++) {
      const Cell& cell = cells[j / n_images];
      const FilterPtr& g = filters[cell.filter];
      results[j] = run_one(corpus[j % n_images].image, *g, g, cell, config);
    }
  };
  const int threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(n_jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<BenchmarkRecord> records;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::vector<CellRun> runs(results.begin() + c * n_images, results.begin() + (c + 1) * n_images);
    records.push_back(summarize(runs, config.filters[cells[c].filter], cells[c]));
  }
  return records;
}

std::vector<BenchmarkRecord> run_matrix(const std::filesystem::path& corpus_dir,
                                        const BenchConfig& config) {
  return run_matrix(load_corpus(corpus_dir), config);
}

std::string records_to_csv(const std::vector<BenchmarkRecord>& records) {
  std::string out =
      "image,filter,method,scheme,input_psnr,final_psnr,best_psnr,best_iter,improvement_pct,wall_time_s\n";
  for (const auto& r : records) {
    out += r.image + ',' + r.filter + ',' + r.method + ',' + r.scheme + ',' + fmt(r.input_psnr) + ',' +
           fmt(r.final_psnr) + ',' + fmt(r.best_psnr) + ',' + std::to_string(r.best_iteration) + ',' +
           fmt(r.improvement_pct) + ',' + fmt(r.wall_time_s) + '\n';
  }
  return out;
}

std::string records_to_markdown(const std::vector<BenchmarkRecord>& records) {
  std::vector<std::string> schemes;
  std::vector<std::string> methods;
  std::vector<std::string> filters;
  const auto add = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : records) {
    add(schemes, r.scheme);
    add(methods, r.method);
    add(filters, r.filter);
  }
  const auto cell = [](double v) {
    if (std::isnan(v)) return std::string("div");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::string out;
  for (const auto& scheme : schemes) {
    out += "### scheme: " + scheme + "\n\n| Filter | Input |";
    for (const auto& m : methods) out += ' ' + m + " |";
    out += "\n|---|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) out += "---|";
    out += '\n';
    for (const auto& f : filters) {
      std::map<std::string, const BenchmarkRecord*> row;
      for (const auto& r : records) {
        if (r.scheme == scheme && r.filter == f) row[r.method] = &r;
      }
      if (row.empty()) continue;
      out += "| " + f + " | " + cell(row.begin()->second->input_psnr) + " |";
      for (const auto& m : methods) {
        const auto it = row.find(m);
        out += ' ' + (it == row.end() ? std::string("-") : cell(it->second->final_psnr)) + " |";
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace revfilt
