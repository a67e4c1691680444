#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "revfilt/filter.hpp"

namespace revfilt {

/// Treats a third-party executable as the black box. Each apply() spawns the
/// command, writes the image as PGM/PPM on its stdin and reads an image of
/// identical shape back from its stdout. Invocations on one instance are
/// serialized; use separate instances for concurrent work.
class ExternalFilter final : public Filter {
 public:
  ExternalFilter(std::vector<std::string> command, std::filesystem::path workdir = {},
                 std::chrono::duration<double> timeout = std::chrono::seconds(60));

  Image apply(const Image& x) const override;
  std::string name() const override { return "external"; }
  FilterParams params() const override;

  const std::vector<std::string>& command() const noexcept { return command_; }

 private:
  std::vector<std::string> command_;
  std::filesystem::path workdir_;
  std::chrono::duration<double> timeout_;
  mutable std::mutex mutex_;
};

FilterPtr make_external(std::vector<std::string> command, std::filesystem::path workdir = {},
                        double timeout_s = 60.0);

/// Splits a command line on whitespace, honoring single and double quotes and
/// backslash escapes. No other shell expansion is performed.
std::vector<std::string> split_command(const std::string& command_line);

struct ProcessResult {
  int exit_code = 0;
  std::string stdout_data;
  std::string stderr_data;
};

/// Runs argv with `input` on stdin and captures both output streams.
/// Throws ProcessFailure if the process cannot start or dies on a signal,
/// Timeout if it outlives `timeout` (the child is killed).
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          const std::filesystem::path& workdir,
                          std::chrono::duration<double> timeout);

}  // namespace revfilt
