#include "revfilt/external_filter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <cctype>
#include <thread>
#include <utility>

#include "revfilt/error.hpp"
#include "revfilt/netpbm.hpp"

namespace revfilt {

namespace {

using Clock = std::chrono::steady_clock;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(o.release()) {}
  Fd& operator=(Fd&& o) noexcept {
    reset(o.release());
    return *this;
  }
  ~Fd() { reset(); }

  int get() const noexcept { return fd_; }
  int release() noexcept { return std::exchange(fd_, -1); }
  void reset(int fd = -1) noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }
  explicit operator bool() const noexcept { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

[[noreturn]] void fail_errno(const char* what) {
  throw Error(ErrorKind::ProcessFailure, std::string(what) + ": " + std::strerror(errno));
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(std::min<long long>(left.count(), 1 << 30));
}

void kill_and_reap(pid_t pid) {
  ::kill(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
}

}  // namespace

std::vector<std::string> split_command(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quote) {
      if (ch == quote) {
        quote = 0;
      } else if (ch == '\\' && quote == '"' && i + 1 < line.size()) {
        cur += line[++i];
      } else {
        cur += ch;
      }
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      in_token = true;
    } else if (ch == '\\' && i + 1 < line.size()) {
      cur += line[++i];
      in_token = true;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      if (in_token) out.push_back(std::exchange(cur, {}));
      in_token = false;
    } else {
      cur += ch;
      in_token = true;
    }
  }
  if (quote) throw Error(ErrorKind::InvalidParameter, "unterminated quote in command");
  if (in_token) out.push_back(cur);
  return out;
}

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          const std::filesystem::path& workdir,
                          std::chrono::duration<double> timeout) {
  if (argv.empty()) throw Error(ErrorKind::InvalidParameter, "empty command");

  // stdin goes through a socket so a reader that exits early yields EPIPE
  // from send(MSG_NOSIGNAL) instead of a process-wide SIGPIPE.
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) < 0) fail_errno("socketpair");
  Fd in_parent(sv[0]), in_child(sv[1]);
  int po[2], pe[2];
  if (::pipe2(po, O_CLOEXEC) < 0) fail_errno("pipe");
  Fd out_parent(po[0]), out_child(po[1]);
  if (::pipe2(pe, O_CLOEXEC) < 0) fail_errno("pipe");
  Fd err_parent(pe[0]), err_child(pe[1]);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string wd = workdir.string();

  const pid_t pid = ::fork();
  if (pid < 0) fail_errno("fork");
  if (pid == 0) {
    ::dup2(in_child.get(), STDIN_FILENO);
    ::dup2(out_child.get(), STDOUT_FILENO);
    ::dup2(err_child.get(), STDERR_FILENO);
    if (!wd.empty() && ::chdir(wd.c_str()) != 0) ::_exit(126);
    ::execvp(cargv[0], cargv.data());
    const char msg[] = "exec failed\n";
    [[maybe_unused]] auto n = ::write(STDERR_FILENO, msg, sizeof msg - 1);
    ::_exit(127);
  }
  in_child.reset();
  out_child.reset();
  err_child.reset();
  set_nonblocking(in_parent.get());
  set_nonblocking(out_parent.get());
  set_nonblocking(err_parent.get());

  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(timeout);
  ProcessResult result;
  std::size_t written = 0;
  if (input.empty()) in_parent.reset();
  char buf[65536];

  while (out_parent || err_parent) {
    pollfd fds[3];
    int n = 0;
    int idx_in = -1, idx_out = -1, idx_err = -1;
    if (in_parent) {
      idx_in = n;
      fds[n++] = {in_parent.get(), POLLOUT, 0};
    }
    if (out_parent) {
      idx_out = n;
      fds[n++] = {out_parent.get(), POLLIN, 0};
    }
    if (err_parent) {
      idx_err = n;
      fds[n++] = {err_parent.get(), POLLIN, 0};
    }
    const int ms = remaining_ms(deadline);
    if (ms == 0) {
      kill_and_reap(pid);
      throw Error(ErrorKind::Timeout, "process '" + argv[0] + "' timed out");
    }
    const int rc = ::poll(fds, static_cast<nfds_t>(n), ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      kill_and_reap(pid);
      fail_errno("poll");
    }
    if (idx_in >= 0 && fds[idx_in].revents) {
      const ssize_t w = ::send(in_parent.get(), input.data() + written, input.size() - written,
                               MSG_NOSIGNAL);
      if (w > 0) written += static_cast<std::size_t>(w);
      if ((w < 0 && errno != EAGAIN && errno != EINTR) || written == input.size()) {
        in_parent.reset();
      }
    }
    auto drain = [&](int idx, Fd& fd, std::string& sink) {
      if (idx < 0 || !fds[idx].revents) return;
      const ssize_t r = ::read(fd.get(), buf, sizeof buf);
      if (r > 0) {
        sink.append(buf, static_cast<std::size_t>(r));
      } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
        fd.reset();
      }
    };
    drain(idx_out, out_parent, result.stdout_data);
    drain(idx_err, err_parent, result.stderr_data);
  }
  in_parent.reset();

  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) fail_errno("waitpid");
    if (Clock::now() >= deadline) {
      kill_and_reap(pid);
      throw Error(ErrorKind::Timeout, "process '" + argv[0] + "' timed out");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  if (WIFSIGNALED(status)) {
    throw Error(ErrorKind::ProcessFailure,
                "process '" + argv[0] + "' killed by signal " + std::to_string(WTERMSIG(status)) +
                    "; stderr: " + result.stderr_data);
  }
  result.exit_code = WEXITSTATUS(status);
  return result;
}

ExternalFilter::ExternalFilter(std::vector<std::string> command, std::filesystem::path workdir,
                               std::chrono::duration<double> timeout)
    : command_(std::move(command)), workdir_(std::move(workdir)), timeout_(timeout) {
  if (command_.empty()) throw Error(ErrorKind::InvalidParameter, "external filter needs a command");
  if (!(timeout_.count() > 0.0)) throw Error(ErrorKind::InvalidParameter, "timeout must be positive");
}

Image ExternalFilter::apply(const Image& x) const {
  std::lock_guard lock(mutex_);
  const ProcessResult res = run_process(command_, encode_netpbm(x), workdir_, timeout_);
  if (res.exit_code != 0) {
    throw Error(ErrorKind::ProcessFailure, "'" + command_[0] + "' exited with status " +
                                               std::to_string(res.exit_code) +
                                               "; stderr: " + res.stderr_data);
  }
  Image out;
  try {
    out = decode_netpbm(res.stdout_data);
  } catch (const Error& e) {
    throw Error(ErrorKind::ProtocolViolation, std::string("bad image on stdout: ") + e.what());
  }
  if (!out.same_shape(x)) {
    throw Error(ErrorKind::ProtocolViolation, "output shape differs from input shape");
  }
  return out;
}

FilterParams ExternalFilter::params() const {
  std::string cmd;
  for (const auto& a : command_) {
    if (!cmd.empty()) cmd += ' ';
    cmd += a;
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, timeout_.count());
  return {{"cmd", cmd}, {"timeout", std::string(buf, res.ptr)}};
}

FilterPtr make_external(std::vector<std::string> command, std::filesystem::path workdir,
                        double timeout_s) {
  return std::make_shared<ExternalFilter>(std::move(command), std::move(workdir),
                                          std::chrono::duration<double>(timeout_s));
}

}  // namespace revfilt
