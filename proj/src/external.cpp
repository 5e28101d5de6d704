#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "ltlsanity/automaton.hpp"

namespace ltlsanity {

namespace {

class fd_guard {
 public:
  explicit fd_guard(int fd = -1) : fd_(fd) {}
  fd_guard(const fd_guard&) = delete;
  fd_guard& operator=(const fd_guard&) = delete;
  ~fd_guard() { reset(); }
  int get() const { return fd_; }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_;
};

struct pipe_pair {
  fd_guard read;
  fd_guard write;
};

void make_pipe(pipe_pair& p) {
  std::array<int, 2> fds{};
  if (::pipe(fds.data()) != 0) throw external_tool_error(std::string("pipe: ") + std::strerror(errno), -1, {});
  p.read.reset(fds[0]);
  p.write.reset(fds[1]);
}

struct child_output {
  int status = 0;
  bool timed_out = false;
  std::string out;
  std::string err;
};

child_output run_shell(const std::string& command, const std::string& input, std::chrono::milliseconds timeout) {
  pipe_pair in, out, err;
  make_pipe(in);
  make_pipe(out);
  make_pipe(err);

  const pid_t pid = ::fork();
  if (pid < 0) throw external_tool_error(std::string("fork: ") + std::strerror(errno), -1, {});
  if (pid == 0) {
    ::dup2(in.read.get(), STDIN_FILENO);
    ::dup2(out.write.get(), STDOUT_FILENO);
    ::dup2(err.write.get(), STDERR_FILENO);
    ::close(in.read.get());
    ::close(in.write.get());
    ::close(out.read.get());
    ::close(out.write.get());
    ::close(err.read.get());
    ::close(err.write.get());
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  in.read.reset();
  out.write.reset();
  err.write.reset();

  // SIGPIPE is ignored while writing: the child may exit without reading.
  {
    struct sigaction ignore {}, previous{};
    ignore.sa_handler = SIG_IGN;
    ::sigaction(SIGPIPE, &ignore, &previous);
    std::size_t written = 0;
    while (written < input.size()) {
      const ssize_t n = ::write(in.write.get(), input.data() + written, input.size() - written);
      if (n <= 0) break;
      written += static_cast<std::size_t>(n);
    }
    ::sigaction(SIGPIPE, &previous, nullptr);
  }
  in.write.reset();

  child_output result;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::array<pollfd, 2> fds{{{out.read.get(), POLLIN, 0}, {err.read.get(), POLLIN, 0}}};
  std::array<std::string*, 2> sinks{&result.out, &result.err};
  int open = 2;
  std::array<char, 4096> buf{};
  while (open > 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    const int ready = ::poll(fds.data(), fds.size(), static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    for (std::size_t i = 0; i < fds.size(); ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t n = ::read(fds[i].fd, buf.data(), buf.size());
      if (n > 0) {
        sinks[i]->append(buf.data(), static_cast<std::size_t>(n));
      } else {
        fds[i].fd = -1;
        --open;
      }
    }
  }
  if (result.timed_out) ::kill(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  return result;
}

}  // namespace

buchi_automaton external_translate(const formula& f, const std::string& command, const external_options& opts) {
  const child_output r = run_shell(command, render(f) + "\n", opts.timeout);
  if (r.timed_out) {
    throw external_tool_error("translator '" + command + "' timed out after " + std::to_string(opts.timeout.count()) + " ms",
                              -1, r.err);
  }
  if (r.status != 0) {
    throw external_tool_error("translator '" + command + "' exited with status " + std::to_string(r.status) +
                                  (r.err.empty() ? std::string() : ": " + r.err),
                              r.status, r.err);
  }
  try {
    return import_automaton(r.out);
  } catch (const automaton_error& e) {
    throw external_tool_error("translator '" + command + "' produced malformed output: " + e.what(), 0, r.err);
  }
}

}  // namespace ltlsanity
