#include "highlight_forge/process.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"

extern char** environ;

namespace hforge::process {

namespace fs = std::filesystem;

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

bool is_executable(const fs::path& path) {
  struct stat st {};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
         ::access(path.c_str(), X_OK) == 0;
}

std::vector<char*> make_argv(const std::vector<std::string>& argv) {
  std::vector<char*> out;
  out.reserve(argv.size() + 1);
  for (const auto& arg : argv) out.push_back(const_cast<char*>(arg.c_str()));
  out.push_back(nullptr);
  return out;
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

class FileActions {
 public:
  FileActions() { posix_spawn_file_actions_init(&actions_); }
  ~FileActions() { posix_spawn_file_actions_destroy(&actions_); }
  FileActions(const FileActions&) = delete;
  FileActions& operator=(const FileActions&) = delete;

  void dup2(int fd, int target) { posix_spawn_file_actions_adddup2(&actions_, fd, target); }
  void close(int fd) { posix_spawn_file_actions_addclose(&actions_, fd); }
  const posix_spawn_file_actions_t* get() const { return &actions_; }

 private:
  posix_spawn_file_actions_t actions_;
};

int spawn_or_throw(const std::vector<std::string>& argv, const FileActions& actions) {
  if (argv.empty()) throw InvalidArgument("empty command line");
  auto cargv = make_argv(argv);
  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, cargv[0], actions.get(), nullptr, cargv.data(), environ);
  if (rc != 0) {
    throw EnvironmentError("cannot start '" + argv[0] + "': " + std::strerror(rc));
  }
  return pid;
}

}  // namespace

std::optional<fs::path> find_executable(std::string_view program) {
  if (program.empty()) return std::nullopt;
  if (program.find('/') != std::string_view::npos) {
    fs::path path(program);
    if (is_executable(path)) return path;
    return std::nullopt;
  }
  const char* env = std::getenv("PATH");
  const std::string path_var = env ? env : "/usr/local/bin:/usr/bin:/bin";
  for (auto dir : text::split(path_var, ':')) {
    if (dir.empty()) dir = ".";
    fs::path candidate = fs::path(dir) / program;
    if (is_executable(candidate)) return candidate;
  }
  return std::nullopt;
}

Result run(const std::vector<std::string>& argv) {
  ignore_sigpipe();
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw EnvironmentError(std::string("pipe: ") + std::strerror(errno));
  }
  FileActions actions;
  actions.dup2(fds[1], STDOUT_FILENO);
  actions.dup2(fds[1], STDERR_FILENO);
  const auto start = std::chrono::steady_clock::now();
  int pid = -1;
  try {
    pid = spawn_or_throw(argv, actions);
  } catch (...) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw;
  }
  ::close(fds[1]);

  Result result;
  char buf[4096];
  while (true) {
    const ssize_t n = ::read(fds[0], buf, sizeof(buf));
    if (n > 0) {
      result.output.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    break;
  }
  ::close(fds[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_code = decode_status(status);
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

Child Child::spawn(const std::vector<std::string>& argv) {
  ignore_sigpipe();
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    throw TransportError(std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError(std::string("pipe: ") + std::strerror(errno));
  }
  FileActions actions;
  actions.dup2(to_child[0], STDIN_FILENO);
  actions.dup2(from_child[1], STDOUT_FILENO);
  int pid = -1;
  try {
    pid = spawn_or_throw(argv, actions);
  } catch (const EnvironmentError& e) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw TransportError(e.what());
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return Child(pid, to_child[1], from_child[0]);
}

Child::Child(Child&& other) noexcept
    : pid_(other.pid_), stdin_fd_(other.stdin_fd_), stdout_fd_(other.stdout_fd_) {
  other.pid_ = other.stdin_fd_ = other.stdout_fd_ = -1;
}

Child& Child::operator=(Child&& other) noexcept {
  if (this != &other) {
    reset();
    pid_ = other.pid_;
    stdin_fd_ = other.stdin_fd_;
    stdout_fd_ = other.stdout_fd_;
    other.pid_ = other.stdin_fd_ = other.stdout_fd_ = -1;
  }
  return *this;
}

Child::~Child() { reset(); }

void Child::reset() noexcept {
  if (stdin_fd_ >= 0) ::close(stdin_fd_);
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
  stdin_fd_ = stdout_fd_ = -1;
  if (pid_ <= 0) return;
  int status = 0;
  for (int i = 0; i < 200; ++i) {
    if (::waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, &status, 0);
  pid_ = -1;
}

std::optional<std::string> LineReader::read_line() {
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    if (eof_) {
      if (buffer_.empty()) return std::nullopt;
      std::string line = std::move(buffer_);
      buffer_.clear();
      return line;
    }
    char buf[4096];
    const ssize_t n = ::read(fd_, buf, sizeof(buf));
    if (n > 0) {
      buffer_.append(buf, static_cast<std::size_t>(n));
    } else if (n == 0) {
      eof_ = true;
    } else if (errno != EINTR) {
      throw TransportError(std::string("read: ") + std::strerror(errno));
    }
  }
}

void write_all(int fd, std::string_view data) {
  ignore_sigpipe();
  while (!data.empty()) {
    ssize_t n;
    struct stat st {};
    if (::fstat(fd, &st) == 0 && S_ISSOCK(st.st_mode)) {
      n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    } else {
      n = ::write(fd, data.data(), data.size());
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("write: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace hforge::process
