#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// POSIX process helpers used by the render runner and the sidecar client.
namespace hforge::process {

/// Resolves `program` against PATH (or checks it directly when it contains
/// a slash). Returns nullopt when no executable file is found.
std::optional<std::filesystem::path> find_executable(std::string_view program);

struct Result {
  int exit_code = -1;  ///< 128 + signal number when killed by a signal
  std::string output;  ///< merged stdout and stderr
  std::chrono::milliseconds elapsed{0};
};

/// Runs argv to completion, capturing output. Throws EnvironmentError when
/// the program cannot be started at all.
Result run(const std::vector<std::string>& argv);

/// A child process whose stdin and stdout are pipes owned by this object.
/// Destruction closes stdin, waits briefly for exit and then kills the child.
class Child {
 public:
  static Child spawn(const std::vector<std::string>& argv);

  Child(Child&& other) noexcept;
  Child& operator=(Child&& other) noexcept;
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;
  ~Child();

  int stdin_fd() const noexcept { return stdin_fd_; }
  int stdout_fd() const noexcept { return stdout_fd_; }

 private:
  Child(int pid, int in, int out) : pid_(pid), stdin_fd_(in), stdout_fd_(out) {}
  void reset() noexcept;

  int pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
};

/// Buffered newline-delimited reads from a file descriptor.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  /// Next line without its '\n'; nullopt at end of stream. Throws
  /// TransportError on read errors.
  std::optional<std::string> read_line();

 private:
  int fd_;
  std::string buffer_;
  bool eof_ = false;
};

/// Writes all of `data`, throwing TransportError if the peer is gone.
void write_all(int fd, std::string_view data);

}  // namespace hforge::process
