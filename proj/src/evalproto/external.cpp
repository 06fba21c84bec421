#include "turbbench/evalproto/external.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "turbbench/imgcore/image_io.hpp"

namespace turbbench {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool is_executable(const std::filesystem::path& p) {
  struct stat st {};
  return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
}

}  // namespace

std::string expand_command(const std::string& cmd_template, const std::filesystem::path& in,
                           const std::filesystem::path& out) {
  if (cmd_template.find("{in}") == std::string::npos ||
      cmd_template.find("{out}") == std::string::npos) {
    throw InvalidArgument("external command must contain {in} and {out}: " + cmd_template);
  }
  std::string cmd = cmd_template;
  replace_all(cmd, "{in}", shell_quote(in.string()));
  replace_all(cmd, "{out}", shell_quote(out.string()));
  return cmd;
}

bool command_available(const std::string& cmd_template) {
  std::istringstream words(cmd_template);
  std::string first;
  words >> first;
  if (first.empty()) return false;
  if (first.find('/') != std::string::npos) return is_executable(first);
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path != nullptr ? path : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (!dir.empty() && is_executable(std::filesystem::path(dir) / first)) return true;
  }
  return false;
}

Image run_external_restorer(const std::filesystem::path& seq_dir, const std::string& cmd_template,
                            const ExternalRun& run, double timeout_s) {
  if (!(timeout_s > 0.0)) throw InvalidArgument("external restorer: timeout must be > 0");
  const std::string cmd = expand_command(cmd_template, seq_dir, run.output);
  std::error_code ec;
  std::filesystem::remove(run.output, ec);
  if (run.output.has_parent_path()) std::filesystem::create_directories(run.output.parent_path());
  if (run.log.has_parent_path()) std::filesystem::create_directories(run.log.parent_path());

  const int log_fd = ::open(run.log.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (log_fd < 0) throw IoError("cannot open log " + run.log.string());

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(log_fd);
    throw ExternalFailure("fork failed");
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(log_fd, STDOUT_FILENO);
    ::dup2(log_fd, STDERR_FILENO);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(log_fd);

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  auto pause = std::chrono::milliseconds(1);
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) throw ExternalFailure("waitpid failed for: " + cmd);
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw ExternalTimeout("timed out after " + std::to_string(timeout_s) + " s: " + cmd);
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::milliseconds(50));
  }
  // Stray children left in the group are not waited for.
  ::kill(-pid, SIGKILL);

  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const std::string why = WIFEXITED(status) ? "exit status " + std::to_string(WEXITSTATUS(status))
                                              : "terminated by signal";
    throw ExternalFailure(why + ": " + cmd + " (log: " + run.log.string() + ")");
  }
  if (!std::filesystem::exists(run.output)) {
    throw ExternalMissingOutput("no output at " + run.output.string() + ": " + cmd);
  }
  try {
    return load_image(run.output);
  } catch (const ImageIoError& e) {
    throw ExternalMissingOutput("unreadable output " + run.output.string() + ": " + e.what());
  }
}

Image run_external_restorer(const std::filesystem::path& seq_dir, const std::string& cmd_template,
                            const std::filesystem::path& workdir, double timeout_s) {
  return run_external_restorer(seq_dir, cmd_template,
                               ExternalRun{workdir / "restored.png", workdir / "restorer.log"},
                               timeout_s);
}

}  // namespace turbbench
