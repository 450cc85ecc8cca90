#include "scientist/lab/process.hpp"

#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <sys/prctl.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>
#include <thread>

#include "scientist/util/error.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

extern char** environ;

namespace scientist::lab {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::vector<std::string>& default_env_allowlist() {
  static const std::vector<std::string> kAllow = {"PATH", "HOME", "LANG", "LC_ALL", "TMPDIR",
                                                   "USER", "TERM", "PYTHONPATH", "VIRTUAL_ENV"};
  return kAllow;
}

namespace {

void child_write(const char* data, std::size_t n) {
  ssize_t rc = ::write(2, data, n);
  (void)rc;
}

// Orphaned grandchildren are re-parented to this process so they can be reaped.
void become_subreaper() {
  static const bool done = [] {
    ::prctl(PR_SET_CHILD_SUBREAPER, 1);
    return true;
  }();
  (void)done;
}

std::string resolve_executable(const std::string& name, const std::string& path_var) {
  if (name.find('/') != std::string::npos) return name;
  std::istringstream dirs(path_var);
  for (std::string dir; std::getline(dirs, dir, ':');) {
    if (dir.empty()) dir = ".";
    auto candidate = fs::path(dir) / name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate.string();
  }
  return name;
}

int open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  return fd;
}

fs::path temp_capture(const char* tag) {
  std::string pattern = (fs::temp_directory_path() / (std::string("scientist-") + tag + "-XXXXXX")).string();
  int fd = ::mkstemp(pattern.data());
  if (fd < 0) throw IoError("mkstemp failed");
  ::close(fd);
  return pattern;
}

std::string read_tail(const fs::path& path, std::size_t max_bytes) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  return text::tail(fsx::read_file(path), max_bytes);
}

void kill_group(pid_t pgid, int sig) { ::kill(-pgid, sig); }

void reap_group(pid_t pgid) {
  while (::waitpid(-pgid, nullptr, WNOHANG) > 0) {
  }
}

bool group_alive(pid_t pgid) { return ::kill(-pgid, 0) == 0; }

}  // namespace

std::vector<std::string> expand_command(const std::string& command_template,
                                        const std::string& out_dir) {
  std::istringstream in(command_template);
  std::vector<std::string> argv;
  for (std::string tok; in >> tok;) argv.push_back(text::replace_all(tok, "{out_dir}", out_dir));
  return argv;
}

ProcessResult run_process(const ProcessSpec& spec) {
  if (spec.argv.empty()) throw Error("empty command");
  become_subreaper();

  // Everything the child touches is prepared before fork().
  std::vector<std::string> env_strings;
  std::string path_var = "/usr/local/bin:/usr/bin:/bin";
  for (const auto& name : spec.env_allowlist) {
    if (spec.extra_env.count(name)) continue;
    if (const char* v = std::getenv(name.c_str())) {
      env_strings.push_back(name + "=" + v);
      if (name == "PATH") path_var = v;
    }
  }
  for (const auto& [k, v] : spec.extra_env) {
    env_strings.push_back(k + "=" + v);
    if (k == "PATH") path_var = v;
  }
  std::vector<char*> envp;
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);

  auto exe = resolve_executable(spec.argv[0], path_var);
  std::vector<std::string> args = spec.argv;
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  auto out_path = spec.stdout_path.empty() ? temp_capture("out") : spec.stdout_path;
  auto err_path = spec.stderr_path.empty() ? temp_capture("err") : spec.stderr_path;
  int out_fd = open_output(out_path);
  int err_fd = open_output(err_path);
  auto cwd = spec.cwd.empty() ? fs::current_path() : spec.cwd;
  const std::string cwd_str = cwd.string();
  rlimit fsize{static_cast<rlim_t>(spec.file_size_limit), static_cast<rlim_t>(spec.file_size_limit)};

  ProcessSlots::global().acquire();
  auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    ProcessSlots::global().release();
    ::close(out_fd);
    ::close(err_fd);
    throw Error(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::signal(SIGPIPE, SIG_DFL);
    if (::chdir(cwd_str.c_str()) != 0) _exit(127);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, 0);
    ::dup2(out_fd, 1);
    ::dup2(err_fd, 2);
    if (spec.file_size_limit > 0) ::setrlimit(RLIMIT_FSIZE, &fsize);
    if (spec.isolate_network) {
      // Needs unprivileged user namespaces; carries on without isolation otherwise.
      if (::unshare(CLONE_NEWUSER | CLONE_NEWNET) != 0) {
        static const char kWarn[] = "[sandbox] network isolation unavailable\n";
        child_write(kWarn, sizeof kWarn - 1);
      }
    }
    ::execve(exe.c_str(), argv.data(), envp.data());
    const char* msg = "exec failed: ";
    child_write(msg, std::strlen(msg));
    child_write(exe.c_str(), exe.size());
    child_write("\n", 1);
    _exit(127);
  }
  ::setpgid(pid, pid);
  ::close(out_fd);
  ::close(err_fd);

  ProcessResult result;
  int status = 0;
  auto deadline = start + spec.timeout;
  bool exited = false;
  while (!exited) {
    pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      exited = true;
      break;
    }
    if (r < 0 && errno != EINTR) break;
    if (Clock::now() >= deadline) {
      result.timed_out = true;
      kill_group(pid, SIGTERM);
      auto grace_end = Clock::now() + spec.grace;
      while (Clock::now() < grace_end) {
        if (::waitpid(pid, &status, WNOHANG) == pid) {
          exited = true;
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      if (!exited) {
        kill_group(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        exited = true;
      }
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  result.duration_s = std::chrono::duration<double>(Clock::now() - start).count();

  // Descendants left in the group die with it.
  for (int i = 0; i < 200 && group_alive(pid); ++i) {
    kill_group(pid, SIGKILL);
    reap_group(pid);
    if (group_alive(pid)) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  reap_group(pid);
  ProcessSlots::global().release();

  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
    result.exit_code = 128 + result.term_signal;
  }
  result.stdout_tail = read_tail(out_path, spec.tail_bytes);
  result.stderr_tail = read_tail(err_path, spec.tail_bytes);
  std::error_code ec;
  if (spec.stdout_path.empty()) fs::remove(out_path, ec);
  if (spec.stderr_path.empty()) fs::remove(err_path, ec);
  return result;
}

ProcessSlots& ProcessSlots::global() {
  static ProcessSlots slots;
  return slots;
}

void ProcessSlots::set_capacity(int capacity) {
  std::lock_guard lock(mu_);
  capacity_ = std::max(1, capacity);
  cv_.notify_all();
}

void ProcessSlots::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_use_ < capacity_; });
  ++in_use_;
}

void ProcessSlots::release() {
  std::lock_guard lock(mu_);
  --in_use_;
  cv_.notify_one();
}

}  // namespace scientist::lab
