#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace scientist::lab {

// Environment variables a sandboxed run inherits from the parent.
const std::vector<std::string>& default_env_allowlist();

struct ProcessSpec {
  std::vector<std::string> argv;
  std::filesystem::path cwd;
  std::chrono::milliseconds timeout{std::chrono::hours(2)};
  // SIGTERM to SIGKILL escalation window after a timeout.
  std::chrono::milliseconds grace{2000};
  // Empty paths capture into temporary files that are removed afterwards.
  std::filesystem::path stdout_path;
  std::filesystem::path stderr_path;
  std::vector<std::string> env_allowlist = default_env_allowlist();
  std::map<std::string, std::string> extra_env;
  // Per-file write limit (RLIMIT_FSIZE) in bytes; 0 leaves it unlimited.
  std::uintmax_t file_size_limit = 0;
  // Best effort: a fresh network namespace when the kernel allows it.
  bool isolate_network = false;
  std::size_t tail_bytes = 8192;
};

struct ProcessResult {
  int exit_code = -1;  // 127 when the program could not be started
  int term_signal = 0;
  bool timed_out = false;
  double duration_s = 0.0;
  std::string stdout_tail;
  std::string stderr_tail;

  bool ok() const { return !timed_out && term_signal == 0 && exit_code == 0; }
};

// Runs argv in its own process group. On timeout the whole group gets SIGTERM,
// then SIGKILL after the grace period; after any exit the group is killed and
// reaped so no descendant outlives the call.
ProcessResult run_process(const ProcessSpec& spec);

// Caps the number of concurrently running sandboxed processes.
class ProcessSlots {
public:
  static ProcessSlots& global();
  void set_capacity(int capacity);
  void acquire();
  void release();

private:
  std::mutex mu_;
  std::condition_variable cv_;
  int capacity_ = 4;
  int in_use_ = 0;
};

// Splits a command template on whitespace and substitutes {out_dir}.
std::vector<std::string> expand_command(const std::string& command_template,
                                        const std::string& out_dir = {});

}  // namespace scientist::lab
