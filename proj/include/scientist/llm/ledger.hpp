#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace scientist::llm {

struct ModelPrice {
  double input_per_million = 0.0;
  double output_per_million = 0.0;
};

class PriceTable {
public:
  void set(const std::string& model_id, ModelPrice price) { prices_[model_id] = price; }
  // Unknown models cost nothing rather than failing the call.
  double cost(const std::string& model_id, std::uint64_t prompt_tokens,
              std::uint64_t completion_tokens) const;
  const std::map<std::string, ModelPrice>& entries() const { return prices_; }

private:
  std::map<std::string, ModelPrice> prices_;
};

struct Usage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  double cost = 0.0;
  std::uint64_t calls = 0;

  Usage& operator+=(const Usage& other) {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    cost += other.cost;
    calls += other.calls;
    return *this;
  }
};

// Thread-safe running total of token usage and cost.
class UsageLedger {
public:
  void add(const Usage& delta) {
    std::lock_guard lock(mu_);
    total_ += delta;
  }
  Usage snapshot() const {
    std::lock_guard lock(mu_);
    return total_;
  }

private:
  mutable std::mutex mu_;
  Usage total_;
};

}  // namespace scientist::llm
