#include "scientist/llm/ledger.hpp"

namespace scientist::llm {

double PriceTable::cost(const std::string& model_id, std::uint64_t prompt_tokens,
                        std::uint64_t completion_tokens) const {
  auto it = prices_.find(model_id);
  if (it == prices_.end()) return 0.0;
  return (static_cast<double>(prompt_tokens) * it->second.input_per_million +
          static_cast<double>(completion_tokens) * it->second.output_per_million) /
         1e6;
}

}  // namespace scientist::llm
