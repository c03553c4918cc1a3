#include "ftattn/metrics.hpp"

namespace ftattn {

std::vector<nlohmann::json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open: " + path);
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded()) throw InputError("malformed record in " + path);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace ftattn
