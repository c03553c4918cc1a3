#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftattn/types.hpp"

namespace ftattn {

/// Line-delimited JSON records. Keys serialize in sorted order, so a
/// stream is byte-reproducible from the same record sequence.
class JsonlWriter {
 public:
  JsonlWriter() = default;
  explicit JsonlWriter(const std::string& path) { open(path); }

  void open(const std::string& path) {
    out_.open(path, std::ios::trunc);
    if (!out_) throw InputError("cannot open for writing: " + path);
  }

  bool is_open() const { return out_.is_open(); }

  void write(const nlohmann::json& record) {
    out_ << record.dump() << '\n';
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

std::vector<nlohmann::json> read_jsonl(const std::string& path);

}  // namespace ftattn
