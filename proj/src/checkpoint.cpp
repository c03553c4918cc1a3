#include "ftattn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

namespace ftattn {

namespace {

constexpr char kMagic[8] = {'F', 'T', 'A', 'T', 'T', 'N', '\x01', '\n'};

nlohmann::json read_manifest(std::ifstream& in, const std::string& path) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw InputError("not a checkpoint file: " + path);
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in) throw InputError("truncated checkpoint header: " + path);
  std::string text(len, '\0');
  in.read(text.data(), len);
  if (!in) throw InputError("truncated checkpoint manifest: " + path);
  nlohmann::json manifest = nlohmann::json::parse(text, nullptr, false);
  if (manifest.is_discarded() || manifest.value("version", 0) != 1)
    throw InputError("unsupported checkpoint manifest: " + path);
  return manifest;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<ParamRef>& refs,
                     const nlohmann::json& meta) {
  nlohmann::json arrays = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& r : refs) {
    arrays.push_back({{"name", r.name}, {"rows", r.rows}, {"cols", r.cols}, {"offset", offset}});
    offset += static_cast<std::uint64_t>(r.size());
  }
  const nlohmann::json manifest = {{"version", 1}, {"meta", meta}, {"arrays", arrays}};
  const std::string text = manifest.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, 8);
  const std::uint32_t len = static_cast<std::uint32_t>(text.size());
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& r : refs)
    out.write(reinterpret_cast<const char*>(r.data),
              static_cast<std::streamsize>(r.size() * sizeof(Real)));
  if (!out) throw InputError("failed writing checkpoint: " + path);
}

nlohmann::json load_checkpoint(const std::string& path, const std::vector<ParamRef>& refs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  const nlohmann::json manifest = read_manifest(in, path);
  const std::streampos blob_start = in.tellg();

  std::map<std::string, nlohmann::json> by_name;
  for (const auto& entry : manifest.at("arrays")) by_name[entry.at("name")] = entry;
  if (by_name.size() != refs.size())
    throw InputError("checkpoint holds " + std::to_string(by_name.size()) + " arrays, expected " +
                     std::to_string(refs.size()));

  for (const auto& r : refs) {
    const auto it = by_name.find(r.name);
    if (it == by_name.end()) throw InputError("checkpoint missing array " + r.name);
    const auto& entry = it->second;
    if (entry.at("rows").get<Index>() != r.rows || entry.at("cols").get<Index>() != r.cols)
      throw InputError("shape mismatch for " + r.name + ": checkpoint " +
                       std::to_string(entry.at("rows").get<Index>()) + "x" +
                       std::to_string(entry.at("cols").get<Index>()) + ", expected " +
                       std::to_string(r.rows) + "x" + std::to_string(r.cols));
    const auto offset = entry.at("offset").get<std::uint64_t>();
    in.seekg(blob_start + static_cast<std::streamoff>(offset * sizeof(Real)));
    in.read(reinterpret_cast<char*>(r.data),
            static_cast<std::streamsize>(r.size() * sizeof(Real)));
    if (!in) throw InputError("truncated checkpoint data for " + r.name);
  }
  return manifest.value("meta", nlohmann::json::object());
}

nlohmann::json read_checkpoint_meta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  return read_manifest(in, path).value("meta", nlohmann::json::object());
}

}  // namespace ftattn
