#include "c3o/jsonl.hpp"

#include <fstream>
#include <sstream>

namespace c3o {

namespace {

std::map<std::string, double> number_map_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, path + " must be an object");
  std::map<std::string, double> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) {
      throw Error(ErrorKind::ParseError, path + "." + key + " must be a number");
    }
    out[key] = value.get<double>();
  }
  return out;
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::ParseError, std::string("missing key: ") + key);
  return *it;
}

}  // namespace

nlohmann::json record_to_json(const RuntimeRecord& record) {
  return nlohmann::json{
      {"signature",
       {{"algorithm_name", record.signature.algorithm_name},
        {"implementation_id", record.signature.implementation_id}}},
      {"config",
       {{"machine_type", record.config.machine_type}, {"node_count", record.config.node_count}}},
      {"data_characteristics", record.data_characteristics},
      {"parameters", record.parameters},
      {"context_id", record.context_id},
      {"runtime_ms", record.runtime_ms},
      {"submitted_at", record.submitted_at},
  };
}

RuntimeRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "record must be a JSON object");
  RuntimeRecord record;
  const auto& sig = require(j, "signature");
  record.signature.algorithm_name = require(sig, "algorithm_name").get<std::string>();
  record.signature.implementation_id = require(sig, "implementation_id").get<std::string>();
  const auto& config = require(j, "config");
  record.config.machine_type = require(config, "machine_type").get<std::string>();
  record.config.node_count = require(config, "node_count").get<int>();
  record.data_characteristics =
      number_map_from_json(require(j, "data_characteristics"), "data_characteristics");
  record.parameters = number_map_from_json(require(j, "parameters"), "parameters");
  record.context_id = require(j, "context_id").get<std::string>();
  if (!require(j, "runtime_ms").is_number()) {
    throw Error(ErrorKind::ParseError, "runtime_ms must be a number");
  }
  record.runtime_ms = j.at("runtime_ms").get<double>();
  if (!require(j, "submitted_at").is_number_integer()) {
    throw Error(ErrorKind::ParseError, "submitted_at must be an integer");
  }
  record.submitted_at = j.at("submitted_at").get<std::int64_t>();
  return record;
}

std::string record_to_line(const RuntimeRecord& record) { return record_to_json(record).dump(); }

RuntimeRecord record_from_line(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::ParseError, "invalid JSON: " + line);
  return record_from_json(j);
}

std::vector<RuntimeRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<RuntimeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_line(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::string records_to_jsonl(const std::vector<RuntimeRecord>& records) {
  std::ostringstream out;
  for (const auto& record : records) out << record_to_line(record) << '\n';
  return out.str();
}

void write_records(const std::filesystem::path& path, const std::vector<RuntimeRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << records_to_jsonl(records);
}

nlohmann::json catalog_to_json(const Catalog& catalog) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& machine : catalog) {
    out.push_back({{"name", machine.name},
                   {"vcpus", machine.vcpus},
                   {"memory_gb", machine.memory_gb},
                   {"price_per_hour", machine.price_per_hour}});
  }
  return out;
}

Catalog catalog_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "catalog must be a JSON array");
  Catalog catalog;
  for (const auto& entry : j) {
    MachineType machine;
    machine.name = require(entry, "name").get<std::string>();
    machine.vcpus = require(entry, "vcpus").get<int>();
    machine.memory_gb = require(entry, "memory_gb").get<double>();
    machine.price_per_hour = require(entry, "price_per_hour").get<double>();
    if (machine.vcpus <= 0 || machine.memory_gb <= 0 || machine.price_per_hour <= 0) {
      throw Error(ErrorKind::ParseError, "catalog entry " + machine.name +
                                             " must have positive vcpus, memory and price");
    }
    if (catalog_index(catalog, machine.name) >= 0) {
      throw Error(ErrorKind::ParseError, "duplicate machine type: " + machine.name);
    }
    catalog.push_back(std::move(machine));
  }
  return catalog;
}

Catalog read_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::ParseError, "invalid JSON in " + path.string());
  return catalog_from_json(j);
}

void write_catalog(const std::filesystem::path& path, const Catalog& catalog) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << catalog_to_json(catalog).dump(2) << '\n';
}

std::filesystem::path dataset_filename(const JobSignature& signature) {
  return signature.algorithm_name + "__" + signature.implementation_id + ".jsonl";
}

}  // namespace c3o
