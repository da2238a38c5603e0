#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "c3o/types.hpp"

namespace c3o {

// Wire format: one record per line, UTF-8, keys exactly as in the struct.
nlohmann::json record_to_json(const RuntimeRecord& record);
RuntimeRecord record_from_json(const nlohmann::json& j);  // throws ParseError

std::string record_to_line(const RuntimeRecord& record);
RuntimeRecord record_from_line(const std::string& line);

std::vector<RuntimeRecord> read_records(const std::filesystem::path& path);  // throws IoError/ParseError
void write_records(const std::filesystem::path& path, const std::vector<RuntimeRecord>& records);
std::string records_to_jsonl(const std::vector<RuntimeRecord>& records);

// Machine-type catalog: JSON array of {name, vcpus, memory_gb, price_per_hour}.
nlohmann::json catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const nlohmann::json& j);
Catalog read_catalog(const std::filesystem::path& path);
void write_catalog(const std::filesystem::path& path, const Catalog& catalog);

// Shared-file naming convention: <algorithm_name>__<implementation_id>.jsonl
std::filesystem::path dataset_filename(const JobSignature& signature);

}  // namespace c3o
