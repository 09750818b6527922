#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rwlab {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Rows written both as CSV and as a JSON array of objects with the same keys.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string to_csv(const Table& table);
nlohmann::json to_json(const Table& table);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace rwlab
