#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qeslab::cli {

enum class Format { Human, Csv, Json };

Format parse_format(const std::string& name); ///< throws std::invalid_argument

/// A table cell; `display` (when set) replaces the value in human output only.
struct Cell {
  using Value = std::variant<std::monostate, bool, long long, double, std::string>;
  Value value;
  std::string display;

  Cell() = default;
  Cell(double v) : value(v) {}
  Cell(int v) : value(static_cast<long long>(v)) {}
  Cell(long long v) : value(v) {}
  Cell(bool v) : value(v) {}
  Cell(std::string v) : value(std::move(v)) {}
  Cell(const char* v) : value(std::string(v)) {}

  static Cell shown(Value v, std::string text) {
    Cell c;
    c.value = std::move(v);
    c.display = std::move(text);
    return c;
  }
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string command;
  nlohmann::ordered_json meta;
  std::vector<Table> tables;       ///< machine-readable content (csv, json)
  std::vector<Table> human_tables; ///< optional layout for human output; falls back to tables
  std::vector<std::string> notes;  ///< human output only
};

std::string render(const Report& r, Format f);
nlohmann::ordered_json to_json(const Report& r);

} // namespace qeslab::cli
