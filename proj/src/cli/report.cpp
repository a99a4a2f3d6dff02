#include "qeslab/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qeslab::cli {

Format parse_format(const std::string& name) {
  if (name == "human") return Format::Human;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + name + "' (expected human, csv or json)");
}

namespace {

std::string full_precision(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string machine_text(const Cell::Value& v) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(double d) const { return full_precision(d); }
    std::string operator()(const std::string& s) const { return s; }
  } visit;
  return std::visit(visit, v);
}

std::string human_text(const Cell& c) {
  if (!c.display.empty()) return c.display;
  if (const double* d = std::get_if<double>(&c.value)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", *d);
    return buf;
  }
  return machine_text(c.value);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::ordered_json json_value(const Cell::Value& v) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(long long i) const { return i; }
    nlohmann::ordered_json operator()(double d) const {
      if (std::isfinite(d)) return d;
      return nullptr;
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  } visit;
  return std::visit(visit, v);
}

std::string render_human(const Report& r) {
  std::ostringstream out;
  const auto& tables = r.human_tables.empty() ? r.tables : r.human_tables;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const Table& tab = tables[t];
    if (t > 0) out << '\n';
    if (!tab.name.empty()) out << tab.name << '\n';
    std::vector<std::size_t> width(tab.columns.size(), 0);
    std::vector<std::vector<std::string>> text;
    for (std::size_t c = 0; c < tab.columns.size(); ++c) width[c] = tab.columns[c].size();
    for (const auto& row : tab.rows) {
      std::vector<std::string> line;
      for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
        line.push_back(human_text(row[c]));
        width[c] = std::max(width[c], line.back().size());
      }
      text.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& cells) {
      std::string line;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c > 0) line += "  ";
        line += cells[c];
        if (c + 1 < cells.size()) line.append(width[c] - cells[c].size(), ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    };
    emit(tab.columns);
    for (const auto& line : text) emit(line);
    if (tab.rows.empty()) out << "(no rows)\n";
  }
  for (const auto& note : r.notes) out << note << '\n';
  return out.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream out;
  const bool several = r.tables.size() > 1;
  for (std::size_t t = 0; t < r.tables.size(); ++t) {
    const Table& tab = r.tables[t];
    if (several) {
      if (t > 0) out << '\n';
      out << "# " << tab.name << '\n';
    }
    for (std::size_t c = 0; c < tab.columns.size(); ++c) out << (c ? "," : "") << csv_escape(tab.columns[c]);
    out << '\n';
    for (const auto& row : tab.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(machine_text(row[c].value));
      out << '\n';
    }
  }
  return out.str();
}

} // namespace

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json doc;
  doc["meta"] = r.meta;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (const Table& tab : r.tables) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : tab.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < row.size() && c < tab.columns.size(); ++c) obj[tab.columns[c]] = json_value(row[c].value);
      rows.push_back(std::move(obj));
    }
    data[tab.name] = std::move(rows);
  }
  doc["data"] = std::move(data);
  return doc;
}

std::string render(const Report& r, Format f) {
  switch (f) {
  case Format::Human: return render_human(r);
  case Format::Csv: return render_csv(r);
  case Format::Json: return to_json(r).dump(2) + "\n";
  }
  return {};
}

} // namespace qeslab::cli
