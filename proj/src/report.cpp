#include "pqlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pqlab {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string report_to_csv(const std::vector<ReportSection>& sections) {
  if (sections.empty()) throw std::invalid_argument("report has no sections");
  std::ostringstream out;
  out << "section,check_id,location,lhs,rhs,margin,passed\n";
  for (const ReportSection& s : sections) {
    for (const CheckRecord& r : s.records) {
      out << csv_escape(s.name) << ',' << csv_escape(r.check_id) << ','
          << csv_escape(r.location) << ',' << format_real(r.lhs) << ','
          << format_real(r.rhs) << ',' << format_real(r.margin) << ','
          << (r.passed ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

std::string report_to_json(const std::vector<ReportSection>& sections) {
  if (sections.empty()) throw std::invalid_argument("report has no sections");
  nlohmann::json arr = nlohmann::json::array();
  for (const ReportSection& s : sections) {
    nlohmann::json records = nlohmann::json::array();
    for (const CheckRecord& r : s.records) {
      records.push_back({{"check_id", r.check_id},
                         {"location", r.location},
                         {"lhs", r.lhs},
                         {"rhs", r.rhs},
                         {"margin", r.margin},
                         {"passed", r.passed}});
    }
    arr.push_back({{"name", s.name},
                   {"note", s.note},
                   {"worst_margin", s.worst_margin},
                   {"all_passed", s.all_passed},
                   {"records", std::move(records)}});
  }
  return arr.dump(2) + "\n";
}

std::vector<ReportSection> report_from_json(const std::string& text) {
  const nlohmann::json arr = nlohmann::json::parse(text);
  std::vector<ReportSection> sections;
  sections.reserve(arr.size());
  for (const nlohmann::json& js : arr) {
    ReportSection s;
    s.name = js.at("name").get<std::string>();
    s.note = js.at("note").get<std::string>();
    s.worst_margin = js.at("worst_margin").get<double>();
    s.all_passed = js.at("all_passed").get<bool>();
    for (const nlohmann::json& jr : js.at("records")) {
      CheckRecord r;
      r.check_id = jr.at("check_id").get<std::string>();
      r.location = jr.at("location").get<std::string>();
      r.lhs = jr.at("lhs").get<double>();
      r.rhs = jr.at("rhs").get<double>();
      r.margin = jr.at("margin").get<double>();
      r.passed = jr.at("passed").get<bool>();
      s.records.push_back(std::move(r));
    }
    sections.push_back(std::move(s));
  }
  return sections;
}

void write_report(const std::vector<ReportSection>& sections,
                  const std::string& format, const std::string& path) {
  std::string payload;
  if (format == "csv") {
    payload = report_to_csv(sections);
  } else if (format == "json") {
    payload = report_to_json(sections);
  } else {
    throw std::invalid_argument("report format must be csv or json");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report path: " + path);
  out << payload;
  out.flush();
  if (!out.good()) throw std::runtime_error("failed writing report: " + path);
}

}  // namespace pqlab
