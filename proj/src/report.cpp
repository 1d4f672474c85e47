#include "qie/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "qie/error.hpp"

namespace qie {

using ojson = nlohmann::ordered_json;

ReportFormat parse_format(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ParseError(fmt::format("unknown format '{}' (text, json, csv)", name));
}

RunReport make_report(const HomSet& h, const SolverSettings& settings, bool with_census) {
  RunReport r;
  r.link_name = h.link_name;
  r.quandle_spec = h.quandle_spec;
  r.hom_count = counting_invariant(h);
  r.polynomial = enhanced_polynomial(h);
  if (with_census) r.census = partition_census(h);
  r.settings = settings;
  r.warnings = h.warnings;
  return r;
}

namespace {

std::string summary_line(const RunReport& r) {
  return fmt::format("phi_E = {}; |Hom| = {}", r.polynomial.to_text(), r.hom_count);
}

std::string settings_text(const SolverSettings& s) {
  if (s.method == "brute") return "brute";
  return fmt::format("dc (chunk size {}, row cap {})", s.chunk_size, s.row_cap);
}

ojson polynomial_json(const EnhancedPolynomial& p) {
  ojson j = ojson::object();
  for (const auto& [e, c] : p.terms) j[std::to_string(e)] = c;
  return j;
}

ojson census_json(const Census& c) {
  ojson arr = ojson::array();
  for (const auto& [k, entries] : c) {
    ojson parts = ojson::array();
    for (const auto& e : entries) {
      ojson blocks = ojson::array();
      for (const auto& b : e.partition.blocks) {
        ojson arcs = ojson::array();
        for (auto a : b) arcs.push_back(a + 1);
        blocks.push_back(arcs);
      }
      parts.push_back(ojson{{"blocks", blocks}, {"multiplicity", e.multiplicity}});
    }
    arr.push_back(ojson{{"image_size", k}, {"partition_count", entries.size()}, {"partitions", parts}});
  }
  return arr;
}

ojson report_json(const RunReport& r) {
  ojson j;
  j["link"] = r.link_name;
  j["quandle"] = r.quandle_spec;
  j["method"] = r.settings.method;
  j["chunk_size"] = r.settings.chunk_size;
  j["row_cap"] = r.settings.row_cap;
  j["hom"] = r.hom_count;
  j["phi_E"] = polynomial_json(r.polynomial);
  j["phi_E_text"] = r.polynomial.to_text();
  if (r.census) j["census"] = census_json(*r.census);
  if (r.seconds) j["seconds"] = *r.seconds;
  j["warnings"] = r.warnings;
  return j;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string render(const RunReport& r, ReportFormat f) {
  std::string out;
  switch (f) {
    case ReportFormat::Json:
      return report_json(r).dump(2) + "\n";
    case ReportFormat::Csv:
      if (r.census) {
        out = "image_size,partition,multiplicity\n";
        for (const auto& [k, entries] : *r.census)
          for (const auto& e : entries) out += fmt::format("{},{},{}\n", k, csv_quote(e.partition.to_string()), e.multiplicity);
      } else {
        out = "image_size,coefficient\n";
        for (const auto& [e, c] : r.polynomial.terms) out += fmt::format("{},{}\n", e, c);
      }
      return out;
    case ReportFormat::Text:
      out += fmt::format("link: {}\n", r.link_name);
      out += fmt::format("quandle: {}\n", r.quandle_spec);
      out += fmt::format("method: {}\n", settings_text(r.settings));
      out += summary_line(r) + "\n";
      if (r.census) {
        for (const auto& [k, entries] : *r.census) {
          out += fmt::format("|Im f| = {}: {} partition{}\n", k, entries.size(), entries.size() == 1 ? "" : "s");
          for (const auto& e : entries) out += fmt::format("  {} x{}\n", e.partition.to_string(), e.multiplicity);
        }
      }
      if (r.seconds) out += fmt::format("time: {:.3f} s\n", *r.seconds);
      for (const auto& w : r.warnings) out += fmt::format("warning: {}\n", w);
      return out;
  }
  return out;
}

RunReport parse_json_report(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::exception& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    RunReport r;
    r.link_name = j.at("link").get<std::string>();
    r.quandle_spec = j.at("quandle").get<std::string>();
    r.settings.method = j.at("method").get<std::string>();
    r.settings.chunk_size = j.at("chunk_size").get<int>();
    r.settings.row_cap = j.at("row_cap").get<std::size_t>();
    r.hom_count = j.at("hom").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("phi_E").items()) r.polynomial.terms[std::stoul(k)] = v.get<std::uint64_t>();
    if (j.contains("seconds")) r.seconds = j["seconds"].get<double>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const std::exception& e) {
    throw ParseError(std::string("report is missing fields: ") + e.what());
  }
}

std::string render(const CompareReport& r, ReportFormat f) {
  switch (f) {
    case ReportFormat::Json: {
      ojson j;
      j["a"] = report_json(r.a);
      j["b"] = report_json(r.b);
      j["distinguished_by_count"] = r.verdict.counting;
      j["distinguished"] = r.verdict.enhanced;
      return j.dump(2) + "\n";
    }
    case ReportFormat::Csv: {
      std::string out = "link,quandle,hom,phi_E\n";
      for (const auto* x : {&r.a, &r.b})
        out += fmt::format("{},{},{},{}\n", csv_quote(x->link_name), csv_quote(x->quandle_spec), x->hom_count,
                           csv_quote(x->polynomial.to_text()));
      out += fmt::format("distinguished_by_count,{}\ndistinguished,{}\n", r.verdict.counting, r.verdict.enhanced);
      return out;
    }
    case ReportFormat::Text: {
      std::string out = fmt::format("quandle: {}\n", r.a.quandle_spec);
      out += fmt::format("A {}: {}\n", r.a.link_name, summary_line(r.a));
      out += fmt::format("B {}: {}\n", r.b.link_name, summary_line(r.b));
      out += fmt::format("distinguished_by_count={}\n", r.verdict.counting);
      out += fmt::format("distinguished={}\n", r.verdict.enhanced);
      for (const auto* x : {&r.a, &r.b})
        for (const auto& w : x->warnings) out += fmt::format("warning ({}): {}\n", x->link_name, w);
      return out;
    }
  }
  return {};
}

}  // namespace qie
