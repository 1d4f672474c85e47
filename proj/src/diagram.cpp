#include "qie/diagram.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "qie/error.hpp"
#include "tables.hpp"

namespace qie {

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const LinkDiagram& d, ValidationMode mode) {
  ValidationReport rep;
  if (d.arc_count == 0) rep.violations.push_back("diagram has no arcs");
  bool in_range = true;
  for (std::size_t k = 0; k < d.crossings.size(); ++k) {
    const auto& c = d.crossings[k];
    for (auto [slot, arc] : {std::pair{"result", c.result}, {"under", c.under_in}, {"over", c.over}}) {
      if (arc >= d.arc_count) {
        rep.violations.push_back(fmt::format("c{}: {} arc {} out of range [1,{}]", k + 1, slot, arc + 1, d.arc_count));
        in_range = false;
      }
    }
  }
  if (mode == ValidationMode::Lenient || !in_range) return rep;

  std::vector<int> under_ends(d.arc_count, 0);
  std::vector<int> over_uses(d.arc_count, 0);
  for (const auto& c : d.crossings) {
    ++under_ends[c.result];
    ++under_ends[c.under_in];
    ++over_uses[c.over];
  }
  for (ArcIndex a = 0; a < d.arc_count; ++a) {
    if (under_ends[a] == 0 && over_uses[a] > 0)
      rep.violations.push_back(fmt::format("arc {} never produced", a + 1));
    else if (under_ends[a] != 0 && under_ends[a] != 2)
      rep.violations.push_back(
          fmt::format("arc {} has {} under-strand endpoints, expected 2", a + 1, under_ends[a]));
  }
  return rep;
}

namespace {

void require_valid(const LinkDiagram& d) {
  auto rep = validate(d, d.tangle ? ValidationMode::Lenient : ValidationMode::Strict);
  if (rep.clean()) return;
  std::string msg = "invalid link diagram";
  if (!d.name.empty()) msg += " '" + d.name + "'";
  for (const auto& v : rep.violations) msg += "\n  " + v;
  throw ValidationError(msg);
}

ArcIndex arc_from_file(std::int64_t v, std::size_t k, const char* slot) {
  if (v < 1) throw ValidationError(fmt::format("c{}: {} arc {} out of range (arcs are 1-based)", k + 1, slot, v));
  return static_cast<ArcIndex>(v - 1);
}

LinkDiagram parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("link JSON syntax error at byte {}: {}", e.byte, e.what()));
  }
  try {
    if (!j.is_object()) throw ParseError("link JSON: top level must be an object");
    LinkDiagram d;
    d.name = j.value("name", std::string{});
    if (!j.contains("arcs") || !j["arcs"].is_number_integer()) throw ParseError("link JSON: missing integer 'arcs'");
    const auto arcs = j["arcs"].get<std::int64_t>();
    if (arcs < 1) throw ValidationError(fmt::format("link JSON: arcs must be positive, got {}", arcs));
    d.arc_count = static_cast<std::uint32_t>(arcs);
    d.tangle = j.value("tangle", false);
    if (!j.contains("crossings") || !j["crossings"].is_array()) throw ParseError("link JSON: missing array 'crossings'");
    const auto& cs = j["crossings"];
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const auto& c = cs[k];
      for (const char* key : {"r", "u", "o"})
        if (!c.contains(key) || !c[key].is_number_integer())
          throw ParseError(fmt::format("link JSON: crossing {} lacks integer '{}'", k + 1, key));
      const int s = c.value("s", 1);
      if (s != 1 && s != -1) throw ParseError(fmt::format("link JSON: crossing {} has sign {}, expected 1 or -1", k + 1, s));
      d.crossings.push_back({arc_from_file(c["r"].get<std::int64_t>(), k, "result"),
                             arc_from_file(c["u"].get<std::int64_t>(), k, "under"),
                             arc_from_file(c["o"].get<std::int64_t>(), k, "over"),
                             s == 1 ? Sign::Positive : Sign::Negative});
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("link JSON: ") + e.what());
  }
}

LinkDiagram parse_text(std::string_view text) {
  static const std::regex crossing_re(R"(^\s*c(\d+)\s*:\s*x(\d+)\s*=\s*x(\d+)\s*([*/])\s*x(\d+)\s*$)");
  static const std::regex directive_re(R"(^\s*#\s*(name|arcs|tangle)\s*(?::\s*(.*?))?\s*$)");
  LinkDiagram d;
  std::optional<std::int64_t> declared_arcs;
  std::int64_t max_arc = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::smatch m;
    if (std::regex_match(line, m, directive_re)) {
      if (m[1] == "name") d.name = m[2];
      else if (m[1] == "tangle") d.tangle = true;
      else {
        try {
          declared_arcs = std::stoll(m[2]);
        } catch (const std::exception&) {
          throw ParseError(fmt::format("line {}: bad arc count '{}'", lineno, std::string(m[2])));
        }
      }
      continue;
    }
    if (line.find_first_not_of(" \t") == line.find('#')) continue;  // comment
    if (!std::regex_match(line, m, crossing_re)) {
      const auto col = line.find_first_not_of(" \t");
      throw ParseError(fmt::format("line {}, column {}: expected 'cK: xR = xU * xO' or 'cK: xR = xU / xO', got '{}'",
                                   lineno, col + 1, line));
    }
    const std::size_t k = d.crossings.size();
    std::int64_t r = std::stoll(m[2]), u = std::stoll(m[3]), o = std::stoll(m[5]);
    max_arc = std::max({max_arc, r, u, o});
    d.crossings.push_back({arc_from_file(r, k, "result"), arc_from_file(u, k, "under"), arc_from_file(o, k, "over"),
                           m[4] == "*" ? Sign::Positive : Sign::Negative});
  }
  const std::int64_t arcs = declared_arcs.value_or(std::max<std::int64_t>(max_arc, 1));
  if (arcs < 1) throw ValidationError(fmt::format("arc count must be positive, got {}", arcs));
  d.arc_count = static_cast<std::uint32_t>(arcs);
  return d;
}

}  // namespace

LinkDiagram parse_link(std::string_view text) {
  LinkDiagram d = parse_link(text, ValidationMode::Lenient);
  require_valid(d);
  return d;
}

LinkDiagram parse_link(std::string_view text, ValidationMode mode) {
  const auto first = text.find_first_not_of(" \t\r\n");
  LinkDiagram d = (first != std::string_view::npos && text[first] == '{') ? parse_json(text) : parse_text(text);
  auto rep = validate(d, mode);
  if (!rep.clean()) {
    std::string msg = "invalid link diagram";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return d;
}

LinkDiagram read_link_file(const std::filesystem::path& path) {
  LinkDiagram d = read_link_file(path, ValidationMode::Lenient);
  require_valid(d);
  return d;
}

LinkDiagram read_link_file(const std::filesystem::path& path, ValidationMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open link file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_link(ss.str(), mode);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize(const LinkDiagram& d) {
  nlohmann::ordered_json j;
  j["name"] = d.name;
  j["arcs"] = d.arc_count;
  if (d.tangle) j["tangle"] = true;
  auto cs = nlohmann::ordered_json::array();
  for (const auto& c : d.crossings) {
    nlohmann::ordered_json o;
    o["r"] = c.result + 1;
    o["u"] = c.under_in + 1;
    o["o"] = c.over + 1;
    o["s"] = static_cast<int>(c.sign);
    cs.push_back(std::move(o));
  }
  j["crossings"] = std::move(cs);
  return j.dump();
}

std::string to_text(const LinkDiagram& d) {
  std::string out;
  if (!d.name.empty()) out += "# name: " + d.name + "\n";
  out += fmt::format("# arcs: {}\n", d.arc_count);
  if (d.tangle) out += "# tangle\n";
  for (std::size_t k = 0; k < d.crossings.size(); ++k) {
    const auto& c = d.crossings[k];
    out += fmt::format("c{}: x{} = x{} {} x{}\n", k + 1, c.result + 1, c.under_in + 1,
                       c.sign == Sign::Positive ? '*' : '/', c.over + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

LinkDiagram from_table(std::string name, std::span<const detail::RawCrossing> rows) {
  LinkDiagram d;
  d.name = std::move(name);
  for (const auto& r : rows) {
    d.crossings.push_back({r.r - 1, r.u - 1, r.o - 1, Sign::Positive});
    d.arc_count = std::max({d.arc_count, r.r, r.u, r.o});
  }
  return d;
}

}  // namespace

LinkDiagram gen_hopf_sum() { return from_table("H", detail::hopf_sum_table()); }

LinkDiagram replicate_allen_swenberg(unsigned n) {
  if (n < 2) throw std::invalid_argument("replicate_allen_swenberg needs n >= 2");
  const LinkDiagram l2 = from_table("L2", detail::allen_swenberg2_table());
  LinkDiagram d;
  d.name = "L" + std::to_string(n);
  d.arc_count = kAsPrefixArcs + kAsBlockArcs * (n - 1);
  d.crossings.assign(l2.crossings.begin(), l2.crossings.begin() + kAsPrefixArcs);
  // Block k (k >= 2) occupies 0-based arcs [45 + 40(k-2), 85 + 40(k-2)).
  // Template arcs below 45 are the block's exits (x3, x27); they feed the
  // entry arcs of block k+1 (x47, x46 shifted by 40) unless k is the last.
  const ArcIndex entry_left = 46, entry_right = 45;  // 0-based x47, x46
  for (unsigned k = 2; k <= n; ++k) {
    const ArcIndex shift = kAsBlockArcs * (k - 2);
    for (std::size_t i = kAsPrefixArcs; i < l2.crossings.size(); ++i) {
      Crossing c = l2.crossings[i];
      for (ArcIndex* a : {&c.result, &c.under_in, &c.over}) {
        if (*a >= kAsPrefixArcs) {
          *a += shift;
        } else if (k < n) {
          if (*a == 2) *a = entry_left + shift + kAsBlockArcs;
          else if (*a == 26) *a = entry_right + shift + kAsBlockArcs;
        }
      }
      d.crossings.push_back(c);
    }
  }
  return d;
}

LinkDiagram gen_allen_swenberg(unsigned n, unsigned max_n) {
  if (n > max_n) throw GuardError(fmt::format("Allen-Swenberg index {} exceeds the configured maximum {}", n, max_n));
  switch (n) {
    case 0: return gen_hopf_sum();
    case 1: return from_table("L1", detail::allen_swenberg1_table());
    case 2: return from_table("L2", detail::allen_swenberg2_table());
    default: return replicate_allen_swenberg(n);
  }
}

LinkDiagram gen_test_link(std::string_view name) {
  const auto P = Sign::Positive, N = Sign::Negative;
  LinkDiagram d;
  d.name = std::string(name);
  if (name == "unknot") {
    d.arc_count = 1;
  } else if (name == "hopf") {
    d.arc_count = 2;
    d.crossings = {{0, 0, 1, P}, {1, 1, 0, P}};
  } else if (name == "trefoil") {
    d.arc_count = 3;
    d.crossings = {{1, 0, 2, P}, {2, 1, 0, P}, {0, 2, 1, P}};
  } else if (name == "trefoil_r1") {
    // Trefoil with a Reidemeister-I kink splitting arc 1 into 1 and 4.
    d.arc_count = 4;
    d.crossings = {{1, 3, 2, P}, {2, 1, 0, P}, {0, 2, 1, P}, {3, 0, 0, P}};
  } else if (name == "figure8") {
    d.arc_count = 4;
    d.crossings = {{2, 1, 0, P}, {0, 3, 2, P}, {3, 2, 1, N}, {1, 0, 3, N}};
  } else {
    throw ValidationError("unknown test link '" + std::string(name) + "'");
  }
  return d;
}

LinkDiagram generate(std::string_view name, unsigned max_n) {
  if (name == "hopfsum") return gen_hopf_sum();
  if (name.starts_with("aslink:")) {
    const std::string num(name.substr(7));
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos || num.size() > 6)
      throw ParseError("bad Allen-Swenberg generator '" + std::string(name) + "', expected aslink:N");
    return gen_allen_swenberg(static_cast<unsigned>(std::stoul(num)), max_n);
  }
  if (name == "unknot" || name == "hopf" || name == "trefoil" || name == "figure8" || name == "trefoil_r1")
    return gen_test_link(name);
  throw ValidationError("unknown generator '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Relabeling

std::optional<std::vector<ArcIndex>> find_arc_isomorphism(std::span<const Crossing> from, std::uint32_t from_arcs,
                                                          std::span<const Crossing> to, std::uint32_t to_arcs,
                                                          const std::map<ArcIndex, ArcIndex>& pinned) {
  if (from.size() != to.size()) return std::nullopt;
  std::vector<ArcIndex> phi(from_arcs, kNoArc);
  std::vector<char> taken(to_arcs, 0);
  for (auto [a, b] : pinned) {
    if (a >= from_arcs || b >= to_arcs || taken[b]) return std::nullopt;
    phi[a] = b;
    taken[b] = 1;
  }

  // Visit `from` crossings so each one touches already-mapped arcs when possible.
  std::vector<std::size_t> order;
  {
    std::vector<char> used(from.size(), 0), seen(from_arcs, 0);
    for (auto [a, b] : pinned) seen[a] = 1;
    for (std::size_t step = 0; step < from.size(); ++step) {
      std::size_t best = from.size();
      int best_score = -1;
      for (std::size_t i = 0; i < from.size(); ++i) {
        if (used[i]) continue;
        const auto& c = from[i];
        const int score = seen[c.result] + seen[c.under_in] + seen[c.over];
        if (score > best_score) {
          best_score = score;
          best = i;
        }
      }
      used[best] = 1;
      order.push_back(best);
      seen[from[best].result] = seen[from[best].under_in] = seen[from[best].over] = 1;
    }
  }

  std::vector<char> used_to(to.size(), 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t depth) -> bool {
    if (depth == order.size()) return true;
    const Crossing& c = from[order[depth]];
    const ArcIndex src[3] = {c.result, c.under_in, c.over};
    for (std::size_t j = 0; j < to.size(); ++j) {
      if (used_to[j] || to[j].sign != c.sign) continue;
      const ArcIndex dst[3] = {to[j].result, to[j].under_in, to[j].over};
      std::vector<ArcIndex> fresh;
      bool ok = true;
      for (int s = 0; s < 3 && ok; ++s) {
        if (phi[src[s]] == kNoArc) {
          if (taken[dst[s]]) {
            ok = false;
          } else {
            phi[src[s]] = dst[s];
            taken[dst[s]] = 1;
            fresh.push_back(src[s]);
          }
        } else if (phi[src[s]] != dst[s]) {
          ok = false;
        }
      }
      if (ok) {
        used_to[j] = 1;
        if (rec(depth + 1)) return true;
        used_to[j] = 0;
      }
      for (auto a : fresh) {
        taken[phi[a]] = 0;
        phi[a] = kNoArc;
      }
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return phi;
}

bool same_up_to_relabeling(const LinkDiagram& a, const LinkDiagram& b) {
  if (a.arc_count != b.arc_count || a.crossings.size() != b.crossings.size()) return false;
  return find_arc_isomorphism(a.crossings, a.arc_count, b.crossings, b.arc_count).has_value();
}

}  // namespace qie
