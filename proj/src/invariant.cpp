#include "qie/invariant.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include <fmt/format.h>

#include "qie/error.hpp"

namespace qie {

std::uint64_t counting_invariant(const HomSet& h) { return h.size(); }

std::uint64_t EnhancedPolynomial::coefficient_sum() const {
  std::uint64_t s = 0;
  for (const auto& [e, c] : terms) s += c;
  return s;
}

std::string EnhancedPolynomial::to_text() const {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms) {
    if (!out.empty()) out += " + ";
    out += fmt::format("{}q^{}", c, e);
  }
  return out;
}

std::uint32_t image_size(std::span<const Element> coloring) {
  std::vector<Element> v(coloring.begin(), coloring.end());
  std::sort(v.begin(), v.end());
  return static_cast<std::uint32_t>(std::unique(v.begin(), v.end()) - v.begin());
}

EnhancedPolynomial enhanced_polynomial(const HomSet& h) {
  EnhancedPolynomial p;
  for (std::size_t i = 0; i < h.size(); ++i) ++p.terms[image_size(h.coloring(i))];
  return p;
}

EnhancedPolynomial parse_polynomial(std::string_view text) {
  EnhancedPolynomial p;
  auto bad = [&] { return ParseError(fmt::format("malformed polynomial '{}'", text)); };
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw bad();
  if (text == "0") return p;
  while (!text.empty()) {
    const auto plus = text.find('+');
    const auto term = trim(text.substr(0, plus));
    text = plus == std::string_view::npos ? std::string_view{} : text.substr(plus + 1);
    const auto q = term.find("q^");
    if (q == std::string_view::npos) throw bad();
    std::uint64_t c = 0;
    std::uint32_t e = 0;
    const auto cs = term.substr(0, q), es = term.substr(q + 2);
    if (std::from_chars(cs.data(), cs.data() + cs.size(), c).ptr != cs.data() + cs.size() || cs.empty()) throw bad();
    if (std::from_chars(es.data(), es.data() + es.size(), e).ptr != es.data() + es.size() || es.empty()) throw bad();
    if (c == 0 || e == 0 || p.terms.count(e)) throw bad();
    p.terms[e] = c;
  }
  return p;
}

std::string ColorPartition::to_string() const {
  std::string out = "{";
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    out += b ? ",{" : "{";
    for (std::size_t i = 0; i < blocks[b].size(); ++i) out += fmt::format("{}{}", i ? "," : "", blocks[b][i] + 1);
    out += "}";
  }
  return out + "}";
}

ColorPartition color_partition(std::span<const Element> coloring) {
  ColorPartition p;
  std::map<Element, std::size_t> block_of;
  for (std::size_t a = 0; a < coloring.size(); ++a) {
    auto [it, fresh] = block_of.try_emplace(coloring[a], p.blocks.size());
    if (fresh) p.blocks.emplace_back();
    p.blocks[it->second].push_back(static_cast<ArcIndex>(a));
  }
  return p;
}

Census partition_census(const HomSet& h) {
  std::map<std::uint32_t, std::map<ColorPartition, std::uint64_t>> counts;
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto p = color_partition(h.coloring(i));
    const auto k = static_cast<std::uint32_t>(p.blocks.size());
    ++counts[k][std::move(p)];
  }
  Census c;
  for (auto& [k, parts] : counts)
    for (auto& [p, n] : parts) c[k].push_back({p, n});
  return c;
}

Verdict distinguishes(const EnhancedPolynomial& a, const EnhancedPolynomial& b) {
  return {a.terms != b.terms, a.coefficient_sum() != b.coefficient_sum()};
}

namespace {

// 1-based L1 arc copied by each arc of an extra block, block arcs in order
// (x46..x85 for the first extra block). Derived as the unique arc map taking
// crossings c46-c85 of L2 onto c6-c45 of L1 with x3, x27 fixed and the
// splice x46 -> x26, x47 -> x5.
constexpr std::array<ArcIndex, kAsBlockArcs> kBlockSource = {
    26, 5,  7,  8,  9,  10, 11, 12, 13, 14, 15, 16, 19, 20, 21, 22, 17, 18, 23, 24,
    25, 6,  28, 29, 30, 31, 32, 33, 34, 35, 36, 37, 40, 41, 39, 38, 42, 43, 44, 45};

}  // namespace

ArcIndex block_source_arc(std::size_t j) { return kBlockSource.at(j) - 1; }

std::vector<Element> extend_coloring(std::span<const Element> f1, unsigned n, const FiniteQuandle& q) {
  if (n < 2) throw ValidationError("extend_coloring needs n >= 2");
  const LinkDiagram l1 = gen_allen_swenberg(1);
  if (!satisfies(l1, q, f1)) throw ValidationError("input is not a coloring of L1 for this quandle");
  const LinkDiagram ln = gen_allen_swenberg(n, std::max(n, kDefaultMaxAllenSwenberg));
  std::vector<Element> fn(ln.arc_count);
  std::copy(f1.begin(), f1.end(), fn.begin());
  for (unsigned k = 2; k <= n; ++k)
    for (std::size_t j = 0; j < kAsBlockArcs; ++j)
      fn[kAsPrefixArcs + kAsBlockArcs * (k - 2) + j] = f1[block_source_arc(j)];
  for (std::size_t i = 0; i < ln.crossings.size(); ++i) {
    const auto& c = ln.crossings[i];
    if (fn[c.result] != q.apply(fn[c.under_in], fn[c.over], c.sign))
      throw ValidationError(fmt::format("extended coloring violates crossing c{} of {}", i + 1, ln.name));
  }
  return fn;
}

}  // namespace qie
