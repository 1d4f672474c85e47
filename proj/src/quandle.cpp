#include "qie/quandle.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qie/error.hpp"

namespace qie {

std::string_view to_string(QuandleKind k) {
  switch (k) {
    case QuandleKind::Symplectic: return "symplectic";
    case QuandleKind::Takasaki: return "takasaki";
    case QuandleKind::Alexander: return "alexander";
    case QuandleKind::Trivial: return "trivial";
    case QuandleKind::Table: return "table";
  }
  return "?";
}

namespace {

std::uint64_t checked_power(std::uint32_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > kMaxQuandleSize)
      throw GuardError(fmt::format("quandle with {}^{} elements exceeds the supported size {}", base, exp,
                                   kMaxQuandleSize));
  }
  return r;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t n) {
  std::int64_t g = n, x = 0, x1 = 1, a1 = a;
  while (a1 != 0) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
    std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
  }
  if (g != 1) return -1;
  return ((x % n) + n) % n;
}

}  // namespace

FiniteQuandle FiniteQuandle::symplectic(const SymplecticForm& form, bool require_nondegenerate) {
  if (require_nondegenerate && !form.non_degenerate())
    throw ValidationError("symplectic form is degenerate (determinant 0 mod " + std::to_string(form.modulus()) +
                          ")");
  FiniteQuandle q;
  q.kind_ = QuandleKind::Symplectic;
  q.modulus_ = form.modulus();
  q.dim_ = form.dim();
  q.size_ = static_cast<std::uint32_t>(checked_power(form.modulus(), form.dim()));
  q.form_ = form;
  std::string entries;
  for (std::size_t i = 0; i < form.entries().size(); ++i)
    entries += (i ? ";" : "") + std::to_string(form.entries()[i]);
  q.spec_ = fmt::format("symplectic:p={},dim={},matrix={}", form.modulus(), form.dim(), entries);
  if (!require_nondegenerate) q.spec_ += ",nondegenerate=false";
  q.finalize();
  return q;
}

FiniteQuandle FiniteQuandle::takasaki(std::uint32_t n) {
  if (n == 0) throw ValidationError("takasaki quandle needs n >= 1");
  FiniteQuandle q;
  q.kind_ = QuandleKind::Takasaki;
  q.modulus_ = n;
  q.size_ = n;
  q.spec_ = fmt::format("takasaki:n={}", n);
  q.finalize();
  return q;
}

FiniteQuandle FiniteQuandle::alexander(std::uint32_t n, std::int64_t t) {
  if (n == 0) throw ValidationError("alexander quandle needs n >= 1");
  FiniteQuandle q;
  q.kind_ = QuandleKind::Alexander;
  q.modulus_ = n;
  q.size_ = n;
  q.t_ = mod_reduce(t, n);
  const std::int64_t inv = n == 1 ? 0 : mod_inverse(q.t_, n);
  if (inv < 0) throw ValidationError(fmt::format("alexander parameter t={} is not a unit mod {}", t, n));
  q.t_inv_ = static_cast<std::uint32_t>(inv);
  q.spec_ = fmt::format("alexander:n={},t={}", n, q.t_);
  q.finalize();
  return q;
}

FiniteQuandle FiniteQuandle::trivial(std::uint32_t size) {
  if (size == 0) throw ValidationError("trivial quandle needs size >= 1");
  FiniteQuandle q;
  q.kind_ = QuandleKind::Trivial;
  q.size_ = size;
  q.spec_ = fmt::format("trivial:size={}", size);
  q.finalize();
  return q;
}

FiniteQuandle FiniteQuandle::from_table(std::uint32_t size, std::vector<Element> table) {
  if (size == 0) throw ValidationError("table quandle needs at least one element");
  if (table.size() != static_cast<std::size_t>(size) * size)
    throw ValidationError(fmt::format("operation table has {} entries, expected {}", table.size(),
                                      static_cast<std::size_t>(size) * size));
  for (auto v : table)
    if (v >= size) throw ValidationError(fmt::format("operation table entry {} out of range [0,{})", v, size));
  FiniteQuandle q;
  q.kind_ = QuandleKind::Table;
  q.size_ = size;
  q.spec_ = fmt::format("table:size={}", size);
  q.table_src_ = std::make_shared<const std::vector<Element>>(std::move(table));
  q.finalize();
  return q;
}

Element FiniteQuandle::eval(Element a, Element b, Sign s) const {
  switch (kind_) {
    case QuandleKind::Trivial:
      return a;
    case QuandleKind::Takasaki: {
      // 2b - a is its own inverse.
      const std::uint64_t n = modulus_;
      return static_cast<Element>((2 * static_cast<std::uint64_t>(b) + n - a) % n);
    }
    case QuandleKind::Alexander: {
      const std::uint64_t n = modulus_;
      const std::uint64_t one_minus_t = (1 + n - t_) % n;
      if (s == Sign::Positive) return static_cast<Element>((t_ * std::uint64_t{a} + one_minus_t * b) % n);
      // a = t x + (1-t) b  =>  x = t^{-1} (a - (1-t) b)
      const std::uint64_t diff = (a + n - (one_minus_t * b) % n) % n;
      return static_cast<Element>((t_inv_ * diff) % n);
    }
    case QuandleKind::Symplectic: {
      const std::uint32_t p = modulus_;
      std::uint32_t xs[64], ys[64];
      Element ta = a, tb = b;
      for (std::uint32_t i = dim_; i-- > 0;) {
        xs[i] = ta % p;
        ys[i] = tb % p;
        ta /= p;
        tb /= p;
      }
      std::uint32_t f = form_->pair({xs, dim_}, {ys, dim_});
      if (s == Sign::Negative) f = (p - f) % p;
      Element out = 0;
      for (std::uint32_t i = 0; i < dim_; ++i)
        out = out * p + static_cast<Element>((xs[i] + static_cast<std::uint64_t>(f) * ys[i]) % p);
      return out;
    }
    case QuandleKind::Table:
      break;
  }
  return s == Sign::Positive ? (*table_src_)[static_cast<std::size_t>(a) * size_ + b] : kNoElement;
}

void FiniteQuandle::finalize() {
  if (kind_ == QuandleKind::Symplectic && dim_ > 64)
    throw ValidationError("symplectic dimension above 64 is not supported");
  if (kind_ == QuandleKind::Table) {
    op_ = *table_src_;
  } else if (size_ <= kTableThreshold) {
    op_.resize(static_cast<std::size_t>(size_) * size_);
    for (Element a = 0; a < size_; ++a)
      for (Element b = 0; b < size_; ++b) op_[static_cast<std::size_t>(a) * size_ + b] = eval(a, b, Sign::Positive);
  } else {
    return;  // formula-evaluated
  }
  // Invert each column of op.
  inv_.assign(op_.size(), kNoElement);
  invertible_ = true;
  for (Element b = 0; b < size_; ++b) {
    for (Element a = 0; a < size_; ++a) {
      const Element r = op_[static_cast<std::size_t>(a) * size_ + b];
      Element& slot = inv_[static_cast<std::size_t>(r) * size_ + b];
      if (slot != kNoElement) invertible_ = false;
      slot = a;
    }
  }
  if (!invertible_) {
    // Leave inv_op undefined on every non-bijective column.
    for (Element b = 0; b < size_; ++b) {
      std::vector<int> hits(size_, 0);
      for (Element a = 0; a < size_; ++a) ++hits[op_[static_cast<std::size_t>(a) * size_ + b]];
      if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; }))
        for (Element r = 0; r < size_; ++r) inv_[static_cast<std::size_t>(r) * size_ + b] = kNoElement;
    }
  }
}

std::vector<std::uint32_t> FiniteQuandle::coordinates(Element e) const {
  if (kind_ != QuandleKind::Symplectic) return {e};
  std::vector<std::uint32_t> c(dim_);
  for (std::uint32_t i = dim_; i-- > 0;) {
    c[i] = e % modulus_;
    e /= modulus_;
  }
  return c;
}

Element FiniteQuandle::from_coordinates(const std::vector<std::uint32_t>& coords) const {
  if (kind_ != QuandleKind::Symplectic) {
    if (coords.size() != 1 || coords[0] >= size_) throw std::out_of_range("bad element coordinates");
    return coords[0];
  }
  if (coords.size() != dim_) throw std::out_of_range("bad element coordinates");
  Element out = 0;
  for (auto c : coords) {
    if (c >= modulus_) throw std::out_of_range("bad element coordinates");
    out = out * modulus_ + c;
  }
  return out;
}

std::string FiniteQuandle::label(Element e) const {
  if (kind_ != QuandleKind::Symplectic) return std::to_string(e);
  std::string s = "(";
  auto c = coordinates(e);
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Spec parsing

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  auto t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ParseError(fmt::format("quandle spec: value of '{}' is not an integer: '{}'", key, text));
  return v;
}

std::uint32_t parse_positive(std::string_view key, std::string_view text) {
  auto v = parse_int(key, text);
  if (v <= 0 || v > std::numeric_limits<std::uint32_t>::max())
    throw ValidationError(fmt::format("quandle spec: '{}' must be a positive integer, got {}", key, v));
  return static_cast<std::uint32_t>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ParseError(fmt::format("quandle spec: '{}' must be true or false, got '{}'", key, text));
}

class Keys {
 public:
  Keys(std::string kind, std::map<std::string, std::string> kv) : kind_(std::move(kind)), kv_(std::move(kv)) {}

  std::optional<std::string> take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }
  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) throw ParseError(fmt::format("quandle spec: {} requires key '{}'", kind_, key));
    return *v;
  }
  void finish() const {
    if (!kv_.empty())
      throw ParseError(fmt::format("quandle spec: unknown key '{}' for kind {}", kv_.begin()->first, kind_));
  }

 private:
  std::string kind_;
  std::map<std::string, std::string> kv_;
};

std::vector<Element> read_table_csv(const std::string& path, std::uint32_t& size) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open operation table '" + path + "'");
  std::vector<std::vector<Element>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    std::vector<Element> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      auto v = parse_int("table", cell);
      if (v < 0) throw ParseError(fmt::format("{}:{}: negative table entry", path, lineno));
      row.push_back(static_cast<Element>(v));
    }
    rows.push_back(std::move(row));
  }
  size = static_cast<std::uint32_t>(rows.size());
  std::vector<Element> flat;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size())
      throw ParseError(fmt::format("{}: row {} has {} entries, expected {}", path, r + 1, rows[r].size(),
                                   rows.size()));
    flat.insert(flat.end(), rows[r].begin(), rows[r].end());
  }
  return flat;
}

}  // namespace

FiniteQuandle build_quandle(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind = trim(spec.substr(0, colon));
  std::map<std::string, std::string> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string_view::npos) comma = rest.size();
      auto item = rest.substr(pos, comma - pos);
      auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(fmt::format("quandle spec: expected key=value, got '{}'", item));
      auto key = trim(item.substr(0, eq));
      if (key.empty()) throw ParseError("quandle spec: empty key");
      if (!kv.emplace(key, trim(item.substr(eq + 1))).second)
        throw ParseError(fmt::format("quandle spec: duplicate key '{}'", key));
      pos = comma + 1;
    }
  }
  Keys keys(kind, std::move(kv));

  if (kind == "symplectic") {
    const auto p = parse_positive("p", keys.require("p"));
    auto n = keys.take("n");
    auto dim_s = keys.take("dim");
    if (n && dim_s) throw ParseError("quandle spec: give either n or dim, not both");
    std::uint32_t dim = 2;
    if (n) dim = 2 * parse_positive("n", *n);
    if (dim_s) dim = parse_positive("dim", *dim_s);
    if (dim % 2 != 0) throw ValidationError(fmt::format("symplectic dimension must be even, got {}", dim));
    auto a = keys.take("a");
    auto matrix = keys.take("matrix");
    if (a && matrix) throw ParseError("quandle spec: give either a or matrix, not both");
    bool nondegenerate = true;
    if (auto nd = keys.take("nondegenerate")) nondegenerate = parse_bool("nondegenerate", *nd);
    keys.finish();
    if (!is_prime(p)) throw ValidationError(fmt::format("symplectic modulus p={} is not prime", p));
    if (matrix) {
      std::vector<std::int64_t> entries;
      std::string cur;
      for (char c : *matrix + ";") {
        if (c == ';' || c == ' ') {
          if (!trim(cur).empty()) entries.push_back(parse_int("matrix", cur));
          cur.clear();
        } else {
          cur += c;
        }
      }
      return FiniteQuandle::symplectic(SymplecticForm(p, dim, std::move(entries)), nondegenerate);
    }
    const std::int64_t av = a ? parse_int("a", *a) : 1;
    return FiniteQuandle::symplectic(SymplecticForm::standard(p, dim, av), nondegenerate);
  }
  if (kind == "takasaki") {
    const auto n = parse_positive("n", keys.require("n"));
    keys.finish();
    return FiniteQuandle::takasaki(n);
  }
  if (kind == "alexander") {
    const auto n = parse_positive("n", keys.require("n"));
    const auto t = parse_int("t", keys.require("t"));
    keys.finish();
    return FiniteQuandle::alexander(n, t);
  }
  if (kind == "trivial") {
    auto s = keys.take("size");
    if (!s) s = keys.take("n");
    if (!s) throw ParseError("quandle spec: trivial requires key 'size'");
    keys.finish();
    return FiniteQuandle::trivial(parse_positive("size", *s));
  }
  if (kind == "table") {
    const auto path = keys.require("path");
    keys.finish();
    std::uint32_t size = 0;
    auto flat = read_table_csv(path, size);
    return FiniteQuandle::from_table(size, std::move(flat));
  }
  throw ParseError(fmt::format("quandle spec: unknown kind '{}'", kind));
}

Element quandle_op(const FiniteQuandle& q, Element a, Element b, Sign sign) {
  if (a >= q.size() || b >= q.size())
    throw std::out_of_range(fmt::format("element index out of range for quandle of size {}", q.size()));
  const Element r = q.apply(a, b, sign);
  if (r == kNoElement) throw ValidationError(fmt::format("{} ▷⁻¹ {} is undefined: column not bijective", a, b));
  return r;
}

AxiomReport check_axioms(const FiniteQuandle& q) {
  const std::uint32_t m = q.size();
  if (m > kAxiomCheckMaxSize)
    throw GuardError(fmt::format("axiom check limited to {} elements, quandle has {}", kAxiomCheckMaxSize, m));
  AxiomReport rep;
  for (Element a = 0; a < m && rep.idempotent; ++a)
    if (q.op(a, a) != a) {
      rep.idempotent = false;
      rep.idempotent_counterexample = std::array<Element, 3>{a, a, a};
    }

  // Right-invertibility: each column b must be a bijection.
  for (Element b = 0; b < m && rep.right_invertible; ++b) {
    std::vector<Element> seen(m, kNoElement);
    for (Element a = 0; a < m; ++a) {
      const Element r = q.op(a, b);
      if (seen[r] != kNoElement) {
        rep.right_invertible = false;
        rep.invertibility_counterexample = std::array<Element, 3>{seen[r], a, b};
        break;
      }
      seen[r] = a;
    }
  }

  // Distributivity, parallel over x; keep the lexicographically first failure.
  std::atomic<std::int64_t> first_x{m};
  std::vector<std::optional<std::array<Element, 3>>> found(m);
  const std::int64_t mm = m;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t xi = 0; xi < mm; ++xi) {
    if (xi > first_x.load(std::memory_order_relaxed)) continue;
    const Element x = static_cast<Element>(xi);
    for (Element y = 0; y < m && !found[xi]; ++y) {
      const Element xy = q.op(x, y);
      for (Element z = 0; z < m; ++z) {
        if (q.op(xy, z) != q.op(q.op(x, z), q.op(y, z))) {
          found[xi] = std::array<Element, 3>{x, y, z};
          std::int64_t cur = first_x.load();
          while (xi < cur && !first_x.compare_exchange_weak(cur, xi)) {
          }
          break;
        }
      }
    }
  }
  for (std::uint32_t x = 0; x < m; ++x)
    if (found[x]) {
      rep.distributive = false;
      rep.distributive_counterexample = found[x];
      break;
    }
  return rep;
}

std::vector<std::vector<Element>> connected_components(const FiniteQuandle& q, std::vector<Element> subset) {
  const std::uint32_t m = q.size();
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  std::vector<char> in(m, 0);
  for (auto e : subset) {
    if (e >= m) throw ValidationError(fmt::format("element {} out of range for quandle of size {}", e, m));
    in[e] = 1;
  }
  for (auto a : subset)
    for (auto b : subset) {
      const Element r = q.op(a, b), s = q.inv_op(a, b);
      if (r == kNoElement || !in[r] || s == kNoElement || !in[s])
        throw ValidationError(fmt::format("subset is not a subquandle: not closed at ({}, {})", q.label(a),
                                          q.label(b)));
    }

  std::vector<std::vector<Element>> orbits;
  std::vector<char> seen(m, 0);
  for (auto start : subset) {
    if (seen[start]) continue;
    std::vector<Element> orbit{start};
    seen[start] = 1;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      const Element x = orbit[head];
      for (auto b : subset) {
        for (Element y : {q.op(x, b), q.inv_op(x, b)}) {
          if (!seen[y]) {
            seen[y] = 1;
            orbit.push_back(y);
          }
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

std::vector<Element> nonzero_elements(const FiniteQuandle& q) {
  std::vector<Element> out;
  out.reserve(q.size());
  const Element zero = q.kind() == QuandleKind::Symplectic ? 0 : kNoElement;
  for (Element e = 0; e < q.size(); ++e)
    if (e != zero) out.push_back(e);
  return out;
}

}  // namespace qie
