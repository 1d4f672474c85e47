#include "qie/solver.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include <fmt/format.h>
#include <omp.h>

#include "qie/error.hpp"

namespace qie {

namespace {

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

// Sorts the rows of a flat row-major buffer lexicographically.
void sort_rows(std::vector<Element>& cells, std::size_t width) {
  if (width == 0) return;
  const std::size_t n = cells.size() / width;
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  const Element* base = cells.data();
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(base + a * width, base + (a + 1) * width, base + b * width,
                                        base + (b + 1) * width);
  });
  std::vector<Element> out(cells.size());
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(base + idx[i] * width, width, out.data() + i * width);
  cells.swap(out);
}

std::string arc_list(std::span<const ArcIndex> arcs) {
  std::string s = "{";
  for (std::size_t i = 0; i < arcs.size(); ++i) s += (i ? "," : "") + std::string("x") + std::to_string(arcs[i] + 1);
  return s + "}";
}

void require_solvable(const LinkDiagram& d, const FiniteQuandle& q) {
  if (!q.right_invertible())
    throw ValidationError("coloring needs a quandle whose right translations are bijective");
  auto rep = validate(d, ValidationMode::Lenient);
  if (!rep.clean()) throw ValidationError("cannot color diagram: " + rep.violations.front());
}

}  // namespace

bool satisfies(const LinkDiagram& d, const FiniteQuandle& q, std::span<const Element> f) {
  if (f.size() != d.arc_count) return false;
  for (auto e : f)
    if (e >= q.size()) return false;
  return std::all_of(d.crossings.begin(), d.crossings.end(), [&](const Crossing& c) {
    return f[c.result] == q.apply(f[c.under_in], f[c.over], c.sign);
  });
}

// ---------------------------------------------------------------------------
// Serial reference

HomSet brute_force_solve(const LinkDiagram& d, const FiniteQuandle& q, std::uint64_t guard) {
  require_solvable(d, q);
  const std::uint32_t n = d.arc_count, m = q.size();
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    total *= m;
    if (total > guard)
      throw GuardError(fmt::format("brute force needs {}^{} assignments, above the guard {}", m, n, guard));
  }
  HomSet h{d.name, q.spec(), n, m, {}, {}};
  std::vector<Element> f(n, 0);
  for (std::uint64_t it = 0; it < total; ++it) {
    if (satisfies(d, q, f)) h.cells.insert(h.cells.end(), f.begin(), f.end());
    // Odometer with the last arc fastest, so output is already lexicographic.
    for (std::uint32_t i = n; i-- > 0;) {
      if (++f[i] < m) break;
      f[i] = 0;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Chunking

namespace {

struct CrossingOrder {
  std::vector<std::size_t> order;
  int widest = 0;
  long total = 0;
};

// Greedy elimination order from `start`: each step takes the crossing sharing
// an arc with what is already covered that leaves the fewest open arcs (arcs
// covered but still used by a pending crossing), then the fewest new arcs.
CrossingOrder greedy_order(const std::vector<std::vector<ArcIndex>>& arcs, const std::vector<std::size_t>& members,
                           std::size_t start, std::uint32_t arc_count) {
  std::vector<int> pending(arc_count, 0);
  for (auto k : members)
    for (auto a : arcs[k]) ++pending[a];
  std::vector<char> covered(arc_count, 0), taken(arcs.size(), 0);
  int open = 0;
  CrossingOrder out;
  auto delta = [&](std::size_t k, int& fresh) {
    int d = 0;
    fresh = 0;
    for (auto a : arcs[k]) {
      const bool was_open = covered[a] && pending[a] > 0;
      const bool now_open = pending[a] > 1;
      d += static_cast<int>(now_open) - static_cast<int>(was_open);
      fresh += !covered[a];
    }
    return d;
  };
  auto take = [&](std::size_t k) {
    int fresh = 0;
    open += delta(k, fresh);
    for (auto a : arcs[k]) {
      --pending[a];
      covered[a] = 1;
    }
    taken[k] = 1;
    out.order.push_back(k);
    out.widest = std::max(out.widest, open);
    out.total += open;
  };
  take(start);
  while (out.order.size() < members.size()) {
    std::size_t pick = arcs.size();
    int pick_open = 0, pick_fresh = 0;
    for (auto k : members) {
      if (taken[k]) continue;
      int fresh = 0;
      const int o = open + delta(k, fresh);
      if (fresh == static_cast<int>(arcs[k].size())) continue;  // not adjacent
      if (pick == arcs.size() || o < pick_open || (o == pick_open && fresh < pick_fresh)) {
        pick = k;
        pick_open = o;
        pick_fresh = fresh;
      }
    }
    take(pick);
  }
  return out;
}

}  // namespace

ChunkPlan partition_chunks(const LinkDiagram& d, int chunk_size) {
  if (chunk_size < 1 || chunk_size > 5)
    throw ValidationError(fmt::format("chunk size must be in [1,5], got {}", chunk_size));
  const std::size_t nc = d.crossings.size();
  std::vector<std::vector<ArcIndex>> arcs(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    const auto& c = d.crossings[k];
    arcs[k] = {c.result, c.under_in, c.over};
    std::sort(arcs[k].begin(), arcs[k].end());
    arcs[k].erase(std::unique(arcs[k].begin(), arcs[k].end()), arcs[k].end());
  }

  // Groups of crossings connected through shared arcs, ordered by lowest crossing.
  std::vector<std::vector<std::size_t>> groups;
  {
    std::vector<char> seen(nc, 0);
    for (std::size_t s = 0; s < nc; ++s) {
      if (seen[s]) continue;
      std::vector<char> reached(d.arc_count, 0);
      std::vector<std::size_t> members, stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        const auto k = stack.back();
        stack.pop_back();
        members.push_back(k);
        for (auto a : arcs[k]) reached[a] = 1;
        for (std::size_t j = 0; j < nc; ++j)
          if (!seen[j] && std::any_of(arcs[j].begin(), arcs[j].end(), [&](ArcIndex a) { return reached[a] != 0; })) {
            seen[j] = 1;
            stack.push_back(j);
          }
      }
      std::sort(members.begin(), members.end());
      groups.push_back(std::move(members));
    }
  }

  ChunkPlan plan;
  for (const auto& members : groups) {
    // Best greedy order over all starting crossings: narrowest, then smallest total boundary.
    CrossingOrder best;
    for (auto s : members) {
      auto o = greedy_order(arcs, members, s, d.arc_count);
      if (best.order.empty() || o.widest < best.widest || (o.widest == best.widest && o.total < best.total))
        best = std::move(o);
    }
    // Cut the order into chunks; a crossing joins the current chunk only if it
    // touches one of the chunk's arcs, so each chunk stays connected.
    plan.group_starts.push_back(plan.chunks.size());
    Chunk cur;
    std::vector<char> in_cur(d.arc_count, 0);
    auto flush = [&] {
      if (cur.crossings.empty()) return;
      std::sort(cur.crossings.begin(), cur.crossings.end());
      for (ArcIndex a = 0; a < d.arc_count; ++a)
        if (in_cur[a]) cur.arcs.push_back(a);
      plan.chunks.push_back(std::move(cur));
      cur = {};
      std::fill(in_cur.begin(), in_cur.end(), 0);
    };
    for (auto k : best.order) {
      const bool touches = std::any_of(arcs[k].begin(), arcs[k].end(), [&](ArcIndex a) { return in_cur[a] != 0; });
      if (static_cast<int>(cur.crossings.size()) == chunk_size || (!cur.crossings.empty() && !touches)) flush();
      cur.crossings.push_back(k);
      for (auto a : arcs[k]) in_cur[a] = 1;
    }
    flush();
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Chunk enumeration

namespace {

struct Step {
  enum Kind { Free, Derive, Check } kind;
  std::uint32_t target = 0;  // local variable written (Free/Derive)
  std::uint32_t lhs = 0, rhs = 0;  // Derive: target = lhs ▷^sign rhs; Check: target == lhs ▷^sign rhs
  Sign sign = Sign::Positive;
};

Sign flip(Sign s) { return s == Sign::Positive ? Sign::Negative : Sign::Positive; }

// Orders the chunk's variables into free choices and derivations.
std::vector<Step> plan_chunk(const LinkDiagram& d, const Chunk& chunk, const std::vector<std::uint32_t>& local,
                             bool invertible) {
  const std::size_t nv = chunk.arcs.size();
  struct Eq {
    std::uint32_t r, u, o;
    Sign s;
  };
  std::vector<Eq> eqs;
  for (auto k : chunk.crossings) {
    const auto& c = d.crossings[k];
    eqs.push_back({local[c.result], local[c.under_in], local[c.over], c.sign});
  }

  // Returns derivation steps enabled by `known`, marking equations consumed.
  auto propagate = [&](std::vector<char>& known, std::vector<char>& done, std::vector<Step>* out) {
    int derived = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (done[i]) continue;
        const auto& e = eqs[i];
        if (known[e.u] && known[e.o]) {
          done[i] = 1;
          changed = true;
          if (!known[e.r]) {
            known[e.r] = 1;
            ++derived;
            if (out) out->push_back({Step::Derive, e.r, e.u, e.o, e.s});
          } else if (out) {
            out->push_back({Step::Check, e.r, e.u, e.o, e.s});
          }
        } else if (invertible && known[e.r] && known[e.o]) {
          // under = result ▷∓ over
          done[i] = 1;
          changed = true;
          known[e.u] = 1;
          ++derived;
          if (out) out->push_back({Step::Derive, e.u, e.r, e.o, flip(e.s)});
        }
      }
    }
    return derived;
  };

  std::vector<Step> steps;
  std::vector<char> known(nv, 0), done(eqs.size(), 0);
  propagate(known, done, &steps);
  while (std::find(known.begin(), known.end(), 0) != known.end()) {
    std::uint32_t best = 0;
    int best_gain = -1;
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (known[v]) continue;
      auto k2 = known;
      auto d2 = done;
      k2[v] = 1;
      const int gain = propagate(k2, d2, nullptr);
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    known[best] = 1;
    steps.push_back({Step::Free, best, 0, 0, Sign::Positive});
    propagate(known, done, &steps);
  }
  // Equations never consumed (all variables free) still need checking.
  for (std::size_t i = 0; i < eqs.size(); ++i)
    if (!done[i]) steps.push_back({Step::Check, eqs[i].r, eqs[i].u, eqs[i].o, eqs[i].s});
  return steps;
}

}  // namespace

PartialSolutionSet enumerate_chunk(const LinkDiagram& d, const Chunk& chunk, const FiniteQuandle& q, int threads) {
  PartialSolutionSet out;
  out.variables = chunk.arcs;
  const std::size_t nv = chunk.arcs.size();
  if (nv == 0) return out;
  std::vector<std::uint32_t> local(d.arc_count, 0);
  for (std::size_t i = 0; i < nv; ++i) local[chunk.arcs[i]] = static_cast<std::uint32_t>(i);

  const auto steps = plan_chunk(d, chunk, local, q.right_invertible());
  std::vector<std::size_t> free_pos;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i].kind == Step::Free) free_pos.push_back(i);
  const std::uint32_t m = q.size();
  const std::size_t nfree = free_pos.size();
  std::uint64_t inner = 1;
  for (std::size_t i = 1; i < nfree; ++i) {
    inner *= m;
    if (inner > 10'000'000'000ull)
      throw GuardError(fmt::format("chunk enumeration over {} free variables of a {}-element quandle is too large",
                                   nfree, m));
  }

  // Runs the plan for every assignment whose first free variable is `lead`.
  auto run = [&](Element lead, std::vector<Element>& rows) {
    std::vector<Element> val(nv, 0);
    std::vector<Element> counters(nfree, 0);
    counters[0] = lead;
    for (std::uint64_t it = 0; it < inner; ++it) {
      std::size_t fi = 0;
      bool ok = true;
      for (const auto& s : steps) {
        switch (s.kind) {
          case Step::Free: val[s.target] = counters[fi++]; break;
          case Step::Derive: val[s.target] = q.apply(val[s.lhs], val[s.rhs], s.sign); break;
          case Step::Check: ok = val[s.target] == q.apply(val[s.lhs], val[s.rhs], s.sign); break;
        }
        if (!ok) break;
      }
      if (ok) rows.insert(rows.end(), val.begin(), val.end());
      for (std::size_t i = nfree; i-- > 1;) {
        if (++counters[i] < m) break;
        counters[i] = 0;
      }
    }
  };

  if (nfree == 0) {
    // Fully determined chunk: cannot happen for equations over arcs, but keep the plan total.
    std::vector<Element> rows;
    run(0, rows);
    out.cells = std::move(rows);
    return out;
  }

  std::vector<std::vector<Element>> per_lead(m);
  const std::int64_t mm = m;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(threads))
  for (std::int64_t lead = 0; lead < mm; ++lead) run(static_cast<Element>(lead), per_lead[lead]);

  std::size_t total = 0;
  for (const auto& r : per_lead) total += r.size();
  out.cells.reserve(total);
  for (auto& r : per_lead) out.cells.insert(out.cells.end(), r.begin(), r.end());
  sort_rows(out.cells, nv);
  return out;
}

// ---------------------------------------------------------------------------
// Join

PartialSolutionSet join_partial(const PartialSolutionSet& a, const PartialSolutionSet& b, const JoinOptions& opts,
                                std::vector<std::string>& warnings) {
  if (a.width() == 0 || b.width() == 0) {
    const auto& unit = a.width() == 0 ? a : b;
    const auto& other = a.width() == 0 ? b : a;
    if (unit.row_count() == 0) {
      PartialSolutionSet empty;
      empty.variables = other.variables;
      empty.unit_rows = 0;
      return empty;
    }
    return other;
  }

  // Column layout of the union.
  PartialSolutionSet out;
  std::set_union(a.variables.begin(), a.variables.end(), b.variables.begin(), b.variables.end(),
                 std::back_inserter(out.variables));
  std::vector<std::size_t> a_shared, b_shared;
  for (std::size_t i = 0, j = 0; i < a.width() && j < b.width();) {
    if (a.variables[i] < b.variables[j]) ++i;
    else if (a.variables[i] > b.variables[j]) ++j;
    else {
      a_shared.push_back(i++);
      b_shared.push_back(j++);
    }
  }
  // For each output column: (from_a, column index).
  std::vector<std::pair<bool, std::size_t>> source;
  for (auto v : out.variables) {
    auto ia = std::lower_bound(a.variables.begin(), a.variables.end(), v);
    if (ia != a.variables.end() && *ia == v) source.emplace_back(true, ia - a.variables.begin());
    else source.emplace_back(false, std::lower_bound(b.variables.begin(), b.variables.end(), v) - b.variables.begin());
  }

  const std::size_t na = a.row_count(), nb = b.row_count();
  if (a_shared.empty()) {
    warnings.push_back(fmt::format("join of disjoint variable sets {} and {}: cross product of {} x {} rows",
                                   arc_list(a.variables), arc_list(b.variables), na, nb));
  }

  // Index b by its shared-variable key (sorted row order).
  std::vector<std::uint32_t> b_order(nb);
  std::iota(b_order.begin(), b_order.end(), 0u);
  auto b_key_less = [&](std::uint32_t x, std::uint32_t y) {
    for (auto c : b_shared) {
      const Element ex = b.cells[x * b.width() + c], ey = b.cells[y * b.width() + c];
      if (ex != ey) return ex < ey;
    }
    return x < y;
  };
  std::sort(b_order.begin(), b_order.end(), b_key_less);

  // Range of b rows matching row i of a.
  auto matches = [&](std::size_t i) {
    const Element* ar = a.cells.data() + i * a.width();
    auto cmp_key = [&](std::uint32_t brow, bool brow_less) {
      for (std::size_t s = 0; s < a_shared.size(); ++s) {
        const Element ea = ar[a_shared[s]], eb = b.cells[brow * b.width() + b_shared[s]];
        if (ea != eb) return brow_less ? eb < ea : ea < eb;
      }
      return false;
    };
    auto lo = std::partition_point(b_order.begin(), b_order.end(), [&](std::uint32_t r) { return cmp_key(r, true); });
    auto hi = std::partition_point(lo, b_order.end(), [&](std::uint32_t r) { return !cmp_key(r, false); });
    return std::pair{lo, hi};
  };

  const int nt = thread_count(opts.threads);
  std::vector<std::size_t> counts(na + 1, 0);
  const std::int64_t nai = static_cast<std::int64_t>(na);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (std::int64_t i = 0; i < nai; ++i) {
    auto [lo, hi] = matches(i);
    counts[i + 1] = static_cast<std::size_t>(hi - lo);
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  const std::size_t total = counts[na];
  if (total > opts.row_cap)
    throw GuardError(fmt::format("join of {} and {} would produce {} rows, above the row cap {}",
                                 arc_list(a.variables), arc_list(b.variables), total, opts.row_cap));

  const std::size_t w = out.variables.size();
  out.cells.resize(total * w);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (std::int64_t i = 0; i < nai; ++i) {
    auto [lo, hi] = matches(i);
    Element* dst = out.cells.data() + counts[i] * w;
    const Element* ar = a.cells.data() + i * a.width();
    for (auto it = lo; it != hi; ++it, dst += w) {
      const Element* br = b.cells.data() + static_cast<std::size_t>(*it) * b.width();
      for (std::size_t c = 0; c < w; ++c) dst[c] = source[c].first ? ar[source[c].second] : br[source[c].second];
    }
  }
  sort_rows(out.cells, w);
  if (total == 0) out.unit_rows = 0;
  return out;
}

// ---------------------------------------------------------------------------
// Full solve

namespace {

std::vector<std::size_t> columns_of(const PartialSolutionSet& s, std::span<const ArcIndex> vars) {
  std::vector<std::size_t> cols;
  for (auto v : vars) cols.push_back(std::lower_bound(s.variables.begin(), s.variables.end(), v) - s.variables.begin());
  return cols;
}

// Distinct rows of `s` restricted to `vars` (a subset of its variables).
PartialSolutionSet project(const PartialSolutionSet& s, const std::vector<ArcIndex>& vars) {
  PartialSolutionSet out;
  out.variables = vars;
  const std::size_t n = s.row_count();
  if (vars.empty()) {
    out.unit_rows = n > 0 ? 1 : 0;
    return out;
  }
  const auto cols = columns_of(s, vars);
  const std::size_t w = vars.size();
  out.cells.resize(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = s.row(i);
    for (std::size_t c = 0; c < w; ++c) out.cells[i * w + c] = r[cols[c]];
  }
  sort_rows(out.cells, w);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (kept > 0 && std::equal(out.cells.begin() + i * w, out.cells.begin() + (i + 1) * w,
                               out.cells.begin() + (kept - 1) * w))
      continue;
    std::copy_n(out.cells.begin() + i * w, w, out.cells.begin() + kept * w);
    ++kept;
  }
  out.cells.resize(kept * w);
  return out;
}

// Rows of `a` agreeing with some row of `b` on their shared variables.
PartialSolutionSet semijoin(const PartialSolutionSet& a, const PartialSolutionSet& b, int threads) {
  std::vector<ArcIndex> shared;
  std::set_intersection(a.variables.begin(), a.variables.end(), b.variables.begin(), b.variables.end(),
                        std::back_inserter(shared));
  if (shared.empty()) {
    if (b.row_count() > 0) return a;
    PartialSolutionSet empty;
    empty.variables = a.variables;
    empty.unit_rows = 0;
    return empty;
  }
  const auto keys = project(b, shared);
  const auto cols = columns_of(a, shared);
  const std::size_t w = shared.size(), nk = keys.row_count(), na = a.row_count();
  std::vector<char> keep(na, 0);
  const std::int64_t nai = static_cast<std::int64_t>(na);
#pragma omp parallel num_threads(thread_count(threads))
  {
    std::vector<Element> key(w);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < nai; ++i) {
      auto r = a.row(i);
      for (std::size_t c = 0; c < w; ++c) key[c] = r[cols[c]];
      std::size_t lo = 0, hi = nk;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        auto k = keys.row(mid);
        if (std::lexicographical_compare(k.begin(), k.end(), key.begin(), key.end())) lo = mid + 1;
        else hi = mid;
      }
      keep[i] = lo < nk && std::equal(key.begin(), key.end(), keys.row(lo).begin());
    }
  }
  PartialSolutionSet out;
  out.variables = a.variables;
  for (std::size_t i = 0; i < na; ++i)
    if (keep[i]) out.cells.insert(out.cells.end(), a.row(i).begin(), a.row(i).end());
  if (out.cells.empty()) out.unit_rows = 0;
  return out;
}

struct Fused {
  PartialSolutionSet rows;    // distinct projections (when out_vars given)
  std::vector<char> a_used;   // rows of a taking part in a kept merge
  std::vector<char> b_used;
};

// Walks every merge of a row of `a` with a row of `b` agreeing on shared
// variables, without materializing the join. Merges whose projection onto
// keep->variables is not a row of `keep` are dropped. Kept merges are
// projected onto `out_vars` and deduplicated; participation flags are recorded.
Fused join_project(const PartialSolutionSet& a, const PartialSolutionSet& b, const std::vector<ArcIndex>& out_vars,
                   bool want_rows, const PartialSolutionSet* keep, std::size_t row_cap, int threads) {
  std::vector<ArcIndex> all;
  std::set_union(a.variables.begin(), a.variables.end(), b.variables.begin(), b.variables.end(),
                 std::back_inserter(all));
  std::vector<std::size_t> a_shared, b_shared;
  for (std::size_t i = 0, j = 0; i < a.width() && j < b.width();) {
    if (a.variables[i] < b.variables[j]) ++i;
    else if (a.variables[i] > b.variables[j]) ++j;
    else {
      a_shared.push_back(i++);
      b_shared.push_back(j++);
    }
  }
  // (from_a, column) for each requested variable.
  auto sources = [&](const std::vector<ArcIndex>& vars) {
    std::vector<std::pair<bool, std::size_t>> src;
    for (auto v : vars) {
      auto ia = std::lower_bound(a.variables.begin(), a.variables.end(), v);
      if (ia != a.variables.end() && *ia == v) src.emplace_back(true, ia - a.variables.begin());
      else src.emplace_back(false, std::lower_bound(b.variables.begin(), b.variables.end(), v) - b.variables.begin());
    }
    return src;
  };
  const auto out_src = sources(out_vars);
  const auto keep_src = keep ? sources(keep->variables) : decltype(out_src){};

  const std::size_t na = a.row_count(), nb = b.row_count(), aw = a.width(), bw = b.width();
  std::vector<std::uint32_t> b_order(nb);
  std::iota(b_order.begin(), b_order.end(), 0u);
  std::sort(b_order.begin(), b_order.end(), [&](std::uint32_t x, std::uint32_t y) {
    for (auto c : b_shared) {
      const Element ex = b.cells[x * bw + c], ey = b.cells[y * bw + c];
      if (ex != ey) return ex < ey;
    }
    return x < y;
  });

  Fused out;
  out.rows.variables = out_vars;
  out.a_used.assign(na, 0);
  out.b_used.assign(nb, 0);
  const std::size_t ow = out_vars.size();
  const int nt = thread_count(threads);
  std::vector<Element> buf;
  std::size_t compacted = 0;
  auto compact = [&] {
    if (ow == 0) return;
    sort_rows(buf, ow);
    const std::size_t n = buf.size() / ow;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (kept > 0 && std::equal(buf.begin() + i * ow, buf.begin() + (i + 1) * ow, buf.begin() + (kept - 1) * ow))
        continue;
      std::copy_n(buf.begin() + i * ow, ow, buf.begin() + kept * ow);
      ++kept;
    }
    buf.resize(kept * ow);
    compacted = kept;
    if (kept > row_cap)
      throw GuardError(fmt::format("joining {} with {} keeps {} distinct boundary rows, above the row cap {}",
                                   arc_list(a.variables), arc_list(b.variables), kept, row_cap));
  };

  constexpr std::size_t kBlock = 4096;
  bool any = false;
  for (std::size_t start = 0; start < na; start += kBlock) {
    const std::int64_t lo_i = static_cast<std::int64_t>(start), hi_i = static_cast<std::int64_t>(std::min(na, start + kBlock));
    std::vector<std::vector<Element>> local(nt);
    std::vector<std::vector<char>> local_b(nt);
    std::vector<char> local_any(nt, 0);
#pragma omp parallel num_threads(nt)
    {
      const int t = omp_get_thread_num();
      auto& mine = local[t];
      auto& bused = local_b[t];
      bused.assign(nb, 0);
      std::vector<Element> key(a_shared.size()), probe(keep_src.size());
#pragma omp for schedule(static)
      for (std::int64_t i = lo_i; i < hi_i; ++i) {
        const Element* ar = a.cells.data() + i * aw;
        for (std::size_t s = 0; s < a_shared.size(); ++s) key[s] = ar[a_shared[s]];
        auto row_less_key = [&](std::uint32_t r) {
          for (std::size_t s = 0; s < b_shared.size(); ++s) {
            const Element eb = b.cells[r * bw + b_shared[s]];
            if (eb != key[s]) return eb < key[s];
          }
          return false;
        };
        auto key_less_row = [&](std::uint32_t r) {
          for (std::size_t s = 0; s < b_shared.size(); ++s) {
            const Element eb = b.cells[r * bw + b_shared[s]];
            if (eb != key[s]) return key[s] < eb;
          }
          return false;
        };
        auto lo = std::partition_point(b_order.begin(), b_order.end(), row_less_key);
        auto hi = std::partition_point(lo, b_order.end(), [&](std::uint32_t r) { return !key_less_row(r); });
        for (auto it = lo; it != hi; ++it) {
          const Element* br = b.cells.data() + static_cast<std::size_t>(*it) * bw;
          if (keep) {
            for (std::size_t c = 0; c < keep_src.size(); ++c)
              probe[c] = keep_src[c].first ? ar[keep_src[c].second] : br[keep_src[c].second];
            std::size_t l = 0, h = keep->row_count();
            while (l < h) {
              const std::size_t mid = (l + h) / 2;
              auto k = keep->row(mid);
              if (std::lexicographical_compare(k.begin(), k.end(), probe.begin(), probe.end())) l = mid + 1;
              else h = mid;
            }
            if (keep_src.empty() ? keep->row_count() == 0
                                 : (l == keep->row_count() || !std::equal(probe.begin(), probe.end(), keep->row(l).begin())))
              continue;
          }
          out.a_used[i] = 1;
          bused[*it] = 1;
          local_any[t] = 1;
          if (want_rows)
            for (std::size_t c = 0; c < ow; ++c) mine.push_back(out_src[c].first ? ar[out_src[c].second] : br[out_src[c].second]);
        }
      }
    }
    for (int t = 0; t < nt; ++t) {
      buf.insert(buf.end(), local[t].begin(), local[t].end());
      for (std::size_t j = 0; j < nb; ++j) out.b_used[j] |= local_b[t][j];
      any = any || local_any[t];
    }
    if (ow > 0 && buf.size() / ow > std::max<std::size_t>(2 * compacted, 1u << 20)) compact();
  }
  compact();
  out.rows.cells = std::move(buf);
  if (ow == 0) out.rows.unit_rows = any ? 1 : 0;
  return out;
}

PartialSolutionSet select_rows(const PartialSolutionSet& s, const std::vector<char>& flags) {
  PartialSolutionSet out;
  out.variables = s.variables;
  if (s.width() == 0) {
    out.unit_rows = (s.row_count() > 0 && flags[0]) ? 1 : 0;
    return out;
  }
  for (std::size_t i = 0; i < s.row_count(); ++i)
    if (flags[i]) out.cells.insert(out.cells.end(), s.row(i).begin(), s.row(i).end());
  return out;
}

}  // namespace

namespace {

constexpr std::size_t kMaxConditioning = 3;

struct Chain {
  std::vector<PartialSolutionSet> parts;
  std::vector<std::vector<ArcIndex>> boundary;  // boundary[i]: arcs of chunks < i still used by chunks >= i
};

// The fold runs in three passes so no intermediate holds more full rows than
// the final answer:
//   1. forward joins projected onto arcs still used by later chunks,
//   2. backward semijoins keeping boundary tuples that extend to a full coloring,
//   3. forward joins over full rows, filtered to those tuples.
// Returns nullopt when pass 1 exceeds the row cap.
std::optional<PartialSolutionSet> fold_chain(Chain c, const SolveOptions& opts, std::vector<std::string>& warnings,
                                             std::string& why) {
  const std::size_t k = c.parts.size();
  std::vector<PartialSolutionSet> reach(k + 1);
  reach[0] = PartialSolutionSet::unit();
  for (std::size_t i = 0; i < k; ++i) {
    try {
      reach[i + 1] = join_project(reach[i], c.parts[i], c.boundary[i + 1], true, nullptr, opts.row_cap, opts.threads).rows;
    } catch (const GuardError& e) {
      why = e.what();
      return std::nullopt;
    }
    if (reach[i + 1].row_count() == 0) {
      PartialSolutionSet none;
      for (const auto& p : c.parts) none.variables.insert(none.variables.end(), p.variables.begin(), p.variables.end());
      std::sort(none.variables.begin(), none.variables.end());
      none.variables.erase(std::unique(none.variables.begin(), none.variables.end()), none.variables.end());
      none.unit_rows = 0;
      return none;
    }
  }
  for (std::size_t i = k; i-- > 0;) {
    auto f = join_project(reach[i], c.parts[i], {}, false, &reach[i + 1], opts.row_cap, opts.threads);
    c.parts[i] = select_rows(c.parts[i], f.b_used);
    reach[i] = select_rows(reach[i], f.a_used);
  }
  const JoinOptions jopts{opts.row_cap, opts.threads};
  PartialSolutionSet acc = PartialSolutionSet::unit();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> w;
    acc = semijoin(join_partial(acc, c.parts[i], jopts, w), reach[i + 1], opts.threads);
    for (auto& msg : w)
      if (std::find(warnings.begin(), warnings.end(), msg) == warnings.end()) warnings.push_back(std::move(msg));
    c.parts[i] = {};
  }
  return acc;
}

// When the boundary grows past the row cap, fix the value of the arc that
// stays open longest and solve each case separately (up to kMaxConditioning
// arcs deep). The cases partition the colorings, so their union is exact.
PartialSolutionSet fold_conditioned(const Chain& c, std::uint32_t m, const std::vector<ArcIndex>& candidates,
                                    std::size_t depth, const SolveOptions& opts, std::vector<std::string>& warnings) {
  std::string why;
  if (auto acc = fold_chain(c, opts, warnings, why)) return std::move(*acc);
  if (depth == candidates.size() || depth == kMaxConditioning) throw GuardError(why);
  const ArcIndex pin = candidates[depth];
  PartialSolutionSet out;
  for (Element v = 0; v < m; ++v) {
    Chain sub{{}, c.boundary};
    for (const auto& p : c.parts) {
      auto it = std::lower_bound(p.variables.begin(), p.variables.end(), pin);
      if (it == p.variables.end() || *it != pin) {
        sub.parts.push_back(p);
        continue;
      }
      const std::size_t col = it - p.variables.begin();
      std::vector<char> flags(p.row_count());
      for (std::size_t r = 0; r < p.row_count(); ++r) flags[r] = p.row(r)[col] == v;
      sub.parts.push_back(select_rows(p, flags));
    }
    auto part = fold_conditioned(sub, m, candidates, depth + 1, opts, warnings);
    if (out.variables.empty()) out.variables = part.variables;
    out.cells.insert(out.cells.end(), part.cells.begin(), part.cells.end());
  }
  if (out.cells.empty()) out.unit_rows = 0;
  return out;
}

}  // namespace

HomSet solve(const LinkDiagram& d, const FiniteQuandle& q, const SolveOptions& opts) {
  require_solvable(d, q);
  const ChunkPlan plan = partition_chunks(d, opts.chunk_size);
  HomSet h{d.name, q.spec(), d.arc_count, q.size(), {}, {}};
  if (plan.disconnected())
    h.warnings.push_back(fmt::format("diagram splits into {} disconnected crossing groups", plan.group_starts.size()));

  const std::size_t k = plan.chunks.size();
  Chain chain;
  chain.parts.resize(k);
  const std::int64_t nchunks = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(opts.threads))
  for (std::int64_t i = 0; i < nchunks; ++i) chain.parts[i] = enumerate_chunk(d, plan.chunks[i], q, 1);

  chain.boundary.resize(k + 1);
  std::vector<int> lifetime(d.arc_count, 0);
  {
    std::vector<char> before(d.arc_count, 0);
    std::vector<std::vector<char>> later(k + 1, std::vector<char>(d.arc_count, 0));
    for (std::size_t i = k; i-- > 0;) {
      later[i] = later[i + 1];
      for (auto a : plan.chunks[i].arcs) later[i][a] = 1;
    }
    for (std::size_t i = 0; i <= k; ++i) {
      if (i > 0)
        for (auto a : plan.chunks[i - 1].arcs) before[a] = 1;
      for (ArcIndex a = 0; a < d.arc_count; ++a)
        if (before[a] && later[i][a]) {
          chain.boundary[i].push_back(a);
          ++lifetime[a];
        }
    }
  }
  std::vector<ArcIndex> candidates;
  for (ArcIndex a = 0; a < d.arc_count; ++a)
    if (lifetime[a] > 0) candidates.push_back(a);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](ArcIndex x, ArcIndex y) { return lifetime[x] > lifetime[y]; });

  PartialSolutionSet acc = fold_conditioned(chain, q.size(), candidates, 0, opts, h.warnings);

  // Arcs untouched by any crossing are unconstrained.
  std::vector<char> constrained(d.arc_count, 0);
  for (auto v : acc.variables) constrained[v] = 1;
  std::vector<ArcIndex> loose;
  for (ArcIndex a = 0; a < d.arc_count; ++a)
    if (!constrained[a]) loose.push_back(a);
  if (acc.row_count() == 0) return h;

  const std::uint32_t m = q.size();
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < loose.size(); ++i) {
    combos *= m;
    if (combos * acc.row_count() > opts.row_cap)
      throw GuardError(fmt::format("{} unconstrained arcs over {} elements exceed the row cap {}", loose.size(), m,
                                   opts.row_cap));
  }
  const std::size_t n = d.arc_count;
  h.cells.reserve(acc.row_count() * combos * n);
  std::vector<Element> f(n, 0), loose_val(loose.size(), 0);
  for (std::size_t r = 0; r < acc.row_count(); ++r) {
    auto row = acc.row(r);
    for (std::size_t c = 0; c < acc.width(); ++c) f[acc.variables[c]] = row[c];
    std::fill(loose_val.begin(), loose_val.end(), 0);
    for (std::uint64_t k = 0; k < combos; ++k) {
      for (std::size_t i = 0; i < loose.size(); ++i) f[loose[i]] = loose_val[i];
      h.cells.insert(h.cells.end(), f.begin(), f.end());
      for (std::size_t i = loose.size(); i-- > 0;) {
        if (++loose_val[i] < m) break;
        loose_val[i] = 0;
      }
    }
  }
  sort_rows(h.cells, n);
  return h;
}

}  // namespace qie
