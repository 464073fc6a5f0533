#pragma once

// Inductive and recursive freeness: chain search, verification, descent to
// localizations, hereditary checks and product checks.

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "euler_restriction.hpp"

namespace multiarr {

class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("search budget exhausted") {}
};

enum class StepOp { add, remove };
enum class ChainKind { inductive, recursive };

inline std::string to_string(StepOp op) { return op == StepOp::add ? "add" : "delete"; }
inline std::string to_string(ChainKind k) { return k == ChainKind::inductive ? "inductive" : "recursive"; }

struct ChainStep {
  StepOp op = StepOp::add;
  LinearForm hyperplane;
  std::string label;
  Exponents exponents_before, exponents_after, restriction_exponents;
};

struct Chain {
  ChainKind kind = ChainKind::inductive;
  Multiarrangement target;
  std::vector<ChainStep> steps;

  /// Phi_l followed by every intermediate multiarrangement; throws if the replay misses the target.
  std::vector<Multiarrangement> members() const {
    std::vector<Multiarrangement> out;
    Multiarrangement cur(target.dimension(), target.context());
    out.push_back(cur);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      try {
        cur = s.op == StepOp::add ? cur.added(s.hyperplane, s.label) : cur.removed(s.hyperplane);
      } catch (const ArrangementError& e) {
        throw ChainError("step " + std::to_string(i) + " cannot be replayed: " + e.what());
      }
      out.push_back(cur);
    }
    if (cur != target) throw ChainError("chain replay does not reach its target");
    return out;
  }
};

enum class SearchStatus { member, non_member, budget_exhausted };

inline std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::member:
      return "member";
    case SearchStatus::non_member:
      return "non_member";
    default:
      return "budget_exhausted";
  }
}

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t memo_hits = 0;
  std::size_t budget = 0;
};

struct SearchVerdict {
  SearchStatus status = SearchStatus::non_member;
  std::optional<Chain> chain;
  std::optional<Exponents> exponents;
  SearchStats stats;
  std::string scope;
};

/// Indices with nu(H) >= 1, by descending multiplicity then canonical order.
inline std::vector<std::size_t> heuristic_order(const Multiarrangement& a) {
  auto idx = a.active();
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return a[i].multiplicity > a[j].multiplicity; });
  return idx;
}

/// exp(A'') plus b + 1, where exp(A') = exp(A'') plus b.
inline Exponents added_exponents(const Exponents& deleted, const Exponents& restricted) {
  Exponents rest = multiset_difference(deleted, restricted);
  if (rest.size() != 1) throw AlgebraError("restriction exponents have the wrong length");
  Exponents out = restricted;
  out.push_back(rest[0] + 1);
  return sorted(out);
}

class InductiveSearcher {
 public:
  struct Entry {
    bool member = false;
    Exponents exponents;
    std::optional<LinearForm> pivot;
  };

  explicit InductiveSearcher(std::size_t budget = 100000) { stats_.budget = budget; }

  const SearchStats& stats() const { return stats_; }
  std::size_t memo_size() const { return memo_.size(); }
  const std::map<std::string, Entry>& memo() const { return memo_; }

  SearchVerdict search(const Multiarrangement& a) {
    stats_.nodes = 0;
    stats_.memo_hits = 0;
    SearchVerdict v;
    try {
      const Entry& e = decide(a);
      if (e.member) {
        v.status = SearchStatus::member;
        v.exponents = e.exponents;
        v.chain = chain(a);
      } else {
        v.status = SearchStatus::non_member;
        v.scope = "exhaustive";
      }
    } catch (const BudgetExhausted&) {
      v.status = SearchStatus::budget_exhausted;
      v.scope = "budget of " + std::to_string(stats_.budget) + " node expansions";
    }
    v.stats = stats_;
    return v;
  }

  /// Memoized membership in the inductively free class.
  const Entry& decide(const Multiarrangement& a) {
    const std::string key = a.key();
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    Entry e;
    if (a.order() == 0) {
      e.member = true;
      e.exponents = Exponents(a.dimension(), 0);
    } else if (a.rank() <= 2) {
      auto ex = free_exponents(a);
      if (!ex) throw AlgebraError("rank 2 multiarrangement is not free: " + a.to_string());
      e.member = true;
      e.exponents = *ex;
    } else {
      if (++stats_.nodes > stats_.budget) throw BudgetExhausted();
      const auto ex = free_exponents(a);
      if (ex) {
        for (auto h : heuristic_order(a)) {
          const Multiarrangement restricted = restriction_with_euler(a, h).arrangement;
          const Entry r2 = decide(restricted);
          if (!r2.member) continue;
          const Entry r1 = decide(deletion(a, h));
          if (!r1.member || !multiset_includes(r1.exponents, r2.exponents)) continue;
          e.member = true;
          e.exponents = added_exponents(r1.exponents, r2.exponents);
          e.pivot = a[h].form;
          if (e.exponents != *ex) throw AlgebraError("exponent bookkeeping disagrees with the oracle");
          break;
        }
      }
    }
    return memo_.emplace(key, std::move(e)).first->second;
  }

  /// Inductive chain of a member, rebuilt from the memo pivots.
  Chain chain(const Multiarrangement& a) {
    Chain c;
    c.kind = ChainKind::inductive;
    c.target = a.compacted();
    build(c.target, c.steps);
    return c;
  }

 private:
  void build(const Multiarrangement& a, std::vector<ChainStep>& steps) {
    if (a.order() == 0) return;
    const Entry e = decide(a);
    if (!e.member) throw ChainError("not an inductively free multiarrangement");
    const std::size_t h = e.pivot ? *a.find(*e.pivot) : heuristic_order(a).front();
    const Multiarrangement del = deletion(a, h);
    build(del, steps);
    ChainStep s;
    s.op = StepOp::add;
    s.hyperplane = a[h].form;
    s.label = a[h].label;
    s.exponents_before = decide(del).exponents;
    s.exponents_after = e.exponents;
    s.restriction_exponents = decide(restriction_with_euler(a, h).arrangement).exponents;
    steps.push_back(std::move(s));
  }

  SearchStats stats_;
  std::map<std::string, Entry> memo_;
};

inline SearchVerdict inductive_search(const Multiarrangement& a, std::size_t budget = 100000) {
  InductiveSearcher s(budget);
  return s.search(a);
}

/// Capped breadth-first search over multiplicity vectors on a hyperplane pool using the
/// addition and deletion rules of recursive freeness.
class RecursiveSearcher {
 public:
  RecursiveSearcher(unsigned multiplicity_cap = 3, std::size_t budget = 100000) : cap_(multiplicity_cap) {
    stats_.budget = budget;
  }

  const SearchStats& stats() const { return stats_; }

  SearchVerdict search(const Multiarrangement& target, const std::vector<LinearForm>& pool_in = {}) {
    SearchVerdict v;
    stats_.nodes = 0;
    stats_.memo_hits = 0;
    const Multiarrangement goal = target.compacted();
    const auto ex = free_exponents(goal);
    if (!ex) {
      v.status = SearchStatus::non_member;
      v.scope = "not free";
      v.stats = stats_;
      return v;
    }
    {
      InductiveSearcher ind(stats_.budget);
      SearchVerdict iv = ind.search(goal);
      if (iv.status == SearchStatus::member) {
        iv.chain->kind = ChainKind::recursive;
        iv.stats.budget = stats_.budget;
        iv.scope = "inductive chain";
        return iv;
      }
    }
    std::vector<LinearForm> pool = pool_in;
    for (const auto& h : goal.hyperplanes())
      if (std::find(pool.begin(), pool.end(), h.form) == pool.end()) {
        if (!pool_in.empty()) throw ArrangementError("pool must contain the support of the target");
        pool.push_back(h.form);
      }
    std::sort(pool.begin(), pool.end());
    const unsigned cap = std::max(cap_, goal.max_multiplicity());
    v.scope = "pool of " + std::to_string(pool.size()) + " hyperplanes, multiplicities <= " + std::to_string(cap);

    using Node = std::vector<unsigned>;
    auto build_node = [&](const Node& n) {
      std::vector<Hyperplane> hs;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (n[i] > 0) {
          auto j = goal.find(pool[i]);
          hs.push_back({pool[i], n[i], j ? goal[*j].label : std::string()});
        }
      return Multiarrangement::from_hyperplanes(goal.dimension(), goal.context(), std::move(hs));
    };
    Node goal_node(pool.size(), 0);
    for (std::size_t i = 0; i < pool.size(); ++i) goal_node[i] = goal.multiplicity_of(pool[i]);

    struct Info {
      Exponents exponents;
      std::optional<Node> parent;
      ChainStep step;
    };
    std::map<Node, Info> seen;
    std::deque<Node> queue;
    Node start(pool.size(), 0);
    seen[start].exponents = Exponents(goal.dimension(), 0);
    queue.push_back(start);
    bool inconclusive = false;
    try {
      while (!queue.empty()) {
        const Node n = queue.front();
        queue.pop_front();
        if (n == goal_node) {
          v.status = SearchStatus::member;
          v.exponents = seen[n].exponents;
          Chain c;
          c.kind = ChainKind::recursive;
          c.target = goal;
          for (Node cur = n; seen[cur].parent; cur = *seen[cur].parent) c.steps.push_back(seen[cur].step);
          std::reverse(c.steps.begin(), c.steps.end());
          v.chain = std::move(c);
          v.stats = stats_;
          return v;
        }
        if (++stats_.nodes > stats_.budget) throw BudgetExhausted();
        const Multiarrangement na = build_node(n);
        const Exponents en = seen[n].exponents;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          // addition N -> N + H
          if (n[i] < cap) {
            Node m = n;
            ++m[i];
            if (!seen.count(m)) {
              const Multiarrangement ma = build_node(m);
              const std::size_t h = *ma.find(pool[i]);
              const auto r = restriction_member(restriction_with_euler(ma, h).arrangement, inconclusive);
              if (r && multiset_includes(en, *r)) {
                Info info;
                info.exponents = added_exponents(en, *r);
                confirm(ma, info.exponents);
                info.parent = n;
                info.step = {StepOp::add, pool[i], ma[h].label, en, info.exponents, *r};
                seen.emplace(m, std::move(info));
                queue.push_back(m);
              }
            }
          }
          // deletion N -> N - H
          if (n[i] > 0) {
            Node m = n;
            --m[i];
            if (!seen.count(m)) {
              const std::size_t h = *na.find(pool[i]);
              const auto r = restriction_member(restriction_with_euler(na, h).arrangement, inconclusive);
              if (r && multiset_includes(en, *r)) {
                const Exponents rest = multiset_difference(en, *r);
                if (rest[0] == 0) continue;
                Info info;
                info.exponents = sorted([&] {
                  Exponents e = *r;
                  e.push_back(rest[0] - 1);
                  return e;
                }());
                confirm(build_node(m), info.exponents);
                info.parent = n;
                info.step = {StepOp::remove, pool[i], na[h].label, en, info.exponents, *r};
                seen.emplace(m, std::move(info));
                queue.push_back(m);
              }
            }
          }
        }
      }
    } catch (const BudgetExhausted&) {
      v.status = SearchStatus::budget_exhausted;
      v.scope += ", budget of " + std::to_string(stats_.budget) + " node expansions";
      v.stats = stats_;
      return v;
    }
    v.status = inconclusive ? SearchStatus::budget_exhausted : SearchStatus::non_member;
    if (inconclusive) v.scope += ", some restriction searches were inconclusive";
    v.stats = stats_;
    return v;
  }

 private:
  static void confirm(const Multiarrangement& a, const Exponents& e) {
    const auto ex = free_exponents(a);
    if (!ex || *ex != e) throw AlgebraError("recursive bookkeeping disagrees with the oracle");
  }

  /// Exponents of a restriction if it is recursively free (within caps).
  std::optional<Exponents> restriction_member(const Multiarrangement& r, bool& inconclusive) {
    const std::string key = r.key();
    if (auto it = restriction_memo_.find(key); it != restriction_memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    std::optional<Exponents> out;
    if (r.order() == 0 || r.rank() <= 2) {
      out = free_exponents(r);
    } else {
      RecursiveSearcher sub(cap_, stats_.budget);
      const SearchVerdict sv = sub.search(r);
      if (sv.status == SearchStatus::member) out = sv.exponents;
      if (sv.status == SearchStatus::budget_exhausted) inconclusive = true;
    }
    restriction_memo_.emplace(key, out);
    return out;
  }

  unsigned cap_;
  SearchStats stats_;
  std::map<std::string, std::optional<Exponents>> restriction_memo_;
};

inline SearchVerdict recursive_search(const Multiarrangement& a, unsigned multiplicity_cap = 3,
                                      std::size_t budget = 100000, const std::vector<LinearForm>& pool = {}) {
  RecursiveSearcher s(multiplicity_cap, budget);
  return s.search(a, pool);
}

/// Whether the multiarrangement belongs to the class (restrictions of rank <= 2 always do).
inline bool class_member(const Multiarrangement& a, ChainKind kind, std::size_t budget = 100000) {
  if (a.order() == 0 || a.rank() <= 2) return true;
  if (inductive_search(a, budget).status == SearchStatus::member) return true;
  if (kind == ChainKind::inductive) return false;
  return recursive_search(a, std::max(3u, a.max_multiplicity()), budget).status == SearchStatus::member;
}

struct ChainCheck {
  bool ok = true;
  std::optional<std::size_t> failing_step;
  std::string message;
};

/// Recomputes every triple along the chain and certifies the required freeness and exponents.
inline ChainCheck verify_chain(const Chain& chain, std::size_t budget = 100000) {
  const auto members = chain.members();
  ChainCheck out;
  auto fail = [&](std::size_t i, const std::string& msg) {
    out.ok = false;
    out.failing_step = i;
    out.message = msg;
    return out;
  };
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const ChainStep& s = chain.steps[i];
    if (chain.kind == ChainKind::inductive && s.op != StepOp::add) return fail(i, "deletion step in an inductive chain");
    const Multiarrangement& before = members[i];
    const Multiarrangement& after = members[i + 1];
    const Multiarrangement& big = s.op == StepOp::add ? after : before;
    const Multiarrangement& small = s.op == StepOp::add ? before : after;
    const std::size_t h = *big.find(s.hyperplane);
    const Multiarrangement restricted = restriction_with_euler(big, h).arrangement;
    const auto eb = free_exponents(big), es = free_exponents(small), er = free_exponents(restricted);
    if (!eb || !es || !er) return fail(i, "a member of the triple is not free");
    const Exponents& rec_big = s.op == StepOp::add ? s.exponents_after : s.exponents_before;
    const Exponents& rec_small = s.op == StepOp::add ? s.exponents_before : s.exponents_after;
    if (sorted(rec_big) != *eb || sorted(rec_small) != *es || sorted(s.restriction_exponents) != *er)
      return fail(i, "recorded exponents disagree with the oracle");
    const Exponents& host = s.op == StepOp::add ? *es : *eb;
    if (!multiset_includes(host, *er)) return fail(i, "restriction exponents are not included");
    const Exponents db = multiset_difference(*eb, *er), ds = multiset_difference(*es, *er);
    if (db.size() != 1 || ds.size() != 1 || db[0] != ds[0] + 1)
      return fail(i, "exponents do not follow the addition-deletion pattern");
    if (restricted.rank() > 2 && !class_member(restricted, chain.kind, budget))
      return fail(i, "restriction is not in the class");
  }
  return out;
}

/// Localizes every member at X, removes consecutive repeats and recomputes exponents.
inline Chain descend_chain(const Chain& chain, const NormalSpan& x) {
  const auto members = chain.members();
  std::vector<Multiarrangement> local;
  for (const auto& m : members) {
    Multiarrangement l = localize(m, x);
    if (local.empty() || local.back() != l) local.push_back(std::move(l));
  }
  Chain out;
  out.kind = chain.kind;
  out.target = local.back();
  for (std::size_t i = 0; i + 1 < local.size(); ++i) {
    const Multiarrangement& a = local[i];
    const Multiarrangement& b = local[i + 1];
    const bool add = b.order() > a.order();
    const Multiarrangement& big = add ? b : a;
    const Multiarrangement& small = add ? a : b;
    std::optional<std::size_t> h;
    for (std::size_t j = 0; j < big.size(); ++j)
      if (big[j].multiplicity != small.multiplicity_of(big[j].form)) h = j;
    if (!h) throw ChainError("localized members do not differ by a unit step");
    ChainStep s;
    s.op = add ? StepOp::add : StepOp::remove;
    s.hyperplane = big[*h].form;
    s.label = big[*h].label;
    const auto ea = free_exponents(a), eb = free_exponents(b);
    const auto er = free_exponents(restriction_with_euler(big, *h).arrangement);
    if (!ea || !eb || !er) throw ChainError("localized chain member is not free");
    s.exponents_before = *ea;
    s.exponents_after = *eb;
    s.restriction_exponents = *er;
    out.steps.push_back(std::move(s));
  }
  return out;
}
inline Chain descend_chain(const Chain& chain, const Flat& x) { return descend_chain(chain, x.span); }

struct HereditaryEntry {
  Flat flat;
  Multiarrangement restriction;
  SearchStatus status = SearchStatus::non_member;
};

struct HereditaryReport {
  std::vector<HereditaryEntry> entries;
  bool hereditarily_inductively_free = true;
  bool conclusive = true;
};

/// Runs the inductive search on (A^Y, nu*) for every Y in L(A), restrictions taken along the order.
inline HereditaryReport hereditary_inductive_check(const Multiarrangement& a, const std::vector<std::size_t>& order,
                                                   std::size_t budget = 100000) {
  HereditaryReport rep;
  InductiveSearcher searcher(budget);
  for (const auto& y : intersection_lattice(a).flats) {
    HereditaryEntry e;
    e.flat = y;
    e.restriction = iterated_restriction(a, y, order).arrangement;
    e.status = searcher.search(e.restriction).status;
    if (e.status != SearchStatus::member) rep.hereditarily_inductively_free = false;
    if (e.status == SearchStatus::budget_exhausted) rep.conclusive = false;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

enum class ProductCheck { equivalent, not_equivalent, inconclusive };

inline std::string to_string(ProductCheck p) {
  switch (p) {
    case ProductCheck::equivalent:
      return "equivalent";
    case ProductCheck::not_equivalent:
      return "not_equivalent";
    default:
      return "inconclusive";
  }
}

struct ProductReport {
  ProductCheck result = ProductCheck::inconclusive;
  SearchStatus product = SearchStatus::non_member, first = SearchStatus::non_member, second = SearchStatus::non_member;
};

/// Membership of A1 x A2 against membership of both factors.
inline ProductReport product_class_check(const Multiarrangement& a1, const Multiarrangement& a2, ChainKind kind,
                                         std::size_t budget = 100000, unsigned multiplicity_cap = 3) {
  auto run = [&](const Multiarrangement& a) {
    return kind == ChainKind::inductive ? inductive_search(a, budget).status
                                        : recursive_search(a, std::max(multiplicity_cap, a.max_multiplicity()), budget)
                                              .status;
  };
  ProductReport rep;
  rep.first = run(a1);
  rep.second = run(a2);
  rep.product = run(product(a1, a2));
  if (rep.first == SearchStatus::budget_exhausted || rep.second == SearchStatus::budget_exhausted ||
      rep.product == SearchStatus::budget_exhausted) {
    rep.result = ProductCheck::inconclusive;
    return rep;
  }
  const bool factors = rep.first == SearchStatus::member && rep.second == SearchStatus::member;
  rep.result = factors == (rep.product == SearchStatus::member) ? ProductCheck::equivalent : ProductCheck::not_equivalent;
  return rep;
}

/// Exponents of the members of a triple; two given, the third inferred.
struct TripleExponents {
  std::optional<Exponents> original, deleted, restricted;
};

inline TripleExponents addition_deletion_infer(const TripleExponents& known) {
  const int given = known.original.has_value() + known.deleted.has_value() + known.restricted.has_value();
  if (given != 2) throw AlgebraError("exactly two triple members must be given");
  TripleExponents out = known;
  auto bad = [] { return AlgebraError("exponent patterns are inconsistent"); };
  if (known.original && known.deleted) {
    const Exponents a = sorted(*known.original), d = sorted(*known.deleted);
    if (a.size() != d.size()) throw bad();
    // exactly one entry b of A becomes b - 1 in A'
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      Exponents trial = a;
      --trial[i];
      if (sorted(trial) == d) {
        Exponents r = a;
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(i));
        out.restricted = r;
        return out;
      }
    }
    throw bad();
  }
  if (known.deleted && known.restricted) {
    if (known.deleted->size() != known.restricted->size() + 1 || !multiset_includes(*known.deleted, *known.restricted))
      throw bad();
    out.original = added_exponents(sorted(*known.deleted), sorted(*known.restricted));
    return out;
  }
  if (known.original->size() != known.restricted->size() + 1 || !multiset_includes(*known.original, *known.restricted))
    throw bad();
  const Exponents rest = multiset_difference(*known.original, *known.restricted);
  if (rest[0] == 0) throw bad();
  Exponents d = *known.restricted;
  d.push_back(rest[0] - 1);
  out.deleted = sorted(d);
  return out;
}

}  // namespace multiarr
