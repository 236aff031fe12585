#include "stackamr/smatch.h"

#include <algorithm>
#include <iostream>
#include <random>
#include <set>
#include <tuple>

namespace stackamr {

namespace {

using AttrKey = std::tuple<std::string, int, std::string>;  // label, var, value
using RelKey = std::tuple<std::string, int, int>;           // label, head, tail

// Triple sets of one pair, variables replaced by dense indices.
struct PairIndex {
  std::vector<std::string> gold_vars, pred_vars;
  std::vector<std::string> gold_concept, pred_concept;
  std::vector<std::pair<int, std::string>> gold_inst;  // var, concept (deduped)
  std::vector<AttrKey> gold_attrs;
  std::vector<RelKey> gold_rels;
  std::set<std::pair<int, std::string>> pred_inst;
  std::set<AttrKey> pred_attrs;
  std::set<RelKey> pred_rels;
  int gold_total = 0;
  int pred_total = 0;

  int eval(const std::vector<int>& m) const {
    int matched = 0;
    for (const auto& [v, c] : gold_inst)
      if (m[v] >= 0 && pred_inst.count({m[v], c})) ++matched;
    for (const auto& [l, v, val] : gold_attrs)
      if (m[v] >= 0 && pred_attrs.count({l, m[v], val})) ++matched;
    for (const auto& [l, h, t] : gold_rels)
      if (m[h] >= 0 && m[t] >= 0 && pred_rels.count({l, m[h], m[t]})) ++matched;
    return matched;
  }
};

std::vector<std::string> sorted_vars(const AmrGraph& g) {
  std::vector<std::string> vars;
  for (const auto& [v, c] : g.nodes) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  return vars;
}

int var_index(const std::vector<std::string>& vars, const std::string& v) {
  return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) -
                          vars.begin());
}

PairIndex build_index(const AmrGraph& gold, const AmrGraph& pred) {
  PairIndex idx;
  idx.gold_vars = sorted_vars(gold);
  idx.pred_vars = sorted_vars(pred);
  idx.gold_concept.resize(idx.gold_vars.size());
  idx.pred_concept.resize(idx.pred_vars.size());

  std::set<std::pair<int, std::string>> ginst;
  std::set<AttrKey> gattr;
  std::set<RelKey> grel;
  for (const Triple& t : to_triples(gold)) {
    int a1 = var_index(idx.gold_vars, t.arg1);
    switch (t.kind) {
      case TripleKind::kInstance:
        idx.gold_concept[a1] = t.arg2;
        ginst.insert({a1, t.arg2});
        break;
      case TripleKind::kAttribute:
        gattr.insert({t.relation, a1, t.arg2});
        break;
      case TripleKind::kRelation:
        grel.insert({t.relation, a1, var_index(idx.gold_vars, t.arg2)});
        break;
    }
  }
  idx.gold_inst.assign(ginst.begin(), ginst.end());
  idx.gold_attrs.assign(gattr.begin(), gattr.end());
  idx.gold_rels.assign(grel.begin(), grel.end());
  idx.gold_total = static_cast<int>(ginst.size() + gattr.size() + grel.size());

  for (const Triple& t : to_triples(pred)) {
    int a1 = var_index(idx.pred_vars, t.arg1);
    switch (t.kind) {
      case TripleKind::kInstance:
        idx.pred_concept[a1] = t.arg2;
        idx.pred_inst.insert({a1, t.arg2});
        break;
      case TripleKind::kAttribute:
        idx.pred_attrs.insert({t.relation, a1, t.arg2});
        break;
      case TripleKind::kRelation:
        idx.pred_rels.insert(
            {t.relation, a1, var_index(idx.pred_vars, t.arg2)});
        break;
    }
  }
  idx.pred_total = static_cast<int>(idx.pred_inst.size() +
                                    idx.pred_attrs.size() +
                                    idx.pred_rels.size());
  return idx;
}

MappingSearchResult finish(const PairIndex& idx, const std::vector<int>& m,
                           int matched) {
  MappingSearchResult r;
  r.matched = matched;
  r.gold_triples = idx.gold_total;
  r.pred_triples = idx.pred_total;
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i] >= 0) r.mapping[idx.gold_vars[i]] = idx.pred_vars[m[i]];
  r.precision = idx.pred_total > 0 ? double(matched) / idx.pred_total : 0.0;
  r.recall = idx.gold_total > 0 ? double(matched) / idx.gold_total : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

uint64_t pair_seed(const PairIndex& idx) {
  // FNV-1a over the triple sets, stable across runs.
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& [v, c] : idx.gold_inst) mix(std::to_string(v) + c);
  for (const auto& [l, v, val] : idx.gold_attrs) mix(l + std::to_string(v) + val);
  for (const auto& [l, a, b] : idx.gold_rels)
    mix(l + std::to_string(a) + "," + std::to_string(b));
  for (const auto& [v, c] : idx.pred_inst) mix(std::to_string(v) + c);
  for (const auto& [l, v, val] : idx.pred_attrs) mix(l + std::to_string(v) + val);
  for (const auto& [l, a, b] : idx.pred_rels)
    mix(l + std::to_string(a) + "," + std::to_string(b));
  return h;
}

// Extends m to a maximal injection: unmapped gold vars take unused pred vars
// in order. Mapping more never lowers the matched count.
void saturate(const PairIndex& idx, std::vector<int>* m) {
  std::vector<bool> used(idx.pred_vars.size(), false);
  for (int j : *m)
    if (j >= 0) used[j] = true;
  size_t next = 0;
  for (int& j : *m) {
    if (j >= 0) continue;
    while (next < used.size() && used[next]) ++next;
    if (next >= used.size()) break;
    j = static_cast<int>(next);
    used[next] = true;
  }
}

std::vector<int> concept_seed(const PairIndex& idx) {
  std::vector<int> m(idx.gold_vars.size(), -1);
  std::vector<bool> used(idx.pred_vars.size(), false);
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = 0; j < idx.pred_vars.size(); ++j) {
      if (!used[j] && idx.pred_concept[j] == idx.gold_concept[i]) {
        m[i] = static_cast<int>(j);
        used[j] = true;
        break;
      }
    }
  }
  saturate(idx, &m);
  return m;
}

std::vector<int> random_seed(const PairIndex& idx, std::mt19937_64& rng) {
  std::vector<int> perm(idx.pred_vars.size());
  for (size_t j = 0; j < perm.size(); ++j) perm[j] = static_cast<int>(j);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> m(idx.gold_vars.size(), -1);
  for (size_t i = 0; i < m.size() && i < perm.size(); ++i) m[i] = perm[i];
  return m;
}

// Greedy single-reassignment / pair-swap moves until a local optimum.
int climb(const PairIndex& idx, std::vector<int>* m) {
  int score = idx.eval(*m);
  const int n_gold = static_cast<int>(idx.gold_vars.size());
  const int n_pred = static_cast<int>(idx.pred_vars.size());
  for (;;) {
    int best = score;
    std::vector<int> best_m;
    std::vector<bool> used(n_pred, false);
    for (int j : *m)
      if (j >= 0) used[j] = true;
    for (int i = 0; i < n_gold; ++i) {
      int old = (*m)[i];
      for (int j = -1; j < n_pred; ++j) {
        if (j == old) continue;
        if (j >= 0 && used[j]) continue;
        (*m)[i] = j;
        int s = idx.eval(*m);
        if (s > best) {
          best = s;
          best_m = *m;
        }
      }
      (*m)[i] = old;
    }
    for (int i = 0; i + 1 < n_gold; ++i) {
      for (int k = i + 1; k < n_gold; ++k) {
        std::swap((*m)[i], (*m)[k]);
        int s = idx.eval(*m);
        if (s > best) {
          best = s;
          best_m = *m;
        }
        std::swap((*m)[i], (*m)[k]);
      }
    }
    if (best == score) return score;
    *m = best_m;
    score = best;
  }
}

}  // namespace

MappingSearchResult smatch_score(const AmrGraph& gold, const AmrGraph& pred,
                                 int restarts) {
  SAMR_CHECK(restarts >= 1, "smatch needs at least one restart");
  PairIndex idx = build_index(gold, pred);
  if (idx.gold_vars.empty() || idx.pred_vars.empty())
    return finish(idx, std::vector<int>(idx.gold_vars.size(), -1), 0);

  std::mt19937_64 rng(pair_seed(idx));
  std::vector<int> best_m;
  int best = -1;
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> m = r == 0 ? concept_seed(idx) : random_seed(idx, rng);
    int s = climb(idx, &m);
    if (s > best || (s == best && m < best_m)) {
      best = s;
      best_m = m;
    }
  }
  return finish(idx, best_m, best);
}

MappingSearchResult brute_force_score(const AmrGraph& gold,
                                      const AmrGraph& pred) {
  PairIndex idx = build_index(gold, pred);
  const int n_gold = static_cast<int>(idx.gold_vars.size());
  const int n_pred = static_cast<int>(idx.pred_vars.size());
  if (std::min(n_gold, n_pred) > 8)
    throw InputError("brute-force smatch refused: both graphs exceed 8 variables");
  if (n_gold == 0 || n_pred == 0)
    return finish(idx, std::vector<int>(n_gold, -1), 0);

  // Enumerate injections of the smaller side; a maximal mapping is always
  // optimal because extending a mapping never unmatches a triple.
  std::vector<int> m(n_gold, -1);
  std::vector<bool> used(n_pred, false);
  std::vector<int> best_m;
  int best = -1;
  long long nodes_visited = 0;
  auto recurse = [&](auto&& self, int i) -> void {
    if (++nodes_visited > 50'000'000)
      throw InputError("brute-force smatch refused: search space too large");
    if (i == n_gold) {
      int s = idx.eval(m);
      if (s > best || (s == best && m < best_m)) {
        best = s;
        best_m = m;
      }
      return;
    }
    bool any_free = false;
    for (int j = 0; j < n_pred; ++j) {
      if (used[j]) continue;
      any_free = true;
      used[j] = true;
      m[i] = j;
      self(self, i + 1);
      used[j] = false;
      m[i] = -1;
    }
    if (!any_free) self(self, i + 1);  // more gold vars than pred vars
  };
  recurse(recurse, 0);
  return finish(idx, best_m, best);
}

CorpusScore corpus_score(const std::vector<AmrGraph>& gold,
                         const std::vector<AmrGraph>& pred, int restarts) {
  if (gold.size() != pred.size())
    throw InputError("corpus_score: gold has " + std::to_string(gold.size()) +
                     " graphs but pred has " + std::to_string(pred.size()));
  CorpusScore score;
  if (gold.empty()) {
    std::cerr << "warning: corpus_score over an empty corpus, reporting 0\n";
    return score;
  }
  for (size_t i = 0; i < gold.size(); ++i) {
    MappingSearchResult r = smatch_score(gold[i], pred[i], restarts);
    score.matched += r.matched;
    score.gold_triples += r.gold_triples;
    score.pred_triples += r.pred_triples;
  }
  score.precision =
      score.pred_triples > 0 ? double(score.matched) / score.pred_triples : 0.0;
  score.recall =
      score.gold_triples > 0 ? double(score.matched) / score.gold_triples : 0.0;
  score.f1 = (score.precision + score.recall) > 0.0
                 ? 2.0 * score.precision * score.recall /
                       (score.precision + score.recall)
                 : 0.0;
  return score;
}

}  // namespace stackamr
