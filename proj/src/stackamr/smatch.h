#ifndef STACKAMR_SMATCH_H
#define STACKAMR_SMATCH_H

// Smatch precision/recall/F1 between AMR graphs: hill climbing over variable
// mappings, plus a brute-force exact search for small graphs.

#include <map>
#include <string>
#include <vector>

#include "stackamr/amr_graph.h"

namespace stackamr {

struct MappingSearchResult {
  std::map<std::string, std::string> mapping;  // gold var -> pred var
  int matched = 0;
  int gold_triples = 0;
  int pred_triples = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Hill climbing with `restarts` starts: a concept-match seed first, then
// random seeds from a per-pair deterministic seed. Moves are single
// reassignments and swaps, applied greedily until no improvement.
MappingSearchResult smatch_score(const AmrGraph& gold, const AmrGraph& pred,
                                 int restarts = 4);

// Exhaustive search over all injections; globally optimal matched count.
// Refuses when min(|gold vars|, |pred vars|) > 8.
MappingSearchResult brute_force_score(const AmrGraph& gold,
                                      const AmrGraph& pred);

struct CorpusScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long matched = 0;
  long gold_triples = 0;
  long pred_triples = 0;
};

// Micro-average over sentence pairs. Empty input scores 0 with a warning on
// stderr.
CorpusScore corpus_score(const std::vector<AmrGraph>& gold,
                         const std::vector<AmrGraph>& pred, int restarts = 4);

}  // namespace stackamr

#endif  // STACKAMR_SMATCH_H
