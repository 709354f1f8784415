#pragma once

#include <cstdint>
#include <vector>

#include "coarse/filtration.hpp"
#include "coarse/sparse_operator.hpp"

namespace coarse {

/// Per-sample record of the localization probe.
struct ONLSample {
  double norm = 0;                 // ||a||
  Index center = -1;               // ball center achieving the best ratio
  std::vector<Index> ball;         // candidate set of the witness
  std::vector<double> ratio_by_level;  // best ratio at each searched level
  std::vector<Complex> witness;    // unit vector supported in the ball
};

/// Probe for norm localization: seeded operators supported in level(kE)
/// are tested for unit vectors, supported in level-k balls, that realize
/// at least (1 - 1/m) of the operator norm. Candidate sets range over
/// balls of the filtration levels rather than all bounded subsets; this
/// restriction is recorded in the report.
struct ONLReport {
  int entourage_level = 0;  // kE
  int m = 0;
  int num_samples = 0;
  std::uint64_t seed = 0;
  double threshold = 0;     // 1 - 1/m
  bool positive = false;
  int localization_level = -1;  // minimal passing k, or deepest searched
  double worst_ratio = 0;       // min over samples at the reported level
  bool candidates_are_balls = true;
  std::vector<ONLSample> samples;
};

/// Acceptance tolerance: ratios within 1e-9 of the threshold count as
/// passing, standing in for the strict inequality of the exact notion.
ONLReport onl_probe(const CoarseFiltration& f, int entourage_level, int m,
                    int num_samples, std::uint64_t seed);

/// Checks a family xi of vectors indexed by the ground set: each must be a
/// unit vector supported in the level(kF) ball of its point, and pairs
/// related at level(kE) must satisfy ||xi_x - xi_x'|| < 1/m.
bool propertyA_witness_check(const CoarseFiltration& f, int entourage_level, int m,
                             int support_level,
                             const std::vector<std::vector<Complex>>& xi);

}  // namespace coarse
