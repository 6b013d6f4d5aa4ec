#pragma once

#include <cstdint>

#include "pald/pald.hpp"
#include "pald/pannld.hpp"

namespace pald {

struct CompareReport {
  std::size_t n = 0;
  double ari = 0.0;
  std::uint64_t pald_oracle_calls = 0;
  std::uint64_t pannld_oracle_calls = 0;  // KNN comparisons plus table sorts
  std::uint64_t pald_steps = 0;
  std::uint64_t pannld_steps = 0;
  double pald_tau = 0.0;
  double pannld_tau = 0.0;
  std::size_t entries = 0;  // promoted pairs (both directions) plus the diagonal
  double max_delta = 0.0;   // max |C^F - C| over those entries
  double mean_delta = 0.0;
};

/// Runs both pipelines on the same system. Refuses inputs above options.max_n for PaLD.
CompareReport compare_pipelines(const RankingSystem& rs, const PannldOptions& pannld,
                                const ExactOptions& exact = {});

}  // namespace pald
