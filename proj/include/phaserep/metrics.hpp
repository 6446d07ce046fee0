#ifndef PHASEREP_METRICS_HPP
#define PHASEREP_METRICS_HPP

#include <vector>

#include "phaserep/phase_model.hpp"

namespace phaserep {

// Mean Frobenius distance between true and estimated per-source onset
// matrices: (1/K) sum_k ||truth[k] - estimate[k]||_F.
double onset_estimation_error(const std::vector<OnsetMatrix>& truth,
                              const std::vector<OnsetMatrix>& estimate);

struct Scores {
  double sdr = 0.0;
  double sir = 0.0;
  double sar = 0.0;
};

// Energy-ratio separation scores of one estimated source against the set of
// true sources. The estimate is projected onto the subspace spanned by
// short-delayed copies of the references (taps delays per reference, the
// usual allowed-distortion convention, so a mild filtering of the true
// source is not punished): the component explained by the matching
// reference's own delays is the target, the rest of the subspace projection
// is interference, and the unexplained remainder is artifact. Sources are
// matched by index — no permutation search. Ratios in dB, clamped to
// [-200, 200]; an estimate that equals its reference exactly scores the
// +200 dB sentinel across the board.
Scores bss_scores(const std::vector<double>& estimate,
                  const std::vector<std::vector<double>>& references, std::size_t index,
                  std::size_t taps = 32);

// Scores for every estimate against the same reference set, index-aligned.
std::vector<Scores> bss_scores_all(const std::vector<std::vector<double>>& estimates,
                                   const std::vector<std::vector<double>>& references,
                                   std::size_t taps = 32);

}  // namespace phaserep

#endif  // PHASEREP_METRICS_HPP
