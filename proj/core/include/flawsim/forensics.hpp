#pragma once

#include <vector>

#include "flawsim/bitstring.hpp"
#include "flawsim/flaw_set.hpp"
#include "flawsim/model.hpp"
#include "flawsim/simulator.hpp"

namespace flawsim {

/// w_1..w_Z: flaws addressed along the bad prefix.
using WitnessSequence = std::vector<FlawId>;

WitnessSequence witness(const ChainModel& model, const Trajectory& trajectory);

struct BreakSequence {
  /// B_0*, ..., B_{Z-1}*, plus a trailing empty B_Z* when Z >= 1.
  std::vector<FlawSet> b_star;
  /// Diagnostics for indices 0..Z-1.
  std::vector<FlawSet> b;
  std::vector<FlawSet> collateral;  // O_i
  std::vector<FlawSet> lingering;   // N_i
  /// |B_0*|, |B_1*|, ..., |B_Z*|.
  std::vector<std::size_t> lengths;
  std::size_t z = 0;
};

/// B_0 = U(sigma_1); B_i = U(sigma_{i+1}) \ (U(sigma_i) \ w_i) for 1 <= i < Z;
/// O_i and N_i relative to the horizon t = Z; B_i* = B_i \ (O_i u N_i).
BreakSequence break_sets(const ChainModel& model, const Trajectory& trajectory);

/// E_1 = B_0*, E_{i+1} = (E_i - w_i) u B_i*, w_i = highest-priority flaw of
/// E_i. Z is the total number of elements over all B_i*. Throws CodecError
/// when some E_i is empty before step Z.
WitnessSequence reconstruct_witness(const std::vector<FlawSet>& b_star, const Priority& priority);

/// Same recurrence, also returning E_1..E_Z.
WitnessSequence reconstruct_witness(const std::vector<FlawSet>& b_star, const Priority& priority,
                                    std::vector<FlawSet>* e_sets);

/// m bits for B_0* (flaw index order), then 1^{L_i} 0 for i = 1..Z.
/// `lengths` is L_0..L_Z with L_0 = |B_0*|. Throws CodecError when the
/// running balance L_0 + sum_{i<=j} L_i - j hits zero before j = Z or is
/// nonzero at j = Z.
BitString encode(const FlawSet& b0_star, const std::vector<std::size_t>& lengths);

struct DecodedBreak {
  FlawSet b0_star;
  std::vector<std::size_t> lengths;

  friend bool operator==(const DecodedBreak&, const DecodedBreak&) = default;
};

/// Stops at the first j where the balance reaches zero. Throws CodecError
/// on truncated input or trailing bits.
DecodedBreak decode(const BitString& bits, std::size_t flaw_count);

/// Expected code length m + 2Z - |B_0*|.
std::size_t encoded_length(std::size_t flaw_count, std::size_t z, std::size_t b0_size);

}  // namespace flawsim
