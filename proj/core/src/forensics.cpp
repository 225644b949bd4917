#include "flawsim/forensics.hpp"

#include "flawsim/error.hpp"

namespace flawsim {

WitnessSequence witness(const ChainModel& model, const Trajectory& trajectory) {
  WitnessSequence w;
  w.reserve(trajectory.z);
  for (std::size_t i = 0; i < trajectory.z; ++i) {
    const auto f = model.addressed_flaw(trajectory.states[i]);
    if (!f) throw ModelError("bad prefix contains a flawless state");
    w.push_back(*f);
  }
  return w;
}

BreakSequence break_sets(const ChainModel& model, const Trajectory& trajectory) {
  const std::size_t m = model.flaw_count();
  const std::size_t z = trajectory.z;
  BreakSequence bs;
  bs.z = z;
  if (z == 0) {
    bs.b_star.push_back(model.present_flaws(trajectory.states.at(0)));
    bs.b = bs.b_star;
    bs.collateral.assign(1, FlawSet(m));
    bs.lingering.assign(1, FlawSet(m));
    bs.lengths.push_back(bs.b_star[0].count());
    return bs;
  }
  if (trajectory.states.size() < z + 1) throw ModelError("trajectory is shorter than its bad prefix");

  // u[k] = U(sigma_{k+1}) for k = 0..Z; w[k] = w_{k+1} for k = 0..Z-1.
  std::vector<FlawSet> u;
  u.reserve(z + 1);
  for (std::size_t k = 0; k <= z; ++k) u.push_back(model.present_flaws(trajectory.states[k]));
  const WitnessSequence w = witness(model, trajectory);

  bs.b.reserve(z);
  bs.b.push_back(u[0]);
  for (std::size_t i = 1; i < z; ++i) {
    FlawSet kept = u[i - 1];
    kept.erase(w[i - 1]);
    bs.b.push_back(u[i] - kept);
  }

  for (std::size_t i = 0; i < z; ++i) {
    FlawSet star(m);
    FlawSet o(m);
    FlawSet n(m);
    // Follow each introduced flaw forward over steps j = i+1..Z until it is
    // addressed (B*), vanishes unaddressed (O), or outlives the horizon (N).
    bs.b[i].for_each([&](FlawId f) {
      for (std::size_t j = i + 1; j <= z; ++j) {
        if (w[j - 1] == f) {
          star.insert(f);
          return;
        }
        if (!u[j].contains(f)) {
          o.insert(f);
          return;
        }
      }
      n.insert(f);
    });
    bs.b_star.push_back(std::move(star));
    bs.collateral.push_back(std::move(o));
    bs.lingering.push_back(std::move(n));
  }
  bs.b_star.emplace_back(m);

  bs.lengths.reserve(z + 1);
  for (const auto& s : bs.b_star) bs.lengths.push_back(s.count());
  return bs;
}

WitnessSequence reconstruct_witness(const std::vector<FlawSet>& b_star, const Priority& priority) {
  return reconstruct_witness(b_star, priority, nullptr);
}

WitnessSequence reconstruct_witness(const std::vector<FlawSet>& b_star, const Priority& priority,
                                    std::vector<FlawSet>* e_sets) {
  if (b_star.empty()) return {};
  std::size_t z = 0;
  for (const auto& s : b_star) z += s.count();
  WitnessSequence w;
  w.reserve(z);
  FlawSet e = b_star[0];
  for (std::size_t i = 1; i <= z; ++i) {
    const auto top = priority.highest(e);
    if (!top) throw CodecError("malformed break sequence: E_" + std::to_string(i) + " is empty");
    if (e_sets != nullptr) e_sets->push_back(e);
    w.push_back(*top);
    e.erase(*top);
    if (i < b_star.size()) e |= b_star[i];
  }
  return w;
}

std::size_t encoded_length(std::size_t flaw_count, std::size_t z, std::size_t b0_size) {
  return flaw_count + 2 * z - b0_size;
}

BitString encode(const FlawSet& b0_star, const std::vector<std::size_t>& lengths) {
  if (lengths.empty() || lengths[0] != b0_star.count()) {
    throw CodecError("length sequence must start with |B_0*|");
  }
  const std::size_t z = lengths.size() - 1;
  long long balance = static_cast<long long>(lengths[0]);
  for (std::size_t j = 1; j <= z; ++j) {
    if (balance == 0) throw CodecError("inconsistent length sequence: balance reaches zero before Z");
    balance += static_cast<long long>(lengths[j]) - 1;
  }
  if (balance != 0) throw CodecError("inconsistent length sequence: balance is nonzero at Z");

  BitString bits;
  for (FlawId f = 0; f < b0_star.universe(); ++f) bits.push_back(b0_star.contains(f));
  for (std::size_t j = 1; j <= z; ++j) {
    for (std::size_t k = 0; k < lengths[j]; ++k) bits.push_back(true);
    bits.push_back(false);
  }
  return bits;
}

DecodedBreak decode(const BitString& bits, std::size_t flaw_count) {
  if (bits.size() < flaw_count) throw CodecError("bitstring shorter than the flaw vector");
  DecodedBreak out{FlawSet(flaw_count), {}};
  for (FlawId f = 0; f < flaw_count; ++f) {
    if (bits[f]) out.b0_star.insert(f);
  }
  out.lengths.push_back(out.b0_star.count());
  long long balance = static_cast<long long>(out.lengths[0]);
  std::size_t pos = flaw_count;
  while (balance > 0) {
    std::size_t ones = 0;
    while (true) {
      if (pos == bits.size()) throw CodecError("bitstring exhausted before termination");
      if (!bits[pos++]) break;
      ++ones;
    }
    out.lengths.push_back(ones);
    balance += static_cast<long long>(ones) - 1;
  }
  if (pos != bits.size()) throw CodecError("trailing data after termination");
  return out;
}

}  // namespace flawsim
