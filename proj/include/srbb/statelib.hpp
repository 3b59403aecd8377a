#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "srbb/qcore.hpp"

namespace srbb {

enum class StateKind { HaarRandom, Basis, Uniform, Bell, Ghz, Explicit, Sparse };

enum class BellVariant { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// Description of a target state. Which fields matter depends on `kind`:
/// seed (HaarRandom), index (Basis), bell (Bell), entries (Explicit),
/// sparse (Sparse).
struct StateSpec {
  StateKind kind = StateKind::Uniform;
  int n = 2;
  std::uint64_t seed = 0;
  std::size_t index = 0;
  BellVariant bell = BellVariant::PhiPlus;
  std::vector<Complex> entries;
  std::vector<std::pair<std::size_t, Complex>> sparse;
};

StateVector realize(const StateSpec& spec);

/// 2^n independent standard complex Gaussians, normalized.
StateVector haar_random_state(int n, std::uint64_t seed);

/// `count` Haar states drawn from one generator seeded with `seed`.
std::vector<StateVector> haar_corpus(int n, std::size_t count, std::uint64_t seed);

/// (1/sqrt 2) * || sqrt(p) - sqrt(q) ||_2, in [0, 1].
double hellinger(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

struct HaarMeanSummary {
  int n = 0;
  std::size_t count = 0;
  std::vector<double> mean;       // per basis state
  std::vector<double> std_error;  // per basis state
  bool within_3se = false;
  std::uint64_t corpus_hash = 0;
};

/// Mean per-component probability of a Haar corpus against 2^-n.
HaarMeanSummary haar_mean_check(int n, std::size_t count, std::uint64_t seed);

/// FNV-1a over the raw amplitude bytes, in order.
std::uint64_t corpus_hash(const std::vector<StateVector>& corpus);

/// Derives independent sub-seeds from one run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// State spec files:
//   { "kind": "haar_random" | "basis" | "uniform" | "bell" | "ghz" |
//             "explicit" | "sparse",
//     "n": <int>,
//     "seed": <uint>,                      haar_random
//     "index": <int>,                      basis
//     "variant": "phi+"|"phi-"|"psi+"|"psi-",  bell (default phi+)
//     "entries": [[re, im], ...],          explicit (2^n pairs)
//     "entries": [[index, re, im], ...] }  sparse
StateSpec state_spec_from_json(const nlohmann::json& j);
nlohmann::json state_spec_to_json(const StateSpec& spec);
StateSpec load_state_spec(const std::string& path);

std::string to_string(StateKind k);

struct NamedTarget {
  std::string label;
  StateSpec spec;
};

/// Fixed sparse, uniform, Bell and GHZ targets on 2, 3 and 4 qubits used by
/// the hardware-protocol checks.
std::vector<NamedTarget> named_targets();

}  // namespace srbb
