#include "srbb/statelib.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "srbb/errors.hpp"

namespace srbb {

namespace {

constexpr double kNormTol = 1e-9;

void check_n(int n) {
  if (n < 1 || n > 20) throw ValidationError("state qubit count must be in 1..20");
}

StateVector normalized_checked(std::vector<Complex> amps, std::string_view what) {
  double sq = 0.0;
  for (const auto& z : amps) sq += std::norm(z);
  if (sq == 0.0) throw ValidationError(std::string(what) + " state is all zeros");
  if (std::abs(std::sqrt(sq) - 1.0) > kNormTol) {
    throw ValidationError(std::string(what) + " entries are not normalized (norm " +
                          std::to_string(std::sqrt(sq)) + ")");
  }
  return StateVector(std::move(amps));
}

std::vector<Complex> gaussian_amplitudes(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> amps(dim_of(n));
  for (auto& z : amps) {
    const double re = g(rng);
    const double im = g(rng);
    z = {re, im};
  }
  return amps;
}

const std::pair<StateKind, const char*> kKindNames[] = {
    {StateKind::HaarRandom, "haar_random"}, {StateKind::Basis, "basis"},
    {StateKind::Uniform, "uniform"},        {StateKind::Bell, "bell"},
    {StateKind::Ghz, "ghz"},                {StateKind::Explicit, "explicit"},
    {StateKind::Sparse, "sparse"},
};

const std::pair<BellVariant, const char*> kBellNames[] = {
    {BellVariant::PhiPlus, "phi+"},
    {BellVariant::PhiMinus, "phi-"},
    {BellVariant::PsiPlus, "psi+"},
    {BellVariant::PsiMinus, "psi-"},
};

}  // namespace

std::string to_string(StateKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the (seed, stream) pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

StateVector haar_random_state(int n, std::uint64_t seed) {
  check_n(n);
  std::mt19937_64 rng(seed);
  return StateVector(gaussian_amplitudes(n, rng));
}

std::vector<StateVector> haar_corpus(int n, std::size_t count, std::uint64_t seed) {
  check_n(n);
  std::mt19937_64 rng(seed);
  std::vector<StateVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(gaussian_amplitudes(n, rng));
  return out;
}

StateVector realize(const StateSpec& spec) {
  check_n(spec.n);
  const std::size_t dim = dim_of(spec.n);
  const double r2 = 1.0 / std::sqrt(2.0);
  switch (spec.kind) {
    case StateKind::HaarRandom:
      return haar_random_state(spec.n, spec.seed);
    case StateKind::Basis:
      return StateVector::basis(spec.n, spec.index);
    case StateKind::Uniform:
      return StateVector(std::vector<Complex>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
    case StateKind::Bell: {
      if (spec.n != 2) throw ValidationError("bell states are defined on 2 qubits");
      std::vector<Complex> a(4, 0.0);
      switch (spec.bell) {
        case BellVariant::PhiPlus: a[0] = r2; a[3] = r2; break;
        case BellVariant::PhiMinus: a[0] = r2; a[3] = -r2; break;
        case BellVariant::PsiPlus: a[1] = r2; a[2] = r2; break;
        case BellVariant::PsiMinus: a[1] = r2; a[2] = -r2; break;
      }
      return StateVector(std::move(a));
    }
    case StateKind::Ghz: {
      std::vector<Complex> a(dim, 0.0);
      a.front() = r2;
      a.back() = r2;
      return StateVector(std::move(a));
    }
    case StateKind::Explicit:
      if (spec.entries.size() != dim) {
        throw ValidationError("explicit state has " + std::to_string(spec.entries.size()) +
                              " entries, expected " + std::to_string(dim));
      }
      return normalized_checked(spec.entries, "explicit");
    case StateKind::Sparse: {
      std::vector<Complex> a(dim, 0.0);
      for (const auto& [idx, z] : spec.sparse) {
        if (idx >= dim) throw ValidationError("sparse index out of range");
        a[idx] += z;
      }
      return normalized_checked(std::move(a), "sparse");
    }
  }
  throw ValidationError("unknown state kind");
}

double hellinger(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  if (p.size() != q.size()) throw ValidationError("hellinger: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    acc += d * d;
  }
  return std::min(1.0, std::sqrt(acc / 2.0));
}

std::uint64_t corpus_hash(const std::vector<StateVector>& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& s : corpus) {
    for (const auto& z : s.amplitudes()) {
      unsigned char bytes[sizeof(Complex)];
      std::memcpy(bytes, &z, sizeof z);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
      }
    }
  }
  return h;
}

HaarMeanSummary haar_mean_check(int n, std::size_t count, std::uint64_t seed) {
  if (count < 100) throw ValidationError("haar_mean_check needs at least 100 samples");
  const auto corpus = haar_corpus(n, count, seed);
  const std::size_t dim = dim_of(n);
  HaarMeanSummary s;
  s.n = n;
  s.count = count;
  s.mean.assign(dim, 0.0);
  s.std_error.assign(dim, 0.0);
  std::vector<double> sq(dim, 0.0);
  for (const auto& st : corpus) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double p = std::norm(st[i]);
      s.mean[i] += p;
      sq[i] += p * p;
    }
  }
  const double c = static_cast<double>(count);
  const double expected = 1.0 / static_cast<double>(dim);
  s.within_3se = true;
  for (std::size_t i = 0; i < dim; ++i) {
    s.mean[i] /= c;
    const double var = std::max(0.0, sq[i] / c - s.mean[i] * s.mean[i]) * c / (c - 1.0);
    s.std_error[i] = std::sqrt(var / c);
    if (std::abs(s.mean[i] - expected) > 3.0 * s.std_error[i]) s.within_3se = false;
  }
  s.corpus_hash = corpus_hash(corpus);
  return s;
}

// ---- JSON ------------------------------------------------------------------

StateSpec state_spec_from_json(const nlohmann::json& j) {
  try {
    StateSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    bool found = false;
    for (const auto& [k, name] : kKindNames) {
      if (kind == name) {
        spec.kind = k;
        found = true;
      }
    }
    if (!found) throw ValidationError("unknown state kind '" + kind + "'");
    spec.n = j.at("n").get<int>();
    check_n(spec.n);
    switch (spec.kind) {
      case StateKind::HaarRandom:
        spec.seed = j.value("seed", std::uint64_t{0});
        break;
      case StateKind::Basis:
        spec.index = j.at("index").get<std::size_t>();
        break;
      case StateKind::Bell: {
        const std::string v = j.value("variant", std::string("phi+"));
        found = false;
        for (const auto& [b, name] : kBellNames) {
          if (v == name) {
            spec.bell = b;
            found = true;
          }
        }
        if (!found) throw ValidationError("unknown bell variant '" + v + "'");
        break;
      }
      case StateKind::Explicit:
        for (const auto& e : j.at("entries")) {
          if (e.size() != 2) throw ValidationError("explicit entries are [re, im] pairs");
          spec.entries.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        break;
      case StateKind::Sparse:
        for (const auto& e : j.at("entries")) {
          if (e.size() != 3) throw ValidationError("sparse entries are [index, re, im] triples");
          spec.sparse.emplace_back(e[0].get<std::size_t>(),
                                   Complex{e[1].get<double>(), e[2].get<double>()});
        }
        break;
      default:
        break;
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid state spec: ") + e.what());
  }
}

nlohmann::json state_spec_to_json(const StateSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  j["n"] = spec.n;
  switch (spec.kind) {
    case StateKind::HaarRandom: j["seed"] = spec.seed; break;
    case StateKind::Basis: j["index"] = spec.index; break;
    case StateKind::Bell:
      for (const auto& [b, name] : kBellNames)
        if (b == spec.bell) j["variant"] = name;
      break;
    case StateKind::Explicit: {
      auto arr = nlohmann::json::array();
      for (const auto& z : spec.entries) arr.push_back({z.real(), z.imag()});
      j["entries"] = arr;
      break;
    }
    case StateKind::Sparse: {
      auto arr = nlohmann::json::array();
      for (const auto& [i, z] : spec.sparse) arr.push_back({i, z.real(), z.imag()});
      j["entries"] = arr;
      break;
    }
    default: break;
  }
  return j;
}

StateSpec load_state_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state spec '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("state spec '" + path + "' is not valid JSON: " + e.what());
  }
  return state_spec_from_json(j);
}

std::vector<NamedTarget> named_targets() {
  const double r = 1.0 / std::sqrt(2.0);
  auto sparse = [](int n, std::vector<std::pair<std::size_t, Complex>> e) {
    StateSpec s;
    s.kind = StateKind::Sparse;
    s.n = n;
    s.sparse = std::move(e);
    return s;
  };
  auto uniform = [](int n) {
    StateSpec s;
    s.kind = StateKind::Uniform;
    s.n = n;
    return s;
  };
  StateSpec bell;
  bell.kind = StateKind::Bell;
  StateSpec ghz;
  ghz.kind = StateKind::Ghz;
  ghz.n = 3;
  return {
      {"bell", bell},
      {"2q [r,0,r,0]", sparse(2, {{0, r}, {2, r}})},
      {"2q uniform", uniform(2)},
      {"2q [0,0,r,-r]", sparse(2, {{2, r}, {3, -r}})},
      {"2q [-r,r,0,0]", sparse(2, {{0, -r}, {1, r}})},
      {"ghz3", ghz},
      {"3q uniform", uniform(3)},
      {"3q [r,r,0..]", sparse(3, {{0, r}, {1, r}})},
      {"3q [..,r,-r]", sparse(3, {{6, r}, {7, -r}})},
      {"3q [0,r,0,0,0,-r,0,0]", sparse(3, {{1, r}, {5, -r}})},
      {"4q uniform", uniform(4)},
      {"4q [..,r,-r]", sparse(4, {{14, r}, {15, -r}})},
      {"4q [-r,r,0..]", sparse(4, {{0, -r}, {1, r}})},
  };
}

}  // namespace srbb
