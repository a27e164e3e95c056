#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace quantk {

// splitmix64, used to derive independent per-trial streams from one
// global 64-bit seed.  Trial i of suite S gets mt19937_64 seeded with
// split(seed ^ fnv(S), i), so trials can run in any order (or in
// parallel) and still reproduce bit-for-bit.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t trial_seed(std::uint64_t global_seed, const std::string& suite,
                                std::uint64_t trial) {
  std::uint64_t s = global_seed ^ fnv1a(suite);
  std::uint64_t a = splitmix64(s);
  s = a + 0x9e3779b97f4a7c15ULL * (trial + 1);
  return splitmix64(s);
}

class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : eng_(seed) {}
  TrialRng(std::uint64_t global_seed, const std::string& suite, std::uint64_t trial)
      : eng_(trial_seed(global_seed, suite, trial)) {}

  std::mt19937_64& engine() { return eng_; }

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng_);
  }
  int uniform_int(int a, int b) {  // inclusive
    return std::uniform_int_distribution<int>(a, b)(eng_);
  }
  double gauss() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  std::complex<double> cgauss() {
    return {gauss() * M_SQRT1_2, gauss() * M_SQRT1_2};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace quantk
