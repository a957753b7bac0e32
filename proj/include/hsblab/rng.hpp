#ifndef HSBLAB_RNG_HPP
#define HSBLAB_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace hsblab {

/* Deterministic RNG: mt19937_64 output is pinned by the standard, and we
   avoid std distributions (whose streams are implementation-defined), so
   seeded runs reproduce across platforms. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /* Uniform on {lo, ..., hi}, inclusive. */
  int uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("empty integer range");
    std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return lo + static_cast<int>(v % span);
  }

  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool coin() { return (eng_() & 1u) != 0; }

  /* Nonempty subset of {0, ..., n-1}. */
  std::vector<int> nonempty_subset(int n) {
    std::vector<int> out;
    do {
      out.clear();
      for (int i = 0; i < n; ++i)
        if (coin()) out.push_back(i);
    } while (out.empty());
    return out;
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[uniform_int(0, i)]);
    return p;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hsblab

#endif
