#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace opland {

using UserId = uint32_t;
using TagId = uint32_t;
using TopicId = uint32_t;

inline constexpr uint32_t kInvalidId = 0xFFFFFFFFu;

// --- civil date <-> days since 1970-01-01 ---

int64_t days_from_civil(int y, unsigned m, unsigned d);
void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d);

// "YYYY-MM-DD" -> day index. Throws std::invalid_argument on bad input.
int64_t parse_date(std::string_view s);
std::string format_date(int64_t day);

// Accepts epoch seconds (digits, possibly signed) or ISO-8601
// "YYYY-MM-DD[ T]HH:MM:SS" with optional 'Z' or +-HH:MM offset.
// Returns UTC epoch seconds.
int64_t parse_timestamp(std::string_view s);

// --- string interning ---

class Interner {
 public:
  uint32_t intern(std::string_view s);
  std::optional<uint32_t> lookup(std::string_view s) const;
  const std::string& name(uint32_t id) const { return names_.at(id); }
  uint32_t size() const { return static_cast<uint32_t>(names_.size()); }

 private:
  std::unordered_map<std::string, uint32_t> index_;
  std::vector<std::string> names_;
};

// --- deterministic RNG ---
//
// Self-contained generator so that seeded runs are byte-identical across
// platforms and standard libraries (std distributions are not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next();
  // uniform in [0, 1)
  double next_double();
  // uniform in [0, n)
  uint64_t below(uint64_t n);
  // standard normal (Box-Muller)
  double normal();
  uint64_t poisson(double mean);
  // index into cumulative weights; weights need not be normalized
  size_t pick(const std::vector<double>& weights);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over bytes, used for pipeline stage stamps.
uint64_t fnv1a(std::string_view data, uint64_t h = 14695981039346656037ull);

}  // namespace opland
