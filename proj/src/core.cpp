#include "opland/core.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace opland {

// Howard Hinnant's algorithms, days since 1970-01-01.
int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad number: " + std::string(s));
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

int64_t parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw std::invalid_argument("bad date: " + std::string(s));
  int y = to_int(s.substr(0, 4));
  int m = to_int(s.substr(5, 2));
  int d = to_int(s.substr(8, 2));
  if (m < 1 || m > 12 || d < 1 || d > 31)
    throw std::invalid_argument("bad date: " + std::string(s));
  return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string format_date(int64_t day) {
  int y;
  unsigned m, d;
  civil_from_days(day, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
  return buf;
}

int64_t parse_timestamp(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty timestamp");
  std::string_view body = s;
  bool neg = false;
  if (body[0] == '-') {
    neg = true;
    body.remove_prefix(1);
  }
  if (all_digits(body)) {
    int64_t v = 0;
    for (char c : body) v = v * 10 + (c - '0');
    return neg ? -v : v;
  }
  // ISO-8601
  if (s.size() < 19 || (s[10] != 'T' && s[10] != ' '))
    throw std::invalid_argument("bad timestamp: " + std::string(s));
  int64_t day = parse_date(s.substr(0, 10));
  int hh = to_int(s.substr(11, 2));
  int mm = to_int(s.substr(14, 2));
  int ss = to_int(s.substr(17, 2));
  if (s[13] != ':' || s[16] != ':' || hh > 23 || mm > 59 || ss > 60)
    throw std::invalid_argument("bad timestamp: " + std::string(s));
  int64_t t = day * 86400 + hh * 3600 + mm * 60 + ss;
  std::string_view rest = s.substr(19);
  if (!rest.empty() && rest[0] != 'Z') {
    if (rest.size() != 6 || (rest[0] != '+' && rest[0] != '-') || rest[3] != ':')
      throw std::invalid_argument("bad timestamp offset: " + std::string(s));
    int oh = to_int(rest.substr(1, 2));
    int om = to_int(rest.substr(4, 2));
    int64_t off = oh * 3600 + om * 60;
    t += (rest[0] == '+') ? -off : off;
  }
  return t;
}

uint32_t Interner::intern(std::string_view s) {
  auto it = index_.find(std::string(s));
  if (it != index_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.emplace_back(s);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<uint32_t> Interner::lookup(std::string_view s) const {
  auto it = index_.find(std::string(s));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

uint64_t Rng::next() {
  // splitmix64
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

uint64_t Rng::below(uint64_t n) {
  if (n == 0) return 0;
  // modulo bias is negligible for the ranges used here
  return next() % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 1e-300) u1 = next_double();
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

uint64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 30.0) {
    // Knuth
    double l = std::exp(-mean);
    uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_double();
    } while (p > l);
    return k - 1;
  }
  double v = mean + std::sqrt(mean) * normal();
  return v < 0.5 ? 0 : static_cast<uint64_t>(v + 0.5);
}

size_t Rng::pick(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double x = next_double() * total;
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (x < acc) return i;
  }
  return weights.size() - 1;
}

uint64_t fnv1a(std::string_view data, uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace opland
