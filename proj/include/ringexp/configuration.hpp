#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ringexp {

// Error raised for inputs outside the model (bad rings, unsupported
// configurations, scheduler misuse). The message names the violated rule.
class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ring of n anonymous nodes carrying k robots.
struct RingSpec {
  int n = 0;
  int k = 0;

  void validate() const {
    if (n < 3) throw RingError("ring must have at least 3 nodes");
    if (k < 1 || k > n) throw RingError("robot count must satisfy 1 <= k <= n");
  }
};

inline int wrap(long long i, int n) {
  long long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Multiplicity vector <d_0 ... d_{n-1}>. Node indices are notational only;
// anything observable by the robots must go through canonical_form or views.
class Configuration {
 public:
  Configuration() = default;

  explicit Configuration(std::vector<int> multiplicities) : d_(std::move(multiplicities)) {
    if (d_.size() < 3) throw RingError("ring must have at least 3 nodes");
    for (int m : d_) {
      if (m < 0) throw RingError("multiplicities must be non-negative");
    }
  }

  static Configuration parse(std::string_view text) {
    std::vector<int> d;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      std::string_view field = text.substr(pos, comma - pos);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      int value = 0;
      auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
        throw RingError("malformed configuration text: \"" + std::string(text) + "\"");
      }
      d.push_back(value);
      pos = comma + 1;
    }
    return Configuration(std::move(d));
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(d_[i]);
    }
    return out;
  }

  int size() const { return static_cast<int>(d_.size()); }
  int robots() const { return std::accumulate(d_.begin(), d_.end(), 0); }

  // Index taken modulo n.
  int operator[](long long i) const { return d_[static_cast<std::size_t>(wrap(i, size()))]; }
  int& at(int i) { return d_[static_cast<std::size_t>(wrap(i, size()))]; }

  bool occupied(long long i) const { return (*this)[i] > 0; }
  bool towerless() const {
    return std::all_of(d_.begin(), d_.end(), [](int m) { return m <= 1; });
  }
  bool has_tower() const { return !towerless(); }

  std::vector<int> occupied_nodes() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
      if (d_[static_cast<std::size_t>(i)] > 0) out.push_back(i);
    }
    return out;
  }

  const std::vector<int>& multiplicities() const { return d_; }

  auto operator<=>(const Configuration&) const = default;
  bool operator==(const Configuration&) const = default;

 private:
  std::vector<int> d_;
};

// result[j] = c[j + i].
inline Configuration rotate(const Configuration& c, long long i) {
  std::vector<int> out(static_cast<std::size_t>(c.size()));
  for (int j = 0; j < c.size(); ++j) out[static_cast<std::size_t>(j)] = c[j + i];
  return Configuration(std::move(out));
}

// result[j] = c[n - j]; reflection about node 0.
inline Configuration mirror(const Configuration& c) {
  std::vector<int> out(static_cast<std::size_t>(c.size()));
  for (int j = 0; j < c.size(); ++j) out[static_cast<std::size_t>(j)] = c[-j];
  return Configuration(std::move(out));
}

// All 2n images of c under rotations and rotations of the mirror (with
// repetitions when c is symmetric). Index r < n is rotate(c, r); index n + r
// is rotate(mirror(c), r).
inline std::vector<Configuration> symmetric_images(const Configuration& c) {
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(2 * c.size()));
  const Configuration m = mirror(c);
  for (int r = 0; r < c.size(); ++r) out.push_back(rotate(c, r));
  for (int r = 0; r < c.size(); ++r) out.push_back(rotate(m, r));
  return out;
}

inline bool indistinguishable(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw RingError("incompatible rings");
  if (a.robots() != b.robots()) return false;
  const auto images = symmetric_images(a);
  return std::find(images.begin(), images.end(), b) != images.end();
}

// Lexicographically smallest rotation / mirror-rotation.
inline Configuration canonical_form(const Configuration& c) {
  const auto images = symmetric_images(c);
  return *std::min_element(images.begin(), images.end());
}

}  // namespace ringexp
