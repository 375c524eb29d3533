#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rankfreq {

enum class Mode { character, word };
enum class Filter { han, alpha, none };

std::string_view to_string(Mode mode);
std::string_view to_string(Filter filter);
Mode parse_mode(std::string_view text);      // "char"/"character", "word"
Filter parse_filter(std::string_view text);  // "han", "alpha", "none"

/// Token -> occurrence count for one corpus.
///
/// Entries are kept in an ordered map so iteration order (and therefore every
/// derived table) is independent of hashing. Counts are always >= 1.
class TokenCounts {
 public:
  explicit TokenCounts(Mode mode) : mode_(mode) {}

  void add(std::string token, std::uint64_t count = 1);

  Mode mode() const noexcept { return mode_; }
  std::uint64_t total() const noexcept { return total_; }  // N
  std::size_t distinct() const noexcept { return entries_.size(); }  // n
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<std::string, std::uint64_t>& entries() const noexcept {
    return entries_;
  }
  std::uint64_t count(const std::string& token) const;

  bool operator==(const TokenCounts&) const = default;

 private:
  Mode mode_;
  std::uint64_t total_ = 0;
  std::map<std::string, std::uint64_t> entries_;
};

/// Frequencies sorted non-increasingly, f_1 >= f_2 >= ... >= f_n > 0.
///
/// Built either from a TokenCounts (then counts/tokens are present, f_r is
/// exactly count_r / N and the frequencies sum to one) or directly from a
/// frequency sequence, which is how synthetic exact-law tables are fed to
/// the fitters. Ranks in the public API are 1-based.
class RankFrequency {
 public:
  static RankFrequency from_frequencies(std::vector<double> freqs);

  std::size_t size() const noexcept { return freqs_.size(); }  // n
  std::uint64_t total() const noexcept { return total_; }      // N, 0 if unknown
  bool has_counts() const noexcept { return !counts_.empty(); }

  std::span<const double> freqs() const noexcept { return freqs_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::span<const std::string> tokens() const noexcept { return tokens_; }

  double freq(std::size_t rank) const { return freqs_.at(rank - 1); }
  std::uint64_t count(std::size_t rank) const { return counts_.at(rank - 1); }

 private:
  friend RankFrequency rank(const TokenCounts& tc);
  RankFrequency() = default;

  std::vector<double> freqs_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::string> tokens_;
  std::uint64_t total_ = 0;
};

/// r_k for k = 0, 1, ..., K where r_k = number of types occurring at least
/// k+1 times. r_0 = n and the last entry is 0.
struct JumpRanks {
  std::vector<std::size_t> r;

  std::size_t at(std::size_t k) const { return k < r.size() ? r[k] : 0; }
  // Number of types that occur exactly k times (k >= 1).
  std::size_t types_with_count(std::size_t k) const {
    return k == 0 ? 0 : at(k - 1) - at(k);
  }
};

inline constexpr std::size_t kDefaultHapaxThreshold = 10;

TokenCounts tokenize(std::string_view utf8_text, Mode mode, Filter filter);

RankFrequency rank(const TokenCounts& tc);

TokenCounts mix(const TokenCounts& a, const TokenCounts& b);

JumpRanks jump_ranks(const RankFrequency& rf);

// Smallest rank whose frequency is shared by more than `threshold` types.
std::optional<std::size_t> hapax_boundary(
    const RankFrequency& rf, std::size_t threshold = kDefaultHapaxThreshold);

// Sum of f_k for lo <= k <= hi.
double range_mass(const RankFrequency& rf, std::size_t lo, std::size_t hi);

nlohmann::json to_json(const TokenCounts& tc);
TokenCounts token_counts_from_json(const nlohmann::json& j);

}  // namespace rankfreq
