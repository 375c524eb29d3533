#include "rankfreq/corpus.hpp"

#include <algorithm>
#include <numeric>

#include "rankfreq/error.hpp"

namespace rankfreq {

std::string_view to_string(Mode mode) {
  return mode == Mode::character ? "character" : "word";
}

std::string_view to_string(Filter filter) {
  switch (filter) {
    case Filter::han:
      return "han";
    case Filter::alpha:
      return "alpha";
    case Filter::none:
      return "none";
  }
  return "none";
}

Mode parse_mode(std::string_view text) {
  if (text == "char" || text == "character") return Mode::character;
  if (text == "word") return Mode::word;
  throw DomainError("unknown tokenization mode '" + std::string(text) + "'");
}

Filter parse_filter(std::string_view text) {
  if (text == "han" || text == "han-only") return Filter::han;
  if (text == "alpha" || text == "alphabetic-only") return Filter::alpha;
  if (text == "none") return Filter::none;
  throw DomainError("unknown filter '" + std::string(text) + "'");
}

void TokenCounts::add(std::string token, std::uint64_t count) {
  if (count == 0) return;
  entries_[std::move(token)] += count;
  total_ += count;
}

std::uint64_t TokenCounts::count(const std::string& token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? 0 : it->second;
}

RankFrequency RankFrequency::from_frequencies(std::vector<double> freqs) {
  if (freqs.empty()) throw EmptyCorpusError("empty frequency table");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] > 0.0)) {
      throw DomainError("frequency at rank " + std::to_string(i + 1) +
                        " is not positive");
    }
    if (i > 0 && freqs[i] > freqs[i - 1]) {
      throw DomainError("frequencies must be non-increasing (rank " +
                        std::to_string(i + 1) + ")");
    }
  }
  RankFrequency rf;
  rf.freqs_ = std::move(freqs);
  return rf;
}

RankFrequency rank(const TokenCounts& tc) {
  if (tc.empty()) throw EmptyCorpusError("cannot rank an empty corpus");

  std::vector<std::pair<const std::string*, std::uint64_t>> order;
  order.reserve(tc.distinct());
  for (const auto& [token, count] : tc.entries()) order.emplace_back(&token, count);
  // Map iteration is already token-ascending; a stable sort on count keeps
  // that as the tie-break.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  RankFrequency rf;
  rf.total_ = tc.total();
  const double total = static_cast<double>(tc.total());
  rf.freqs_.reserve(order.size());
  rf.counts_.reserve(order.size());
  rf.tokens_.reserve(order.size());
  for (const auto& [token, count] : order) {
    rf.tokens_.push_back(*token);
    rf.counts_.push_back(count);
    rf.freqs_.push_back(static_cast<double>(count) / total);
  }
  return rf;
}

TokenCounts mix(const TokenCounts& a, const TokenCounts& b) {
  if (a.mode() != b.mode()) {
    throw ModeMismatchError("cannot mix a " + std::string(to_string(a.mode())) +
                            "-mode corpus with a " +
                            std::string(to_string(b.mode())) + "-mode corpus");
  }
  TokenCounts out = a;
  for (const auto& [token, count] : b.entries()) out.add(token, count);
  return out;
}

JumpRanks jump_ranks(const RankFrequency& rf) {
  if (!rf.has_counts()) {
    throw DomainError("jump ranks need integer occurrence counts");
  }
  const auto counts = rf.counts();
  const std::uint64_t max_count = counts.front();
  JumpRanks jr;
  jr.r.assign(max_count + 1, 0);
  // counts are non-increasing, so the number of types with count >= k+1 is
  // the largest rank r with count_r >= k+1. Walk the table once from the tail.
  std::size_t r = counts.size();
  for (std::uint64_t k = 0; k <= max_count; ++k) {
    while (r > 0 && counts[r - 1] < k + 1) --r;
    jr.r[k] = r;
  }
  return jr;
}

std::optional<std::size_t> hapax_boundary(const RankFrequency& rf,
                                          std::size_t threshold) {
  const std::size_t n = rf.size();
  if (n == 0) throw EmptyCorpusError("empty rank-frequency table");
  const auto freqs = rf.freqs();
  const auto counts = rf.counts();
  const bool use_counts = rf.has_counts();
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && (use_counts ? counts[end] == counts[start]
                                  : freqs[end] == freqs[start])) {
      ++end;
    }
    if (end - start > threshold) return start + 1;
    start = end;
  }
  return std::nullopt;
}

double range_mass(const RankFrequency& rf, std::size_t lo, std::size_t hi) {
  if (lo < 1 || lo > hi || hi > rf.size()) {
    throw DomainError("rank range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] outside [1, " +
                      std::to_string(rf.size()) + "]");
  }
  const auto f = rf.freqs();
  return std::accumulate(f.begin() + static_cast<std::ptrdiff_t>(lo - 1),
                         f.begin() + static_cast<std::ptrdiff_t>(hi), 0.0);
}

nlohmann::json to_json(const TokenCounts& tc) {
  nlohmann::json entries = nlohmann::json::array();
  if (!tc.empty()) {
    const RankFrequency rf = rank(tc);
    for (std::size_t i = 0; i < rf.size(); ++i) {
      entries.push_back({{"token", rf.tokens()[i]}, {"count", rf.counts()[i]}});
    }
  }
  return {{"mode", std::string(to_string(tc.mode()))},
          {"N", tc.total()},
          {"n", tc.distinct()},
          {"entries", std::move(entries)}};
}

TokenCounts token_counts_from_json(const nlohmann::json& j) {
  TokenCounts tc(parse_mode(j.at("mode").get<std::string>()));
  for (const auto& e : j.at("entries")) {
    tc.add(e.at("token").get<std::string>(), e.at("count").get<std::uint64_t>());
  }
  if (j.contains("N") && j.at("N").get<std::uint64_t>() != tc.total()) {
    throw DomainError("token counts JSON: N does not match the entry sum");
  }
  if (j.contains("n") && j.at("n").get<std::size_t>() != tc.distinct()) {
    throw DomainError("token counts JSON: n does not match the entry count");
  }
  return tc;
}

}  // namespace rankfreq
