#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexitrend/calendar.hpp"

namespace lexitrend {

using TermId = std::uint32_t;

/// The searched headwords. A pattern's position is its stable TermId.
class PatternSet {
 public:
  PatternSet() = default;
  /// Patterns must be unique, non-empty, valid UTF-8 and already
  /// normalized. Throws ConfigError otherwise.
  explicit PatternSet(std::vector<std::string> patterns);

  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const std::string& pattern(TermId id) const { return patterns_[id]; }
  const std::vector<std::string>& patterns() const { return patterns_; }
  /// Returns size() when the pattern is unknown.
  TermId id_of(std::string_view pattern) const;

 private:
  std::vector<std::string> patterns_;
  std::unordered_map<std::string_view, TermId> ids_;
};

struct ByteSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const ByteSpan&) const = default;
};

/// One automaton hit in normalized text, before any boundary filtering.
struct RawHit {
  TermId term = 0;
  ByteSpan span;
  bool operator==(const RawHit&) const = default;
};

struct MatchEvent {
  TermId term = 0;
  ByteSpan span;  // normalized-text coordinates
  MinuteStamp event_time = 0;
  bool operator==(const MatchEvent&) const = default;
};

/// True when the span is delimited by non-alphanumeric characters (or the
/// text edges) and does not sit inside an @-handle. `normalized` must be
/// valid UTF-8 and the span must fall on code point boundaries.
bool passes_boundary_rules(std::string_view normalized, ByteSpan span);

/// Aho-Corasick automaton over the bytes of a PatternSet. Immutable after
/// construction; safe to share between scanning threads.
class Matcher {
 public:
  /// Throws ConfigError for an empty pattern set.
  explicit Matcher(PatternSet patterns);

  const PatternSet& patterns() const { return patterns_; }
  std::size_t state_count() const { return fail_.size(); }

  /// Every occurrence of every pattern in already-normalized text, ordered
  /// by (start, end, term).
  std::vector<RawHit> raw_hits(std::string_view normalized) const;

  /// Lowercases `text`, then returns the hits that pass the boundary and
  /// handle rules, ordered by (start, end, term). Throws DataError for
  /// invalid UTF-8.
  std::vector<MatchEvent> scan(std::string_view text, MinuteStamp event_time) const;

  /// Allocation-free variant for bulk ingestion: `normalized` and `hits` are
  /// caller-owned scratch buffers, `hits` is filled in end-offset order.
  /// Returns false (with `hits` empty) for invalid UTF-8.
  bool scan_into(std::string_view text, std::string& normalized, std::vector<RawHit>& hits) const;

 private:
  template <typename Sink>
  void run(std::string_view normalized, Sink&& sink) const;
  std::int32_t step(std::int32_t state, unsigned char byte) const;

  PatternSet patterns_;
  std::vector<std::int32_t> root_next_;    // 256 entries
  std::vector<std::uint32_t> edge_begin_;  // CSR over states, size states + 1
  std::vector<unsigned char> edge_byte_;
  std::vector<std::int32_t> edge_to_;
  std::vector<std::int32_t> fail_;
  std::vector<std::int32_t> output_;     // pattern ending here, or -1
  std::vector<std::int32_t> dict_link_;  // nearest proper suffix state with an output, or -1
};

}  // namespace lexitrend
