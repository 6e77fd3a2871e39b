#include "lexitrend/matcher.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "lexitrend/error.hpp"
#include "lexitrend/text.hpp"

namespace lexitrend {

PatternSet::PatternSet(std::vector<std::string> patterns) : patterns_(std::move(patterns)) {
  ids_.reserve(patterns_.size());
  for (TermId i = 0; i < patterns_.size(); ++i) {
    const auto& p = patterns_[i];
    if (p.empty()) throw ConfigError("empty pattern");
    if (!text::is_valid_utf8(p)) throw ConfigError("pattern is not valid UTF-8: " + p);
    if (!ids_.emplace(p, i).second) throw ConfigError("duplicate pattern: " + p);
  }
}

TermId PatternSet::id_of(std::string_view pattern) const {
  auto it = ids_.find(pattern);
  return it == ids_.end() ? static_cast<TermId>(patterns_.size()) : it->second;
}

bool passes_boundary_rules(std::string_view s, ByteSpan span) {
  if (span.start > 0 && text::is_alnum(text::decode_before(s, span.start).code_point)) return false;
  if (span.end < s.size()) {
    auto next = text::decode(s, span.end);
    if (next && text::is_alnum(next->code_point)) return false;
  }
  // Walk back over the handle token the span starts in (or right after).
  std::size_t pos = span.start;
  while (pos > 0) {
    auto prev = text::decode_before(s, pos);
    if (!text::is_handle_char(prev.code_point)) break;
    pos -= prev.length;
  }
  return pos == 0 || s[pos - 1] != '@';
}

Matcher::Matcher(PatternSet patterns) : patterns_(std::move(patterns)) {
  if (patterns_.empty()) throw ConfigError("cannot build a matcher from an empty pattern set");

  // Build the trie with ordered child maps, then renumber states
  // breadth-first into flat arrays.
  struct Node {
    std::map<unsigned char, std::int32_t> next;
    std::int32_t output = -1;
  };
  std::vector<Node> trie(1);
  for (TermId id = 0; id < patterns_.size(); ++id) {
    std::int32_t s = 0;
    for (char ch : patterns_.pattern(id)) {
      auto c = static_cast<unsigned char>(ch);
      auto it = trie[s].next.find(c);
      if (it == trie[s].next.end()) {
        trie[s].next.emplace(c, static_cast<std::int32_t>(trie.size()));
        s = static_cast<std::int32_t>(trie.size());
        trie.emplace_back();
      } else {
        s = it->second;
      }
    }
    trie[s].output = static_cast<std::int32_t>(id);
  }

  const auto n = trie.size();
  std::vector<std::int32_t> order;  // bfs index -> trie index
  std::vector<std::int32_t> renum(n);
  order.reserve(n);
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (const auto& [c, child] : trie[order[head]].next) {
      renum[child] = static_cast<std::int32_t>(order.size());
      order.push_back(child);
    }

  edge_begin_.assign(n + 1, 0);
  output_.assign(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    const Node& node = trie[order[s]];
    edge_begin_[s + 1] = edge_begin_[s] + static_cast<std::uint32_t>(node.next.size());
    output_[s] = node.output;
    for (const auto& [c, child] : node.next) {
      edge_byte_.push_back(c);
      edge_to_.push_back(renum[child]);
    }
  }

  root_next_.assign(256, 0);
  for (auto e = edge_begin_[0]; e < edge_begin_[1]; ++e) root_next_[edge_byte_[e]] = edge_to_[e];

  fail_.assign(n, 0);
  dict_link_.assign(n, -1);
  // BFS order means every parent (and every failure target) is finished
  // before its children.
  for (std::size_t s = 0; s < n; ++s) {
    for (auto e = edge_begin_[s]; e < edge_begin_[s + 1]; ++e) {
      auto child = edge_to_[e];
      std::int32_t f = s == 0 ? 0 : step(fail_[s], edge_byte_[e]);
      fail_[child] = f;
      dict_link_[child] = output_[f] >= 0 ? f : dict_link_[f];
    }
  }
}

std::int32_t Matcher::step(std::int32_t state, unsigned char byte) const {
  while (state != 0) {
    auto lo = edge_byte_.begin() + edge_begin_[state];
    auto hi = edge_byte_.begin() + edge_begin_[state + 1];
    if (hi - lo <= 8) {
      for (auto it = lo; it != hi; ++it)
        if (*it == byte) return edge_to_[it - edge_byte_.begin()];
    } else {
      auto it = std::lower_bound(lo, hi, byte);
      if (it != hi && *it == byte) return edge_to_[it - edge_byte_.begin()];
    }
    state = fail_[state];
  }
  return root_next_[byte];
}

template <typename Sink>
void Matcher::run(std::string_view normalized, Sink&& sink) const {
  std::int32_t state = 0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    state = step(state, static_cast<unsigned char>(normalized[i]));
    for (std::int32_t t = output_[state] >= 0 ? state : dict_link_[state]; t >= 0; t = dict_link_[t]) {
      auto id = static_cast<TermId>(output_[t]);
      std::size_t end = i + 1;
      sink(RawHit{id, {end - patterns_.pattern(id).size(), end}});
    }
  }
}

namespace {

void sort_hits(std::vector<RawHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const RawHit& a, const RawHit& b) {
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    if (a.span.end != b.span.end) return a.span.end < b.span.end;
    return a.term < b.term;
  });
}

}  // namespace

std::vector<RawHit> Matcher::raw_hits(std::string_view normalized) const {
  std::vector<RawHit> hits;
  run(normalized, [&](const RawHit& h) { hits.push_back(h); });
  sort_hits(hits);
  return hits;
}

bool Matcher::scan_into(std::string_view text, std::string& normalized, std::vector<RawHit>& hits) const {
  hits.clear();
  if (!text::lowercase_into(text, normalized)) return false;
  const std::string_view s = normalized;
  run(s, [&](const RawHit& h) {
    if (passes_boundary_rules(s, h.span)) hits.push_back(h);
  });
  return true;
}

std::vector<MatchEvent> Matcher::scan(std::string_view text, MinuteStamp event_time) const {
  std::string normalized;
  std::vector<RawHit> hits;
  if (!scan_into(text, normalized, hits)) throw DataError("document is not valid UTF-8");
  sort_hits(hits);
  std::vector<MatchEvent> events;
  events.reserve(hits.size());
  for (const auto& h : hits) events.push_back({h.term, h.span, event_time});
  return events;
}

}  // namespace lexitrend
