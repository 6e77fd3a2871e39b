#include "lexitrend/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <thread>

#include <rapidjson/document.h>

#include "lexitrend/error.hpp"
#include "line_reader.hpp"

namespace lexitrend {

LanguageFilter keep_language(std::string code) {
  if (code.empty()) return [](const TextEvent&) { return true; };
  return [code = std::move(code)](const TextEvent& e) { return e.language && *e.language == code; };
}

// ---------------------------------------------------------------- DailyCounts

void DailyCounts::add(TermId term, Day day, std::uint64_t n) {
  if (n > 0) counts_[key(term, day)] += n;
}

std::uint64_t DailyCounts::get(TermId term, Day day) const {
  auto it = counts_.find(key(term, day));
  return it == counts_.end() ? 0 : it->second;
}

void DailyCounts::merge(const DailyCounts& other) {
  for (const auto& [k, v] : other.counts_) counts_[k] += v;
}

std::vector<DailyCounts::Entry> DailyCounts::entries() const {
  std::vector<Entry> out;
  out.reserve(counts_.size());
  for (const auto& [k, v] : counts_)
    out.push_back({static_cast<TermId>(k >> 32),
                   Day::from_serial(static_cast<std::int32_t>(static_cast<std::uint32_t>(k))), v});
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return a.term != b.term ? a.term < b.term : a.day < b.day;
  });
  return out;
}

std::uint64_t DailyCounts::total(TermId term) const {
  std::uint64_t sum = 0;
  for (const auto& [k, v] : counts_)
    if ((k >> 32) == term) sum += v;
  return sum;
}

std::map<TermId, std::uint64_t> DailyCounts::totals() const {
  std::map<TermId, std::uint64_t> out;
  for (const auto& [k, v] : counts_) out[static_cast<TermId>(k >> 32)] += v;
  return out;
}

std::map<Month, std::uint64_t> DailyCounts::month_totals(TermId term) const {
  std::map<Month, std::uint64_t> out;
  for (const auto& [k, v] : counts_)
    if ((k >> 32) == term)
      out[Day::from_serial(static_cast<std::int32_t>(static_cast<std::uint32_t>(k))).month()] += v;
  return out;
}

// ------------------------------------------------------------- MinuteCoverage

MinuteCoverage::MinuteCoverage(MonthRange window)
    : window_(window),
      origin_(first_minute(window.first.first_day())),
      end_(first_minute((window.last + 1).first_day())),
      bits_(static_cast<std::size_t>((end_ - origin_ + 63) / 64), 0) {}

void MinuteCoverage::observe(MinuteStamp minute) {
  auto i = static_cast<std::size_t>(minute - origin_);
  bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
}

bool MinuteCoverage::observed(MinuteStamp minute) const {
  if (!in_window(minute)) return false;
  auto i = static_cast<std::size_t>(minute - origin_);
  return (bits_[i >> 6] >> (i & 63)) & 1;
}

namespace {

std::int64_t count_bits(const std::vector<std::uint64_t>& bits, std::size_t from, std::size_t to) {
  std::int64_t n = 0;
  while (from < to && (from & 63) != 0) {
    n += (bits[from >> 6] >> (from & 63)) & 1;
    ++from;
  }
  while (from + 64 <= to) {
    n += std::popcount(bits[from >> 6]);
    from += 64;
  }
  while (from < to) {
    n += (bits[from >> 6] >> (from & 63)) & 1;
    ++from;
  }
  return n;
}

}  // namespace

std::int64_t MinuteCoverage::observed_minutes(Month month) const {
  if (!window_.contains(month) || bits_.empty()) return 0;
  auto from = static_cast<std::size_t>(first_minute(month.first_day()) - origin_);
  return count_bits(bits_, from, from + static_cast<std::size_t>(month.minutes()));
}

std::int64_t MinuteCoverage::observed_minutes(Day day) const {
  if (!window_.contains(day.month()) || bits_.empty()) return 0;
  auto from = static_cast<std::size_t>(first_minute(day) - origin_);
  return count_bits(bits_, from, from + 1440);
}

std::int64_t MinuteCoverage::merge(const MinuteCoverage& other) {
  if (other.bits_.empty()) return 0;
  if (bits_.empty()) {
    *this = other;
    return 0;
  }
  if (window_.first != other.window_.first || window_.last != other.window_.last)
    throw ConfigError("cannot merge coverage over different windows");
  std::int64_t overlap = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    overlap += std::popcount(bits_[i] & other.bits_[i]);
    bits_[i] |= other.bits_[i];
  }
  return overlap;
}

// -------------------------------------------------------------------- ingest

IngestStats& IngestStats::operator+=(const IngestStats& o) {
  lines += o.lines;
  events += o.events;
  malformed_lines += o.malformed_lines;
  out_of_window += o.out_of_window;
  filtered_out += o.filtered_out;
  invalid_utf8 += o.invalid_utf8;
  matches += o.matches;
  return *this;
}

namespace {

std::optional<MinuteStamp> event_minute(const rapidjson::Value& v) {
  if (v.IsString()) return parse_timestamp({v.GetString(), v.GetStringLength()});
  if (v.IsInt64()) {
    std::int64_t s = v.GetInt64();
    return s >= 0 ? s / 60 : -((-s + 59) / 60);
  }
  if (v.IsNumber()) return static_cast<MinuteStamp>(std::floor(v.GetDouble() / 60.0));
  return std::nullopt;
}

}  // namespace

Aggregates ingest_file(const std::filesystem::path& file, const Matcher& matcher, const LanguageFilter& filter,
                       const IngestOptions& options) {
  detail::LineReader reader(file);
  if (!reader.ok()) throw DataError("cannot open event file " + file.string());

  Aggregates agg{{}, MinuteCoverage(options.window), {}};
  auto& stats = agg.stats;
  std::string line;
  std::string normalized;
  std::vector<RawHit> hits;
  TextEvent event;
  rapidjson::Document doc;
  const auto& fmt = options.format;

  while (reader.next(line)) {
    ++stats.lines;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    doc.ParseInsitu(line.data());
    if (doc.HasParseError() || !doc.IsObject()) {
      ++stats.malformed_lines;
      continue;
    }

    std::optional<MinuteStamp> minute;
    for (const auto& key : fmt.time_keys) {
      auto it = doc.FindMember(key.c_str());
      if (it != doc.MemberEnd()) {
        minute = event_minute(it->value);
        break;
      }
    }
    auto text_it = doc.FindMember(fmt.text_key.c_str());
    if (!minute || text_it == doc.MemberEnd() || !text_it->value.IsString()) {
      ++stats.malformed_lines;
      continue;
    }
    if (!agg.coverage.in_window(*minute)) {
      ++stats.out_of_window;
      continue;
    }
    ++stats.events;
    agg.coverage.observe(*minute);

    event.event_time = *minute;
    event.text.assign(text_it->value.GetString(), text_it->value.GetStringLength());
    auto lang_it = doc.FindMember(fmt.language_key.c_str());
    if (lang_it != doc.MemberEnd() && lang_it->value.IsString())
      event.language.emplace(lang_it->value.GetString(), lang_it->value.GetStringLength());
    else
      event.language.reset();
    if (!filter(event)) {
      ++stats.filtered_out;
      continue;
    }

    if (!matcher.scan_into(event.text, normalized, hits)) {
      ++stats.invalid_utf8;
      continue;
    }
    if (hits.empty()) continue;
    const Day day = day_of(*minute);
    if (options.count_per_doc) {
      std::sort(hits.begin(), hits.end(), [](const RawHit& a, const RawHit& b) { return a.term < b.term; });
      hits.erase(std::unique(hits.begin(), hits.end(),
                             [](const RawHit& a, const RawHit& b) { return a.term == b.term; }),
                 hits.end());
    }
    for (const auto& h : hits) agg.counts.add(h.term, day);
    stats.matches += hits.size();
  }
  if (reader.failed()) throw DataError("error while reading event file " + file.string());
  return agg;
}

Aggregates ingest_stream(std::span<const std::filesystem::path> files, const Matcher& matcher,
                         const LanguageFilter& filter, const IngestOptions& options) {
  std::vector<std::optional<Aggregates>> parts(files.size());
  std::vector<std::exception_ptr> errors(files.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        parts[i] = ingest_file(files[i], matcher, filter, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(files.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Aggregates out{{}, MinuteCoverage(options.window), {}};
  for (auto& p : parts) {
    out.counts.merge(p->counts);
    out.coverage.merge(p->coverage);
    out.stats += p->stats;
    p.reset();
  }
  return out;
}

Aggregates merge_aggregates(std::span<const Aggregates> parts, MergeReport* report) {
  Aggregates out;
  MergeReport rep;
  for (const auto& p : parts) {
    out.counts.merge(p.counts);
    rep.overlapping_minutes += out.coverage.merge(p.coverage);
    out.stats += p.stats;
  }
  if (report) *report = rep;
  return out;
}

}  // namespace lexitrend
