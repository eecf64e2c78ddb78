#pragma once

#include <chrono>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace crisisflow {

using Timestamp = std::chrono::sys_seconds;

/// Synthetic clock origin for simulated and fixture logs: 2012-01-01T00:00:00Z.
Timestamp clock_epoch();
inline constexpr std::chrono::seconds kClockStep{60};

/// RFC 3339 UTC rendering, e.g. `2012-01-01T00:01:00Z`.
std::string format_timestamp(Timestamp ts);
/// Accepts `YYYY-MM-DDTHH:MM:SS` with optional fractional seconds and a `Z` or
/// `+HH:MM`/`-HH:MM` offset. Fractions are truncated. Throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);

struct Event {
    std::string case_id;
    std::string activity;
    std::string resource; // empty when unknown
    std::string lifecycle = "complete";
    Timestamp timestamp{};

    friend bool operator==(const Event&, const Event&) = default;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct EventLog {
    std::vector<Trace> traces;
    std::map<std::string, std::string> attributes;

    std::size_t event_count() const;
    /// Trace for `case_id`, appended if absent.
    Trace& trace(const std::string& case_id);

    friend bool operator==(const EventLog&, const EventLog&) = default;
};

using ActivitySequence = std::vector<std::string>;

inline constexpr std::string_view kCsvHeader = "case_id,activity,resource,lifecycle,timestamp";

std::string write_csv(const EventLog& log);
/// Rows are grouped by case id in order of first appearance. Throws
/// LogError(MalformedRow) naming the 1-based line.
EventLog read_csv(std::string_view text);

std::string write_xes(const EventLog& log);
/// Reads the concept/org/lifecycle/time subset of XES. Throws
/// LogError(XmlParse) or LogError(MissingConceptName).
EventLog read_xes(std::string_view text);

/// Picks the reader from the file name extension (.xes, otherwise CSV).
EventLog read_log_file(const std::string& path);
void write_log_file(const EventLog& log, const std::string& path);

/// Per trace, the activities of events whose lifecycle is "complete".
std::vector<ActivitySequence> project_completions(const EventLog& log);

/// Overwrites every event's resource with role_map[activity]. Throws
/// LogError(UnmappedActivity) naming the first unmapped activity.
EventLog attach_resources(const EventLog& log, const std::map<std::string, std::string>& role_map);

} // namespace crisisflow
