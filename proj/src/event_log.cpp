#include "crisisflow/event_log.hpp"

#include "crisisflow/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crisisflow {

namespace {

// Proleptic Gregorian calendar <-> day count since 1970-01-01.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
}

} // namespace

Timestamp clock_epoch() { return Timestamp{std::chrono::seconds{days_from_civil(2012, 1, 1) * 86400}}; }

std::string format_timestamp(Timestamp ts) {
    std::int64_t secs = ts.time_since_epoch().count();
    std::int64_t days = secs >= 0 ? secs / 86400 : -((-secs + 86399) / 86400);
    std::int64_t rem = secs - days * 86400;
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<long long>(y), m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    auto fail = [&]() -> Timestamp { throw std::invalid_argument("bad timestamp '" + std::string(text) + "'"); };
    auto digits = [&](std::size_t pos, std::size_t n) -> int {
        if (pos + n > text.size())
            fail();
        int v = 0;
        for (std::size_t k = pos; k < pos + n; ++k) {
            if (text[k] < '0' || text[k] > '9')
                fail();
            v = v * 10 + (text[k] - '0');
        }
        return v;
    };
    if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't') ||
        text[13] != ':' || text[16] != ':')
        fail();
    int year = digits(0, 4), month = digits(5, 2), day = digits(8, 2);
    int hour = digits(11, 2), minute = digits(14, 2), second = digits(17, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        fail();

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            ++pos;
        if (pos == start)
            fail();
    }
    std::int64_t offset = 0;
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
        ++pos;
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        int sign = text[pos] == '-' ? -1 : 1;
        if (pos + 6 > text.size() || text[pos + 3] != ':')
            fail();
        offset = sign * (digits(pos + 1, 2) * 3600 + digits(pos + 4, 2) * 60);
        pos += 6;
    } else {
        fail();
    }
    if (pos != text.size())
        fail();

    std::int64_t secs = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
                        hour * 3600 + minute * 60 + second - offset;
    return Timestamp{std::chrono::seconds{secs}};
}

std::size_t EventLog::event_count() const {
    std::size_t n = 0;
    for (const auto& t : traces)
        n += t.events.size();
    return n;
}

Trace& EventLog::trace(const std::string& case_id) {
    auto it = std::find_if(traces.begin(), traces.end(), [&](const Trace& t) { return t.case_id == case_id; });
    if (it != traces.end())
        return *it;
    traces.push_back(Trace{case_id, {}});
    return traces.back();
}

// --- CSV ------------------------------------------------------------------

namespace {

void write_field(std::string& out, const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
}

// Splits CSV text into records, honouring quoted fields that span lines.
// Each record remembers the line it started on.
struct Record {
    std::size_t line;
    std::vector<std::string> fields;
};

std::vector<Record> split_records(std::string_view text) {
    std::vector<Record> records;
    std::size_t line = 1;
    std::size_t pos = 0;
    while (pos < text.size()) {
        Record rec{line, {}};
        std::string field;
        bool quoted = false;
        bool at_field_start = true;
        bool done = false;
        while (!done) {
            if (pos >= text.size()) {
                if (quoted)
                    throw LogError(LogError::Kind::MalformedRow,
                                   "line " + std::to_string(rec.line) + ": unterminated quoted field");
                rec.fields.push_back(std::move(field));
                break;
            }
            char c = text[pos++];
            if (quoted) {
                if (c == '"') {
                    if (pos < text.size() && text[pos] == '"') {
                        field += '"';
                        ++pos;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n')
                        ++line;
                    field += c;
                }
                continue;
            }
            switch (c) {
            case '"':
                if (!at_field_start)
                    throw LogError(LogError::Kind::MalformedRow,
                                   "line " + std::to_string(line) + ": stray quote inside field");
                quoted = true;
                at_field_start = false;
                break;
            case ',':
                rec.fields.push_back(std::move(field));
                field.clear();
                at_field_start = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                rec.fields.push_back(std::move(field));
                done = true;
                break;
            default:
                field += c;
                at_field_start = false;
            }
        }
        bool blank = rec.fields.size() == 1 && rec.fields.front().empty();
        if (!blank)
            records.push_back(std::move(rec));
    }
    return records;
}

} // namespace

std::string write_csv(const EventLog& log) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& trace : log.traces) {
        for (const auto& e : trace.events) {
            write_field(out, trace.case_id);
            out += ',';
            write_field(out, e.activity);
            out += ',';
            write_field(out, e.resource);
            out += ',';
            write_field(out, e.lifecycle);
            out += ',';
            out += format_timestamp(e.timestamp);
            out += '\n';
        }
    }
    return out;
}

EventLog read_csv(std::string_view text) {
    auto records = split_records(text);
    if (records.empty())
        throw LogError(LogError::Kind::MalformedRow, "line 1: missing header");
    const auto& header = records.front();
    std::string joined;
    for (std::size_t k = 0; k < header.fields.size(); ++k)
        joined += (k ? "," : "") + header.fields[k];
    if (joined != kCsvHeader)
        throw LogError(LogError::Kind::MalformedRow,
                       "line " + std::to_string(header.line) + ": header must be '" + std::string(kCsvHeader) + "'");

    EventLog log;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        auto where = "line " + std::to_string(rec.line) + ": ";
        if (rec.fields.size() != 5)
            throw LogError(LogError::Kind::MalformedRow,
                           where + "expected 5 fields, got " + std::to_string(rec.fields.size()));
        if (rec.fields[0].empty())
            throw LogError(LogError::Kind::MalformedRow, where + "empty case_id");
        if (rec.fields[1].empty())
            throw LogError(LogError::Kind::MalformedRow, where + "empty activity");
        Event e;
        e.case_id = rec.fields[0];
        e.activity = rec.fields[1];
        e.resource = rec.fields[2];
        e.lifecycle = rec.fields[3];
        try {
            e.timestamp = parse_timestamp(rec.fields[4]);
        } catch (const std::invalid_argument& ex) {
            throw LogError(LogError::Kind::MalformedRow, where + ex.what());
        }
        log.trace(e.case_id).events.push_back(std::move(e));
    }
    return log;
}

EventLog read_log_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw LogError(LogError::Kind::MalformedRow, "cannot open log file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    bool xes = path.size() >= 4 && path.compare(path.size() - 4, 4, ".xes") == 0;
    return xes ? read_xes(buf.str()) : read_csv(buf.str());
}

void write_log_file(const EventLog& log, const std::string& path) {
    bool xes = path.size() >= 4 && path.compare(path.size() - 4, 4, ".xes") == 0;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << (xes ? write_xes(log) : write_csv(log));
}

std::vector<ActivitySequence> project_completions(const EventLog& log) {
    std::vector<ActivitySequence> result;
    result.reserve(log.traces.size());
    for (const auto& trace : log.traces) {
        ActivitySequence seq;
        for (const auto& e : trace.events)
            if (e.lifecycle == "complete")
                seq.push_back(e.activity);
        result.push_back(std::move(seq));
    }
    return result;
}

EventLog attach_resources(const EventLog& log, const std::map<std::string, std::string>& role_map) {
    EventLog out = log;
    for (auto& trace : out.traces) {
        for (auto& e : trace.events) {
            auto it = role_map.find(e.activity);
            if (it == role_map.end())
                throw LogError(LogError::Kind::UnmappedActivity,
                               "activity '" + e.activity + "' (case " + trace.case_id + ") has no role mapping");
            e.resource = it->second;
        }
    }
    return out;
}

} // namespace crisisflow
