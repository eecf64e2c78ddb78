#include "crisisflow/error.hpp"
#include "crisisflow/event_log.hpp"

#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace crisisflow {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

void attribute(std::ostringstream& out, const char* indent, const char* type, const std::string& key,
               const std::string& value) {
    out << indent << '<' << type << " key=\"" << escape(key) << "\" value=\"" << escape(value) << "\"/>\n";
}

using boost::property_tree::ptree;

struct Attr {
    std::string key;
    std::string value;
};

bool is_attribute_tag(const std::string& tag) {
    return tag == "string" || tag == "date" || tag == "int" || tag == "float" || tag == "boolean" || tag == "id";
}

Attr read_attr(const ptree& node) {
    return {node.get<std::string>("<xmlattr>.key", ""), node.get<std::string>("<xmlattr>.value", "")};
}

} // namespace

std::string write_xes(const EventLog& log) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<log xes.version=\"1.0\" xes.features=\"nested-attributes\" xmlns=\"http://www.xes-standard.org/\">\n";
    out << "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
    out << "  <extension name=\"Organizational\" prefix=\"org\" uri=\"http://www.xes-standard.org/org.xesext\"/>\n";
    out << "  <extension name=\"Lifecycle\" prefix=\"lifecycle\" uri=\"http://www.xes-standard.org/lifecycle.xesext\"/>\n";
    out << "  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n";
    for (const auto& [key, value] : log.attributes)
        attribute(out, "  ", "string", key, value);
    for (const auto& trace : log.traces) {
        out << "  <trace>\n";
        attribute(out, "    ", "string", "concept:name", trace.case_id);
        for (const auto& e : trace.events) {
            out << "    <event>\n";
            attribute(out, "      ", "string", "concept:name", e.activity);
            if (!e.resource.empty())
                attribute(out, "      ", "string", "org:resource", e.resource);
            attribute(out, "      ", "string", "lifecycle:transition", e.lifecycle);
            attribute(out, "      ", "date", "time:timestamp", format_timestamp(e.timestamp));
            out << "    </event>\n";
        }
        out << "  </trace>\n";
    }
    out << "</log>\n";
    return out.str();
}

EventLog read_xes(std::string_view text) {
    ptree doc;
    try {
        std::istringstream in{std::string(text)};
        boost::property_tree::read_xml(in, doc, boost::property_tree::xml_parser::trim_whitespace);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw LogError(LogError::Kind::XmlParse, std::string("XES: ") + e.what());
    }
    auto root = doc.get_child_optional("log");
    if (!root)
        throw LogError(LogError::Kind::XmlParse, "XES: missing <log> root element");

    EventLog log;
    std::size_t trace_no = 0;
    for (const auto& [tag, node] : *root) {
        if (tag == "string") {
            Attr a = read_attr(node);
            log.attributes[a.key] = a.value;
            continue;
        }
        if (tag != "trace")
            continue;
        ++trace_no;

        Trace trace;
        bool named = false;
        std::vector<Event> events;
        for (const auto& [child_tag, child] : node) {
            if (is_attribute_tag(child_tag)) {
                Attr a = read_attr(child);
                if (a.key == "concept:name") {
                    trace.case_id = a.value;
                    named = true;
                }
                continue;
            }
            if (child_tag != "event")
                continue;
            Event e;
            bool has_name = false, has_time = false;
            for (const auto& [attr_tag, attr_node] : child) {
                if (!is_attribute_tag(attr_tag))
                    continue;
                Attr a = read_attr(attr_node);
                if (a.key == "concept:name") {
                    e.activity = a.value;
                    has_name = true;
                } else if (a.key == "org:resource") {
                    e.resource = a.value;
                } else if (a.key == "lifecycle:transition") {
                    e.lifecycle = a.value;
                } else if (a.key == "time:timestamp") {
                    try {
                        e.timestamp = parse_timestamp(a.value);
                    } catch (const std::invalid_argument& ex) {
                        throw LogError(LogError::Kind::XmlParse, std::string("XES: ") + ex.what());
                    }
                    has_time = true;
                }
            }
            if (!has_name || e.activity.empty())
                throw LogError(LogError::Kind::MissingConceptName,
                               "XES: event " + std::to_string(events.size() + 1) + " of trace " +
                                   std::to_string(trace_no) + " has no concept:name");
            if (!has_time)
                throw LogError(LogError::Kind::MissingTimestamp,
                               "XES: event '" + e.activity + "' of trace " + std::to_string(trace_no) +
                                   " has no time:timestamp");
            events.push_back(std::move(e));
        }
        if (!named)
            throw LogError(LogError::Kind::MissingConceptName,
                           "XES: trace " + std::to_string(trace_no) + " has no concept:name");
        for (auto& e : events)
            e.case_id = trace.case_id;
        trace.events = std::move(events);
        log.traces.push_back(std::move(trace));
    }
    return log;
}

} // namespace crisisflow
