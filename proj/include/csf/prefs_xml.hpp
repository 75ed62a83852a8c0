#pragma once

/*
 * Reader/writer for Android shared-preferences XML, the container the
 * secret blob ships in:
 *
 *   <?xml version='1.0' encoding='utf-8' standalone='yes' ?>
 *   <map>
 *       <string name="...">BASE64</string>
 *       <boolean name="..." value="true" />
 *   </map>
 *
 * The format is machine-generated with a fixed shape, so this is a strict
 * purpose-built parser rather than a general XML engine: string entries
 * are surfaced, other entry kinds are tolerated and skipped, and any
 * structural surprise raises XmlMalformed instead of guessing.
 */

#include <string>
#include <string_view>
#include <vector>

#include "csf/errors.hpp"

namespace csf::prefs {

struct StringEntry {
    std::string name;
    std::string value;
};

namespace detail {

inline void skip_ws(std::string_view text, size_t& pos) {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' || text[pos] == '\n'))
        ++pos;
}

inline std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] != '&') {
            out.push_back(raw[i++]);
            continue;
        }
        auto take = [&](std::string_view entity, char replacement) {
            if (raw.substr(i, entity.size()) == entity) {
                out.push_back(replacement);
                i += entity.size();
                return true;
            }
            return false;
        };
        if (take("&amp;", '&') || take("&lt;", '<') || take("&gt;", '>') ||
            take("&quot;", '"') || take("&apos;", '\''))
            continue;
        throw XmlMalformed("unknown XML entity in preferences file");
    }
    return out;
}

inline std::string encode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

// Parses the attribute list of an opening tag; returns the value of the
// `name` attribute when present, and whether the tag was self-closing.
struct TagHead {
    std::string name_attr;
    bool self_closing = false;
    size_t end_pos = 0;  // position just after '>'
};

inline TagHead parse_tag_head(std::string_view text, size_t pos) {
    TagHead head;
    while (pos < text.size() && text[pos] != '>') {
        if (text[pos] == '"' || text[pos] == '\'') {
            char quote = text[pos];
            size_t attr_start = pos + 1;
            size_t close = text.find(quote, attr_start);
            if (close == std::string_view::npos)
                throw XmlMalformed("unterminated attribute value");
            // look backwards for the attribute name
            size_t eq = text.rfind('=', pos);
            size_t name_end = eq;
            while (name_end > 0 &&
                   (text[name_end - 1] == ' ' || text[name_end - 1] == '\t'))
                --name_end;
            size_t name_start = name_end;
            while (name_start > 0 && (isalnum(static_cast<unsigned char>(text[name_start - 1])) ||
                                      text[name_start - 1] == '_' || text[name_start - 1] == ':'))
                --name_start;
            if (text.substr(name_start, name_end - name_start) == "name")
                head.name_attr = decode_entities(text.substr(attr_start, close - attr_start));
            pos = close + 1;
        } else {
            ++pos;
        }
    }
    if (pos >= text.size()) throw XmlMalformed("unterminated tag");
    head.self_closing = pos > 0 && text[pos - 1] == '/';
    head.end_pos = pos + 1;
    return head;
}

}  // namespace detail

inline std::vector<StringEntry> parse_prefs_xml(std::string_view xml) {
    using namespace detail;
    size_t pos = 0;
    skip_ws(xml, pos);
    if (xml.substr(pos, 5) == "<?xml") {
        size_t end = xml.find("?>", pos);
        if (end == std::string_view::npos) throw XmlMalformed("unterminated XML declaration");
        pos = end + 2;
    }
    skip_ws(xml, pos);
    if (xml.substr(pos, 4) != "<map") throw XmlMalformed("expected <map> root element");
    pos = parse_tag_head(xml, pos + 4).end_pos;

    std::vector<StringEntry> entries;
    for (;;) {
        skip_ws(xml, pos);
        if (pos >= xml.size()) throw XmlMalformed("missing </map>");
        if (xml.substr(pos, 6) == "</map>") break;
        if (xml[pos] != '<') throw XmlMalformed("stray text inside <map>");

        size_t tag_start = pos + 1;
        size_t tag_end = tag_start;
        while (tag_end < xml.size() && (isalnum(static_cast<unsigned char>(xml[tag_end])) ||
                                        xml[tag_end] == '-' || xml[tag_end] == '_'))
            ++tag_end;
        std::string_view tag = xml.substr(tag_start, tag_end - tag_start);
        if (tag.empty()) throw XmlMalformed("malformed element inside <map>");
        TagHead head = parse_tag_head(xml, tag_end);
        pos = head.end_pos;
        if (head.self_closing) continue;  // e.g. <boolean name=".." value=".." />

        std::string close_tag = "</" + std::string(tag) + ">";
        size_t close = xml.find(close_tag, pos);
        if (close == std::string_view::npos)
            throw XmlMalformed("missing closing tag for <" + std::string(tag) + ">");
        if (tag == "string")
            entries.push_back({head.name_attr,
                               decode_entities(xml.substr(pos, close - pos))});
        pos = close + close_tag.size();
    }
    return entries;
}

// Fixture-side writer, emitting the exact shape Android produces.
inline std::string write_prefs_xml(const std::vector<StringEntry>& entries) {
    using namespace detail;
    std::string out = "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n<map>\n";
    for (const auto& entry : entries) {
        out += "    <string name=\"" + encode_entities(entry.name) + "\">" +
               encode_entities(entry.value) + "</string>\n";
    }
    out += "</map>\n";
    return out;
}

}  // namespace csf::prefs
