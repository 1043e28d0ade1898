#include "x3db/xml.hpp"

#include <algorithm>
#include <cctype>

#include "diagnostics_impl.hpp"

namespace x3db {

const std::string* XmlElement::attribute(std::string_view attr_name) const {
    for (const auto& [k, v] : attributes)
        if (k == attr_name)
            return &v;
    return nullptr;
}

XmlElement& XmlElement::add_child(std::string child_name) {
    XmlElement e;
    e.name = std::move(child_name);
    children.push_back(std::move(e));
    return children.back();
}

void XmlElement::set_attribute(std::string attr_name, std::string value) {
    for (auto& [k, v] : attributes) {
        if (k == attr_name) {
            v = std::move(value);
            return;
        }
    }
    attributes.emplace_back(std::move(attr_name), std::move(value));
}

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;
    size_t line = 1;
    size_t column = 1;

    bool eof() const { return pos >= text.size(); }
    char peek(size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }
    bool starts_with(std::string_view s) const {
        return text.compare(pos, s.size(), s) == 0;
    }
    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        return c;
    }
    void advance_by(size_t n) {
        for (size_t i = 0; i < n && !eof(); ++i)
            advance();
    }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
            advance();
    }
};

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' || c == '.';
}

class Parser {
public:
    explicit Parser(std::string_view text) : cur_{text} {}

    Result<XmlElement> run() {
        Result<XmlElement> result;
        skip_prolog();
        if (cur_.eof()) {
            fail("xml-syntax", "document has no root element");
            result.diags = diags_;
            return result;
        }
        XmlElement root;
        if (!parse_element(root)) {
            result.diags = diags_;
            return result;
        }
        skip_misc();
        if (!cur_.eof())
            fail("xml-syntax", "content after root element");
        result.diags = diags_;
        if (!diags_.has_errors())
            result.value = std::move(root);
        return result;
    }

private:
    Cursor cur_;
    DiagnosticList diags_;
    bool failed_ = false;

    void fail(std::string code, std::string message) {
        diags_.error(cur_.line, cur_.column, std::move(code), std::move(message));
        failed_ = true;
    }

    void skip_prolog() {
        while (!cur_.eof()) {
            cur_.skip_ws();
            if (cur_.starts_with("\xEF\xBB\xBF")) {
                cur_.advance_by(3);
            } else if (cur_.starts_with("<?")) {
                skip_until("?>");
            } else if (cur_.starts_with("<!--")) {
                skip_until("-->");
            } else if (cur_.starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_misc() {
        while (!cur_.eof()) {
            cur_.skip_ws();
            if (cur_.starts_with("<!--"))
                skip_until("-->");
            else if (cur_.starts_with("<?"))
                skip_until("?>");
            else
                return;
        }
    }

    void skip_until(std::string_view terminator) {
        size_t found = cur_.text.find(terminator, cur_.pos);
        if (found == std::string_view::npos) {
            fail("xml-syntax", std::string("unterminated '") + std::string(terminator) + "'");
            cur_.advance_by(cur_.text.size() - cur_.pos);
            return;
        }
        cur_.advance_by(found + terminator.size() - cur_.pos);
    }

    void skip_doctype() {
        // internal subsets nest square brackets
        int brackets = 0;
        while (!cur_.eof()) {
            char c = cur_.advance();
            if (c == '[')
                ++brackets;
            else if (c == ']')
                --brackets;
            else if (c == '>' && brackets <= 0)
                return;
        }
        fail("xml-syntax", "unterminated DOCTYPE");
    }

    std::string parse_name() {
        std::string name;
        if (cur_.eof() || !is_name_start(cur_.peek()))
            return name;
        name += cur_.advance();
        while (!cur_.eof() && is_name_char(cur_.peek()))
            name += cur_.advance();
        return name;
    }

    std::string decode_entities(std::string_view s, size_t at_line, size_t at_col) {
        std::string out;
        out.reserve(s.size());
        for (size_t i = 0; i < s.size();) {
            if (s[i] != '&') {
                out += s[i++];
                continue;
            }
            size_t semi = s.find(';', i);
            if (semi == std::string_view::npos) {
                diags_.warning(at_line, at_col, "xml-entity", "unterminated entity reference");
                out += s[i++];
                continue;
            }
            std::string_view ent = s.substr(i + 1, semi - i - 1);
            if (ent == "amp")
                out += '&';
            else if (ent == "lt")
                out += '<';
            else if (ent == "gt")
                out += '>';
            else if (ent == "quot")
                out += '"';
            else if (ent == "apos")
                out += '\'';
            else if (!ent.empty() && ent[0] == '#') {
                long long code = 0;
                bool good = false;
                if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
                    auto [p, ec] = std::from_chars(ent.data() + 2, ent.data() + ent.size(), code, 16);
                    good = ec == std::errc() && p == ent.data() + ent.size();
                } else {
                    auto [p, ec] = std::from_chars(ent.data() + 1, ent.data() + ent.size(), code, 10);
                    good = ec == std::errc() && p == ent.data() + ent.size();
                }
                if (good && code > 0 && code < 0x110000) {
                    append_utf8(out, static_cast<uint32_t>(code));
                } else {
                    diags_.warning(at_line, at_col, "xml-entity", "bad character reference");
                    out += s.substr(i, semi - i + 1);
                }
            } else {
                diags_.warning(at_line, at_col, "xml-entity",
                               "unknown entity '&" + std::string(ent) + ";'");
                out += s.substr(i, semi - i + 1);
            }
            i = semi + 1;
        }
        return out;
    }

    static void append_utf8(std::string& out, uint32_t cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    bool parse_attributes(XmlElement& el) {
        while (true) {
            cur_.skip_ws();
            if (cur_.eof()) {
                fail("xml-syntax", "unexpected end of input in element '" + el.name + "'");
                return false;
            }
            char c = cur_.peek();
            if (c == '>' || c == '/' || c == '?')
                return true;
            size_t at_line = cur_.line, at_col = cur_.column;
            std::string key = parse_name();
            if (key.empty()) {
                fail("xml-syntax", "expected attribute name in element '" + el.name + "'");
                return false;
            }
            cur_.skip_ws();
            if (cur_.peek() != '=') {
                fail("xml-syntax", "expected '=' after attribute '" + key + "'");
                return false;
            }
            cur_.advance();
            cur_.skip_ws();
            char quote = cur_.peek();
            if (quote != '"' && quote != '\'') {
                fail("xml-syntax", "attribute value of '" + key + "' must be quoted");
                return false;
            }
            cur_.advance();
            size_t start = cur_.pos;
            while (!cur_.eof() && cur_.peek() != quote)
                cur_.advance();
            if (cur_.eof()) {
                fail("xml-syntax", "unterminated attribute value for '" + key + "'");
                return false;
            }
            std::string value =
                decode_entities(cur_.text.substr(start, cur_.pos - start), at_line, at_col);
            cur_.advance(); // closing quote
            if (el.attribute(key))
                diags_.warning(at_line, at_col, "xml-duplicate-attribute",
                               "attribute '" + key + "' repeated; keeping the first");
            else
                el.attributes.emplace_back(std::move(key), std::move(value));
        }
    }

    bool parse_element(XmlElement& el) {
        size_t raw_start = cur_.pos;
        el.line = cur_.line;
        el.column = cur_.column;
        if (cur_.peek() != '<') {
            fail("xml-syntax", "expected '<'");
            return false;
        }
        cur_.advance();
        el.name = parse_name();
        if (el.name.empty()) {
            fail("xml-syntax", "expected element name");
            return false;
        }
        if (!parse_attributes(el))
            return false;
        if (cur_.starts_with("/>")) {
            cur_.advance_by(2);
            el.raw = std::string(cur_.text.substr(raw_start, cur_.pos - raw_start));
            return true;
        }
        if (cur_.peek() != '>') {
            fail("xml-syntax", "expected '>' to close tag '" + el.name + "'");
            return false;
        }
        cur_.advance();
        // content
        std::string text;
        while (true) {
            if (cur_.eof()) {
                fail("xml-syntax", "missing closing tag for '" + el.name + "'");
                return false;
            }
            if (cur_.starts_with("<!--")) {
                skip_until("-->");
                if (failed_)
                    return false;
                continue;
            }
            if (cur_.starts_with("<![CDATA[")) {
                size_t end = cur_.text.find("]]>", cur_.pos);
                if (end == std::string_view::npos) {
                    fail("xml-syntax", "unterminated CDATA section");
                    return false;
                }
                text += cur_.text.substr(cur_.pos + 9, end - cur_.pos - 9);
                cur_.advance_by(end + 3 - cur_.pos);
                continue;
            }
            if (cur_.starts_with("<?")) {
                skip_until("?>");
                if (failed_)
                    return false;
                continue;
            }
            if (cur_.starts_with("</")) {
                cur_.advance_by(2);
                std::string close = parse_name();
                cur_.skip_ws();
                if (cur_.peek() != '>') {
                    fail("xml-syntax", "malformed closing tag '" + close + "'");
                    return false;
                }
                cur_.advance();
                if (close != el.name) {
                    fail("xml-syntax",
                         "closing tag '" + close + "' does not match '" + el.name + "'");
                    return false;
                }
                break;
            }
            if (cur_.peek() == '<') {
                XmlElement child;
                if (!parse_element(child))
                    return false;
                el.children.push_back(std::move(child));
                continue;
            }
            size_t at_line = cur_.line, at_col = cur_.column;
            size_t start = cur_.pos;
            while (!cur_.eof() && cur_.peek() != '<')
                cur_.advance();
            std::string_view run = cur_.text.substr(start, cur_.pos - start);
            if (run.find_first_not_of(" \t\r\n") != std::string_view::npos)
                text += decode_entities(run, at_line, at_col);
        }
        // trim surrounding whitespace of accumulated character data
        size_t b = text.find_first_not_of(" \t\r\n");
        size_t e = text.find_last_not_of(" \t\r\n");
        el.text = b == std::string::npos ? std::string() : text.substr(b, e - b + 1);
        el.raw = std::string(cur_.text.substr(raw_start, cur_.pos - raw_start));
        return true;
    }
};

void escape_attr(std::string& out, std::string_view v) {
    for (char c : v) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
}

void escape_text(std::string& out, std::string_view v) {
    for (char c : v) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
}

void write_element(std::string& out, const XmlElement& el, int depth) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    if (el.emit_raw && !el.raw.empty()) {
        out += indent;
        out += el.raw;
        out += '\n';
        return;
    }
    out += indent;
    out += '<';
    out += el.name;
    for (const auto& [k, v] : el.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        escape_attr(out, v);
        out += '"';
    }
    if (el.children.empty() && el.text.empty()) {
        out += "/>\n";
        return;
    }
    out += '>';
    if (!el.text.empty())
        escape_text(out, el.text);
    if (!el.children.empty()) {
        out += '\n';
        for (const auto& c : el.children)
            write_element(out, c, depth + 1);
        out += indent;
    }
    out += "</";
    out += el.name;
    out += ">\n";
}

} // namespace

Result<XmlElement> xml_parse(std::string_view text) {
    return Parser(text).run();
}

std::string xml_serialize(const XmlElement& root, bool with_declaration) {
    std::string out;
    if (with_declaration)
        out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    write_element(out, root, 0);
    return out;
}

bool xml_equal(const XmlElement& a, const XmlElement& b) {
    if (a.name != b.name || a.text != b.text)
        return false;
    if (a.attributes.size() != b.attributes.size())
        return false;
    auto sorted = [](const XmlElement& e) {
        auto attrs = e.attributes;
        std::sort(attrs.begin(), attrs.end());
        return attrs;
    };
    if (sorted(a) != sorted(b))
        return false;
    if (a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!xml_equal(a.children[i], b.children[i]))
            return false;
    return true;
}

} // namespace x3db
