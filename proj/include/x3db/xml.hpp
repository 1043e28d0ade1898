#pragma once

// Minimal XML reader/writer shared by the X3D and OGRE mesh codecs.
// Covers elements, attributes, comments, CDATA, DOCTYPE skipping and entity
// references. Every element records its line/column and the exact source
// bytes it was parsed from, which the X3D side uses to reproduce unknown
// subtrees verbatim.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "x3db/diagnostics.hpp"

namespace x3db {

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes; // source order
    std::vector<XmlElement> children;
    std::string text; // concatenated non-whitespace character data
    std::string raw;  // exact source bytes, filled by the parser
    bool emit_raw = false; // writer emits `raw` verbatim instead of the tree
    size_t line = 0;
    size_t column = 0;

    const std::string* attribute(std::string_view attr_name) const;
    XmlElement& add_child(std::string child_name);
    void set_attribute(std::string attr_name, std::string value);
};

Result<XmlElement> xml_parse(std::string_view text);

/// Canonical serialization: 2-space indent, attributes in stored order,
/// self-closing empty elements, LF line endings.
std::string xml_serialize(const XmlElement& root, bool with_declaration = true);

/// Structural equality: attribute order insignificant, text and children
/// order significant; raw bytes and locations ignored.
bool xml_equal(const XmlElement& a, const XmlElement& b);

} // namespace x3db
