#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace x3db {

enum class Severity { Info, Warning, Error };

inline std::string_view severity_name(Severity s) {
    switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
    }
    return "error";
}

/// One finding produced by a parser, validator or translator. `code` is a
/// stable machine-readable identifier (e.g. "unknown-node"); `line`/`column`
/// are 1-based and 0 when unknown.
struct Diagnostic {
    Severity severity = Severity::Error;
    size_t line = 0;
    size_t column = 0;
    std::string code;
    std::string message;

    /// "severity code path:line message" — the format the CLI prints.
    std::string format(std::string_view path = {}) const {
        std::string out;
        out += severity_name(severity);
        out += ' ';
        out += code;
        out += ' ';
        out += path;
        out += ':';
        out += std::to_string(line);
        out += ' ';
        out += message;
        return out;
    }
};

class DiagnosticList {
public:
    void add(Diagnostic d) { items_.push_back(std::move(d)); }
    void error(size_t line, size_t col, std::string code, std::string message) {
        items_.push_back({Severity::Error, line, col, std::move(code), std::move(message)});
    }
    void warning(size_t line, size_t col, std::string code, std::string message) {
        items_.push_back({Severity::Warning, line, col, std::move(code), std::move(message)});
    }
    void info(size_t line, size_t col, std::string code, std::string message) {
        items_.push_back({Severity::Info, line, col, std::move(code), std::move(message)});
    }
    void merge(const DiagnosticList& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }

    bool has_errors() const {
        for (const auto& d : items_)
            if (d.severity == Severity::Error)
                return true;
        return false;
    }
    bool has_warnings() const {
        for (const auto& d : items_)
            if (d.severity == Severity::Warning)
                return true;
        return false;
    }
    const Diagnostic* find(std::string_view code) const {
        for (const auto& d : items_)
            if (d.code == code)
                return &d;
        return nullptr;
    }
    bool contains(std::string_view code) const { return find(code) != nullptr; }

    bool empty() const { return items_.empty(); }
    size_t size() const { return items_.size(); }
    const Diagnostic& operator[](size_t i) const { return items_[i]; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<Diagnostic> items_;
};

/// Value-or-diagnostics carrier used by every operation that can reject its
/// input. ok() means a value exists and nothing error-severity was reported.
template <typename T>
struct Result {
    std::optional<T> value;
    DiagnosticList diags;

    bool ok() const { return value.has_value() && !diags.has_errors(); }
    explicit operator bool() const { return ok(); }
    const T& operator*() const { return *value; }
    T& operator*() { return *value; }
    const T* operator->() const { return &*value; }
    T* operator->() { return &*value; }

    static Result failure(Diagnostic d) {
        Result r;
        r.diags.add(std::move(d));
        return r;
    }
    static Result failure(std::string code, std::string message, size_t line = 0, size_t col = 0) {
        Result r;
        r.diags.error(line, col, std::move(code), std::move(message));
        return r;
    }
};

} // namespace x3db
