#pragma once

#include <string>
#include <vector>

namespace masp {

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    std::string message;

    std::string to_string() const {
        std::string s = severity == Severity::error ? "error" : "warning";
        return std::to_string(line) + ":" + std::to_string(column) + ": " + s + ": " + message;
    }
};

struct SourceUnit {
    enum class Kind { program, instance };
    std::string path;
    std::string content;
    Kind kind = Kind::program;
};

inline bool has_error(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        if (d.severity == Diagnostic::Severity::error) return true;
    return false;
}

}  // namespace masp
