#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace greedyq {

/// Parsed CLI invocation in a canonical order-independent form:
/// "<command> key=value key=value ..." with keys sorted. parse() of the
/// canonical string reproduces the config exactly.
struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> args;

    std::string canonical() const {
        std::ostringstream os;
        os << command;
        for (const auto& [k, v] : args) os << ' ' << k << '=' << v;
        return os.str();
    }

    static ExperimentConfig parse(const std::string& s) {
        ExperimentConfig c;
        std::istringstream is(s);
        if (!(is >> c.command)) throw std::invalid_argument("empty config string");
        std::string tok;
        while (is >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config token without '=': " + tok);
            c.args[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        return c;
    }

    bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace greedyq
