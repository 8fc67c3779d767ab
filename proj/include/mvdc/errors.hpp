/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mvdc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoOnlineSources : public Error {
public:
    NoOnlineSources() : Error("no online SG/BESS unit") {}
};

class NoEquilibrium : public Error {
public:
    using Error::Error;
};

class VoltageFloor : public Error {
public:
    using Error::Error;
};

class InvalidEvent : public Error {
public:
    using Error::Error;
};

/// Runtime failure during integration, carrying the grid time it occurred at.
class SimulationError : public Error {
public:
    SimulationError(double t, const std::string& what)
        : Error("t = " + std::to_string(t) + " s: " + what), time_(t) {}
    [[nodiscard]] double time() const { return time_; }

private:
    double time_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

class NonMonotoneTime : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}
    [[nodiscard]] const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid scenario:";
        for (const auto& item : items) {
            out += "\n  - " + item;
        }
        return out;
    }
    std::vector<std::string> problems_;
};

}  // namespace mvdc
