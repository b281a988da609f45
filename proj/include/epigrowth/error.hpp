#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epigrowth
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition or type invariant.
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

/// Least-squares design matrix without full column rank.
class RankDeficient : public Error
{
public:
    using Error::Error;
};

/// The planner cannot keep consumption positive. `day()` is the first
/// offending day index (the horizon itself when the terminal requirement
/// cannot be met).
class Infeasible : public Error
{
public:
    Infeasible(const std::string& what, std::size_t day)
        : Error(what)
        , m_day(day)
    {
    }

    std::size_t day() const
    {
        return m_day;
    }

private:
    std::size_t m_day;
};

/// Malformed input data. `row()` is the 1-based line number in the source
/// file, 0 when the problem is not tied to a line.
class DataError : public Error
{
public:
    DataError(const std::string& file, std::size_t row, const std::string& what)
        : Error(file + (row > 0 ? ":" + std::to_string(row) : std::string()) + ": " + what)
        , m_file(file)
        , m_row(row)
    {
    }

    const std::string& file() const
    {
        return m_file;
    }
    std::size_t row() const
    {
        return m_row;
    }

private:
    std::string m_file;
    std::size_t m_row;
};

/// Configuration document that fails schema validation; `key_path()` is a
/// JSON-pointer style path to the offending key.
class ConfigError : public Error
{
public:
    ConfigError(const std::string& key_path, const std::string& what)
        : Error(key_path + ": " + what)
        , m_key_path(key_path)
    {
    }

    const std::string& key_path() const
    {
        return m_key_path;
    }

private:
    std::string m_key_path;
};

/// File system failure (unreadable input, unwritable output).
class IoError : public Error
{
public:
    using Error::Error;
};

} // namespace epigrowth
