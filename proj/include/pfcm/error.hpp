#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfcm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (bad k, m, v, zeta, grid spec...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problems with the input data itself.
class DataError : public Error {
public:
    using Error::Error;
};

/// A malformed input file. Line and column are 1-based; 0 means "not applicable".
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Rows that cannot be normalized (zero mean or zero variance).
class DegenerateRowsError : public DataError {
public:
    DegenerateRowsError(const std::string& reason, std::vector<std::string> gene_ids);

    const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }

private:
    std::vector<std::string> gene_ids_;
};

/// Numerical blow-up (non-finite objective, degenerate cluster mass).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace pfcm
