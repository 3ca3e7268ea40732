#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace depfid {

enum class ErrorKind {
    InsufficientSamples,
    InvalidData,
    InvalidArgument,
    DegenerateVariance,
    DegenerateInput,
    EigenNoConverge,
    IndexOutOfRange,
    NotPositiveDefinite,
    ShapeMismatch,
    InvalidSubspace,
    DomainError,
    IoError,
    ParseError,
    RaggedRows,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library. The kind tells callers what went
/// wrong; index/row/col carry the offending coordinate when one exists
/// (variance index, pivot index, CSV line and column, both 1-based for CSV).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> index() const noexcept { return index_; }
    std::optional<std::size_t> row() const noexcept { return row_; }
    std::optional<std::size_t> col() const noexcept { return col_; }

    static Error degenerate_variance(std::size_t index);
    static Error not_positive_definite(std::size_t pivot);
    static Error parse_error(std::size_t row, std::size_t col, std::string_view cell);
    static Error ragged_rows(std::size_t row);

private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
    std::optional<std::size_t> row_;
    std::optional<std::size_t> col_;
};

} // namespace depfid
