#include "depfid/errors.hpp"

namespace depfid {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::InvalidData: return "InvalidData";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::EigenNoConverge: return "EigenNoConverge";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidSubspace: return "InvalidSubspace";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

Error Error::degenerate_variance(std::size_t index) {
    Error e(ErrorKind::DegenerateVariance,
            "variance of column " + std::to_string(index) + " is not positive");
    e.index_ = index;
    return e;
}

Error Error::not_positive_definite(std::size_t pivot) {
    Error e(ErrorKind::NotPositiveDefinite,
            "non-positive pivot at index " + std::to_string(pivot));
    e.index_ = pivot;
    return e;
}

Error Error::parse_error(std::size_t row, std::size_t col, std::string_view cell) {
    Error e(ErrorKind::ParseError, "cannot parse '" + std::string(cell) + "' at row " +
                                       std::to_string(row) + ", column " + std::to_string(col));
    e.row_ = row;
    e.col_ = col;
    return e;
}

Error Error::ragged_rows(std::size_t row) {
    Error e(ErrorKind::RaggedRows, "row " + std::to_string(row) + " has the wrong number of fields");
    e.row_ = row;
    return e;
}

} // namespace depfid
