// mspc/errors.hpp - exception types thrown across the library
#pragma once

#include <stdexcept>
#include <string>

namespace mspc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- signal ingestion ----

struct MissingFile : Error {
    explicit MissingFile(const std::string& path) : Error("missing file: " + path) {}
};

struct EmptyFile : Error {
    explicit EmptyFile(const std::string& path) : Error("no samples in file: " + path) {}
};

struct NonNumericSample : Error {
    NonNumericSample(long line_number, const std::string& token)
        : Error("non-numeric sample on line " + std::to_string(line_number) + ": '" + token + "'"),
          line(line_number) {}
    long line;
};

struct IoFailure : Error {
    explicit IoFailure(const std::string& detail) : Error("i/o failure: " + detail) {}
};

struct ManifestError : Error {
    explicit ManifestError(const std::string& detail) : Error("manifest: " + detail) {}
};

// ---- synthesis ----

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& detail) : Error("invalid parameters: " + detail) {}
};

// ---- spectral ----

struct SignalTooShort : Error {
    explicit SignalTooShort(const std::string& detail) : Error("signal too short: " + detail) {}
};

struct BatchLengthTooSmall : Error {
    explicit BatchLengthTooSmall(const std::string& detail)
        : Error("batch length too small: " + detail) {}
};

struct NonFiniteInput : Error {
    explicit NonFiniteInput(const std::string& detail) : Error("non-finite input: " + detail) {}
};

struct AsymmetricSpectrum : Error {
    explicit AsymmetricSpectrum(const std::string& detail)
        : Error("spectrum not conjugate-symmetric: " + detail) {}
};

struct TooManyComponents : Error {
    explicit TooManyComponents(const std::string& detail)
        : Error("too many components: " + detail) {}
};

// ---- features ----

struct TooFewBatches : Error {
    explicit TooFewBatches(const std::string& detail) : Error("too few batches: " + detail) {}
};

struct DegenerateColumn : Error {
    explicit DegenerateColumn(const std::string& column_name)
        : Error("degenerate (constant) feature column: " + column_name), column(column_name) {}
    std::string column;
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& detail)
        : Error("dimension mismatch: " + detail) {}
};

// ---- pca ----

struct BadDimensions : Error {
    explicit BadDimensions(const std::string& detail) : Error("bad dimensions: " + detail) {}
};

struct RankDeficient : Error {
    explicit RankDeficient(const std::string& detail) : Error("rank deficient: " + detail) {}
};

// ---- control charts ----

struct DegenerateSpread : Error {
    explicit DegenerateSpread(const std::string& detail)
        : Error("degenerate calibration spread: " + detail) {}
};

struct ConfigMismatch : Error {
    explicit ConfigMismatch(const std::string& detail) : Error("config mismatch: " + detail) {}
};

struct LabelError : Error {
    explicit LabelError(const std::string& detail) : Error("label error: " + detail) {}
};

// ---- optimization ----

struct InfeasibleBounds : Error {
    explicit InfeasibleBounds(const std::string& detail)
        : Error("infeasible bounds: " + detail) {}
};

struct EmptyFaultSet : Error {
    explicit EmptyFaultSet(const std::string& detail) : Error("empty fault set: " + detail) {}
};

struct BaseModelInadequate : Error {
    explicit BaseModelInadequate(const std::string& detail)
        : Error("base model inadequate: " + detail) {}
};

// ---- model store ----

struct VersionMismatch : Error {
    explicit VersionMismatch(const std::string& detail) : Error("version mismatch: " + detail) {}
};

struct CorruptModel : Error {
    explicit CorruptModel(const std::string& detail) : Error("corrupt model: " + detail) {}
};

// ---- reporting ----

struct EmptyChart : Error {
    explicit EmptyChart(const std::string& detail) : Error("empty chart: " + detail) {}
};

}  // namespace mspc
