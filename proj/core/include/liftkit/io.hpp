#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "liftkit/experiments.hpp"
#include "liftkit/types.hpp"

namespace liftkit::io {

enum class MatrixFormat { Array, Coordinate };
enum class MatrixField { Real, Complex };

/// Reads a Matrix Market file (array or coordinate; real, integer or complex
/// field; general, symmetric, skew-symmetric or hermitian symmetry) into a
/// dense complex matrix.
Matrix read_matrix(const std::filesystem::path& path);
Matrix read_matrix(std::istream& in);

/// Real field is chosen automatically when every imaginary part is zero.
MatrixField natural_field(const Matrix& m);

/// Writes with shortest round-trip decimal formatting, so reading the file
/// back reproduces every entry bit-for-bit.
void write_matrix(const Matrix& m, const std::filesystem::path& path,
                  MatrixFormat format = MatrixFormat::Array);
void write_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format,
                  MatrixField field);
void write_matrix(const Matrix& m, std::ostream& out, MatrixFormat format, MatrixField field);

inline constexpr const char* kCsvHeader =
    "epsilon,beta,n_trials,n_flagged,mean_error,rms_error,mean_lambda0_abs,mean_cond_recip,"
    "baseline_error";

void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path);
void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out);

/// Parses a file produced by emit_csv.
std::vector<SweepRecord> read_csv(const std::filesystem::path& path);
std::vector<SweepRecord> read_csv(std::istream& in);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace liftkit::io
