#include "liftkit/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace liftkit::io {

namespace {

enum class Symmetry { General, Symmetric, SkewSymmetric, Hermitian };

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) {
        out.push_back(tok);
    }
    return out;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

double parse_double(const std::string& tok, std::size_t line) {
    double value = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("not a number: '" + tok + "'", line);
    }
    return value;
}

Eigen::Index parse_index(const std::string& tok, std::size_t line) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
        throw ParseError("not a non-negative integer: '" + tok + "'", line);
    }
    return static_cast<Eigen::Index>(value);
}

// Reads the next non-comment, non-blank line; returns false at EOF.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '%' || blank(line)) {
            continue;
        }
        return true;
    }
    return false;
}

void set_entry(Matrix& m, Eigen::Index i, Eigen::Index j, Complex value, Symmetry sym) {
    m(i, j) = value;
    if (i == j) {
        return;
    }
    switch (sym) {
    case Symmetry::General:
        break;
    case Symmetry::Symmetric:
        m(j, i) = value;
        break;
    case Symmetry::SkewSymmetric:
        m(j, i) = -value;
        break;
    case Symmetry::Hermitian:
        m(j, i) = std::conj(value);
        break;
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

Matrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError("empty input, expected %%MatrixMarket header", 1);
    }
    ++line_no;
    const auto header = split(lower(line));
    if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix") {
        throw ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", line_no);
    }

    MatrixFormat format{};
    if (header[2] == "array") {
        format = MatrixFormat::Array;
    } else if (header[2] == "coordinate") {
        format = MatrixFormat::Coordinate;
    } else {
        throw ParseError("unsupported format '" + header[2] + "'", line_no);
    }

    bool is_complex = false;
    if (header[3] == "complex") {
        is_complex = true;
    } else if (header[3] != "real" && header[3] != "integer" && header[3] != "double") {
        throw ParseError("unsupported field '" + header[3] + "'", line_no);
    }

    Symmetry sym{};
    if (header[4] == "general") {
        sym = Symmetry::General;
    } else if (header[4] == "symmetric") {
        sym = Symmetry::Symmetric;
    } else if (header[4] == "skew-symmetric") {
        sym = Symmetry::SkewSymmetric;
    } else if (header[4] == "hermitian") {
        sym = Symmetry::Hermitian;
    } else {
        throw ParseError("unsupported symmetry '" + header[4] + "'", line_no);
    }

    if (!next_data_line(in, line, line_no)) {
        throw ParseError("missing size line", line_no + 1);
    }
    const auto size_tok = split(line);
    const std::size_t expected_size_tokens = format == MatrixFormat::Array ? 2 : 3;
    if (size_tok.size() != expected_size_tokens) {
        throw ParseError("malformed size line", line_no);
    }
    const Eigen::Index rows = parse_index(size_tok[0], line_no);
    const Eigen::Index cols = parse_index(size_tok[1], line_no);
    if (sym != Symmetry::General && rows != cols) {
        throw ParseError("symmetric storage requires a square matrix", line_no);
    }

    Matrix m = Matrix::Zero(rows, cols);
    const std::size_t value_tokens = is_complex ? 2 : 1;

    auto read_value = [&](const std::vector<std::string>& tok, std::size_t offset) {
        const double re = parse_double(tok[offset], line_no);
        const double im = is_complex ? parse_double(tok[offset + 1], line_no) : 0.0;
        return Complex(re, im);
    };

    if (format == MatrixFormat::Array) {
        // Column-major; symmetric variants list the lower triangle only.
        for (Eigen::Index j = 0; j < cols; ++j) {
            const Eigen::Index first_row = sym == Symmetry::General ? 0
                                           : sym == Symmetry::SkewSymmetric ? j + 1
                                                                            : j;
            for (Eigen::Index i = first_row; i < rows; ++i) {
                if (!next_data_line(in, line, line_no)) {
                    throw ParseError("file ends before entry (" + std::to_string(i + 1) + ", " +
                                         std::to_string(j + 1) + ")",
                                     line_no + 1);
                }
                const auto tok = split(line);
                if (tok.size() != value_tokens) {
                    throw ParseError("expected " + std::to_string(value_tokens) + " value(s)",
                                     line_no);
                }
                set_entry(m, i, j, read_value(tok, 0), sym);
            }
        }
    } else {
        const Eigen::Index nnz = parse_index(size_tok[2], line_no);
        for (Eigen::Index k = 0; k < nnz; ++k) {
            if (!next_data_line(in, line, line_no)) {
                throw ParseError("file ends after " + std::to_string(k) + " of " +
                                     std::to_string(nnz) + " entries",
                                 line_no + 1);
            }
            const auto tok = split(line);
            if (tok.size() != 2 + value_tokens) {
                throw ParseError("malformed coordinate entry", line_no);
            }
            const Eigen::Index i = parse_index(tok[0], line_no);
            const Eigen::Index j = parse_index(tok[1], line_no);
            if (i < 1 || i > rows || j < 1 || j > cols) {
                throw ParseError("entry index out of range", line_no);
            }
            set_entry(m, i - 1, j - 1, read_value(tok, 2), sym);
        }
    }

    if (next_data_line(in, line, line_no)) {
        throw ParseError("unexpected trailing data", line_no);
    }
    if (!all_finite(m)) {
        throw ParseError("non-finite entry", line_no);
    }
    return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_matrix(in);
}

MatrixField natural_field(const Matrix& m) {
    return m.imag().isZero(0.0) ? MatrixField::Real : MatrixField::Complex;
}

void write_matrix(const Matrix& m, std::ostream& out, MatrixFormat format, MatrixField field) {
    if (!all_finite(m)) {
        throw Error("write_matrix: matrix has non-finite entries");
    }
    const bool cplx = field == MatrixField::Complex;
    if (!cplx && !m.imag().isZero(0.0)) {
        throw Error("write_matrix: real field requested for a complex matrix");
    }
    auto value = [&](Complex z) {
        return cplx ? format_double(z.real()) + " " + format_double(z.imag())
                    : format_double(z.real());
    };

    out << "%%MatrixMarket matrix " << (format == MatrixFormat::Array ? "array" : "coordinate")
        << ' ' << (cplx ? "complex" : "real") << " general\n";
    if (format == MatrixFormat::Array) {
        out << m.rows() << ' ' << m.cols() << '\n';
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                out << value(m(i, j)) << '\n';
            }
        }
    } else {
        Eigen::Index nnz = 0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                nnz += m(i, j) != Complex{} ? 1 : 0;
            }
        }
        out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                if (m(i, j) != Complex{}) {
                    out << i + 1 << ' ' << j + 1 << ' ' << value(m(i, j)) << '\n';
                }
            }
        }
    }
    if (!out) {
        throw IoError("write_matrix: stream write failed");
    }
}

void write_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format,
                  MatrixField field) {
    auto out = open_out(path);
    write_matrix(m, out, format, field);
}

void write_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format) {
    write_matrix(m, path, format, natural_field(m));
}

void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    if (records.empty()) {
        throw Error("emit_csv: no records");
    }
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << format_double(r.epsilon) << ',' << format_double(r.beta) << ',' << r.n_trials << ','
            << r.n_flagged << ',' << format_double(r.mean_error) << ','
            << format_double(r.rms_error) << ',' << format_double(r.mean_lambda0_abs) << ','
            << format_double(r.mean_cond_recip) << ',' << format_double(r.baseline_error) << '\n';
    }
    if (!out) {
        throw IoError("emit_csv: stream write failed");
    }
}

void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
    auto out = open_out(path);
    emit_csv(records, out);
}

std::vector<SweepRecord> read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ParseError("missing or unexpected CSV header", line_no);
    }
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        if (cells.size() != 9) {
            throw ParseError("expected 9 columns, found " + std::to_string(cells.size()), line_no);
        }
        SweepRecord r;
        r.epsilon = parse_double(cells[0], line_no);
        r.beta = parse_double(cells[1], line_no);
        r.n_trials = static_cast<std::size_t>(parse_index(cells[2], line_no));
        r.n_flagged = static_cast<std::size_t>(parse_index(cells[3], line_no));
        r.mean_error = parse_double(cells[4], line_no);
        r.rms_error = parse_double(cells[5], line_no);
        r.mean_lambda0_abs = parse_double(cells[6], line_no);
        r.mean_cond_recip = parse_double(cells[7], line_no);
        r.baseline_error = parse_double(cells[8], line_no);
        out.push_back(r);
    }
    return out;
}

std::vector<SweepRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_csv(in);
}

}  // namespace liftkit::io
