#include "sweep/csv.hpp"

#include <cstdio>

namespace thermoq::sweep {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path,
                     const std::vector<std::string>& columns)
    : path_(std::move(path)), n_cols_(columns.size()) {
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open '" + path_.string() + "' for writing");
    std::string header;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) header += ',';
        header += columns[i];
    }
    header += '\n';
    emit(header);
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // Destructor must not throw; error paths call close() explicitly.
    }
}

void CsvWriter::emit(const std::string& line) {
    out_.write(line.data(), (std::streamsize)line.size());
    hash_ = fnv1a64(line, hash_);
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_)
        throw IoError("row width mismatch in '" + path_.string() + "'");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_full(values[i]);
    }
    line += '\n';
    emit(line);
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_)
        throw IoError("row width mismatch in '" + path_.string() + "'");
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    emit(line);
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    out_.flush();
    if (!out_) throw IoError("write failure on '" + path_.string() + "'");
    out_.close();
}

}  // namespace thermoq::sweep
