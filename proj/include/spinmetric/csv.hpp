#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

namespace spinmetric {

/// Shortest decimal that round-trips to the same IEEE-754 double.
std::string format_double(double value);

/// Accumulates CSV text in memory so the bytes can be hashed before hitting disk.
class CsvBuilder {
public:
    explicit CsvBuilder(std::string_view header);

    void row(std::initializer_list<double> values);
    const std::string& text() const { return text_; }
    std::size_t rows() const { return rows_; }

private:
    std::string text_;
    std::size_t rows_ = 0;
};

/// Writes `contents` to `path`; I/O failures throw std::runtime_error naming the path.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace spinmetric
