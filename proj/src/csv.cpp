#include "spinmetric/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace spinmetric {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("failed to format double");
    return std::string(buf.data(), end);
}

CsvBuilder::CsvBuilder(std::string_view header) : text_(header) { text_.push_back('\n'); }

void CsvBuilder::row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) text_.push_back(',');
        text_ += format_double(v);
        first = false;
    }
    text_.push_back('\n');
    ++rows_;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace spinmetric
