#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairsim {

class IoError : public std::runtime_error {
public:
    IoError(const std::filesystem::path& path, const std::string& what)
        : std::runtime_error(path.string() + ": " + what), path_(path) {}

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

// Shortest decimal that round-trips to the same double; never locale dependent.
std::string format_number(double value);

// Minimal RFC 4180 writer: comma separated, "\n" line ends, fields quoted
// only when they contain a comma, quote or newline.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& fields);

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double value) { return field(format_number(value)); }
    CsvWriter& field(long value) { return field(std::to_string(value)); }
    CsvWriter& field(int value) { return field(std::to_string(value)); }
    CsvWriter& field(unsigned long long value) { return field(std::to_string(value)); }
    CsvWriter& field(unsigned long value) { return field(std::to_string(value)); }
    // Null is an empty field.
    CsvWriter& field(const std::optional<double>& value) { return value ? field(*value) : field(std::string_view{}); }
    void end_row();

private:
    std::ostream& out_;
    bool first_ = true;
};

// Strict reader for the files written above. Throws std::runtime_error on
// an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
std::vector<std::vector<std::string>> read_csv_file(const std::filesystem::path& path);

// Opens `path` for binary writing, throwing IoError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace fairsim
