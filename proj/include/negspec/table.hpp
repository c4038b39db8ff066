#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace negspec {

enum class Channel { vacuum, thermal, total };

const char* channel_name(Channel c);
Channel parse_channel(const std::string& name);

struct SpectrumSample {
    double k = 0.0;
    double value = 0.0;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct SpectrumTable {
    Channel channel = Channel::total;
    std::vector<SpectrumSample> rows;
    Metadata metadata;

    // appends a row; k must exceed the previous abscissa
    void add(double k, double value);
    void validate() const;
};

// 17 significant digits, enough for an exact round trip
std::string format_double(double x);

// `#` metadata lines, then `k,value,channel`
void write_spectrum_csv(std::ostream& os, std::span<const SpectrumTable> tables);
std::vector<SpectrumTable> read_spectrum_csv(std::istream& is);

struct CsvTable {
    Metadata metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
    void add_numeric_row(std::span<const double> values);
    void write(std::ostream& os) const;
};

} // namespace negspec
