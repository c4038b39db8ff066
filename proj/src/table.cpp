#include "negspec/table.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "negspec/errors.hpp"

namespace negspec {

const char* channel_name(Channel c) {
    switch (c) {
    case Channel::vacuum: return "vacuum";
    case Channel::thermal: return "thermal";
    case Channel::total: return "total";
    }
    return "unknown";
}

Channel parse_channel(const std::string& name) {
    if (name == "vacuum")
        return Channel::vacuum;
    if (name == "thermal")
        return Channel::thermal;
    if (name == "total")
        return Channel::total;
    throw DomainError("unknown channel '" + name + "'");
}

void SpectrumTable::add(double k, double value) {
    if (!rows.empty() && !(k > rows.back().k))
        throw DomainError("SpectrumTable: abscissae must be strictly increasing");
    rows.push_back({k, value});
}

void SpectrumTable::validate() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].k > rows[i - 1].k))
            throw DomainError("SpectrumTable: abscissae must be strictly increasing");
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void write_metadata(std::ostream& os, const Metadata& md) {
    for (const auto& [key, value] : md)
        os << "# " << key << " = " << value << '\n';
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError("not a number: '" + s + "'");
    return v;
}

} // namespace

void write_spectrum_csv(std::ostream& os, std::span<const SpectrumTable> tables) {
    for (const SpectrumTable& t : tables) {
        t.validate();
        write_metadata(os, t.metadata);
    }
    os << "k,value,channel\n";
    for (const SpectrumTable& t : tables)
        for (const SpectrumSample& s : t.rows)
            os << format_double(s.k) << ',' << format_double(s.value) << ','
               << channel_name(t.channel) << '\n';
}

std::vector<SpectrumTable> read_spectrum_csv(std::istream& is) {
    std::vector<SpectrumTable> out;
    std::map<Channel, std::size_t> index;
    Metadata md;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos && line.size() > 2)
                md.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
            continue;
        }
        if (!header) {
            if (line != "k,value,channel")
                throw DomainError("spectrum CSV: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw DomainError("spectrum CSV: malformed row '" + line + "'");
        const Channel ch = parse_channel(c);
        auto it = index.find(ch);
        if (it == index.end()) {
            it = index.emplace(ch, out.size()).first;
            out.push_back(SpectrumTable{ch, {}, {}});
        }
        out[it->second].add(parse_double(a), parse_double(b));
    }
    if (!header)
        throw DomainError("spectrum CSV: missing header");
    for (SpectrumTable& t : out)
        t.metadata = md;
    return out;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw DomainError("CsvTable: row width does not match the header");
    rows.push_back(std::move(cells));
}

void CsvTable::add_numeric_row(std::span<const double> values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values)
        cells.push_back(format_double(v));
    add_row(std::move(cells));
}

void CsvTable::write(std::ostream& os) const {
    write_metadata(os, metadata);
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

} // namespace negspec
