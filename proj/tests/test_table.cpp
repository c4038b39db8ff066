#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "negspec/errors.hpp"
#include "negspec/table.hpp"

using namespace negspec;

TEST_CASE("channel names") {
    for (Channel c : {Channel::vacuum, Channel::thermal, Channel::total})
        CHECK(parse_channel(channel_name(c)) == c);
    CHECK_THROWS_AS(parse_channel("noise"), DomainError);
}

TEST_CASE("format_double round trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = U(rng) * std::pow(10.0, 40.0 * U(rng));
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("spectrum table ordering") {
    SpectrumTable t;
    t.add(1.0, 2.0);
    CHECK_THROWS_AS(t.add(1.0, 3.0), DomainError);
    CHECK_THROWS_AS(t.add(0.5, 3.0), DomainError);
    t.rows.push_back({0.2, 0.0});
    CHECK_THROWS_AS(t.validate(), DomainError);
}

TEST_CASE("spectrum csv round trip") {
    std::vector<SpectrumTable> tables{{Channel::vacuum, {}, {{"k_unit", "1"}, {"note", "a b"}}},
                                      {Channel::thermal, {}, {}}};
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 1; i <= 50; ++i) {
        tables[0].add(0.1 * i, U(rng) * 1e-7);
        tables[1].add(0.1 * i, U(rng) * 1e5);
    }
    std::stringstream ss;
    write_spectrum_csv(ss, tables);
    const auto back = read_spectrum_csv(ss);
    REQUIRE(back.size() == 2);
    for (std::size_t t = 0; t < 2; ++t) {
        CHECK(back[t].channel == tables[t].channel);
        REQUIRE(back[t].rows.size() == tables[t].rows.size());
        for (std::size_t i = 0; i < back[t].rows.size(); ++i) {
            CHECK(back[t].rows[i].k == tables[t].rows[i].k);
            CHECK(back[t].rows[i].value == tables[t].rows[i].value);
        }
    }
    CHECK(back[0].metadata == tables[0].metadata);

    std::stringstream again;
    write_spectrum_csv(again, back);
    CHECK(again.str().find("k,value,channel") != std::string::npos);
}

TEST_CASE("spectrum csv keeps extreme values") {
    SpectrumTable t{Channel::total, {}, {}};
    t.add(1e-300, std::numeric_limits<double>::denorm_min());
    t.add(1.0, -std::numeric_limits<double>::max());
    t.add(2.0, -0.0);
    std::stringstream ss;
    write_spectrum_csv(ss, std::vector<SpectrumTable>{t});
    const auto back = read_spectrum_csv(ss);
    REQUIRE(back.size() == 1);
    CHECK(back[0].rows[0].k == 1e-300);
    CHECK(back[0].rows[0].value == std::numeric_limits<double>::denorm_min());
    CHECK(back[0].rows[1].value == -std::numeric_limits<double>::max());
    CHECK(std::signbit(back[0].rows[2].value));
}

TEST_CASE("spectrum csv errors") {
    std::stringstream none("# a = b\n");
    CHECK_THROWS_AS(read_spectrum_csv(none), DomainError);
    std::stringstream header("k,v\n1,2\n");
    CHECK_THROWS_AS(read_spectrum_csv(header), DomainError);
    std::stringstream row("k,value,channel\n1,2\n");
    CHECK_THROWS_AS(read_spectrum_csv(row), DomainError);
    std::stringstream num("k,value,channel\n1,x,total\n");
    CHECK_THROWS_AS(read_spectrum_csv(num), DomainError);
    std::stringstream chan("k,value,channel\n1,2,other\n");
    CHECK_THROWS_AS(read_spectrum_csv(chan), DomainError);
}

TEST_CASE("generic csv table") {
    CsvTable t;
    t.metadata = {{"command", "test"}};
    t.columns = {"a", "b"};
    const double row[] = {0.5, -2.0};
    t.add_numeric_row(row);
    t.add_row({"x", "y"});
    CHECK_THROWS_AS(t.add_row({"only"}), DomainError);
    std::ostringstream os;
    t.write(os);
    CHECK(os.str() == "# command = test\na,b\n0.5,-2\nx,y\n");
}
