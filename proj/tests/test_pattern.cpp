#include <cstdlib>
#include <string>
#include <vector>

#include "corrcomplete/errors.hpp"
#include "corrcomplete/pattern.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corrcomplete;
using test_support::Rng;

namespace {

PartialMatrix chain_abc() {
    return PartialMatrix({"a", "b", "c"}, {{0, 1, 0.6}, {1, 2, 0.5}});
}

bool same_entries(const PartialMatrix& x, const PartialMatrix& y) {
    return x.labels() == y.labels() && x.entries() == y.entries();
}

}  // namespace

TEST_CASE("JSON parse reads labels and entries") {
    const std::string text = R"({
        "labels": ["a", "b", "c"],
        "entries": [
            {"row": "a", "col": "b", "value": 0.6},
            {"row": "c", "col": "b", "value": 0.5},
            {"row": "a", "col": "a", "value": 1.0}
        ]
    })";
    PartialMatrix m = parse_partial(text, MatrixFormat::json);
    CHECK(m.size() == 3);
    CHECK(m.labels() == std::vector<Label>{"a", "b", "c"});
    CHECK(m.specified_count() == 2);
    CHECK(m.value(0, 1) == 0.6);
    CHECK(m.value(2, 1) == 0.5);  // stored orientation-free
    CHECK(m.value(1, 1) == 1.0);
    CHECK_FALSE(m.value(0, 2).has_value());
    CHECK(m.is_specified(1, 0));
    CHECK_FALSE(m.is_specified(0, 2));
    CHECK(m.unspecified_pairs() == std::vector<std::pair<int, int>>{{0, 2}});
}

TEST_CASE("JSON parse rejects malformed input") {
    CHECK_THROWS_AS(parse_partial("{", MatrixFormat::json), InvalidInput);
    CHECK_THROWS_AS(parse_partial("[1, 2]", MatrixFormat::json), InvalidInput);
    CHECK_THROWS_AS(parse_partial(R"({"entries": []})", MatrixFormat::json), InvalidInput);
    CHECK_THROWS_AS(parse_partial(R"({"labels": ["a"], "entries": [{}]})", MatrixFormat::json),
                    InvalidInput);
}

TEST_CASE("JSON parse rejects semantic errors") {
    auto wrap = [](const std::string& entry) {
        return R"({"labels": ["a", "b"], "entries": [)" + entry + "]}";
    };
    // unknown label
    CHECK_THROWS_AS(
        parse_partial(wrap(R"({"row": "a", "col": "z", "value": 0.1})"), MatrixFormat::json),
        InvalidInput);
    // diagonal must be exactly 1
    CHECK_NOTHROW(
        parse_partial(wrap(R"({"row": "a", "col": "a", "value": 1})"), MatrixFormat::json));
    CHECK_THROWS_AS(
        parse_partial(wrap(R"({"row": "a", "col": "a", "value": 0.9})"), MatrixFormat::json),
        InvalidInput);
    // off-diagonal magnitude must stay below 1
    CHECK_THROWS_AS(
        parse_partial(wrap(R"({"row": "a", "col": "b", "value": 1})"), MatrixFormat::json),
        InvalidInput);
    CHECK_THROWS_AS(
        parse_partial(wrap(R"({"row": "a", "col": "b", "value": -1.25})"), MatrixFormat::json),
        InvalidInput);
}

TEST_CASE("JSON parse deduplicates consistent entries and rejects conflicts") {
    const std::string consistent = R"({
        "labels": ["a", "b"],
        "entries": [
            {"row": "a", "col": "b", "value": 0.25},
            {"row": "b", "col": "a", "value": 0.25}
        ]
    })";
    PartialMatrix m = parse_partial(consistent, MatrixFormat::json);
    CHECK(m.specified_count() == 1);
    CHECK(m.value(0, 1) == 0.25);

    const std::string conflicting = R"({
        "labels": ["a", "b"],
        "entries": [
            {"row": "a", "col": "b", "value": 0.25},
            {"row": "b", "col": "a", "value": 0.26}
        ]
    })";
    CHECK_THROWS_AS(parse_partial(conflicting, MatrixFormat::json), InvalidInput);
}

TEST_CASE("CSV parse reads a symmetric table with holes") {
    const std::string text =
        ",a,b,c\n"
        "a,1,0.6,\n"
        "b,0.6,1,0.5\n"
        "c,,0.5,1\n";
    PartialMatrix m = parse_partial(text, MatrixFormat::csv);
    CHECK(same_entries(m, chain_abc()));
}

TEST_CASE("CSV parse tolerates padding, CRLF, and empty diagonal") {
    const std::string text =
        ", a , b\r\n"
        "a, , 0.5\r\n"
        "b, 0.5 ,1\r\n";
    PartialMatrix m = parse_partial(text, MatrixFormat::csv);
    CHECK(m.labels() == std::vector<Label>{"a", "b"});
    CHECK(m.value(0, 1) == 0.5);
}

TEST_CASE("CSV parse rejects structural errors") {
    // asymmetric values
    CHECK_THROWS_AS(parse_partial(",a,b\na,1,0.5\nb,0.4,1\n", MatrixFormat::csv), InvalidInput);
    // entry present on one side only
    CHECK_THROWS_AS(parse_partial(",a,b\na,1,0.5\nb,,1\n", MatrixFormat::csv), InvalidInput);
    // diagonal not 1
    CHECK_THROWS_AS(parse_partial(",a,b\na,0.9,\nb,,1\n", MatrixFormat::csv), InvalidInput);
    // row label order must match columns
    CHECK_THROWS_AS(parse_partial(",a,b\nb,1,\na,,1\n", MatrixFormat::csv), InvalidInput);
    // ragged row
    CHECK_THROWS_AS(parse_partial(",a,b\na,1\nb,,1\n", MatrixFormat::csv), InvalidInput);
    // wrong row count
    CHECK_THROWS_AS(parse_partial(",a,b\na,1,\n", MatrixFormat::csv), InvalidInput);
    // non-numeric cell
    CHECK_THROWS_AS(parse_partial(",a,b\na,1,x\nb,x,1\n", MatrixFormat::csv), InvalidInput);
    CHECK_THROWS_AS(parse_partial(",a,b\na,1,0.5y\nb,0.5y,1\n", MatrixFormat::csv), InvalidInput);
    CHECK_THROWS_AS(parse_partial("", MatrixFormat::csv), InvalidInput);
}

TEST_CASE("partial matrices survive both serialization formats bit-exactly") {
    PartialMatrix m({"x", "y", "z", "w"},
                    {{0, 1, 0.12345678901234567},
                     {1, 2, -0.00098765432109876543},
                     {0, 3, 1e-17},
                     {2, 3, -0.9999999999999999}});
    for (MatrixFormat f : {MatrixFormat::json, MatrixFormat::csv}) {
        PartialMatrix back = parse_partial(serialize_partial(m, f), f);
        CHECK(same_entries(back, m));
    }
}

TEST_CASE("an empty pattern round-trips") {
    PartialMatrix m({"only"}, {});
    for (MatrixFormat f : {MatrixFormat::json, MatrixFormat::csv}) {
        PartialMatrix back = parse_partial(serialize_partial(m, f), f);
        CHECK(same_entries(back, m));
        CHECK(back.specified_count() == 0);
    }
}

TEST_CASE("dense matrices survive both serialization formats bit-exactly") {
    Rng rng(42);
    SymMatrix values = test_support::random_correlation(5, rng);
    std::vector<Label> labels{"v0", "v1", "v2", "v3", "v4"};
    DenseCorrMatrix m(labels, values);
    for (MatrixFormat f : {MatrixFormat::json, MatrixFormat::csv}) {
        DenseCorrMatrix back = to_dense(parse_partial(serialize_dense(m, f), f));
        REQUIRE(back.labels() == labels);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) CHECK(back(i, j) == m(i, j));
    }
}

TEST_CASE("format_value round-trips doubles through strtod") {
    Rng rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        const double v = rng.uniform(-1.0, 1.0);
        const std::string s = format_value(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_value(0.0) == "0");
    CHECK(std::strtod(format_value(0.1).c_str(), nullptr) == 0.1);
}

TEST_CASE("JSON labels with quotes and backslashes round-trip") {
    PartialMatrix m({"a\"b", "c\\d", "tab\there"}, {{0, 1, 0.5}, {1, 2, -0.5}});
    PartialMatrix back = parse_partial(serialize_partial(m, MatrixFormat::json),
                                       MatrixFormat::json);
    CHECK(same_entries(back, m));
}

TEST_CASE("validate_labels guards the label alphabet") {
    CHECK_THROWS_AS(validate_labels({}), InvalidInput);
    CHECK_THROWS_AS(validate_labels({""}), InvalidInput);
    CHECK_THROWS_AS(validate_labels({"a,b"}), InvalidInput);
    CHECK_THROWS_AS(validate_labels({"a\nb"}), InvalidInput);
    CHECK_THROWS_AS(validate_labels({"a", "a"}), InvalidInput);
    CHECK_NOTHROW(validate_labels({"a", "A", "nu_A"}));
}

TEST_CASE("PartialMatrix constructor enforces its invariants") {
    CHECK_THROWS_AS(PartialMatrix({"a", "b"}, {{0, 2, 0.5}}), InvalidInput);
    CHECK_THROWS_AS(PartialMatrix({"a", "b"}, {{-1, 1, 0.5}}), InvalidInput);
    CHECK_THROWS_AS(PartialMatrix({"a", "b"}, {{0, 0, 0.5}}), InvalidInput);
    CHECK_THROWS_AS(PartialMatrix({"a", "b"}, {{0, 1, 0.5}, {1, 0, 0.5}}), InvalidInput);
    CHECK_THROWS_AS(PartialMatrix({"a", "b"}, {{0, 1, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(PartialMatrix({"a", "b"}, {{0, 1, std::nan("")}}), InvalidInput);
}

TEST_CASE("find_label and to_dense") {
    PartialMatrix m = chain_abc();
    CHECK(m.find_label("b") == 1);
    CHECK(m.find_label("nope") == -1);
    CHECK_THROWS_AS(to_dense(m), InvalidInput);  // (a, c) missing

    PartialMatrix full({"a", "b"}, {{0, 1, 0.5}});
    DenseCorrMatrix d = to_dense(full);
    CHECK(d(0, 1) == 0.5);
    CHECK(d(0, 0) == 1.0);
}

TEST_CASE("DenseCorrMatrix requires a unit diagonal") {
    SymMatrix v(2);
    v.set(0, 0, 1.0);
    v.set(1, 1, 0.5);
    CHECK_THROWS_AS(DenseCorrMatrix({"a", "b"}, v), InvalidInput);
}
