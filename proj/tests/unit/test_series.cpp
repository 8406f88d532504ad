#include <doctest.h>

#include <sstream>

#include "ddt/error.hpp"
#include "ddt/series.hpp"

using namespace ddt;

TEST_CASE("parse plain rows") {
  auto s = parse_series_string("0,1.5,2\n1,2.5,3\n2,3.5,4\n");
  CHECK(s.size() == 3);
  CHECK(s.dim() == 2);
  CHECK(s[1].epoch == 1);
  CHECK(s[2].values[1] == 4.0);
}

TEST_CASE("header line is skipped") {
  auto s = parse_series_string("epoch,v1\n0,1\n1,2\n");
  CHECK(s.size() == 2);
  CHECK(s[0].values[0] == 1.0);
}

TEST_CASE("timestamp column is kept apart from the values") {
  CsvOptions o;
  o.has_timestamp = true;
  auto s = parse_series_string("0,1000,7\n1,1005,8\n", o);
  CHECK(s.dim() == 1);
  CHECK(s[1].timestamp == 1005);
  CHECK(s[1].values[0] == 8.0);
}

TEST_CASE("malformed row reports its line") {
  try {
    parse_series_string("0,1\n1,abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("ragged rows are rejected") {
  CHECK_THROWS_AS(parse_series_string("0,1,2\n1,3\n"), ParseError);
}

TEST_CASE("non-finite values are rejected") {
  CHECK_THROWS_AS(parse_series_string("0,1\n1,nan\n"), ValidationError);
  CHECK_THROWS_AS(parse_series_string("0,1\n1,inf\n"), ValidationError);
}

TEST_CASE("out-of-order epochs are an error unless reordering is asked for") {
  const std::string text = "0,1\n2,3\n1,2\n";
  CHECK_THROWS(parse_series_string(text));
  CsvOptions o;
  o.reorder_by_epoch = true;
  auto s = parse_series_string(text, o);
  CHECK(s[1].epoch == 1);
  CHECK(s[1].values[0] == 2.0);
  CHECK(s[2].values[0] == 3.0);
}

TEST_CASE("duplicate epochs are rejected") {
  CsvOptions o;
  o.reorder_by_epoch = true;
  CHECK_THROWS(parse_series_string("0,1\n0,2\n", o));
}

TEST_CASE("write then parse round-trips bit-exactly") {
  std::vector<Point> rows{{0.1, -2.5e-300}, {1.0 / 3.0, 12345.678}, {-0.0, 1e300}};
  auto s = Series::from_rows(rows);
  std::ostringstream out;
  write_series(out, s);
  auto back = parse_series_string(out.str());
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(back[i].values == s[i].values);
}

TEST_CASE("window view returns the points in order") {
  auto s = Series::from_rows({{0}, {1}, {2}, {3}, {4}});
  auto v = window_view(s, Window{1, 3});
  REQUIRE(v.size() == 3);
  CHECK(v[0][0] == 1.0);
  CHECK(v[2][0] == 3.0);
  CHECK(window_view(s, Window{5, 0}).empty());
  CHECK_THROWS_AS(window_view(s, Window{3, 3}), RangeError);
}

TEST_CASE("split blocks drops the remainder") {
  auto w = split_blocks(5250, 250);
  CHECK(w.size() == 21);
  CHECK(w.back() == Window{5000, 250});
  CHECK(split_blocks(10, 3).size() == 3);
  CHECK_THROWS_AS(split_blocks(10, 1), ArgumentError);
}
