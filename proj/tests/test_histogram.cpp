#include <catch2/catch_amalgamated.hpp>

#include "rdtk/histogram.hpp"

using namespace rdtk;

TEST_CASE("histogram clamps distances into the cutoff bin") {
    CountHistogram h(8);
    h.add(0);
    h.add(7);
    h.add(8);
    h.add(9);
    h.add(1'000'000);
    CHECK(h[0] == 1);
    CHECK(h[7] == 1);
    CHECK(h[8] == 3);
    CHECK(h.cutoff() == 8);
}

TEST_CASE("histogram separates cold from finite mass") {
    CountHistogram h(4);
    h.add(1, 5);
    h.add_cold(2);
    CHECK(h.finite_total() == 5);
    CHECK(h.cold() == 2);
    CHECK(h.total() == 7);
}

TEST_CASE("histogram equality covers bins and cold") {
    CountHistogram a(4), b(4);
    a.add(2);
    b.add(2);
    CHECK(a == b);
    b.add_cold();
    CHECK(a != b);
}

TEST_CASE("to_real preserves every bin") {
    CountHistogram h(4);
    h.add(1, 3);
    h.add(4, 2);
    h.add_cold(7);
    const RealHistogram r = to_real(h);
    CHECK(r[1] == 3.0);
    CHECK(r[4] == 2.0);
    CHECK(r.cold() == 7.0);
    CHECK(r.total() == 12.0);
}

TEST_CASE("triangular counts track row sums") {
    TriangularCounts t(4);
    t.at(3, 0) = 2;
    t.at(3, 3) = 5;
    CHECK(t.row_sum(3) == 7);
    CHECK(t.row_sum(2) == 0);
    CHECK(t.dim() == 5);
}

TEST_CASE("triangularity check catches upper cells") {
    TriangularCounts t(4);
    CHECK(t.is_lower_triangular());
    t.at(3, 1) = 1;
    CHECK(t.is_lower_triangular());
    t.at(1, 3) = 1;
    CHECK_FALSE(t.is_lower_triangular());
}
