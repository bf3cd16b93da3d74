#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "ringtight/pattern.hpp"
#include "support/test_oracles.hpp"

using namespace ringtight;

TEST(MakePattern, Pattern1MatchesThePublishedOrder) {
    TighteningPattern p = make_pattern(PatternKind::pattern1, 20);
    std::vector<int> expected = {1, 11, 6, 16, 3, 13, 8, 18, 5, 15,
                                 10, 20, 2, 12, 7, 17, 4, 14, 9, 19};
    EXPECT_EQ(p.order(), expected);
}

TEST(MakePattern, Pattern2MatchesThePublishedOrder) {
    TighteningPattern p = make_pattern(PatternKind::pattern2, 20);
    std::vector<int> expected = {1, 11, 6, 16, 2, 12, 7, 17, 3, 13,
                                 8, 18, 4, 14, 9, 19, 5, 15, 10, 20};
    EXPECT_EQ(p.order(), expected);
}

TEST(MakePattern, StarCircularStartsWithTheStarSet) {
    TighteningPattern p = make_pattern(PatternKind::star_circular, 20);
    std::vector<int> expected = {1, 11, 6, 16, 2, 3, 4, 5, 7, 8,
                                 9, 10, 12, 13, 14, 15, 17, 18, 19, 20};
    EXPECT_EQ(p.order(), expected);
}

TEST(MakePattern, CircularWorksForAnyRingSize) {
    TighteningPattern p = make_pattern(PatternKind::circular, 7);
    std::vector<int> expected(7);
    std::iota(expected.begin(), expected.end(), 1);
    EXPECT_EQ(p.order(), expected);
}

TEST(MakePattern, NamedLayoutsRequireTwentyBolts) {
    EXPECT_THROW(make_pattern(PatternKind::pattern1, 16), ValidationError);
    EXPECT_THROW(make_pattern(PatternKind::pattern2, 12), ValidationError);
    EXPECT_THROW(make_pattern(PatternKind::star_circular, 24), ValidationError);
}

TEST(MakePattern, CustomRoundTripsItsOrder) {
    std::vector<int> order = {3, 1, 4, 2, 5};
    TighteningPattern p = make_pattern(PatternKind::custom, 5, order);
    EXPECT_EQ(p.order(), order);
}

TEST(MakePattern, CustomRejectsNonPermutations) {
    EXPECT_THROW(make_pattern(PatternKind::custom, 4, std::vector<int>{1, 2, 2, 4}),
                 ValidationError);
    EXPECT_THROW(make_pattern(PatternKind::custom, 4, std::vector<int>{1, 2, 3, 5}),
                 ValidationError);
    EXPECT_THROW(make_pattern(PatternKind::custom, 4, std::vector<int>{1, 2, 3}),
                 ValidationError);
    EXPECT_THROW(make_pattern(PatternKind::custom, 4), ValidationError);
}

TEST(RingDistance, WrapsAroundTheRing) {
    EXPECT_EQ(ring_distance(20, 1, 20), 1);
    EXPECT_EQ(ring_distance(20, 1, 3), 2);
    EXPECT_EQ(ring_distance(20, 5, 15), 10);
}

TEST(RingDistance, RejectsOutOfRangePositions) {
    EXPECT_THROW(ring_distance(20, 0, 5), ValidationError);
    EXPECT_THROW(ring_distance(20, 1, 21), ValidationError);
}

TEST(RingDistance, SymmetricZeroDiagonalBounded) {
    test_support::Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        int n = rng.range(2, 40);
        int a = rng.range(1, n);
        int b = rng.range(1, n);
        int d = ring_distance(n, a, b);
        EXPECT_EQ(d, ring_distance(n, b, a));
        EXPECT_GE(d, 0);
        EXPECT_LE(d, n / 2);
        EXPECT_EQ(ring_distance(n, a, a), 0);
    }
}

TEST(OrderIndex, MatchesThePublishedNarrative) {
    TighteningPattern p1 = make_pattern(PatternKind::pattern1, 20);
    EXPECT_EQ(p1.order_index(3), 5);   // bolt 3 is the fifth bolt tightened
    EXPECT_EQ(p1.order_index(1), 1);
    TighteningPattern p2 = make_pattern(PatternKind::pattern2, 20);
    EXPECT_EQ(p2.order_index(20), 20);
}

TEST(OrderIndex, RejectsUnknownPositions) {
    TighteningPattern p = make_pattern(PatternKind::pattern1, 20);
    EXPECT_THROW(p.order_index(0), ValidationError);
    EXPECT_THROW(p.order_index(21), ValidationError);
}

TEST(OrderIndex, InverseOfPositionAt) {
    test_support::Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = rng.range(2, 30);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 1);
        rng.shuffle(order);
        TighteningPattern p = make_pattern(PatternKind::custom, n, order);
        for (int step = 1; step <= n; ++step) EXPECT_EQ(p.order_index(p.position_at(step)), step);
        for (int pos = 1; pos <= n; ++pos) EXPECT_EQ(p.position_at(p.order_index(pos)), pos);
    }
}

TEST(Rotated, RelabelsPositionsKeepingSteps) {
    TighteningPattern p = make_pattern(PatternKind::pattern1, 20);
    TighteningPattern r = p.rotated(3);
    for (int step = 1; step <= 20; ++step)
        EXPECT_EQ(r.position_at(step), wrap_position(p.position_at(step) + 3, 20));
}
