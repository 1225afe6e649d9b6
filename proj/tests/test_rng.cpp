#include "homgibbs/rng.hpp"

#include <doctest.h>

using namespace homgibbs;

TEST_CASE("rng streams")
{
    Rng a(1), b(1), c(1, 1);
    CHECK(a.next() == b.next());
    CHECK(Rng(1).next() != c.next());
    CHECK(Rng(1).split(0).next() != Rng(1).split(1).next());
    Rng d(4);
    for (int k = 0; k < 1000; ++k) {
        const auto x = d.uniform();
        CHECK((x >= 0.0 && x < 1.0));
        CHECK(d.below(7) < 7);
    }
    // SplitMix64 finaliser of 0 is 0.
    CHECK(Rng::mix(0) == 0);
}
