#include "doctest.h"

#include "hrg/rng.hpp"

#include <cstdlib>
#include <set>

using namespace hrg;

TEST_CASE("Philox4x32-10 known answers") {
    // Random123 reference vectors
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Philox4x32Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          Philox4x32Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          Philox4x32Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter rng is addressable and stream separated") {
    const CounterRng a(42, streams::kPositions), b(42, streams::kPositions), c(42, streams::kPairs);
    CHECK(a.words(17) == b.words(17));
    CHECK(a.words(17) != a.words(18));
    CHECK(a.words(17) != a.words(17, 1));
    CHECK(a.words(17) != c.words(17));
    CHECK(CounterRng(43, streams::kPositions).words(17) != a.words(17));
    for (std::uint64_t i = 0; i < 1000; ++i) {
        for (double u : a.uniforms(i)) {
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
        }
    }
}

TEST_CASE("philox engine") {
    PhiloxEngine e1(7, 1), e2(7, 1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = e1();
        CHECK(x == e2());
        seen.insert(x);
    }
    CHECK(seen.size() == 1000);
    std::array<int, 7> counts{};
    for (int i = 0; i < 70000; ++i) ++counts[e1.below(7)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}
