#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "qmpl/zetaword.hpp"

using namespace qmpl;

namespace {

// pairwise oracle: each strictly out-of-order pair contributes its
// weight product exactly once, independent of any sorting path
long oracle_exponent(const std::vector<Composition>& ls) {
    long e = 0;
    for (size_t i = 0; i < ls.size(); ++i)
        for (size_t j = i + 1; j < ls.size(); ++j)
            if (zeta_letter_less(ls[j], ls[i]))
                e -= static_cast<long>(ls[i].weight()) * static_cast<long>(ls[j].weight());
    return e;
}

const std::vector<Composition>& letter_pool() {
    static const std::vector<Composition> pool = {
        Composition({1}), Composition({2}),    Composition({3}),
        Composition({1, 1}), Composition({1, 2}), Composition({2, 1})};
    return pool;
}

} // namespace

TEST_CASE("letter order is weight first, then indices") {
    CHECK(zeta_letter_less(Composition({2}), Composition({3})));
    CHECK(!zeta_letter_less(Composition({3}), Composition({2})));
    // equal weight: lexicographic on the index tuple
    CHECK(zeta_letter_less(Composition({1, 2}), Composition({2, 1})));
    CHECK(zeta_letter_less(Composition({2, 1}), Composition({3})));
    CHECK(!zeta_letter_less(Composition({2}), Composition({2})));
}

TEST_CASE("normal form of a transposed pair") {
    ZetaWord w{0, {Composition({3}), Composition({2})}};
    ZetaWord nf = zeta_word_normal_form(w);
    CHECK(nf.q_exponent == -6);
    REQUIRE(nf.letters.size() == 2);
    CHECK(nf.letters[0] == Composition({2}));
    CHECK(nf.letters[1] == Composition({3}));

    // already sorted words are untouched
    ZetaWord s{-1, {Composition({2}), Composition({3})}};
    CHECK(zeta_word_normal_form(s) == s);

    // equal letters commute freely
    ZetaWord eq{0, {Composition({2}), Composition({2})}};
    CHECK(zeta_word_normal_form(eq) == eq);

    ZetaWord empty{0, {}};
    CHECK(zeta_word_normal_form(empty) == empty);
}

TEST_CASE("normal form matches the pairwise oracle") {
    std::mt19937 rng(42u);
    std::uniform_int_distribution<size_t> pick(0, letter_pool().size() - 1);
    std::uniform_int_distribution<size_t> len(0, 7);
    for (int iter = 0; iter < 80; ++iter) {
        ZetaWord w;
        size_t n = len(rng);
        for (size_t i = 0; i < n; ++i) w.letters.push_back(letter_pool()[pick(rng)]);
        ZetaWord nf = zeta_word_normal_form(w);
        CHECK(nf.q_exponent == oracle_exponent(w.letters));
        CHECK(std::is_sorted(nf.letters.begin(), nf.letters.end(),
                             [](const Composition& a, const Composition& b) {
                                 return zeta_letter_less(a, b);
                             }));
        REQUIRE(nf.letters.size() == w.letters.size());
        // same multiset of letters
        auto ws = w.letters;
        auto ns = nf.letters;
        std::sort(ws.begin(), ws.end());
        std::sort(ns.begin(), ns.end());
        CHECK(ws == ns);
    }
}

TEST_CASE("reduction strategies are confluent") {
    std::mt19937 rng(1337u);
    std::uniform_int_distribution<size_t> pick(0, letter_pool().size() - 1);
    for (int iter = 0; iter < 60; ++iter) {
        ZetaWord w;
        for (size_t i = 0; i < 5; ++i) w.letters.push_back(letter_pool()[pick(rng)]);
        ZetaWord nf = zeta_word_normal_form(w);
        CHECK(detail::bubble_left_to_right(w) == nf);
        CHECK(detail::bubble_right_to_left(w) == nf);

        VerificationReport rep = verify_exchange_confluence(w);
        CHECK(rep.verdict == Verdict::exact_pass);
        CHECK(rep.passed());
    }
}

TEST_CASE("word products") {
    ZetaWord z2{0, {Composition({2})}};
    ZetaWord z3{0, {Composition({3})}};

    ZetaWord fwd = zeta_word_product(z2, z3);
    CHECK(fwd.q_exponent == 0);
    CHECK(fwd.letters == std::vector<Composition>{Composition({2}), Composition({3})});

    ZetaWord rev = zeta_word_product(z3, z2);
    CHECK(rev.q_exponent == -6);
    CHECK(rev.letters == fwd.letters);

    // prefactors add
    ZetaWord pa{2, {Composition({1})}};
    ZetaWord pb{-5, {Composition({1})}};
    CHECK(zeta_word_product(pa, pb).q_exponent == -3);
}

TEST_CASE("word product is associative") {
    std::mt19937 rng(9000u);
    std::uniform_int_distribution<size_t> pick(0, letter_pool().size() - 1);
    std::uniform_int_distribution<long> edist(-3, 3);
    std::uniform_int_distribution<size_t> len(0, 3);
    auto random_word = [&]() {
        ZetaWord w;
        w.q_exponent = edist(rng);
        size_t n = len(rng);
        for (size_t i = 0; i < n; ++i) w.letters.push_back(letter_pool()[pick(rng)]);
        return w;
    };
    for (int iter = 0; iter < 40; ++iter) {
        ZetaWord a = random_word(), b = random_word(), c = random_word();
        CHECK(zeta_word_product(zeta_word_product(a, b), c) ==
              zeta_word_product(a, zeta_word_product(b, c)));
    }
}

TEST_CASE("zeta word serialization") {
    ZetaWord w{-6, {Composition({2}), Composition({3})}};
    CHECK(w.to_string() == "q^-6 [Z(2)][Z(3)]");
    json j = w.to_json();
    CHECK(j["q_exponent"] == -6);
    CHECK(j["letters"] == json::parse("[[2],[3]]"));

    ZetaWord unit{0, {}};
    CHECK(unit.to_string() == "1");
}
