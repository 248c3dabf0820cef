#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cyclab/abfield.hpp"
#include "cyclab/fields_gallery.hpp"

using namespace cyclab;

TEST_CASE("make_field basics") {
    SECTION("rational field") {
        AbelianField Q = AbelianField::make(1, {});
        CHECK(Q.degree() == 1);
        CHECK(Q.conductor() == 1);
        CHECK(Q.totally_real());
    }
    SECTION("cubic field of conductor 7") {
        AbelianField F = AbelianField::make(7, {6});
        CHECK(F.degree() == 3);
        CHECK(F.conductor() == 7);
        CHECK(F.totally_real());
        CHECK(F.subgroup() == std::vector<int64_t>{1, 6});
    }
    SECTION("conductor-91 cubic with 3 inert, via discrete-log oracle") {
        // independent oracle: indices of 3 modulo 7 and 13
        int64_t g7 = primitive_root(7), g13 = primitive_root(13);
        int64_t i7 = discrete_log(g7, 3, 7) % 3, i13 = discrete_log(g13, 3, 13) % 3;
        CHECK(i7 != 0);   // 3 is not a cube mod 7
        CHECK(i13 != 0);  // 3 is not a cube mod 13
        AbelianField F = cubic_two_prime_inert(7, 13, 3);
        CHECK(F.degree() == 3);
        CHECK(F.conductor() == 91);
        CHECK(F.totally_real());
        CHECK(!F.contains(3));
        // oracle agreement: kernel of chi7 * chi13^t with t chosen so 3 is outside
        for (int64_t t : {1, 2}) {
            if ((i7 + t * i13) % 3 != 0) continue;
            // with this twist 3 would be inside; F must be the other kernel
            std::vector<int64_t> ker;
            for (int64_t x : unit_group(91))
                if ((discrete_log(g7, x % 7, 7) + t * discrete_log(g13, x % 13, 13)) % 3 == 0) ker.push_back(x);
            AbelianField other = AbelianField::make(91, ker);
            CHECK(F != other);
        }
    }
    SECTION("errors") {
        CHECK_THROWS_AS(AbelianField::make(0, {}), InvalidInput);
        CHECK_THROWS_AS(AbelianField::make(9, {3}), InvalidInput);
    }
}

TEST_CASE("conductor computation") {
    SECTION("pullback of {1,6} mod 7 to level 63 has conductor 7") {
        std::vector<int64_t> gens;
        for (int64_t x : unit_group(63))
            if (x % 7 == 1 || x % 7 == 6) gens.push_back(x);
        AbelianField F = AbelianField::make(63, gens);
        CHECK(F.conductor() == 7);
        CHECK(F == AbelianField::make(7, {6}));
    }
    SECTION("trivial subgroup mod 9: conductor 9") {
        AbelianField F = AbelianField::make(9, {});
        CHECK(F.conductor() == 9);
        CHECK(F.degree() == 6);
    }
    SECTION("idempotent under re-encoding") {
        AbelianField F = AbelianField::make(91, {4});
        AbelianField G = AbelianField::make(F.conductor(), F.subgroup());
        CHECK(F == G);
    }
}

TEST_CASE("layer construction") {
    AbelianField Q = AbelianField::rationals();
    SECTION("first layer over Q") {
        AbelianField Q1 = layer(Q, 3, 1);
        CHECK(Q1.degree() == 3);
        CHECK(Q1.conductor() == 9);
    }
    SECTION("layer of the conductor-7 cubic") {
        AbelianField F = AbelianField::make(7, {6});
        AbelianField F1 = layer(F, 3, 1);
        CHECK(F1.degree() == 9);
        CHECK(F1.conductor() == 63);
        // character-group oracle: compositum of the two cubic layers
        CHECK(F1 == AbelianField::compositum(F, layer(Q, 3, 1)));
    }
    SECTION("conductor-9 cubic already contains the first tower layer") {
        AbelianField Q1 = layer(Q, 3, 1);
        CHECK(Q1.conductor() == 9);
        AbelianField Q1_up = layer(Q1, 3, 1);
        CHECK(Q1_up.degree() == 9);
        CHECK(Q1_up.conductor() == 27);
        CHECK(tower_overlap_e0(Q1, 3) == 1);
    }
    SECTION("p = 2 rejected") { CHECK_THROWS_AS(layer(Q, 2, 1), Unsupported); }
}

TEST_CASE("splitting data") {
    SECTION("3 inert in the conductor-7 cubic") {
        SplittingData sd = splitting_data(AbelianField::make(7, {6}), 3);
        CHECK(sd.e == 1);
        CHECK(sd.f_res == 3);
        CHECK(sd.s == 1);
        CHECK(sd.s_plus == 1);
    }
    SECTION("3 splits in the decomposition field D of conductor 91") {
        AbelianField D = cubic_two_prime_split(7, 13, 3);
        CHECK(D.degree() == 3);
        CHECK(D.conductor() == 91);
        SplittingData sd = splitting_data(D, 3);
        CHECK(sd.e == 1);
        CHECK(sd.f_res == 1);
        CHECK(sd.s == 3);
        CHECK(sd.s_plus == 3);
    }
    SECTION("rationals") {
        SplittingData sd = splitting_data(AbelianField::rationals(), 5);
        CHECK((sd.e == 1 && sd.f_res == 1 && sd.s == 1));
    }
    SECTION("ramified case: 3 in conductor-9 cubic") {
        SplittingData sd = splitting_data(layer(AbelianField::rationals(), 3, 1), 3);
        CHECK(sd.e == 3);
        CHECK(sd.s == 1);
    }
}

TEST_CASE("tower constants") {
    SECTION("tame cases have n_d = n_i = 0") {
        TowerConstants tc = tower_constants(AbelianField::make(7, {6}), 3);
        CHECK(tc.n_d == 0);
        CHECK(tc.n_i == 0);
        TowerConstants td = tower_constants(cubic_two_prime_split(7, 13, 3), 3);
        CHECK(td.n_d == 0);
        TowerConstants t9 = tower_constants(layer(AbelianField::rationals(), 3, 1), 3);
        CHECK(t9.n_d == 0);
        CHECK(t9.n_i == 0);
    }
    SECTION("a field with n_i = 1: kernel of chi_9 * chi_7") {
        // cubic character mod 9 times cubic character mod 7: conductor 63,
        // wild at 3 but not containing the first tower layer.
        int64_t g9 = 2;  // 2 generates (Z/9)^x
        int64_t g7 = primitive_root(7);
        std::vector<int64_t> gens;
        for (int64_t x : unit_group(63)) {
            int64_t a = discrete_log(g9, x % 9, 9) % 3;
            int64_t b = discrete_log(g7, x % 7, 7) % 3;
            if ((a + b) % 3 == 0) gens.push_back(x);
        }
        AbelianField F = AbelianField::make(63, gens);
        CHECK(F.degree() == 3);
        CHECK(F.conductor() == 63);
        CHECK(tower_overlap_e0(F, 3) == 0);
        TowerConstants tc = tower_constants(F, 3);
        CHECK(tc.n_i == 1);
        CHECK(tc.n_d == 0);
    }
}

TEST_CASE("inertia and decomposition subfields") {
    SECTION("conductor-91 field F at 3: unramified, sigma_3 generates") {
        AbelianField F = cubic_two_prime_inert(7, 13, 3);
        auto id = inertia_decomposition(F, 3);
        CHECK(id.inertia_field == F);
        CHECK(id.decomposition_field == AbelianField::rationals());
        CHECK(id.frobenius.order() == 3);
    }
    SECTION("conductor-9 cubic at 3: totally ramified") {
        AbelianField Q1 = layer(AbelianField::rationals(), 3, 1);
        auto id = inertia_decomposition(Q1, 3);
        CHECK(id.inertia_field == AbelianField::rationals());
    }
    SECTION("layer 1 of the conductor-91 field: inertia is the tower part") {
        AbelianField F = cubic_two_prime_inert(7, 13, 3);
        AbelianField F1 = layer(F, 3, 1);
        auto id = inertia_decomposition(F1, 3);
        CHECK(id.inertia_field == F);
    }
}

TEST_CASE("field invariants on random subgroups") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 60; ++iter) {
        int64_t f = 3 + (int64_t)(rng() % 9998);
        auto units = unit_group(f);
        std::vector<int64_t> gens;
        for (int k = 0; k < 2; ++k) gens.push_back(units[rng() % units.size()]);
        AbelianField F = AbelianField::make(f, gens);
        for (int64_t q : {2L, 3L, 5L, 7L}) {
            SplittingData sd = splitting_data(F, q);
            REQUIRE(sd.e * sd.f_res * sd.s == F.degree());
        }
    }
}

TEST_CASE("tower layer invariants") {
    std::mt19937_64 rng(555);
    std::vector<AbelianField> fields = {
        AbelianField::make(7, {6}),
        AbelianField::make(5, {4}),
        cubic_two_prime_split(7, 13, 3),
        AbelianField::make(11, {10}),
    };
    for (const auto& F : fields) {
        AbelianField prev = F;
        int64_t s_prev = 0;
        TowerConstants tc = tower_constants(F, 3);
        for (int n = 0; n <= 3; ++n) {
            AbelianField Fn = layer(F, 3, n);
            if (n > 0) {
                REQUIRE(AbelianField::is_subfield(prev, Fn));
                REQUIRE(Fn.degree() == 3 * prev.degree());
                // inertia field stabilizes along ramified steps
                auto i_prev = inertia_decomposition(prev, 3);
                auto i_now = inertia_decomposition(Fn, 3);
                SplittingData e_prev = splitting_data(prev, 3), e_now = splitting_data(Fn, 3);
                if (e_now.e > e_prev.e) REQUIRE(i_now.inertia_field == i_prev.inertia_field);
            }
            int64_t s_now = splitting_data(Fn, 3).s;
            REQUIRE(s_now >= s_prev);
            if (n >= tc.n_d && n > 0 && (n - 1) >= tc.n_d) REQUIRE(s_now == s_prev);
            s_prev = s_now;
            prev = Fn;
        }
    }
}

TEST_CASE("canonical string round trip") {
    AbelianField F = cubic_two_prime_inert(7, 13, 3);
    CHECK(AbelianField::parse(F.str()) == F);
    CHECK(AbelianField::parse("1:1").is_rationals());
    CHECK(AbelianField::parse("7:6") == AbelianField::make(7, {6}));
}
