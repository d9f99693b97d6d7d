#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <sstream>

#include "mcamsim/array.hpp"

using namespace mcamsim;

namespace {

// Brute-force row total straight from cell_conductance, bypassing the LUT.
double naive_row_total(const Word& query, const Word& row, const CamConfig& cfg) {
    double g = 0.0;
    for (size_t j = 0; j < query.size(); ++j)
        g += cell_conductance(query[j], row[j], cfg);
    return g;
}

int naive_winner(const std::vector<Word>& rows, const Word& query, const CamConfig& cfg) {
    int best = 0;
    double best_g = naive_row_total(query, rows[0], cfg);
    for (size_t r = 1; r < rows.size(); ++r) {
        const double g = naive_row_total(query, rows[r], cfg);
        if (g < best_g) {
            best_g = g;
            best = static_cast<int>(r);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("array construction guards") {
    const CamConfig cfg = default_cam(2);
    CHECK_THROWS_AS(make_array(cfg, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_array(cfg, {{0, 1}, {2}}), std::invalid_argument);
    CHECK_THROWS_AS(make_array(cfg, {{0, 4}}), std::invalid_argument);
    TimingParams bad;
    bad.v_sense = bad.v_precharge;
    CHECK_THROWS_AS(make_array(cfg, {{0, 1}}, bad), std::invalid_argument);
    CHECK_NOTHROW(make_array(cfg, {{0, 1}, {3, 2}}));
}

TEST_CASE("row totals for single and repeated mismatches") {
    // 16-cell 3-bit row: totals follow (16 - n) matches + n cells at distance d.
    const CamConfig cfg = default_cam(3);
    const ConductanceLut lut = build_lut(cfg);
    const Word all_zero(16, 0);

    auto with_mismatches = [&](int n, int state) {
        Word row(16, 0);
        for (int j = 0; j < n; ++j) row[j] = state;
        return row;
    };
    const double g_1_4 = row_conductance(all_zero, with_mismatches(1, 4), lut);
    const double g_4_1 = row_conductance(all_zero, with_mismatches(4, 1), lut);
    const double g_1_7 = row_conductance(all_zero, with_mismatches(1, 7), lut);
    const double g_7_1 = row_conductance(all_zero, with_mismatches(7, 1), lut);

    CHECK(g_1_4 == doctest::Approx(1.322549665014884).epsilon(1e-9));
    CHECK(g_4_1 == doctest::Approx(0.0391302376088285).epsilon(1e-9));
    CHECK(g_1_7 == doctest::Approx(100.03100000000001).epsilon(1e-9));
    CHECK(g_7_1 == doctest::Approx(0.044477915815449874).epsilon(1e-9));

    // One far-off cell dominates several near misses.
    CHECK(g_1_4 > g_4_1);
    CHECK(g_1_7 > g_7_1);
    CHECK(g_1_4 > g_7_1);
}

TEST_CASE("discharge timing") {
    TimingParams t;
    CHECK(discharge_time(1.0, t) == doctest::Approx(6.9314718055994531).epsilon(1e-12));
    CHECK(discharge_time(2.0, t) < discharge_time(1.0, t));
    CHECK(discharge_time(0.004, t) > discharge_time(0.01, t));
}

TEST_CASE("search agrees with a brute-force scan") {
    const CamConfig cfg = default_cam(2);
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> state(0, 3);
    std::uniform_int_distribution<int> n_rows(1, 6);

    for (int rep = 0; rep < 60; ++rep) {
        const int rows_n = n_rows(rng);
        std::vector<Word> rows(rows_n, Word(3));
        for (auto& row : rows)
            for (int& s : row) s = state(rng);
        const CamArray array = make_array(cfg, rows);
        Word query(3);
        // all 64 possible 3-cell queries
        for (int q = 0; q < 64; ++q) {
            query[0] = q & 3;
            query[1] = (q >> 2) & 3;
            query[2] = (q >> 4) & 3;
            const SearchResult r = search(array, query);
            CHECK(r.winner == naive_winner(rows, query, cfg));
            REQUIRE(r.row_conductances.size() == rows.size());
            for (size_t i = 0; i < rows.size(); ++i)
                CHECK(r.row_conductances[i] ==
                      doctest::Approx(naive_row_total(query, rows[i], cfg))
                          .epsilon(1e-12));
        }
    }
}

TEST_CASE("exact duplicate of the query wins") {
    const CamConfig cfg = default_cam(3);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> state(0, 7);
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<Word> rows(5, Word(6));
        Word query(6);
        for (int& s : query) s = state(rng);
        for (auto& row : rows) {
            for (int& s : row) s = state(rng);
            if (row == query) row[0] = (row[0] + 1) % 8;  // keep rows inexact
        }
        rows.push_back(query);
        const CamArray array = make_array(cfg, rows);
        CHECK(search(array, query).winner == 5);
    }
}

TEST_CASE("ties resolve to the lowest row index") {
    const CamConfig cfg = default_cam(2);
    const CamArray array = make_array(cfg, {{1, 2}, {3, 0}, {1, 2}});
    const SearchResult r = search(array, {1, 2});
    CHECK(r.winner == 0);
    CHECK(r.row_conductances[0] == r.row_conductances[2]);
}

TEST_CASE("sampled-threshold search") {
    const CamConfig cfg = default_cam(3);
    const CamArray array = make_array(cfg, {{0, 3, 5}, {7, 1, 2}, {4, 4, 4}});
    VariationParams var;
    var.sigma = 0.0;

    SUBCASE("sigma 0 instance reproduces the nominal search") {
        std::mt19937_64 rng(1);
        const SampledThresholds s = sample_thresholds(array, var, rng);
        for (int q7 = 0; q7 < 8; ++q7) {
            const Word query{q7, 1, 4};
            const SearchResult nominal = search(array, query);
            const SearchResult sampled = search(array, s, query);
            CHECK(sampled.winner == nominal.winner);
            for (size_t i = 0; i < nominal.row_conductances.size(); ++i)
                CHECK(sampled.row_conductances[i] == nominal.row_conductances[i]);
        }
    }
    SUBCASE("trials are reproducible under a reseeded stream") {
        var.sigma = 60.0;
        std::mt19937_64 a(9), b(9);
        const auto r1 = search_with_variation(array, {0, 1, 2}, var, 25, a);
        const auto r2 = search_with_variation(array, {0, 1, 2}, var, 25, b);
        REQUIRE(r1.size() == 25);
        for (size_t t = 0; t < r1.size(); ++t) {
            CHECK(r1[t].winner == r2[t].winner);
            CHECK(r1[t].row_conductances == r2[t].row_conductances);
        }
    }
}

TEST_CASE("word csv parsing") {
    std::istringstream in("# stored words\n0,1,2\n3,0,1\n\n2,2,2\n");
    const auto words = read_words_csv(in, 2);
    REQUIRE(words.size() == 3);
    CHECK(words[1] == Word{3, 0, 1});

    std::istringstream bad("0,4,1\n");
    CHECK_THROWS_WITH_AS(read_words_csv(bad, 2),
                         doctest::Contains("state 4"), std::runtime_error);
    std::istringstream junk("0,x,1\n");
    CHECK_THROWS_AS(read_words_csv(junk, 2), std::runtime_error);
}

TEST_CASE("search csv output") {
    const CamConfig cfg = default_cam(2);
    const CamArray array = make_array(cfg, {{0, 1}, {2, 3}});
    const SearchResult r = search(array, {0, 1});
    std::ostringstream out;
    write_search_csv(r, out, {"note"});
    const std::string text = out.str();
    CHECK(text.find("# note\n") != std::string::npos);
    CHECK(text.find("row,conductance_us,discharge_ns,winner\n") != std::string::npos);
    CHECK(text.find("0,") == text.find("row,conductance_us,discharge_ns,winner\n") +
                                 std::string("row,conductance_us,discharge_ns,winner\n")
                                     .size());
}
