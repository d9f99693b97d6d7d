#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mcamsim/bench.hpp"

using namespace mcamsim;

namespace {

const std::string kDataDir = MCAMSIM_DATA_DIR;

Dataset head(const Dataset& ds, int n) {
    Dataset out;
    out.name = ds.name;
    out.feature_names = ds.feature_names;
    out.features.assign(ds.features.begin(), ds.features.begin() + n);
    out.labels.assign(ds.labels.begin(), ds.labels.begin() + n);
    out.ranges = ds.ranges;
    return out;
}

}  // namespace

TEST_CASE("backend parsing") {
    CHECK(parse_backend("mcam3").kind == BackendSpec::Kind::mcam);
    CHECK(parse_backend("mcam3").bits == 3);
    CHECK(parse_backend("mcam2").bits == 2);
    CHECK(parse_backend("mcam").bits == 3);
    CHECK(parse_backend("tcam_lsh").kind == BackendSpec::Kind::tcam_lsh);
    CHECK(parse_backend("euclidean").kind == BackendSpec::Kind::euclidean);
    CHECK(backend_name(parse_backend("mcam2")) == "mcam2");
    CHECK(backend_name(parse_backend("linf")) == "linf");
    CHECK_THROWS_WITH_AS(parse_backend("manhattan"), doctest::Contains("valid"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_backend("mcam99"), std::invalid_argument);
}

TEST_CASE("classification accuracy") {
    const Dataset iris = load_csv(kDataDir + "/iris.csv");
    const auto [train, test] = split(iris, 0.8, 4);

    SUBCASE("querying the memory with itself is perfect") {
        for (const char* name : {"euclidean", "cosine", "linf"})
            CHECK(nn_classify(train, train, parse_backend(name), 1) == 100.0);
        // Quantized rows can collide across classes, so only near-perfect.
        CHECK(nn_classify(train, train, parse_backend("mcam3"), 1) >= 98.0);
    }
    SUBCASE("euclidean backend equals a hand-rolled 1-NN") {
        int correct = 0;
        for (int i = 0; i < test.size(); ++i) {
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (int r = 0; r < train.size(); ++r) {
                double ss = 0.0;
                for (int j = 0; j < train.n_features(); ++j) {
                    const double d = test.features[i][j] - train.features[r][j];
                    ss += d * d;
                }
                if (ss < best_d) {
                    best_d = ss;
                    best = r;
                }
            }
            if (train.labels[best] == test.labels[i]) ++correct;
        }
        const double want = 100.0 * correct / test.size();
        CHECK(nn_classify(train, test, parse_backend("euclidean"), 1) ==
              doctest::Approx(want));
    }
    SUBCASE("wide cells rank like a per-feature table oracle") {
        // At 6 bits the backend must agree exactly with an independent
        // winner computation from the same conductance table.
        const BackendSpec b6 = parse_backend("mcam6");
        const ConductanceLut lut = build_lut(default_cam(6));
        const Dataset small_test = head(test, 10);
        int correct = 0;
        for (int i = 0; i < small_test.size(); ++i) {
            const Word q = quantize(small_test.features[i], train.ranges, 6);
            int best = 0;
            double best_g = std::numeric_limits<double>::infinity();
            for (int r = 0; r < train.size(); ++r) {
                const Word w = quantize(train.features[r], train.ranges, 6);
                double g = 0.0;
                for (size_t j = 0; j < q.size(); ++j) g += lut.table[q[j]][w[j]];
                if (g < best_g) {
                    best_g = g;
                    best = r;
                }
            }
            if (train.labels[best] == small_test.labels[i]) ++correct;
        }
        const double want = 100.0 * correct / small_test.size();
        CHECK(nn_classify(train, small_test, b6, 1) == doctest::Approx(want));
    }
    SUBCASE("mismatched feature counts are rejected") {
        const Dataset wine = load_csv(kDataDir + "/wine.csv");
        CHECK_THROWS_AS(nn_classify(train, wine, parse_backend("euclidean"), 1),
                        std::invalid_argument);
    }
    SUBCASE("geometry width must match the backend") {
        CHECK_THROWS_AS(
            nn_classify(train, test, parse_backend("mcam2"), 1, default_cam(3)),
            std::invalid_argument);
    }
}

TEST_CASE("synthetic pools") {
    const ClassFeatures pool = synthetic_pool(6, 9, 16, 0.5, 21);
    CHECK(pool.size() == 6);
    for (const auto& [cls, vecs] : pool) {
        CHECK(vecs.size() == 9);
        CHECK(vecs[0].size() == 16);
    }
    const ClassFeatures again = synthetic_pool(6, 9, 16, 0.5, 21);
    CHECK(again.at(3) == pool.at(3));
    const ClassFeatures other = synthetic_pool(6, 9, 16, 0.5, 22);
    CHECK(other.at(3) != pool.at(3));
}

TEST_CASE("episode evaluation") {
    EpisodeSpec spec;
    spec.n_way = 5;
    spec.k_shot = 1;
    spec.n_query = 5;
    spec.episodes = 8;
    spec.feature_dim = 16;

    SUBCASE("well-separated clusters are trivial for every backend") {
        const ClassFeatures pool = synthetic_pool(8, 10, 16, 0.02, 5);
        for (const char* name : {"euclidean", "mcam3", "tcam_lsh", "cosine"})
            CHECK(run_episode(pool, spec, parse_backend(name), 3) == 100.0);
    }
    SUBCASE("reproducible under the run seed") {
        const ClassFeatures pool = synthetic_pool(8, 10, 16, 0.8, 5);
        const double a = run_episode(pool, spec, parse_backend("mcam3"), 3);
        const double b = run_episode(pool, spec, parse_backend("mcam3"), 3);
        CHECK(a == b);
    }
    SUBCASE("insufficient vectors name the class") {
        const ClassFeatures pool = synthetic_pool(8, 5, 16, 0.5, 5);
        CHECK_THROWS_WITH_AS(run_episode(pool, spec, parse_backend("euclidean"), 3),
                             doctest::Contains("class 0"), std::invalid_argument);
    }
    SUBCASE("too few classes") {
        const ClassFeatures pool = synthetic_pool(3, 10, 16, 0.5, 5);
        CHECK_THROWS_AS(run_episode(pool, spec, parse_backend("euclidean"), 3),
                        std::invalid_argument);
    }
    SUBCASE("multi-shot stores every support vector") {
        spec.k_shot = 4;
        const ClassFeatures pool = synthetic_pool(8, 12, 16, 0.02, 5);
        CHECK(run_episode(pool, spec, parse_backend("mcam3"), 3) == 100.0);
    }
}

TEST_CASE("per-class feature files") {
    const std::string path = "mcamsim_feat_test.csv";
    {
        std::ofstream out(path);
        out << "class,f0,f1\n";
        out << "0,0.5,1.5\n0,0.6,1.4\n1,-2.0,0.0\n";
    }
    const ClassFeatures feats = load_class_features(path, 2);
    CHECK(feats.size() == 2);
    CHECK(feats.at(0).size() == 2);
    CHECK(feats.at(1)[0][0] == doctest::Approx(-2.0));
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "0,0.5\n";
    }
    CHECK_THROWS_AS(load_class_features(path, 2), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("variation sweep") {
    const Dataset iris = load_csv(kDataDir + "/iris.csv");
    const auto [train, test] = split(iris, 0.8, 4);

    const auto rows = variation_sweep(train, test, 3, {0.0, 40.0}, 6, 11);
    REQUIRE(rows.size() == 2);

    SUBCASE("sigma 0 reproduces the nominal accuracy with zero spread") {
        const double nominal = nn_classify(train, test, parse_backend("mcam3"), 1);
        CHECK(rows[0].sigma == 0.0);
        CHECK(rows[0].mean_acc == nominal);
        CHECK(rows[0].std_acc == 0.0);
    }
    SUBCASE("same seed gives the same table") {
        const auto again = variation_sweep(train, test, 3, {0.0, 40.0}, 6, 11);
        for (size_t i = 0; i < rows.size(); ++i) {
            CHECK(again[i].mean_acc == rows[i].mean_acc);
            CHECK(again[i].std_acc == rows[i].std_acc);
        }
    }
    CHECK_THROWS_AS(variation_sweep(train, test, 3, {}, 6, 11), std::invalid_argument);
    CHECK_THROWS_AS(variation_sweep(train, test, 3, {0.0}, 0, 11),
                    std::invalid_argument);
}

TEST_CASE("report output") {
    RunReport report;
    report.seed = 9;
    report.config_hash = "00bebceff321ab87";
    report.rows.push_back({"iris", "mcam3", 96.6666666});
    report.rows.push_back({"iris", "tcam_lsh", 30.0});
    std::ostringstream csv;
    write_report_csv(report, csv);
    CHECK(csv.str() ==
          "# config_hash=00bebceff321ab87 seed=9\n"
          "workload,backend,accuracy_pct\n"
          "iris,mcam3,96.67\n"
          "iris,tcam_lsh,30.00\n");
    std::ostringstream table;
    print_report(report, table);
    CHECK(table.str().find("mcam3") != std::string::npos);
    CHECK(table.str().find("96.67") != std::string::npos);
}
