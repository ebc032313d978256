#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "socbench/linear.hpp"
#include "socbench/metrics.hpp"
#include "socbench/model_selection.hpp"
#include "socbench/tree.hpp"

using namespace soc;

TEST_CASE("kfold fold sizes and partition property") {
    auto even = kfold_indices(10, 5, 1);
    REQUIRE(even.size() == 5);
    for (const auto& [train, val] : even) {
        CHECK(val.size() == 2);
        CHECK(train.size() == 8);
    }

    auto uneven = kfold_indices(10, 3, 1);
    REQUIRE(uneven.size() == 3);
    CHECK(uneven[0].second.size() == 4);  // first fold takes the remainder
    CHECK(uneven[1].second.size() == 3);
    CHECK(uneven[2].second.size() == 3);

    // each index lands in exactly one validation fold, and never in its
    // own training side
    std::set<std::size_t> seen;
    for (const auto& [train, val] : uneven) {
        for (std::size_t i : val) {
            CHECK(seen.insert(i).second);
            CHECK(std::find(train.begin(), train.end(), i) == train.end());
        }
        CHECK(train.size() + val.size() == 10);
    }
    CHECK(seen.size() == 10);

    // deterministic in the seed
    CHECK(kfold_indices(20, 4, 7) == kfold_indices(20, 4, 7));
    CHECK(kfold_indices(20, 4, 7) != kfold_indices(20, 4, 8));

    CHECK_THROWS_AS((void)kfold_indices(10, 1, 0), Error);
    CHECK_THROWS_AS((void)kfold_indices(3, 4, 0), Error);
}

TEST_CASE("candidate enumeration order") {
    GridSpec grid;
    grid.axes.push_back({"a", {1, 2}});
    grid.axes.push_back({"b", {"x", "y", "z"}});
    auto cands = enumerate_candidates(grid);
    REQUIRE(cands.size() == 6);
    CHECK(cands[0] == Candidate({{"a", 1}, {"b", "x"}}));
    CHECK(cands[1] == Candidate({{"a", 1}, {"b", "y"}}));
    CHECK(cands[3] == Candidate({{"a", 2}, {"b", "x"}}));  // first axis slowest
    CHECK(cands[5] == Candidate({{"a", 2}, {"b", "z"}}));

    auto empty = enumerate_candidates(GridSpec{});
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].is_object());
    CHECK(empty[0].empty());

    GridSpec bad;
    bad.axes.push_back({"a", {}});
    CHECK_THROWS_AS((void)enumerate_candidates(bad), Error);
}

namespace {

std::pair<Matrix, Vector> linear_problem(std::size_t n, std::mt19937_64& rng) {
    Matrix X = oracle::random_matrix(n, 3, rng);
    std::normal_distribution<double> gauss;
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = 1.0 + 2.0 * X(i, 0) - X(i, 1) + 0.2 * gauss(rng);
    return {std::move(X), std::move(y)};
}

}  // namespace

TEST_CASE("empty grid runs one candidate with k fits") {
    std::mt19937_64 rng(91);
    auto [X, y] = linear_problem(60, rng);
    auto result = grid_search([](const Candidate&) { return std::make_unique<LinearModel>(); },
                              GridSpec{}, X, y, 5, 3);
    REQUIRE(result.candidates.size() == 1);
    CHECK(result.best_index == 0);
    CHECK(result.total_fits == 5);
    CHECK(result.candidates[0].fold_mse.size() == 5);
}

TEST_CASE("grid search prefers the unlimited-depth tree on a deep target") {
    std::mt19937_64 rng(92);
    Matrix X = oracle::random_matrix(200, 2, rng);
    std::normal_distribution<double> gauss;
    Vector y(200);
    // axis-aligned step target: trivial for a deep tree, hopeless for a stump
    for (std::size_t i = 0; i < 200; ++i)
        y[i] = (X(i, 0) > 0.0 ? 2.0 : 0.0) + (X(i, 1) > 0.5 ? 1.0 : 0.0) + 0.01 * gauss(rng);

    GridSpec grid;
    grid.axes.push_back({"max_depth", {0, nullptr}});  // depth-0 stump vs unlimited
    auto result = grid_search(
        [](const Candidate& c) {
            TreeConfig config;
            if (!c.at("max_depth").is_null())
                config.max_depth = c.at("max_depth").get<std::size_t>();
            return std::make_unique<DecisionTreeModel>(config);
        },
        grid, X, y, 4, 5);
    REQUIRE(result.candidates.size() == 2);
    CHECK(result.total_fits == 8);
    CHECK(result.best_index == 1);
    CHECK(result.candidates[1].candidate.at("max_depth").is_null());
}

TEST_CASE("grid search prefers light shrinkage on a dense linear signal") {
    std::mt19937_64 rng(93);
    auto [X, y] = linear_problem(150, rng);
    const double heavy = lasso_lambda_max(X, y) * 10.0;

    GridSpec grid;
    grid.axes.push_back({"lambda", {heavy, 0.001}});
    auto result = grid_search(
        [](const Candidate& c) {
            return std::make_unique<LassoModel>(c.at("lambda").get<double>());
        },
        grid, X, y, 5, 11);
    CHECK(result.best_index == 1);

    // reported means match a recompute from the fold values
    for (const auto& cr : result.candidates) {
        double mean = 0.0;
        for (double m : cr.fold_mse) mean += m;
        mean /= static_cast<double>(cr.fold_mse.size());
        CHECK(cr.mean_mse == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("ties go to the first-listed candidate") {
    std::mt19937_64 rng(94);
    auto [X, y] = linear_problem(50, rng);
    GridSpec grid;
    grid.axes.push_back({"ignored", {"first", "second"}});  // both fit the same model
    auto result = grid_search([](const Candidate&) { return std::make_unique<LinearModel>(); },
                              grid, X, y, 5, 2);
    REQUIRE(result.candidates.size() == 2);
    CHECK(result.candidates[0].mean_mse == result.candidates[1].mean_mse);
    CHECK(result.best_index == 0);
    CHECK(result.total_fits == 10);  // k * |grid|
}

TEST_CASE("fold errors are annotated with the candidate") {
    std::mt19937_64 rng(95);
    auto [X, y] = linear_problem(40, rng);
    GridSpec grid;
    grid.axes.push_back({"lambda", {-1.0}});
    try {
        (void)grid_search(
            [](const Candidate& c) {
                return std::make_unique<LassoModel>(c.at("lambda").get<double>());
            },
            grid, X, y, 4, 1);
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("candidate") != std::string::npos);
        CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
}

TEST_CASE("cv results serialize to csv") {
    std::mt19937_64 rng(96);
    auto [X, y] = linear_problem(50, rng);
    GridSpec grid;
    grid.axes.push_back({"lambda", {0.001, 0.1}});
    auto result = grid_search(
        [](const Candidate& c) {
            return std::make_unique<LassoModel>(c.at("lambda").get<double>());
        },
        grid, X, y, 5, 6);

    const std::string path = "cv_test.csv";
    cv_to_csv(result, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "candidate,fold,mse");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.find("\"\"lambda\"\"") != std::string::npos);  // quotes doubled
        ++rows;
    }
    CHECK(rows == 10);
    in.close();
    std::remove(path.c_str());
}
