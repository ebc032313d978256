#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "socbench/model.hpp"

namespace soc {

/// Hyperparameter grid: ordered axes of (name, candidate values). An empty
/// grid is legal and means "fit once with defaults".
struct GridSpec {
    std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
};

using Candidate = nlohmann::json;  // object mapping name -> value

/// Cartesian product in deterministic order: first axis slowest.
std::vector<Candidate> enumerate_candidates(const GridSpec& grid);

struct CVCandidateResult {
    Candidate candidate;
    std::vector<double> fold_mse;
    double mean_mse = 0.0;
    double std_mse = 0.0;
};

struct CVResult {
    std::vector<CVCandidateResult> candidates;
    std::size_t best_index = 0;  // argmin mean_mse, first-listed wins ties
    std::size_t k = 0;
    std::size_t total_fits = 0;
};

using ModelFactory = std::function<std::unique_ptr<Model>(const Candidate&)>;

/// Seeded shuffle, folds differing in size by at most 1; each index lands in
/// exactly one validation fold.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

CVResult grid_search(const ModelFactory& factory, const GridSpec& grid,
                     const Matrix& X, const Vector& y, std::size_t k, std::uint64_t seed);

void cv_to_csv(const CVResult& result, const std::string& path);

}  // namespace soc
