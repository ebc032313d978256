#include "socbench/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "socbench/metrics.hpp"

namespace soc {

std::vector<Candidate> enumerate_candidates(const GridSpec& grid) {
    std::vector<Candidate> out{Candidate::object()};
    for (const auto& [name, values] : grid.axes) {
        if (values.empty())
            throw Error(ErrorCode::InvalidConfig, "empty value list for axis " + name);
        std::vector<Candidate> next;
        next.reserve(out.size() * values.size());
        for (const auto& partial : out)
            for (const auto& value : values) {
                Candidate c = partial;
                c[name] = value;
                next.push_back(std::move(c));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n)
        throw Error(ErrorCode::InvalidK, "need 2 <= k <= n");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    // first (n mod k) folds get the extra element
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> folds;
    const std::size_t base = n / k, extra = n % k;
    std::size_t start = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        std::vector<std::size_t> val(order.begin() + static_cast<std::ptrdiff_t>(start),
                                     order.begin() + static_cast<std::ptrdiff_t>(start + len));
        std::vector<std::size_t> train;
        train.reserve(n - len);
        train.insert(train.end(), order.begin(),
                     order.begin() + static_cast<std::ptrdiff_t>(start));
        train.insert(train.end(), order.begin() + static_cast<std::ptrdiff_t>(start + len),
                     order.end());
        folds.emplace_back(std::move(train), std::move(val));
        start += len;
    }
    return folds;
}

namespace {

std::pair<Matrix, Vector> gather(const Matrix& X, const Vector& y,
                                 const std::vector<std::size_t>& idx) {
    Matrix Xs(idx.size(), X.cols);
    Vector ys(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < X.cols; ++j) Xs(i, j) = X(idx[i], j);
        ys[i] = y[idx[i]];
    }
    return {std::move(Xs), std::move(ys)};
}

}  // namespace

CVResult grid_search(const ModelFactory& factory, const GridSpec& grid,
                     const Matrix& X, const Vector& y, std::size_t k, std::uint64_t seed) {
    const auto folds = kfold_indices(X.rows, k, seed);
    const auto candidates = enumerate_candidates(grid);

    CVResult result;
    result.k = k;
    for (const auto& candidate : candidates) {
        CVCandidateResult cr;
        cr.candidate = candidate;
        for (const auto& [train_idx, val_idx] : folds) {
            auto [Xtr, ytr] = gather(X, y, train_idx);
            auto [Xval, yval] = gather(X, y, val_idx);
            try {
                auto model = factory(candidate);
                model->fit(Xtr, ytr);
                ++result.total_fits;
                const auto metrics = score_partial(yval, model->predict(Xval));
                cr.fold_mse.push_back(metrics.mse);
            } catch (const Error& e) {
                throw Error(e.code(),
                            std::string(e.what()) + " [candidate " + candidate.dump() + "]");
            }
        }
        double mean = 0.0;
        for (double m : cr.fold_mse) mean += m;
        mean /= static_cast<double>(cr.fold_mse.size());
        double var = 0.0;
        for (double m : cr.fold_mse) var += (m - mean) * (m - mean);
        var /= static_cast<double>(cr.fold_mse.size());
        cr.mean_mse = mean;
        cr.std_mse = std::sqrt(var);
        result.candidates.push_back(std::move(cr));
    }

    // argmin of mean MSE; strict < keeps the first-listed candidate on ties
    for (std::size_t i = 1; i < result.candidates.size(); ++i)
        if (result.candidates[i].mean_mse < result.candidates[result.best_index].mean_mse)
            result.best_index = i;
    return result;
}

void cv_to_csv(const CVResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot open " + path + " for writing");
    out << "candidate,fold,mse\n";
    char buf[64];
    for (const auto& cr : result.candidates) {
        std::string label = cr.candidate.dump();
        for (std::size_t pos = 0; (pos = label.find('"', pos)) != std::string::npos; pos += 2)
            label.replace(pos, 1, "\"\"");
        for (std::size_t f = 0; f < cr.fold_mse.size(); ++f) {
            std::snprintf(buf, sizeof(buf), "%.17g", cr.fold_mse[f]);
            out << '"' << label << "\"," << f << ',' << buf << '\n';
        }
    }
}

}  // namespace soc
