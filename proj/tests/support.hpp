#pragma once

// Independent reference computations used as test oracles. None of these
// call into the library's estimation code.

#include "svarlingam/core.hpp"
#include "svarlingam/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsupport {

using svarlingam::Matrix;
using svarlingam::Vector;

inline std::string data_path(const std::string& name) { return std::string(SVARLINGAM_TEST_DATA_DIR) + "/" + name; }

inline svarlingam::Panel fixture() { return svarlingam::load_panel_csv(data_path("fixture.csv")); }

/// Least squares through the normal equations (X'X) b = X'y.
inline Matrix normal_equations(const Matrix& X, const Matrix& Y) {
    const Matrix xtx = X.transpose() * X;
    return xtx.ldlt().solve(X.transpose() * Y);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline std::vector<std::vector<int>> permutations(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Responses of y_t = sum_j Pi_j y_{t-j} to unit impulses at t = 0; column
/// k of the h-th matrix is the path started by e_k.
inline std::vector<Matrix> impulse_paths(const std::vector<Matrix>& pi, int H, Eigen::Index n) {
    std::vector<Matrix> out(static_cast<std::size_t>(H + 1), Matrix::Zero(n, n));
    for (Eigen::Index k = 0; k < n; ++k) {
        std::vector<Vector> y;
        for (int t = 0; t <= H; ++t) {
            Vector v = t == 0 ? Vector(Vector::Unit(n, k)) : Vector(Vector::Zero(n));
            for (int j = 1; j <= static_cast<int>(pi.size()) && t - j >= 0; ++j)
                v += pi[static_cast<std::size_t>(j - 1)] * y[static_cast<std::size_t>(t - j)];
            y.push_back(v);
            out[static_cast<std::size_t>(t)].col(k) = v;
        }
    }
    return out;
}

/// Minimum over signed column permutations of the maximum relative column
/// error between A_est and A (columns of A_est rescaled to A's norms).
inline double signed_permutation_error(const Matrix& a, const Matrix& a_est) {
    const auto n = static_cast<int>(a.cols());
    double best = 1e300;
    for (const auto& p : permutations(n)) {
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            const Vector target = a.col(j);
            Vector est = a_est.col(p[static_cast<std::size_t>(j)]);
            est *= target.norm() / est.norm();
            const double e = std::min((est - target).norm(), (est + target).norm()) / target.norm();
            worst = std::max(worst, e);
        }
        best = std::min(best, worst);
    }
    return best;
}

/// Strictly lower-triangular random matrix conjugated by a random permutation.
template <class Rng>
inline Matrix random_dag(int n, Rng& rng, double lo = 0.3, double hi = 0.9, double density = 1.0) {
    std::uniform_real_distribution<double> mag(lo, hi), coin(0.0, 1.0);
    Matrix l = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (coin(rng) < density) l(i, j) = (coin(rng) < 0.5 ? -1.0 : 1.0) * mag(rng);
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]) = l(i, j);
    return b;
}

/// Temporary directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("svarlingam_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testsupport
