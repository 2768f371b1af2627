#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace svarlingam {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Error kinds. Each maps onto one of the three CLI failure classes
// (config = 2, data = 3, numerical/identification = 4).
enum class Errc {
    config,
    schema,
    parse,
    empty_input,
    domain,
    alignment,
    uncoverable_gap,
    empty_slice,
    insufficient_data,
    degenerate,
    rank_deficient,
    unsupported_dimension,
    unsupported_size,
    identification_failure,
    reliability,
};

inline const char* errc_name(Errc e) {
    switch (e) {
    case Errc::config: return "config";
    case Errc::schema: return "schema";
    case Errc::parse: return "parse";
    case Errc::empty_input: return "empty-input";
    case Errc::domain: return "domain";
    case Errc::alignment: return "alignment";
    case Errc::uncoverable_gap: return "uncoverable-gap";
    case Errc::empty_slice: return "empty-slice";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::degenerate: return "degenerate";
    case Errc::rank_deficient: return "rank-deficient";
    case Errc::unsupported_dimension: return "unsupported-dimension";
    case Errc::unsupported_size: return "unsupported-size";
    case Errc::identification_failure: return "identification-failure";
    case Errc::reliability: return "reliability";
    }
    return "unknown";
}

inline int exit_code(Errc e) {
    switch (e) {
    case Errc::config: return 2;
    case Errc::schema:
    case Errc::parse:
    case Errc::empty_input:
    case Errc::domain:
    case Errc::alignment:
    case Errc::uncoverable_gap:
    case Errc::empty_slice:
    case Errc::insufficient_data: return 3;
    default: return 4;
    }
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}

    Errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    Errc code_;
    std::string message_;
};

// Shock and source distributions shared by the simulators and tests.
enum class Distribution { uniform, laplace, gaussian, student_t };

/// Random engine used everywhere. libstdc++ distributions are deterministic
/// for a fixed engine state, which the reproducibility contracts rely on.
using Rng = std::mt19937_64;

/// splitmix64 finalizer; derives independent child seeds from (master, index)
/// so that bootstrap replicate i sees the same stream regardless of run order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Draws one unit-variance variate. Student-t requires df > 2.
inline double draw_unit(Distribution dist, Rng& rng, double df = 5.0) {
    switch (dist) {
    case Distribution::uniform: {
        std::uniform_real_distribution<double> u(-1.7320508075688772, 1.7320508075688772);
        return u(rng);
    }
    case Distribution::laplace: {
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        const double v = u(rng);
        const double scale = 0.70710678118654752;  // 1/sqrt(2)
        const double mag = -scale * std::log(1.0 - 2.0 * std::abs(v));
        return v < 0.0 ? -mag : mag;
    }
    case Distribution::gaussian: {
        std::normal_distribution<double> g(0.0, 1.0);
        return g(rng);
    }
    case Distribution::student_t: {
        std::student_t_distribution<double> t(df);
        return t(rng) * std::sqrt((df - 2.0) / df);
    }
    }
    return 0.0;
}

inline Matrix draw_matrix(Distribution dist, Eigen::Index rows, Eigen::Index cols, Rng& rng,
                          double df = 5.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = draw_unit(dist, rng, df);
    return m;
}

}  // namespace svarlingam
