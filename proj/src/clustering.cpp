#include "hybridcast/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hybridcast/error.hpp"
#include "hybridcast/rng.hpp"

namespace hybridcast {

namespace {

// Zero-mean, unit-norm copy of x; throws on a constant series.
Vector standardize(std::span<const double> x) {
    const auto d = static_cast<Eigen::Index>(x.size());
    Eigen::Map<const Vector> v(x.data(), d);
    Vector z = v.array() - v.mean();
    const double norm = z.norm();
    const double scale = v.cwiseAbs().maxCoeff() * std::sqrt(static_cast<double>(d));
    if (!(norm > 1e-12 * scale) || !std::isfinite(norm)) {
        throw ValidationError("degenerate series: constant values make correlation distance undefined");
    }
    return z / norm;
}

// Correlation distance between a standardized series and a centroid whose
// rows are already zero-mean. A zero centroid is uncorrelated with everything.
double distance_to_centroid(const Vector& z, const Matrix& centroids, Eigen::Index j) {
    const double norm = centroids.row(j).norm();
    if (norm <= 1e-300) return 1.0;
    const double r = centroids.row(j).dot(z) / norm;
    return std::clamp(1.0 - r, 0.0, 2.0);
}

struct LloydState {
    Matrix centroids;
    std::vector<int> assignments;
    std::vector<double> trace;
    int iterations = 0;
};

int nearest(const Vector& z, const Matrix& centroids, double* dist) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
        const double dj = distance_to_centroid(z, centroids, j);
        if (dj < best_d) {
            best_d = dj;
            best = static_cast<int>(j);
        }
    }
    if (dist != nullptr) *dist = best_d;
    return best;
}

LloydState lloyd(const std::vector<Vector>& z, Matrix centroids, const KMeansOptions& options) {
    const auto n = z.size();
    const auto k = centroids.rows();
    LloydState s;
    s.assignments.assign(n, 0);
    std::vector<double> dist(n, 0.0);

    for (int it = 0; it < options.max_iter; ++it) {
        s.iterations = it + 1;

        // Step 1: assignment.
        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s.assignments[i] = nearest(z[i], centroids, &dist[i]);
            wcss += dist[i];
        }
        s.trace.push_back(wcss);

        // Empty clusters take over the worst-fit series of a cluster that can spare one.
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int a : s.assignments) ++counts[static_cast<std::size_t>(a)];
        bool repaired = false;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (counts[static_cast<std::size_t>(j)] != 0) continue;
            std::size_t worst = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(s.assignments[i])] < 2) continue;
                if (worst == n || dist[i] > dist[worst]) worst = i;
            }
            if (worst == n) break;  // unreachable while k <= n
            --counts[static_cast<std::size_t>(s.assignments[worst])];
            s.assignments[worst] = static_cast<int>(j);
            ++counts[static_cast<std::size_t>(j)];
            centroids.row(j) = z[worst].transpose();
            dist[worst] = 0.0;
            repaired = true;
        }
        if (repaired) {
            s.trace.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));
        }

        // Step 2: centroid update.
        Matrix updated = Matrix::Zero(k, centroids.cols());
        for (std::size_t i = 0; i < n; ++i) updated.row(s.assignments[i]) += z[i].transpose();
        for (Eigen::Index j = 0; j < k; ++j) updated.row(j) /= counts[static_cast<std::size_t>(j)];
        const double moved = (updated - centroids).rowwise().norm().maxCoeff();
        centroids = std::move(updated);

        wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wcss += distance_to_centroid(z[i], centroids, s.assignments[i]);
        }
        s.trace.push_back(wcss);

        if (moved <= options.tol) break;
    }
    s.centroids = std::move(centroids);
    return s;
}

}  // namespace

double correlation_distance(std::span<const double> x, std::span<const double> mu) {
    if (x.size() != mu.size()) {
        throw ValidationError("correlation_distance: length mismatch (" + std::to_string(x.size()) +
                              " vs " + std::to_string(mu.size()) + ")");
    }
    if (x.size() < 2) throw ValidationError("correlation_distance: need at least 2 points");
    const Vector zx = standardize(x);
    const Vector zm = standardize(mu);
    return std::clamp(1.0 - zx.dot(zm), 0.0, 2.0);
}

std::vector<std::vector<int>> ClusterModel::members() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        out[static_cast<std::size_t>(assignments[i])].push_back(static_cast<int>(i));
    }
    return out;
}

ClusterModel kmeans_fit(const Matrix& series, int k, std::uint64_t seed, const KMeansOptions& options) {
    const auto n = static_cast<int>(series.rows());
    if (k < 1 || k > n) {
        throw ValidationError("kmeans: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    if (series.cols() < 2) throw ValidationError("kmeans: series need at least 2 time points");
    if (options.max_iter < 1 || options.restarts < 1) {
        throw ValidationError("kmeans: max_iter and restarts must be positive");
    }

    std::vector<Vector> z;
    z.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Vector row = series.row(i).transpose();
        try {
            z.push_back(standardize(std::span<const double>(row.data(), static_cast<std::size_t>(row.size()))));
        } catch (const ValidationError& e) {
            throw ValidationError("kmeans: series " + std::to_string(i) + ": " + e.what());
        }
    }

    Rng rng(seed);
    std::vector<int> pool(static_cast<std::size_t>(n));
    ClusterModel best;
    for (int r = 0; r < options.restarts; ++r) {
        // k distinct series, uniformly: partial Fisher-Yates.
        std::iota(pool.begin(), pool.end(), 0);
        Matrix init(k, series.cols());
        for (int j = 0; j < k; ++j) {
            const auto pick = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - j)));
            std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
            init.row(j) = z[static_cast<std::size_t>(pool[static_cast<std::size_t>(j)])].transpose();
        }
        LloydState s = lloyd(z, std::move(init), options);
        const double wcss = s.trace.back();
        if (r == 0 || wcss < best.wcss) {
            best.k = k;
            best.centroids = std::move(s.centroids);
            best.assignments = std::move(s.assignments);
            best.wcss = wcss;
            best.wcss_trace = std::move(s.trace);
            best.iterations = s.iterations;
            best.restart = r;
        }
    }
    return best;
}

int assign(const ClusterModel& model, std::span<const double> x) {
    if (static_cast<Eigen::Index>(x.size()) != model.centroids.cols()) {
        throw ValidationError("assign: series length " + std::to_string(x.size()) +
                              " does not match centroid length " + std::to_string(model.centroids.cols()));
    }
    return nearest(standardize(x), model.centroids, nullptr);
}

ElbowResult elbow_from_curve(std::vector<double> wcss_curve, int k_min) {
    if (wcss_curve.size() < 3) {
        throw ValidationError("elbow: need at least 3 values of k for an interior point");
    }
    ElbowResult out;
    out.k_min = k_min;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 1;
    for (std::size_t i = 1; i + 1 < wcss_curve.size(); ++i) {
        const double second = wcss_curve[i - 1] - 2.0 * wcss_curve[i] + wcss_curve[i + 1];
        if (second > best) {
            best = second;
            arg = i;
        }
    }
    const double scale = std::max(1.0, std::abs(wcss_curve.front()));
    out.flat = !(best > 1e-12 * scale);
    if (out.flat) arg = 1;
    out.k = k_min + static_cast<int>(arg);
    out.wcss_curve = std::move(wcss_curve);
    return out;
}

ElbowResult elbow_select(const Matrix& series, int k_min, int k_max, std::uint64_t seed,
                         const KMeansOptions& options) {
    const auto n = static_cast<int>(series.rows());
    if (k_min < 1 || k_max > n || k_max - k_min + 1 < 3) {
        throw ValidationError("elbow: k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                              "] must lie in [1, " + std::to_string(n) + "] and span at least 3 values");
    }
    std::vector<double> curve;
    for (int k = k_min; k <= k_max; ++k) curve.push_back(kmeans_fit(series, k, seed, options).wcss);
    return elbow_from_curve(std::move(curve), k_min);
}

}  // namespace hybridcast
