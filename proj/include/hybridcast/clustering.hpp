#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybridcast/numerics.hpp"

namespace hybridcast {

/// 1 - Pearson correlation of x and mu, in [0, 2]. Throws ValidationError
/// ("degenerate series") if either sequence is constant, and on length
/// mismatch or fewer than two points.
double correlation_distance(std::span<const double> x, std::span<const double> mu);

struct KMeansOptions {
    int max_iter = 300;
    double tol = 1e-6;  // max centroid movement (Euclidean) that counts as converged
    int restarts = 20;  // independent seeded initializations; lowest final WCSS wins
};

/// Correlation-distance K-means over series. Cluster indices are 0-based.
///
/// Series are z-scored (zero mean, unit norm) on entry. Correlation distance
/// is invariant to that map, and in that space the arithmetic-mean centroid
/// update is exactly the minimizer of summed correlation distance, so WCSS
/// never increases from one half-step to the next.
struct ClusterModel {
    int k = 0;
    Matrix centroids;              // k x d, means of the assigned standardized series
    std::vector<int> assignments;  // one per input series
    double wcss = 0.0;             // summed correlation distance to assigned centroids
    std::vector<double> wcss_trace;  // WCSS after every assignment and update half-step
    int iterations = 0;
    int restart = 0;  // which initialization produced this model
    std::string distance = "correlation";

    std::vector<std::vector<int>> members() const;
};

/// Rows of `series` are the items to cluster (each a length-d sequence).
ClusterModel kmeans_fit(const Matrix& series, int k, std::uint64_t seed,
                        const KMeansOptions& options = {});

/// Index of the nearest centroid by correlation distance; ties go to the
/// smallest index.
int assign(const ClusterModel& model, std::span<const double> x);

struct ElbowResult {
    int k = 0;
    int k_min = 0;
    std::vector<double> wcss_curve;  // wcss_curve[i] belongs to k_min + i
    bool flat = false;               // no positive second difference anywhere
};

/// Picks the interior k maximizing wcss(k-1) - 2 wcss(k) + wcss(k+1) over the
/// inclusive range; ties and flat curves go to the smallest interior k.
ElbowResult elbow_select(const Matrix& series, int k_min, int k_max, std::uint64_t seed,
                         const KMeansOptions& options = {});

/// The selection rule alone, for a precomputed curve starting at k_min.
ElbowResult elbow_from_curve(std::vector<double> wcss_curve, int k_min);

}  // namespace hybridcast
