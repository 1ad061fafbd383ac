#pragma once

// Motion-poselet initialisation (k-means + garbage-collector relabelling) and
// actionlet discovery (chi-squared affinity spectrum, scree test, per-action
// k-means).

#include <cstdint>
#include <span>
#include <vector>

#include "hiact/core/matrix.hpp"

namespace hiact {

struct KMeansOptions {
    std::size_t k = 1;
    std::uint64_t seed = 0x5eed;
    int max_iter = 100;
    int restarts = 1;  // extra k-means++ draws; the lowest inertia wins
};

struct KMeansResult {
    Matrix centroids;                  // k x dim
    std::vector<int> labels;           // nearest centroid, lowest index on ties
    std::vector<double> distances;     // Euclidean distance to the assigned centroid
    std::vector<double> inertia_trace; // sum of squared distances after each assignment step
    double inertia = 0.0;
    int reseeded = 0;                  // empty clusters moved to the farthest point
};

/// Euclidean k-means with k-means++ seeding. Deterministic for a given seed.
KMeansResult kmeans(const Matrix& points, const KMeansOptions& options);

/// Relabels the ceil(fraction * n) entries with the largest distance to
/// `gc_label`; ties go to the lower index.
std::vector<int> gc_init(std::span<const int> labels, std::span<const double> distances, double fraction,
                         int gc_label);

/// sum_k (a_k - b_k)^2 / (a_k + b_k), skipping bins where both are zero.
/// Throws DomainError on negative entries and DimensionError on length mismatch.
double chi2(std::span<const double> a, std::span<const double> b);

/// Scores s_i = lambda_{i+1}^2 / sum_{j<=i} lambda_j + c*i for i = 1..n-1
/// (eigenvalues sorted descending, tiny negatives clamped to zero).
std::vector<double> scree_scores(std::span<const double> eigenvalues, double c = 2e-3);

/// argmin_i of scree_scores (ties -> smallest i); 1 for fewer than two or all-zero eigenvalues.
int scree_count(std::span<const double> eigenvalues, double c = 2e-3);

/// Sorted descending, clamped at zero and divided by the sum (unchanged if the sum is zero).
std::vector<double> normalize_spectrum(std::span<const double> eigenvalues);

/// Eigenvalues of a symmetric matrix, descending.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

/// Normalised (or raw) count histogram of labels in [0, bins); other labels are ignored.
std::vector<double> label_histogram(std::span<const int> labels, std::size_t bins, bool normalize = true);

struct ActionletDictionary {
    int S = 0;                    // atomic actions
    std::vector<int> G;           // actionlets per atomic action
    std::vector<int> u_of_v;      // actionlet -> atomic action (0-based), non-decreasing
    Matrix centroids;             // A x bins histogram centroids

    int A() const noexcept { return static_cast<int>(u_of_v.size()); }
    /// Contiguous actionlet ids of atomic action s.
    std::vector<int> actionlets_of(int s) const;

    /// One actionlet per atomic action, no centroids.
    static ActionletDictionary identity(int S);
};

struct ActionletOptions {
    double c = 2e-3;
    std::uint64_t seed = 0x5eed;
    int max_iter = 100;
    int restarts = 4;
    bool normalize_spectrum = true;      // scree on lambda / sum(lambda)
    bool laplacian_affinity = false;     // use D^-1/2 A D^-1/2 instead of A
};

struct IntervalHistogram {
    std::vector<double> histogram;
    int action = 0;
};

struct ActionletResult {
    ActionletDictionary dictionary;
    std::vector<int> assignment;               // actionlet of each input histogram
    std::vector<std::vector<double>> spectra;  // per action, descending affinity eigenvalues
};

/// Affinity A_ij = exp(-chi2(h_i, h_j) / sigma), sigma the mean pairwise
/// distance within the action; G_s from the scree test, clamped to the number
/// of distinct histograms; then k-means with k = G_s.
ActionletResult build_actionlets(std::span<const IntervalHistogram> intervals, int S,
                                 const ActionletOptions& options);

/// Groups videos by their atomic-action occurrence vectors (k-means with k
/// from the scree test on the chi-squared affinity). Returns a group per video.
std::vector<int> group_by_occurrence(const Matrix& occurrences, const ActionletOptions& options);

}  // namespace hiact
