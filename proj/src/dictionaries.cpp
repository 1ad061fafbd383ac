#include "hiact/dictionaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "hiact/core/error.hpp"
#include "hiact/kernels/kernels.hpp"

namespace hiact {

namespace {

Matrix seed_plus_plus(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = points.rows(), d = points.cols();
    Matrix centroids(k, d);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    for (std::size_t c = 0; c < k; ++c) {
        chosen[pick] = 1;
        std::copy(points.row(pick).begin(), points.row(pick).end(), centroids.row(c).begin());
        if (c + 1 == k) break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], kernels::squared_distance(points.row(i), centroids.row(c)));
            total += d2[i];
        }
        if (total > 0.0) {
            double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                u -= d2[i];
                if (u < 0.0 && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            while (d2[pick] == 0.0 && pick > 0) --pick;
        } else {
            // fewer distinct points than k: take the next unchosen one
            pick = 0;
            while (pick < n && chosen[pick]) ++pick;
            if (pick == n) pick = 0;
        }
    }
    return centroids;
}

struct Assignment {
    double inertia = 0.0;
    bool changed = false;
};

Assignment assign(const Matrix& points, const Matrix& centroids, std::vector<int>& labels,
                  std::vector<double>& d2) {
    Assignment out;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centroids.rows(); ++c) {
            const double dist = kernels::squared_distance(points.row(i), centroids.row(c));
            if (dist < best_d) {
                best_d = dist;
                best = static_cast<int>(c);
            }
        }
        if (labels[i] != best) out.changed = true;
        labels[i] = best;
        d2[i] = best_d;
        out.inertia += best_d;
    }
    return out;
}

KMeansResult kmeans_once(const Matrix& points, std::size_t k, std::uint64_t seed, int max_iter) {
    const std::size_t n = points.rows(), d = points.cols();
    std::mt19937_64 rng(seed);
    KMeansResult res;
    res.centroids = seed_plus_plus(points, k, rng);
    res.labels.assign(n, -1);
    std::vector<double> d2(n, 0.0);
    auto a = assign(points, res.centroids, res.labels, d2);
    res.inertia_trace.push_back(a.inertia);
    for (int it = 0; it < max_iter; ++it) {
        Matrix sums(k, d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(res.labels[i]);
            ++counts[c];
            kernels::axpy(1.0, points.row(i), sums.row(c));
        }
        std::vector<char> taken(n, 0);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < d; ++j) res.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
                continue;
            }
            // empty cluster: move it onto the point farthest from its centroid
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (!taken[i] && d2[i] > far_d) {
                    far_d = d2[i];
                    far = i;
                }
            taken[far] = 1;
            d2[far] = 0.0;
            std::copy(points.row(far).begin(), points.row(far).end(), res.centroids.row(c).begin());
            ++res.reseeded;
        }
        a = assign(points, res.centroids, res.labels, d2);
        res.inertia_trace.push_back(a.inertia);
        if (!a.changed) break;
    }
    res.inertia = res.inertia_trace.back();
    res.distances.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.distances[i] = std::sqrt(d2[i]);
    return res;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, const KMeansOptions& options) {
    if (options.k == 0) throw DomainError("k-means needs k >= 1");
    if (points.rows() < options.k) throw DimensionError("k-means needs at least k points");
    KMeansResult best;
    const int draws = std::max(1, options.restarts);
    for (int r = 0; r < draws; ++r) {
        auto res = kmeans_once(points, options.k, options.seed + static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ull,
                               options.max_iter);
        if (r == 0 || res.inertia < best.inertia) best = std::move(res);
    }
    return best;
}

std::vector<int> gc_init(std::span<const int> labels, std::span<const double> distances, double fraction,
                         int gc_label) {
    if (labels.size() != distances.size()) throw DimensionError("labels and distances differ in length");
    std::vector<int> out(labels.begin(), labels.end());
    const std::size_t n = labels.size();
    const auto count = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(n), std::ceil(fraction * static_cast<double>(n) - 1e-9)));
    if (count == 0) return out;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances[a] > distances[b]; });
    for (std::size_t i = 0; i < count; ++i) out[order[i]] = gc_label;
    return out;
}

double chi2(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("chi2 histograms differ in length");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < 0.0 || b[i] < 0.0) throw DomainError("chi2 needs nonnegative histogram entries");
    return kernels::active().chi2(a.data(), b.data(), a.size());
}

namespace {

std::vector<double> sorted_clamped(std::span<const double> eigenvalues) {
    std::vector<double> v(eigenvalues.begin(), eigenvalues.end());
    for (auto& x : v) x = std::max(0.0, x);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

std::vector<double> scree_scores(std::span<const double> eigenvalues, double c) {
    const auto v = sorted_clamped(eigenvalues);
    std::vector<double> scores;
    double prefix = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        prefix += v[i - 1];
        const double first = prefix > 0.0 ? v[i] * v[i] / prefix : 0.0;
        scores.push_back(first + c * static_cast<double>(i));
    }
    return scores;
}

int scree_count(std::span<const double> eigenvalues, double c) {
    const auto v = sorted_clamped(eigenvalues);
    if (v.size() < 2 || v.front() == 0.0) return 1;
    const auto scores = scree_scores(v, c);
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] < scores[best]) best = i;
    return static_cast<int>(best) + 1;
}

std::vector<double> normalize_spectrum(std::span<const double> eigenvalues) {
    auto v = sorted_clamped(eigenvalues);
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (total > 0.0)
        for (auto& x : v) x /= total;
    return v;
}

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("eigenvalues need a square matrix");
    const auto n = static_cast<Eigen::Index>(m.rows());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> map(m.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(map), Eigen::EigenvaluesOnly);
    std::vector<double> out(eig.eigenvalues().data(), eig.eigenvalues().data() + n);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> label_histogram(std::span<const int> labels, std::size_t bins, bool normalize) {
    std::vector<double> h(bins, 0.0);
    double total = 0.0;
    for (int l : labels)
        if (l >= 0 && static_cast<std::size_t>(l) < bins) {
            h[l] += 1.0;
            total += 1.0;
        }
    if (normalize && total > 0.0)
        for (auto& x : h) x /= total;
    return h;
}

std::vector<int> ActionletDictionary::actionlets_of(int s) const {
    std::vector<int> out;
    for (int a = 0; a < A(); ++a)
        if (u_of_v[a] == s) out.push_back(a);
    return out;
}

ActionletDictionary ActionletDictionary::identity(int S) {
    ActionletDictionary d;
    d.S = S;
    d.G.assign(S, 1);
    d.u_of_v.resize(S);
    std::iota(d.u_of_v.begin(), d.u_of_v.end(), 0);
    return d;
}

namespace {

struct ActionSpectrum {
    int groups = 1;
    std::vector<double> eigenvalues;
};

ActionSpectrum action_spectrum(const std::vector<const std::vector<double>*>& hs, const ActionletOptions& options) {
    ActionSpectrum out;
    const std::size_t n = hs.size();
    if (n < 2) return out;
    Matrix dist(n, n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            dist(i, j) = dist(j, i) = chi2(*hs[i], *hs[j]);
            sum += dist(i, j);
        }
    const double sigma = sum / static_cast<double>(n * (n - 1) / 2);
    if (sigma <= 0.0) return out;
    Matrix aff(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) aff(i, j) = std::exp(-dist(i, j) / sigma);
    if (options.laplacian_affinity) {
        std::vector<double> deg(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) deg[i] += aff(i, j);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) aff(i, j) /= std::sqrt(deg[i] * deg[j]);
    }
    out.eigenvalues = symmetric_eigenvalues(aff);
    const auto spectrum = options.normalize_spectrum ? normalize_spectrum(out.eigenvalues) : out.eigenvalues;
    out.groups = scree_count(spectrum, options.c);
    return out;
}

std::size_t distinct_count(const std::vector<const std::vector<double>*>& hs) {
    std::set<std::vector<double>> seen;
    for (const auto* h : hs) seen.insert(*h);
    return seen.size();
}

}  // namespace

ActionletResult build_actionlets(std::span<const IntervalHistogram> intervals, int S,
                                 const ActionletOptions& options) {
    if (S <= 0) throw DomainError("need at least one atomic action");
    std::size_t bins = 0;
    for (const auto& iv : intervals) {
        if (iv.action < 0 || iv.action >= S) throw DomainError("interval action outside [0, S)");
        if (bins == 0) bins = iv.histogram.size();
        if (iv.histogram.size() != bins) throw DimensionError("interval histograms differ in length");
    }

    ActionletResult res;
    res.assignment.assign(intervals.size(), -1);
    res.dictionary.S = S;
    res.spectra.resize(S);
    std::vector<std::vector<double>> centroid_rows;
    for (int s = 0; s < S; ++s) {
        std::vector<std::size_t> idx;
        std::vector<const std::vector<double>*> hs;
        for (std::size_t i = 0; i < intervals.size(); ++i)
            if (intervals[i].action == s) {
                idx.push_back(i);
                hs.push_back(&intervals[i].histogram);
            }
        const int first = static_cast<int>(res.dictionary.u_of_v.size());
        if (idx.empty()) {
            res.dictionary.G.push_back(1);
            res.dictionary.u_of_v.push_back(s);
            centroid_rows.emplace_back(bins, 0.0);
            continue;
        }
        auto spec = action_spectrum(hs, options);
        res.spectra[s] = std::move(spec.eigenvalues);
        const int g = std::max(1, std::min<int>(spec.groups, static_cast<int>(distinct_count(hs))));
        Matrix pts(idx.size(), bins);
        for (std::size_t i = 0; i < idx.size(); ++i) std::copy(hs[i]->begin(), hs[i]->end(), pts.row(i).begin());
        const auto km = kmeans(pts, {static_cast<std::size_t>(g), options.seed + static_cast<std::uint64_t>(s),
                                     options.max_iter, options.restarts});
        res.dictionary.G.push_back(g);
        for (int a = 0; a < g; ++a) {
            res.dictionary.u_of_v.push_back(s);
            centroid_rows.emplace_back(km.centroids.row(a).begin(), km.centroids.row(a).end());
        }
        for (std::size_t i = 0; i < idx.size(); ++i) res.assignment[idx[i]] = first + km.labels[i];
    }
    res.dictionary.centroids = Matrix(centroid_rows.size(), bins);
    for (std::size_t a = 0; a < centroid_rows.size(); ++a)
        std::copy(centroid_rows[a].begin(), centroid_rows[a].end(), res.dictionary.centroids.row(a).begin());
    return res;
}

std::vector<int> group_by_occurrence(const Matrix& occurrences, const ActionletOptions& options) {
    std::vector<IntervalHistogram> rows;
    for (std::size_t i = 0; i < occurrences.rows(); ++i)
        rows.push_back({std::vector<double>(occurrences.row(i).begin(), occurrences.row(i).end()), 0});
    const auto res = build_actionlets(rows, 1, options);
    return res.assignment;
}

}  // namespace hiact
