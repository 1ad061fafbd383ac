#include "hiact/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "hiact/core/error.hpp"

namespace hiact {

void SyntheticSpec::validate() const {
    if (Y < 1 || S < 1 || K < 2 || R < 1 || D < 1) throw DomainError("synthetic sizes must be positive");
    if (T_min < min_segment || T_max < T_min) throw DomainError("bad synthetic length range");
    if (sigma < 0.0 || noise_fraction < 0.0 || noise_fraction > 1.0) throw DomainError("bad synthetic noise");
    std::set<int> seen(u_of_v.begin(), u_of_v.end());
    if (static_cast<int>(seen.size()) != S || *seen.begin() != 0 || *seen.rbegin() != S - 1 ||
        !std::is_sorted(u_of_v.begin(), u_of_v.end()))
        throw DomainError("u_of_v must be non-decreasing and cover every atomic action");
}

namespace {

using Rng = std::mt19937_64;

Matrix draw_prototypes(int K, int D, double min_sep, Rng& rng) {
    std::normal_distribution<double> n01;
    Matrix p(static_cast<std::size_t>(K), static_cast<std::size_t>(D));
    for (int k = 0; k < K; ++k) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 10000) throw DomainError("cannot separate prototypes; raise D or lower sigma");
            double norm = 0.0;
            for (int d = 0; d < D; ++d) norm += (p(k, d) = n01(rng)) * p(k, d);
            norm = std::sqrt(norm);
            for (int d = 0; d < D; ++d) p(k, d) /= norm;
            bool ok = true;
            for (int j = 0; j < k && ok; ++j) {
                double s = 0.0;
                for (int d = 0; d < D; ++d) s += (p(k, d) - p(j, d)) * (p(k, d) - p(j, d));
                ok = std::sqrt(s) >= min_sep;
            }
            if (ok) break;
        }
    }
    return p;
}

}  // namespace

SyntheticDataset plant_synthetic(const SyntheticSpec& spec, std::uint64_t video_seed) {
    spec.validate();
    SyntheticDataset data;
    data.spec = spec;
    const int A = spec.A(), K = spec.K, R = spec.R, D = spec.D;
    Rng rng(spec.structure_seed);

    const double min_sep = std::max(4.0 * spec.sigma, 0.5);
    for (int r = 0; r < R; ++r) data.prototypes.push_back(draw_prototypes(K, D, min_sep, rng));

    // each actionlet concentrates on a distinct pair of poselets in every region
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) pairs.emplace_back(i, j);
    data.pose_distributions.assign(R, {});
    for (int r = 0; r < R; ++r) {
        auto order = pairs;
        std::shuffle(order.begin(), order.end(), rng);
        for (int a = 0; a < A; ++a) {
            const auto [p, q] = order[static_cast<std::size_t>(a) % order.size()];
            std::vector<double> dist(K, (1.0 - spec.dominant_mass) / (K - 2));
            dist[p] = dist[q] = spec.dominant_mass / 2.0;
            data.pose_distributions[r].push_back(std::move(dist));
        }
    }

    // per class scripts: one or two atomic actions per region, distinct bags across classes
    std::uniform_int_distribution<int> pick_action(0, spec.S - 1), pick_len(1, 2);
    std::set<std::multiset<std::pair<int, int>>> bags;
    data.scripts.assign(spec.Y, std::vector<std::vector<int>>(R));
    for (int y = 0; y < spec.Y; ++y) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 10000) throw DomainError("cannot plant distinct class scripts");
            std::multiset<std::pair<int, int>> bag;
            for (int r = 0; r < R; ++r) {
                auto& s = data.scripts[y][r];
                s.clear();
                const int len = pick_len(rng);
                for (int i = 0; i < len; ++i) {
                    int a = pick_action(rng);
                    while (!s.empty() && a == s.back() && spec.S > 1) a = pick_action(rng);
                    s.push_back(a);
                    bag.emplace(r, a);
                }
            }
            if (bags.insert(bag).second) break;
        }
    }

    Rng vr(video_seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_T(spec.T_min, spec.T_max);
    const double box = std::sqrt(3.0 / D);  // uniform noise with unit expected squared norm
    int serial = 0;
    for (int y = 0; y < spec.Y; ++y)
        for (int n = 0; n < spec.videos_per_class; ++n) {
            SyntheticVideo sv;
            auto& v = sv.video;
            const int T = pick_T(vr);
            v.y = y;
            v.x.video_id = "syn" + std::to_string(serial++);
            v.x.regions.assign(R, Matrix(T, D));
            sv.truth.actions.assign(R, std::vector<int>(T));
            sv.truth.actionlets.assign(R, std::vector<int>(T));
            sv.truth.poselets.assign(R, std::vector<int>(T));
            for (int r = 0; r < R; ++r) {
                const auto& script = data.scripts[y][r];
                const int segs = static_cast<int>(script.size());
                // cut points with every segment at least min_segment long
                std::vector<int> cuts{0};
                const int slack = T - segs * spec.min_segment;
                std::vector<int> extra(segs, 0);
                for (int i = 0; i < slack; ++i) ++extra[std::uniform_int_distribution<int>(0, segs - 1)(vr)];
                for (int i = 0; i < segs; ++i) cuts.push_back(cuts.back() + spec.min_segment + extra[i]);
                for (int i = 0; i < segs; ++i) {
                    const int s = script[i];
                    std::vector<int> mine;
                    for (int a = 0; a < A; ++a)
                        if (spec.u_of_v[a] == s) mine.push_back(a);
                    const int a = mine[std::uniform_int_distribution<std::size_t>(0, mine.size() - 1)(vr)];
                    std::discrete_distribution<int> pose(data.pose_distributions[r][a].begin(),
                                                         data.pose_distributions[r][a].end());
                    for (int t = cuts[i]; t < cuts[i + 1]; ++t) {
                        const int z = pose(vr);
                        sv.truth.actions[r][t] = s;
                        sv.truth.actionlets[r][t] = a;
                        sv.truth.poselets[r][t] = z;
                        for (int d = 0; d < D; ++d) v.x.regions[r](t, d) = data.prototypes[r](z, d) + spec.sigma * noise(vr);
                    }
                    v.intervals.push_back({s, cuts[i], cuts[i + 1] - 1, r});
                }
                if (spec.noise_fraction > 0.0)
                    for (int t = 0; t < T; ++t) {
                        if (unit(vr) >= spec.noise_fraction) continue;
                        sv.truth.poselets[r][t] = K;
                        for (int d = 0; d < D; ++d) v.x.regions[r](t, d) = box * (2.0 * unit(vr) - 1.0);
                    }
            }
            std::stable_sort(v.intervals.begin(), v.intervals.end(), [](const auto& a, const auto& b) {
                return std::tie(a.t_start, a.region) < std::tie(b.t_start, b.region);
            });
            data.videos.push_back(std::move(sv));
        }
    return data;
}

std::vector<TrainVideo> training_view(const SyntheticDataset& data, Supervision supervision) {
    std::vector<TrainVideo> out;
    for (const auto& sv : data.videos) {
        TrainVideo v = sv.video;
        if (supervision == Supervision::Video) v.intervals.clear();
        if (supervision == Supervision::Temporal)
            for (auto& q : v.intervals) q.region = -1;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace hiact
