#include "hiact/p1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hiact/core/error.hpp"
#include "hiact/core/parallel.hpp"
#include "hiact/dictionaries.hpp"
#include "hiact/lp.hpp"

namespace hiact {

std::vector<double> chi2_centroid(const std::vector<const std::vector<double>*>& histograms) {
    if (histograms.empty()) throw DimensionError("centroid of an empty set");
    const std::size_t K = histograms.front()->size();
    const double n = static_cast<double>(histograms.size());
    std::vector<double> mu(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        // d/dmu sum (h-mu)^2/(h+mu) = n - sum 4h^2/(h+mu)^2, increasing in mu
        double hi = 0.0, support = 0.0;
        for (const auto* h : histograms) {
            const double v = (*h)[k];
            if (v < 0.0) throw DomainError("negative histogram entry");
            hi = std::max(hi, v);
            if (v > 0.0) support += 1.0;
        }
        if (4.0 * support <= n) continue;  // minimum at 0
        auto g = [&](double m) {
            double s = 0.0;
            for (const auto* h : histograms) {
                const double v = (*h)[k];
                if (v > 0.0) s += 4.0 * v * v / ((v + m) * (v + m));
            }
            return s - n;
        };
        double lo = 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? lo : hi) = mid;
        }
        mu[k] = 0.5 * (lo + hi);
    }
    return mu;
}

double assignment_cost(const Assignment& b, const std::vector<std::vector<double>>& cost) {
    double s = 0.0;
    for (std::size_t q = 0; q < b.size(); ++q)
        for (std::size_t r = 0; r < b[q].size(); ++r)
            if (b[q][r]) s += cost[q][r];
    return s;
}

bool assignment_feasible(const P1Video& video, const Assignment& b) {
    if (b.size() != video.size()) return false;
    for (std::size_t q = 0; q < b.size(); ++q)
        if (std::none_of(b[q].begin(), b[q].end(), [](auto x) { return x != 0; })) return false;
    for (std::size_t q = 0; q < b.size(); ++q)
        for (std::size_t p = q + 1; p < b.size(); ++p) {
            if (!video[q].interval.overlaps(video[p].interval)) continue;
            for (std::size_t r = 0; r < b[q].size(); ++r)
                if (b[q][r] && b[p][r]) return false;
        }
    return true;
}

namespace {

std::vector<std::vector<char>> overlap_matrix(const P1Video& video) {
    const std::size_t Q = video.size();
    std::vector<std::vector<char>> ov(Q, std::vector<char>(Q, 0));
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t p = 0; p < Q; ++p)
            ov[q][p] = p != q && video[q].interval.overlaps(video[p].interval);
    return ov;
}

// Rounds x at 0.5 and restores feasibility.
AssignStep round_and_repair(const P1Video& video, const std::vector<std::vector<double>>& cost,
                            const std::vector<double>& x) {
    const std::size_t Q = video.size(), R = Q ? cost.front().size() : 0;
    const auto ov = overlap_matrix(video);
    AssignStep out;
    out.b.assign(Q, std::vector<std::uint8_t>(R, 0));
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t r = 0; r < R; ++r) out.b[q][r] = x[q * R + r] >= 0.5;
    // overlapping pairs in the same region: drop the costlier claim
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t p = q + 1; p < Q; ++p)
                if (ov[q][p] && out.b[q][r] && out.b[p][r]) {
                    if (cost[p][r] >= cost[q][r]) out.b[p][r] = 0;
                    else out.b[q][r] = 0;
                }
    // uncovered intervals: cheapest region that stays conflict free
    for (std::size_t q = 0; q < Q; ++q) {
        if (std::any_of(out.b[q].begin(), out.b[q].end(), [](auto v) { return v != 0; })) continue;
        std::vector<std::size_t> order(R);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cost[q][a] < cost[q][b]; });
        bool placed = false;
        for (std::size_t r : order) {
            bool clash = false;
            for (std::size_t p = 0; p < Q && !clash; ++p) clash = ov[q][p] && out.b[p][r];
            if (!clash) {
                out.b[q][r] = 1;
                placed = true;
                break;
            }
        }
        if (!placed) {
            // take a region from overlapping intervals that keep another one
            double best_delta = std::numeric_limits<double>::infinity();
            std::size_t best_r = R;
            for (std::size_t r : order) {
                double delta = cost[q][r];
                bool ok = true;
                for (std::size_t p = 0; p < Q && ok; ++p) {
                    if (!ov[q][p] || !out.b[p][r]) continue;
                    ok = std::count(out.b[p].begin(), out.b[p].end(), std::uint8_t{1}) > 1;
                    delta -= cost[p][r];
                }
                if (ok && delta < best_delta) {
                    best_delta = delta;
                    best_r = r;
                }
            }
            if (best_r < R) {
                for (std::size_t p = 0; p < Q; ++p)
                    if (ov[q][p]) out.b[p][best_r] = 0;
                out.b[q][best_r] = 1;
                placed = true;
            }
        }
        if (!placed) {
            out.b[q][order.front()] = 1;
            out.infeasible.push_back(q);
        }
    }
    return out;
}

struct Search {
    const std::vector<std::vector<double>>* cost;
    std::vector<std::vector<char>> ov;
    std::size_t Q = 0, R = 0;
    std::vector<double> rest_bound;  // lower bound on the cost of intervals q..Q-1
    std::vector<unsigned> masks, best_masks;
    double best = std::numeric_limits<double>::infinity();

    double mask_cost(std::size_t q, unsigned m) const {
        double s = 0.0;
        for (std::size_t r = 0; r < R; ++r)
            if (m >> r & 1u) s += (*cost)[q][r];
        return s;
    }

    void run(std::size_t q, double partial) {
        if (q == Q) {
            if (partial < best) {
                best = partial;
                best_masks = masks;
            }
            return;
        }
        if (partial + rest_bound[q] >= best) return;
        for (unsigned m = 1; m < (1u << R); ++m) {
            bool clash = false;
            for (std::size_t p = 0; p < q && !clash; ++p) clash = ov[q][p] && (masks[p] & m);
            if (clash) continue;
            masks[q] = m;
            run(q + 1, partial + mask_cost(q, m));
        }
    }
};

}  // namespace

AssignStep assign_regions_relaxed(const P1Video& video, const std::vector<std::vector<double>>& cost) {
    const std::size_t Q = video.size(), R = Q ? cost.front().size() : 0;
    const std::size_t n = Q * R;
    lp::Problem prob;
    prob.objective.resize(n);
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t r = 0; r < R; ++r) prob.objective[q * R + r] = cost[q][r];
    for (std::size_t q = 0; q < Q; ++q) {
        lp::Constraint c{std::vector<double>(n, 0.0), lp::Sense::GreaterEqual, 1.0};
        for (std::size_t r = 0; r < R; ++r) c.coefficients[q * R + r] = 1.0;
        prob.constraints.push_back(std::move(c));
    }
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t p = q + 1; p < Q; ++p) {
            if (!video[q].interval.overlaps(video[p].interval)) continue;
            for (std::size_t r = 0; r < R; ++r) {
                lp::Constraint c{std::vector<double>(n, 0.0), lp::Sense::LessEqual, 1.0};
                c.coefficients[q * R + r] = c.coefficients[p * R + r] = 1.0;
                prob.constraints.push_back(std::move(c));
            }
        }
    for (std::size_t i = 0; i < n; ++i) {
        lp::Constraint c{std::vector<double>(n, 0.0), lp::Sense::LessEqual, 1.0};
        c.coefficients[i] = 1.0;
        prob.constraints.push_back(std::move(c));
    }
    const auto sol = lp::minimize(prob);
    const std::vector<double> x = sol.status == lp::Status::Optimal ? sol.x : std::vector<double>(n, 0.0);
    return round_and_repair(video, cost, x);
}

AssignStep assign_regions(const P1Video& video, const std::vector<std::vector<double>>& cost, std::size_t exact_limit) {
    const std::size_t Q = video.size(), R = Q ? cost.front().size() : 0;
    if (Q == 0) return {};
    if (R > 16 || Q * R > exact_limit) return assign_regions_relaxed(video, cost);
    Search s;
    s.cost = &cost;
    s.ov = overlap_matrix(video);
    s.Q = Q;
    s.R = R;
    s.masks.assign(Q, 0);
    s.rest_bound.assign(Q + 1, 0.0);
    for (std::size_t q = Q; q-- > 0;) {
        double neg = 0.0, lo = std::numeric_limits<double>::infinity();
        for (double c : cost[q]) {
            if (c < 0.0) neg += c;
            lo = std::min(lo, c);
        }
        s.rest_bound[q] = s.rest_bound[q + 1] + std::min(neg, lo);
    }
    s.run(0, 0.0);
    if (s.best_masks.empty()) return assign_regions_relaxed(video, cost);
    AssignStep out;
    out.b.assign(Q, std::vector<std::uint8_t>(R, 0));
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t r = 0; r < R; ++r) out.b[q][r] = s.best_masks[q] >> r & 1u;
    return out;
}

P1Result solve_p1(const std::vector<P1Video>& videos, std::size_t R, std::size_t S, const P1Options& options) {
    std::size_t K = 0;
    for (const auto& v : videos)
        for (const auto& q : v) {
            if (q.histograms.size() != R) throw DimensionError("interval needs one histogram per region");
            if (q.interval.action < 0 || static_cast<std::size_t>(q.interval.action) >= S)
                throw DimensionError("interval action out of range");
            for (const auto& h : q.histograms) {
                if (K == 0) K = h.size();
                if (h.size() != K) throw DimensionError("histograms differ in length");
            }
        }

    P1Result res;
    res.means.assign(R, std::vector<std::vector<double>>(S, std::vector<double>(K, 0.0)));
    // fallback means: every interval of the action counts (b = all ones)
    auto global = res.means;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t a = 0; a < S; ++a) {
            std::vector<const std::vector<double>*> members;
            for (const auto& v : videos)
                for (const auto& q : v)
                    if (static_cast<std::size_t>(q.interval.action) == a) members.push_back(&q.histograms[r]);
            if (!members.empty()) global[r][a] = chi2_centroid(members);
        }
    res.means = global;

    const std::size_t M = videos.size();
    std::vector<std::vector<std::size_t>> infeasible(M);
    bool have_b = false;
    auto costs_for = [&](std::size_t m, double inv) {
        std::vector<std::vector<double>> c(videos[m].size(), std::vector<double>(R));
        for (std::size_t q = 0; q < videos[m].size(); ++q)
            for (std::size_t r = 0; r < R; ++r)
                c[q][r] = chi2(videos[m][q].histograms[r], res.means[r][videos[m][q].interval.action]) - inv;
        return c;
    };
    auto total_cost = [&](double inv) {
        double s = 0.0;
        for (std::size_t m = 0; m < M; ++m) s += assignment_cost(res.assignments[m], costs_for(m, inv));
        return s;
    };

    double lambda = options.schedule.lambda0;
    for (int round = 0; round < options.schedule.rounds; ++round, lambda *= options.schedule.decay) {
        const double inv = 1.0 / lambda;
        for (int step = 0; step < options.schedule.max_alternations; ++step) {
            P1TraceEntry entry{round, step, inv, std::numeric_limits<double>::quiet_NaN(), 0.0};
            if (have_b) {
                for (std::size_t r = 0; r < R; ++r)
                    for (std::size_t a = 0; a < S; ++a) {
                        std::vector<const std::vector<double>*> members;
                        for (std::size_t m = 0; m < M; ++m)
                            for (std::size_t q = 0; q < videos[m].size(); ++q)
                                if (static_cast<std::size_t>(videos[m][q].interval.action) == a &&
                                    res.assignments[m][q][r])
                                    members.push_back(&videos[m][q].histograms[r]);
                        res.means[r][a] = members.empty() ? global[r][a] : chi2_centroid(members);
                    }
                entry.after_means = total_cost(inv);
            }
            std::vector<Assignment> next(M);
            std::vector<char> changed(M, 0);
            parallel_for(M, options.jobs, [&](std::size_t m) {
                const auto c = costs_for(m, inv);
                auto step_out = assign_regions(videos[m], c, options.exact_limit);
                if (have_b && assignment_cost(step_out.b, c) > assignment_cost(res.assignments[m], c)) {
                    next[m] = res.assignments[m];
                    return;
                }
                infeasible[m] = std::move(step_out.infeasible);
                changed[m] = !have_b || step_out.b != res.assignments[m];
                next[m] = std::move(step_out.b);
            });
            res.assignments = std::move(next);
            have_b = true;
            entry.after_assign = total_cost(inv);
            res.trace.push_back(entry);
            if (std::none_of(changed.begin(), changed.end(), [](char c) { return c != 0; })) break;
        }
    }
    if (!have_b) res.assignments.assign(M, {});
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t q : infeasible[m]) res.infeasible.push_back({m, q});
    return res;
}

}  // namespace hiact
