#include "hiact/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hiact/core/error.hpp"
#include "hiact/core/parallel.hpp"
#include "hiact/kernels/kernels.hpp"

namespace hiact {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> admissible(const std::vector<int>& listed, int upto) {
    std::vector<int> out;
    if (listed.empty()) {
        out.resize(static_cast<std::size_t>(upto));
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    for (int v : listed)
        if (v >= 0 && v < upto) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

// Constraints --------------------------------------------------------------

FrameConstraints FrameConstraints::fixed_actionlets(const std::vector<std::vector<int>>& v) {
    const std::size_t R = v.size(), T = R ? v.front().size() : 0;
    FrameConstraints c(T, R);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t t = 0; t < T; ++t)
            if (v[r][t] >= 0) c.at(t, r).actionlets = {v[r][t]};
    return c;
}

FrameConstraints FrameConstraints::candidate_actionlets(const std::vector<std::vector<int>>& per_frame,
                                                        std::size_t R) {
    FrameConstraints c(per_frame.size(), R);
    for (std::size_t t = 0; t < per_frame.size(); ++t)
        for (std::size_t r = 0; r < R; ++r) c.at(t, r).actionlets = per_frame[t];
    return c;
}

// Region chain --------------------------------------------------------------

RegionPath dp_region(const Matrix& x, int y, const ModelParams& params, int r,
                     const FrameConstraints* constraints, std::span<const double> loss_addend,
                     const InferenceOptions& options) {
    const auto& dims = params.dims;
    const int K = dims.K, A = dims.A, KS = K + 1;
    const std::size_t T = x.rows();
    if (static_cast<int>(x.cols()) != dims.D) throw DimensionError("descriptor length differs from D");
    if (!loss_addend.empty() && loss_addend.size() != T * static_cast<std::size_t>(A))
        throw DimensionError("loss addend must be T x A");
    if (constraints && !constraints->empty() &&
        (constraints->length() != T || static_cast<int>(constraints->region_count()) != dims.R))
        throw DimensionError("constraints do not match the video");
    if (T == 0) return {};

    const ParamLayout lay(dims);
    const double* W = params.weights.data();
    const double theta = W[lay.theta(r)];

    // pose classifier responses, T x K
    std::vector<double> pose(T * static_cast<std::size_t>(K));
    for (std::size_t t = 0; t < T; ++t)
        kernels::active().gemv(W + lay.w(r, 0), static_cast<std::size_t>(K), x.cols(), x.row(t).data(),
                               pose.data() + t * K);

    // per-frame admissible states (sorted by index) and their unary scores,
    // stored flat: frame t owns [offset[t], offset[t+1])
    std::vector<std::size_t> offset(T + 1, 0);
    std::vector<int> states;
    std::vector<double> unary;
    RegionPath out;
    out.margins.assign(T, 0.0);
    const std::size_t full = static_cast<std::size_t>(KS) * A;
    const bool use_beam = options.beam != kExactBeam && options.beam < full;
    states.reserve(T * std::min(full, use_beam ? options.beam : full));
    unary.reserve(states.capacity());
    std::vector<std::pair<double, int>> scored;
    // state-independent part of the unary: alpha[y, u(a)] + beta[a, k]
    std::vector<double> base(full);
    for (int k = 0; k < KS; ++k)
        for (int a = 0; a < A; ++a)
            base[static_cast<std::size_t>(k) * A + a] =
                W[lay.alpha(r, y, params.action_of(a))] + (k < dims.beta_cols() ? W[lay.beta(r, a, k)] : 0.0);
    std::vector<int> all_k = admissible({}, KS), all_a = admissible({}, A), ks, as;
    if (!options.allow_gc) std::erase(all_k, K);
    for (std::size_t t = 0; t < T; ++t) {
        const AllowedSets* cell = constraints && !constraints->empty() ? &constraints->at(t, r) : nullptr;
        const std::vector<int>* kp = &all_k;
        const std::vector<int>* ap = &all_a;
        if (cell && !cell->poselets.empty()) {
            ks = admissible(cell->poselets, KS);
            if (!options.allow_gc) std::erase(ks, K);
            kp = &ks;
        }
        if (cell && !cell->actionlets.empty()) {
            as = admissible(cell->actionlets, A);
            ap = &as;
        }
        const double* add = loss_addend.empty() ? nullptr : loss_addend.data() + t * A;
        scored.clear();
        for (int k : *kp) {
            const double pk = k < K ? pose[t * K + k] : theta;
            const double* bk = base.data() + static_cast<std::size_t>(k) * A;
            for (int a : *ap) scored.emplace_back(bk[a] + pk + (add ? add[a] : 0.0), k * A + a);
        }
        if (scored.empty())
            throw InfeasibleError("frame " + std::to_string(t) + " region " + std::to_string(r) +
                                  " has no admissible (poselet, actionlet) state");
        auto by_score = [](const auto& p, const auto& q) {
            return p.first > q.first || (p.first == q.first && p.second < q.second);
        };
        if (use_beam && scored.size() > options.beam) {
            std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(options.beam),
                              scored.end(), by_score);
            scored.resize(options.beam);
            std::sort(scored.begin(), scored.end(), [](const auto& p, const auto& q) { return p.second < q.second; });
        }
        double best = kNegInf, second = kNegInf;
        for (const auto& [u, s] : scored) {
            states.push_back(s);
            unary.push_back(u);
            if (u > best) {
                second = best;
                best = u;
            } else if (u > second) {
                second = u;
            }
        }
        offset[t + 1] = states.size();
        out.margins[t] = std::isfinite(second) ? best - second : 0.0;
    }

    // Backward pass. value[i] is the best score of frames t..T-1 starting in
    // states[i]; succ[i] is the successor state at t+1. Per frame this is two
    // max-plus products: red = next (KS x A) * gamma^T, best = eta * red.
    const auto& kt = kernels::active();
    const std::size_t ua = static_cast<std::size_t>(A), uk = static_cast<std::size_t>(KS);
    std::vector<double> gamma_t(ua * ua);
    for (std::size_t a = 0; a < ua; ++a)
        for (std::size_t b = 0; b < ua; ++b) gamma_t[b * ua + a] = W[lay.gamma(r, static_cast<int>(a), static_cast<int>(b))];
    const double* eta = W + lay.eta(r, 0, 0);
    std::vector<double> value(states.size());
    std::vector<int> succ(states.size(), 0);
    std::copy(unary.begin() + static_cast<std::ptrdiff_t>(offset[T - 1]), unary.end(),
              value.begin() + static_cast<std::ptrdiff_t>(offset[T - 1]));
    std::vector<double> next(full), red(full), best(full);
    std::vector<int> red_arg(full), best_arg(full);
    for (std::size_t t = T - 1; t-- > 0;) {
        std::fill(next.begin(), next.end(), kNegInf);
        for (std::size_t i = offset[t + 1]; i < offset[t + 2]; ++i) next[states[i]] = value[i];
        kt.max_plus_product(next.data(), gamma_t.data(), uk, ua, ua, red.data(), red_arg.data());
        kt.max_plus_product(eta, red.data(), uk, uk, ua, best.data(), best_arg.data());
        for (std::size_t i = offset[t]; i < offset[t + 1]; ++i) {
            const int s = states[i], a = s % A;
            const int kp = best_arg[s];
            value[i] = unary[i] + best[s];
            succ[i] = kp * A + red_arg[static_cast<std::size_t>(kp) * ua + a];
        }
    }

    // forward decode
    std::size_t idx = offset[0];
    for (std::size_t i = offset[0] + 1; i < offset[1]; ++i)
        if (value[i] > value[idx]) idx = i;
    out.score = value[idx];
    out.z.resize(T);
    out.v.resize(T);
    int s = states[idx];
    for (std::size_t t = 0; t < T; ++t) {
        out.z[t] = s / A;
        out.v[t] = s % A;
        if (t + 1 == T) break;
        const auto first = states.begin() + static_cast<std::ptrdiff_t>(offset[t]);
        const auto last = states.begin() + static_cast<std::ptrdiff_t>(offset[t + 1]);
        s = succ[static_cast<std::size_t>(std::lower_bound(first, last, s) - states.begin())];
    }
    return out;
}

// Whole video -----------------------------------------------------------------

namespace {

struct YCandidate {
    std::vector<RegionPath> paths;
    double energy = 0.0;
    double loss = 0.0;
    double score = 0.0;
};

InferenceResult assemble(const VideoFeatures& x, int y, YCandidate&& c) {
    InferenceResult res;
    const std::size_t T = x.length(), R = x.region_count();
    res.labeling.y = y;
    res.labeling.z.resize(R);
    res.labeling.v.resize(R);
    res.margins.resize(R * T);
    for (std::size_t r = 0; r < R; ++r) {
        res.labeling.z[r] = std::move(c.paths[r].z);
        res.labeling.v[r] = std::move(c.paths[r].v);
        std::copy(c.paths[r].margins.begin(), c.paths[r].margins.end(), res.margins.begin() + r * T);
    }
    res.energy = c.energy;
    res.loss = c.loss;
    res.score = c.score;
    return res;
}

void check_video(const VideoFeatures& x, const ModelParams& params) {
    if (static_cast<int>(x.region_count()) != params.dims.R) throw DimensionError("descriptor region count differs from R");
    for (const auto& m : x.regions) {
        if (m.rows() != x.length()) throw DimensionError("regions disagree on T");
        if (static_cast<int>(m.cols()) != params.dims.D) throw DimensionError("descriptor length differs from D");
    }
}

}  // namespace

InferenceResult infer(const VideoFeatures& x, const ModelParams& params, const FrameConstraints* constraints,
                      const InferenceOptions& options) {
    check_video(x, params);
    const int Y = params.dims.Y, R = params.dims.R;
    std::vector<RegionPath> paths(static_cast<std::size_t>(Y * R));
    parallel_for(paths.size(), options.jobs, [&](std::size_t i) {
        const int y = static_cast<int>(i) / R, r = static_cast<int>(i) % R;
        paths[i] = dp_region(x.regions[r], y, params, r, constraints, {}, options);
    });
    int best_y = 0;
    double best = kNegInf;
    for (int y = 0; y < Y; ++y) {
        double total = 0.0;
        for (int r = 0; r < R; ++r) total += paths[y * R + r].score;
        if (total > best) {
            best = total;
            best_y = y;
        }
    }
    YCandidate c;
    c.paths.assign(std::make_move_iterator(paths.begin() + best_y * R),
                   std::make_move_iterator(paths.begin() + (best_y + 1) * R));
    c.energy = c.score = best;
    return assemble(x, best_y, std::move(c));
}

InferenceResult complete_latent(const VideoFeatures& x, const ModelParams& params, int y,
                                const FrameConstraints* constraints, const InferenceOptions& options) {
    check_video(x, params);
    if (y < 0 || y >= params.dims.Y) throw DimensionError("complex action out of range");
    const int R = params.dims.R;
    YCandidate c;
    c.paths.resize(static_cast<std::size_t>(R));
    parallel_for(c.paths.size(), options.jobs, [&](std::size_t r) {
        c.paths[r] = dp_region(x.regions[r], y, params, static_cast<int>(r), constraints, {}, options);
    });
    for (const auto& p : c.paths) c.energy += p.score;
    c.score = c.energy;
    return assemble(x, y, std::move(c));
}

// Loss ------------------------------------------------------------------------

LossTarget LossTarget::from_fixed(const std::vector<std::vector<int>>& v, std::size_t A, LossAggregation aggregation) {
    LossTarget lt;
    lt.R = v.size();
    lt.T = lt.R ? v.front().size() : 0;
    lt.A = A;
    lt.aggregation = aggregation;
    lt.known.assign(lt.T * lt.R, 0);
    lt.correct.assign(lt.T * lt.R * A, 0);
    for (std::size_t r = 0; r < lt.R; ++r)
        for (std::size_t t = 0; t < lt.T; ++t) {
            const int a = v[r][t];
            if (a < 0) continue;
            if (static_cast<std::size_t>(a) >= A) throw DimensionError("true actionlet out of range");
            lt.known[t * lt.R + r] = 1;
            lt.correct[(t * lt.R + r) * A + a] = 1;
        }
    return lt;
}

LossTarget LossTarget::from_candidates(const std::vector<std::vector<int>>& per_frame, std::size_t R, std::size_t A,
                                       LossAggregation aggregation) {
    LossTarget lt;
    lt.T = per_frame.size();
    lt.R = R;
    lt.A = A;
    lt.aggregation = aggregation;
    lt.known.assign(lt.T * R, 0);
    lt.correct.assign(lt.T * R * A, 0);
    for (std::size_t t = 0; t < lt.T; ++t) {
        if (per_frame[t].empty()) continue;
        for (std::size_t r = 0; r < R; ++r) {
            lt.known[t * R + r] = 1;
            for (int a : per_frame[t]) {
                if (a < 0 || static_cast<std::size_t>(a) >= A) throw DimensionError("candidate actionlet out of range");
                lt.correct[(t * R + r) * A + a] = 1;
            }
        }
    }
    return lt;
}

LossTarget LossTarget::none(std::size_t T, std::size_t R, std::size_t A) {
    LossTarget lt;
    lt.T = T;
    lt.R = R;
    lt.A = A;
    lt.known.assign(T * R, 0);
    lt.correct.assign(T * R * A, 0);
    return lt;
}

double LossTarget::frame_loss(std::size_t t, const Labeling& labeling) const {
    switch (aggregation) {
        case LossAggregation::RegionAverage: {
            double m = 0.0;
            for (std::size_t r = 0; r < R; ++r) m += mismatch(t, r, labeling.v[r][t]) ? 1.0 : 0.0;
            return R ? m / static_cast<double>(R) : 0.0;
        }
        case LossAggregation::Designated: {
            const auto r = static_cast<std::size_t>(designated_region);
            return mismatch(t, r, labeling.v[r][t]) ? 1.0 : 0.0;
        }
        case LossAggregation::AnyRegion: {
            bool any_known = false;
            for (std::size_t r = 0; r < R; ++r) {
                if (!is_known(t, r)) continue;
                any_known = true;
                if (!mismatch(t, r, labeling.v[r][t])) return 0.0;
            }
            return any_known ? 1.0 : 0.0;
        }
    }
    return 0.0;
}

double task_loss(const Labeling& labeling, const LossSpec& loss) {
    const auto& lt = loss.target;
    double frames = 0.0;
    if (loss.lambda_v != 0.0)
        for (std::size_t t = 0; t < lt.T; ++t) frames += lt.frame_loss(t, labeling);
    const double per_frame = lt.T ? loss.lambda_v / static_cast<double>(lt.T) : 0.0;
    return (labeling.y != loss.y_true ? loss.lambda_y : 0.0) + per_frame * frames;
}

namespace {

double addend_sum(std::span<const double> addend, const std::vector<int>& v, std::size_t A) {
    double s = 0.0;
    if (addend.empty()) return s;
    for (std::size_t t = 0; t < v.size(); ++t) s += addend[t * A + v[t]];
    return s;
}

// Loss-augmented chains for one y. Returns per-region paths with `score`
// holding the region energy only.
std::vector<RegionPath> loss_augmented_paths(const VideoFeatures& x, const ModelParams& params, int y,
                                             const LossSpec& loss, const FrameConstraints* constraints,
                                             const InferenceOptions& options) {
    const auto& lt = loss.target;
    const std::size_t T = x.length(), R = x.region_count(), A = static_cast<std::size_t>(params.dims.A);
    const double c = T ? loss.lambda_v / static_cast<double>(T) : 0.0;
    std::vector<RegionPath> paths(R);
    if (c == 0.0) {
        for (std::size_t r = 0; r < R; ++r) paths[r] = dp_region(x.regions[r], y, params, static_cast<int>(r), constraints, {}, options);
        return paths;
    }

    auto solve = [&](std::size_t r, const std::vector<double>& addend) {
        auto p = dp_region(x.regions[r], y, params, static_cast<int>(r), constraints, addend, options);
        p.score -= addend_sum(addend, p.v, A);
        return p;
    };
    auto mismatch_addend = [&](std::size_t r, double weight, const std::vector<double>* gate) {
        std::vector<double> add(T * A, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            const double g = gate ? (*gate)[t] : 1.0;
            if (g == 0.0) continue;
            for (std::size_t a = 0; a < A; ++a)
                if (lt.mismatch(t, r, static_cast<int>(a))) add[t * A + a] = weight * g;
        }
        return add;
    };

    const bool coupled = lt.aggregation == LossAggregation::AnyRegion && R > 1;
    if (!coupled) {
        for (std::size_t r = 0; r < R; ++r) {
            double weight = 0.0;
            if (lt.aggregation == LossAggregation::RegionAverage) weight = c / static_cast<double>(R);
            else if (lt.aggregation == LossAggregation::Designated) weight = static_cast<int>(r) == lt.designated_region ? c : 0.0;
            else weight = c;  // AnyRegion, single region
            paths[r] = weight == 0.0 ? solve(r, {}) : solve(r, mismatch_addend(r, weight, nullptr));
        }
        return paths;
    }

    // AnyRegion over several regions: start as if every other region missed,
    // then improve one region at a time against the others' current labels.
    for (std::size_t r = 0; r < R; ++r) paths[r] = solve(r, mismatch_addend(r, c, nullptr));
    Labeling cur;
    cur.y = y;
    cur.z.resize(R);
    cur.v.resize(R);
    auto objective = [&] {
        for (std::size_t r = 0; r < R; ++r) cur.v[r] = paths[r].v;
        double e = 0.0;
        for (const auto& p : paths) e += p.score;
        double f = 0.0;
        for (std::size_t t = 0; t < T; ++t) f += lt.frame_loss(t, cur);
        return e + c * f;
    };
    double best = objective();
    // gate that produced each region's current path; solving it again would
    // return the same path
    std::vector<std::vector<double>> current_gate(R, std::vector<double>(T, 1.0));
    for (int sweep = 0; sweep < 20; ++sweep) {
        bool improved = false;
        for (std::size_t r = 0; r < R; ++r) {
            std::vector<double> gate(T, 1.0);
            for (std::size_t t = 0; t < T; ++t) {
                if (!lt.is_known(t, r)) continue;
                for (std::size_t q = 0; q < R; ++q)
                    if (q != r && lt.is_known(t, q) && !lt.mismatch(t, q, paths[q].v[t])) {
                        gate[t] = 0.0;
                        break;
                    }
            }
            if (gate == current_gate[r]) continue;
            auto candidate = solve(r, mismatch_addend(r, c, &gate));
            std::swap(paths[r], candidate);
            const double value = objective();
            if (value > best + 1e-12 * std::max(1.0, std::abs(best))) {
                best = value;
                improved = true;
                current_gate[r] = std::move(gate);
            } else {
                std::swap(paths[r], candidate);
            }
        }
        if (!improved) break;
    }
    objective();
    return paths;
}

}  // namespace

InferenceResult loss_augmented_infer(const VideoFeatures& x, const ModelParams& params, const LossSpec& loss,
                                     const FrameConstraints* constraints, const InferenceOptions& options) {
    check_video(x, params);
    const auto& lt = loss.target;
    if (lt.T != x.length() || lt.R != x.region_count() || static_cast<int>(lt.A) != params.dims.A)
        throw DimensionError("loss target does not match the video");
    const int Y = params.dims.Y;
    std::vector<YCandidate> cands(static_cast<std::size_t>(Y));
    parallel_for(cands.size(), options.jobs, [&](std::size_t yi) {
        const int y = static_cast<int>(yi);
        InferenceOptions inner = options;
        inner.jobs = 1;
        auto& c = cands[yi];
        c.paths = loss_augmented_paths(x, params, y, loss, constraints, inner);
        Labeling l;
        l.y = y;
        for (const auto& p : c.paths) {
            l.z.push_back(p.z);
            l.v.push_back(p.v);
            c.energy += p.score;
        }
        c.loss = task_loss(l, loss);
        c.score = c.energy + c.loss;
    });
    int best_y = 0;
    for (int y = 1; y < Y; ++y)
        if (cands[y].score > cands[best_y].score) best_y = y;
    return assemble(x, best_y, std::move(cands[best_y]));
}

// Oracle ---------------------------------------------------------------------

InferenceResult brute_force(const VideoFeatures& x, const ModelParams& params, const FrameConstraints* constraints,
                            const InferenceOptions& options, double guard) {
    check_video(x, params);
    const auto& dims = params.dims;
    const std::size_t T = x.length(), R = x.region_count();
    const int A = dims.A, KS = dims.K + 1;
    const double count = std::pow(static_cast<double>(KS * A), static_cast<double>(T)) * dims.Y;
    if (count > guard) throw GuardError("brute force instance too large");

    InferenceResult best;
    best.score = kNegInf;
    Labeling work = Labeling::filled(T, R, 0, 0, 0);
    for (int y = 0; y < dims.Y; ++y) {
        work.y = y;
        Labeling cand = work;
        double total = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            // admissible states per frame in ascending (k, a) order
            std::vector<std::vector<int>> states(T);
            for (std::size_t t = 0; t < T; ++t) {
                const AllowedSets* cell = constraints && !constraints->empty() ? &constraints->at(t, r) : nullptr;
                for (int k = 0; k < KS; ++k) {
                    if (!options.allow_gc && k == dims.K) continue;
                    if (cell && !cell->poselets.empty() &&
                        std::find(cell->poselets.begin(), cell->poselets.end(), k) == cell->poselets.end())
                        continue;
                    for (int a = 0; a < A; ++a) {
                        if (cell && !cell->actionlets.empty() &&
                            std::find(cell->actionlets.begin(), cell->actionlets.end(), a) == cell->actionlets.end())
                            continue;
                        states[t].push_back(k * A + a);
                    }
                }
                if (states[t].empty()) throw InfeasibleError("frame without admissible state");
            }
            std::vector<std::size_t> odo(T, 0);
            double region_best = kNegInf;
            std::vector<int> best_z(T), best_v(T);
            while (true) {
                for (std::size_t t = 0; t < T; ++t) {
                    work.z[r][t] = states[t][odo[t]] / A;
                    work.v[r][t] = states[t][odo[t]] % A;
                }
                const double e = energy_region(x, work, params, static_cast<int>(r));
                if (e > region_best) {
                    region_best = e;
                    best_z = work.z[r];
                    best_v = work.v[r];
                }
                // advance, last frame fastest so the first frame stays most significant
                std::size_t t = T;
                while (t > 0) {
                    --t;
                    if (++odo[t] < states[t].size()) break;
                    odo[t] = 0;
                    if (t == 0) {
                        t = T + 1;
                        break;
                    }
                }
                if (t == T + 1 || T == 0) break;
            }
            cand.z[r] = best_z;
            cand.v[r] = best_v;
            total += region_best;
        }
        if (total > best.score) {
            best.score = best.energy = total;
            best.labeling = cand;
        }
    }
    best.margins.assign(T * R, 0.0);
    return best;
}

}  // namespace hiact
