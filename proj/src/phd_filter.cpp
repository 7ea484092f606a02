#include "gmphd/phd_filter.hpp"

#include "gmphd/association.hpp"
#include "gmphd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace gmphd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Per-component quantities shared by every detection in the update.
struct InnovationTerms {
    MeasVector predicted_z;
    Eigen::LLT<MeasCov> llt;
    double log_norm = 0.0; // -0.5 * (4 log 2pi + log det S)
    Eigen::Matrix<double, 6, 4> gain;
    StateCov updated_cov;
};

InnovationTerms innovation_terms(const GaussianComponent& c, const MotionModel& model, std::size_t index) {
    InnovationTerms t;
    t.predicted_z = model.H * c.mean;
    const MeasCov S = model.R + model.H * c.cov * model.H.transpose();
    t.llt.compute(0.5 * (S + S.transpose()));
    if (t.llt.info() != Eigen::Success) {
        throw NumericalError("innovation covariance of component " + std::to_string(index) +
                             " is not positive definite");
    }
    const MeasCov L = t.llt.matrixL();
    const double log_det = 2.0 * L.diagonal().array().log().sum();
    t.log_norm = -0.5 * (4.0 * std::log(2.0 * std::numbers::pi) + log_det);
    // K = P H^T S^-1, computed as (S^-1 H P)^T since S and P are symmetric.
    t.gain = t.llt.solve(model.H * c.cov).transpose();
    t.updated_cov = symmetrized((StateCov::Identity() - t.gain * model.H) * c.cov);
    return t;
}

bool uses_appearance(const GaussianComponent& c, const Detection& d, const TrackerConfig& cfg) {
    return cfg.use_appearance && !c.fresh_birth && c.feature && d.feature;
}

} // namespace

Intensity birth_intensity(std::span<const Detection> detections, const TrackerConfig& cfg,
                          const MotionModel& model) {
    Intensity out;
    for (const auto& d : detections) {
        if (d.score < cfg.s_t) continue;
        GaussianComponent c;
        c.weight = cfg.use_score_in_birth ? d.score * cfg.w_gamma : cfg.w_gamma;
        c.mean = state_from_box(d.box);
        c.cov = model.P_birth;
        c.feature = d.feature;
        c.score = d.score;
        c.fresh_birth = true;
        out.components.push_back(std::move(c));
    }
    return out;
}

Intensity predict(const Intensity& posterior, const Intensity& births, const TrackerConfig& cfg,
                  const MotionModel& model) {
    Intensity out;
    out.components.reserve(posterior.size() + births.size());
    for (const auto& c : posterior.components) {
        GaussianComponent p = c;
        p.weight = cfg.p_s * c.weight;
        std::tie(p.mean, p.cov) = predict_state(c.mean, c.cov, model);
        p.fresh_birth = false;
        out.components.push_back(std::move(p));
    }
    out.components.insert(out.components.end(), births.components.begin(), births.components.end());
    return out;
}

double appearance_likelihood_from_similarity(double cosine) {
    // exp(c) / (exp(c) + exp(-c)) == 1 / (1 + exp(-2c))
    return 1.0 / (1.0 + std::exp(-2.0 * cosine));
}

double appearance_likelihood(const AppearanceFeature& a, const AppearanceFeature& b) {
    return appearance_likelihood_from_similarity(cosine_similarity(a, b));
}

Intensity update(const Intensity& predicted, std::span<const Detection> detections,
                 const FrameContext& ctx, const TrackerConfig& cfg, const MotionModel& model) {
    const std::size_t n = predicted.size();
    Intensity out;
    out.components.reserve(n * (1 + detections.size()));

    for (const auto& c : predicted.components) {
        GaussianComponent miss = c;
        miss.weight = (1.0 - cfg.p_d) * c.weight;
        miss.fresh_birth = false;
        out.components.push_back(std::move(miss));
    }
    if (detections.empty() || n == 0) {
        return out;
    }

    std::vector<InnovationTerms> terms;
    terms.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        terms.push_back(innovation_terms(predicted.components[v], model, v));
    }

    const double clutter = cfg.lambda_t / ctx.area();
    const double log_clutter = clutter > 0.0 ? std::log(clutter) : kNegInf;
    const double log_pd = std::log(cfg.p_d);
    const double log_neutral = std::log(0.5);

    std::vector<double> log_a(n);
    for (const auto& det : detections) {
        const MeasVector z = det.box.vec();
        double log_denom = log_clutter;
        for (std::size_t v = 0; v < n; ++v) {
            const auto& c = predicted.components[v];
            if (!(c.weight > 0.0)) {
                log_a[v] = kNegInf;
                continue;
            }
            const MeasVector nu = z - terms[v].predicted_z;
            const double maha2 = nu.dot(terms[v].llt.solve(nu));
            const double log_g = uses_appearance(c, det, cfg)
                                     ? std::log(appearance_likelihood(*c.feature, *det.feature))
                                     : log_neutral;
            log_a[v] = log_pd + std::log(c.weight) + log_g + terms[v].log_norm - 0.5 * maha2;
            log_denom = log_sum_exp(log_denom, log_a[v]);
        }
        for (std::size_t v = 0; v < n; ++v) {
            const auto& c = predicted.components[v];
            GaussianComponent u;
            u.weight = (log_denom == kNegInf || log_a[v] == kNegInf) ? 0.0 : std::exp(log_a[v] - log_denom);
            u.mean = c.mean + terms[v].gain * (z - terms[v].predicted_z);
            u.cov = terms[v].updated_cov;
            u.feature = det.feature ? det.feature : c.feature;
            u.score = det.score;
            u.fresh_birth = false;
            out.components.push_back(std::move(u));
        }
    }
    return out;
}

Intensity prune(const Intensity& intensity, const TrackerConfig& cfg) {
    Intensity out;
    std::copy_if(intensity.components.begin(), intensity.components.end(),
                 std::back_inserter(out.components),
                 [&](const GaussianComponent& c) { return c.weight >= cfg.prune_t; });
    return out;
}

Intensity merge(const Intensity& intensity, const TrackerConfig& cfg) {
    const auto& comps = intensity.components;
    const std::size_t n = comps.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return comps[a].weight > comps[b].weight; });

    std::vector<Eigen::LLT<StateCov>> chol;
    chol.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        chol.emplace_back(comps[i].cov);
        if (chol.back().info() != Eigen::Success) {
            throw NumericalError("covariance of component " + std::to_string(i) +
                                 " is not positive definite during merge");
        }
    }

    const double u2 = cfg.merge_u * cfg.merge_u;
    std::vector<bool> used(n, false);
    std::vector<std::size_t> members;
    Intensity out;
    for (std::size_t oi = 0; oi < n; ++oi) {
        const std::size_t seed = order[oi];
        if (used[seed]) continue;
        members.clear();
        for (std::size_t oj = oi; oj < n; ++oj) {
            const std::size_t j = order[oj];
            if (used[j]) continue;
            const StateVector d = comps[j].mean - comps[seed].mean;
            if (d.dot(chol[j].solve(d)) < u2) {
                members.push_back(j);
                used[j] = true;
            }
        }

        double w = 0.0;
        StateVector mean = StateVector::Zero();
        for (std::size_t j : members) {
            w += comps[j].weight;
            mean += comps[j].weight * comps[j].mean;
        }
        GaussianComponent merged = comps[seed];
        if (w > 0.0) {
            mean /= w;
            StateCov cov = StateCov::Zero();
            for (std::size_t j : members) {
                const StateVector d = comps[j].mean - mean;
                cov += comps[j].weight * (comps[j].cov + d * d.transpose());
            }
            merged.mean = mean;
            merged.cov = symmetrized(cov / w);
        }
        merged.weight = w;
        out.components.push_back(std::move(merged));
    }
    return out;
}

Intensity cap(const Intensity& intensity, std::size_t v_prev, std::size_t m_k,
              const TrackerConfig& cfg, std::mt19937_64& rng) {
    std::size_t limit = std::max(v_prev, m_k);
    if (cfg.cap_mode == CapMode::poisson && v_prev > 0) {
        std::poisson_distribution<long long> draw(static_cast<double>(v_prev));
        limit = std::max(limit, static_cast<std::size_t>(draw(rng)));
    }
    if (intensity.size() <= limit) {
        return intensity;
    }
    Intensity out = intensity;
    std::stable_sort(out.components.begin(), out.components.end(),
                     [](const GaussianComponent& a, const GaussianComponent& b) { return a.weight > b.weight; });
    out.components.resize(limit);
    return out;
}

std::vector<Estimate> extract(const Intensity& intensity, const TrackerConfig& cfg) {
    std::vector<Estimate> out;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        const auto& c = intensity.components[i];
        if (c.weight > cfg.extract_threshold) {
            out.push_back({c.mean, c.cov, c.weight, c.feature, c.score, i});
        }
    }
    return out;
}

PhdFilter::PhdFilter(TrackerConfig cfg)
    : cfg_(cfg), model_(build_model(cfg)), rng_(cfg.rng_seed) {
    validate(cfg_);
}

std::vector<Estimate> PhdFilter::step(std::span<const Detection> detections, const FrameContext& ctx) {
    const std::size_t v_prev = posterior_.size();
    const Intensity births = birth_intensity(detections, cfg_, model_);
    const Intensity predicted = predict(posterior_, births, cfg_, model_);
    const Intensity updated = update(predicted, detections, ctx, cfg_, model_);
    Intensity reduced = cap(merge(prune(updated, cfg_), cfg_), v_prev, detections.size(), cfg_, rng_);
    posterior_ = std::move(reduced);

    auto estimates = extract(posterior_, cfg_);
    stats_ = {predicted.size(), updated.size(), posterior_.size(), estimates.size()};
    return estimates;
}

} // namespace gmphd
