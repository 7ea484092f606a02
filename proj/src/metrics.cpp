#include "gmphd/metrics.hpp"

#include "gmphd/association.hpp"
#include "gmphd/errors.hpp"
#include "gmphd/hungarian.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

namespace gmphd {

namespace {

constexpr double kGate = 0.5;

struct GtLife {
    int present = 0;
    int tracked = 0;
    bool ever_tracked = false;
    bool last_tracked = false;
};

// Maximum-cardinality, then minimum-cost matching between gt (rows) and
// hypotheses (cols) under the IoU gate. `fixed` pairs are taken as given.
std::vector<std::pair<int, int>> gated_matching(const std::vector<const GtEntry*>& gts,
                                                const std::vector<const TrackOutput*>& hyps,
                                                const std::vector<bool>& gt_free,
                                                const std::vector<bool>& hyp_free) {
    std::vector<int> rows, cols;
    for (std::size_t i = 0; i < gts.size(); ++i) if (gt_free[i]) rows.push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < hyps.size(); ++j) if (hyp_free[j]) cols.push_back(static_cast<int>(j));
    std::vector<std::pair<int, int>> out;
    if (rows.empty() || cols.empty()) return out;

    const double infeasible = 10.0 * static_cast<double>(rows.size() + cols.size() + 1);
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double o = iou(gts[static_cast<std::size_t>(rows[r])]->box, hyps[static_cast<std::size_t>(cols[c])]->box);
            cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = o >= kGate ? 1.0 - o : infeasible;
        }
    }
    const auto assign = solve_min_cost(cost);
    for (std::size_t r = 0; r < assign.size(); ++r) {
        const int c = assign[r];
        if (c >= 0 && cost(static_cast<Eigen::Index>(r), c) < infeasible) {
            out.emplace_back(rows[r], cols[static_cast<std::size_t>(c)]);
        }
    }
    return out;
}

} // namespace

EvalReport evaluate(const GroundTruth& gt, std::span<const FrameResult> results) {
    const int frames = gt.frame_count();
    std::vector<std::vector<const TrackOutput*>> hyp_by_frame(static_cast<std::size_t>(frames));
    for (const auto& fr : results) {
        if (fr.tracks.empty()) continue;
        if (fr.frame < 1 || fr.frame > frames) {
            throw InputError("results reference frame " + std::to_string(fr.frame) +
                             " outside the ground-truth range 1.." + std::to_string(frames));
        }
        for (const auto& t : fr.tracks) hyp_by_frame[static_cast<std::size_t>(fr.frame - 1)].push_back(&t);
    }

    EvalReport rep;
    std::map<int, int> prev_match;   // gt id -> hyp id, previous frame
    std::map<int, int> last_matched; // gt id -> hyp id, last frame it was matched
    std::map<int, GtLife> life;
    std::map<std::pair<int, int>, int> cooccur; // (gt id, hyp id) -> frames with IoU >= gate
    double iou_total = 0.0;

    for (int k = 1; k <= frames; ++k) {
        std::vector<const GtEntry*> gts;
        for (const auto& e : gt.frames[static_cast<std::size_t>(k - 1)]) {
            if (e.considered) gts.push_back(&e);
        }
        const auto& hyps = hyp_by_frame[static_cast<std::size_t>(k - 1)];

        FrameEval fe;
        fe.frame = k;
        fe.gt = static_cast<int>(gts.size());
        fe.hyp = static_cast<int>(hyps.size());

        std::vector<bool> gt_free(gts.size(), true), hyp_free(hyps.size(), true);
        std::vector<std::pair<int, int>> matches;
        for (std::size_t i = 0; i < gts.size(); ++i) {
            auto pm = prev_match.find(gts[i]->id);
            if (pm == prev_match.end()) continue;
            for (std::size_t j = 0; j < hyps.size(); ++j) {
                if (hyp_free[j] && hyps[j]->id == pm->second && iou(gts[i]->box, hyps[j]->box) >= kGate) {
                    matches.emplace_back(static_cast<int>(i), static_cast<int>(j));
                    gt_free[i] = false;
                    hyp_free[j] = false;
                    break;
                }
            }
        }
        for (const auto& m : gated_matching(gts, hyps, gt_free, hyp_free)) matches.push_back(m);

        prev_match.clear();
        std::vector<bool> gt_tracked(gts.size(), false);
        for (const auto& [i, j] : matches) {
            const int gid = gts[static_cast<std::size_t>(i)]->id;
            const int hid = hyps[static_cast<std::size_t>(j)]->id;
            auto lm = last_matched.find(gid);
            if (lm != last_matched.end() && lm->second != hid) ++fe.idsw;
            last_matched[gid] = hid;
            prev_match[gid] = hid;
            gt_tracked[static_cast<std::size_t>(i)] = true;
            const double o = iou(gts[static_cast<std::size_t>(i)]->box, hyps[static_cast<std::size_t>(j)]->box);
            fe.iou_sum += o;
        }
        fe.matches = static_cast<int>(matches.size());
        fe.fp = fe.hyp - fe.matches;
        fe.fn = fe.gt - fe.matches;

        for (std::size_t i = 0; i < gts.size(); ++i) {
            GtLife& l = life[gts[i]->id];
            ++l.present;
            if (gt_tracked[i]) {
                ++l.tracked;
                if (l.ever_tracked && !l.last_tracked) ++rep.frag;
                l.ever_tracked = true;
            }
            l.last_tracked = gt_tracked[i];
        }

        for (const GtEntry* g : gts) {
            for (const TrackOutput* h : hyps) {
                if (iou(g->box, h->box) >= kGate) ++cooccur[{g->id, h->id}];
            }
        }

        rep.fp += fe.fp;
        rep.fn += fe.fn;
        rep.idsw += fe.idsw;
        rep.matches += fe.matches;
        rep.gt_boxes += fe.gt;
        rep.hyp_boxes += fe.hyp;
        iou_total += fe.iou_sum;
        rep.per_frame.push_back(fe);
    }

    rep.gt_tracks = static_cast<int>(life.size());
    int mt = 0, ml = 0;
    for (const auto& [id, l] : life) {
        const double ratio = l.present > 0 ? static_cast<double>(l.tracked) / l.present : 0.0;
        if (ratio >= 0.8) ++mt;
        if (ratio < 0.2) ++ml;
    }
    if (rep.gt_tracks > 0) {
        rep.mt = 100.0 * mt / rep.gt_tracks;
        rep.ml = 100.0 * ml / rep.gt_tracks;
    }
    rep.mota = rep.gt_boxes > 0 ? 1.0 - static_cast<double>(rep.fp + rep.fn + rep.idsw) / rep.gt_boxes : 0.0;
    rep.motp = rep.matches > 0 ? iou_total / rep.matches : 0.0;
    rep.faf = frames > 0 ? static_cast<double>(rep.fp) / frames : 0.0;

    // Global one-to-one id mapping maximizing co-occurring frames.
    std::map<int, int> gt_index, hyp_index;
    for (const auto& [key, n] : cooccur) {
        gt_index.emplace(key.first, static_cast<int>(gt_index.size()));
        hyp_index.emplace(key.second, static_cast<int>(hyp_index.size()));
    }
    double idtp = 0.0;
    if (!cooccur.empty()) {
        Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gt_index.size()),
                                                     static_cast<Eigen::Index>(hyp_index.size()));
        for (const auto& [key, n] : cooccur) cost(gt_index[key.first], hyp_index[key.second]) = -n;
        const auto assign = solve_min_cost(cost);
        for (std::size_t r = 0; r < assign.size(); ++r) {
            if (assign[r] >= 0) idtp -= cost(static_cast<Eigen::Index>(r), assign[r]);
        }
    }
    if (rep.gt_boxes + rep.hyp_boxes > 0) rep.idf1 = 2.0 * idtp / (rep.gt_boxes + rep.hyp_boxes);
    if (rep.hyp_boxes > 0) rep.idp = idtp / rep.hyp_boxes;
    if (rep.gt_boxes > 0) rep.idr = idtp / rep.gt_boxes;
    return rep;
}

std::vector<FrameResult> gt_as_results(const GroundTruth& gt) {
    std::vector<FrameResult> out;
    for (int k = 1; k <= gt.frame_count(); ++k) {
        FrameResult fr;
        fr.frame = k;
        for (const auto& e : gt.frames[static_cast<std::size_t>(k - 1)]) {
            if (e.considered) fr.tracks.push_back({e.id, e.box, Origin::measured, 1.0});
        }
        out.push_back(std::move(fr));
    }
    return out;
}

std::string report_csv(const EvalReport& r) {
    std::ostringstream os;
    os << "mota,motp,idf1,idp,idr,mt,ml,fp,fn,idsw,frag,faf,gt_boxes,hyp_boxes,gt_tracks\n";
    os << std::setprecision(6) << r.mota << "," << r.motp << "," << r.idf1 << "," << r.idp << "," << r.idr << ","
       << r.mt << "," << r.ml << "," << r.fp << "," << r.fn << "," << r.idsw << "," << r.frag << "," << r.faf
       << "," << r.gt_boxes << "," << r.hyp_boxes << "," << r.gt_tracks << "\n";
    return os.str();
}

std::string report_table(const EvalReport& r) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1);
    os << "  MOTA   IDF1   MOTP    MT%    ML%     FP     FN   IDSw   Frag    FAF\n";
    os << std::setw(6) << 100.0 * r.mota << " " << std::setw(6) << 100.0 * r.idf1 << " " << std::setw(6)
       << 100.0 * r.motp << " " << std::setw(6) << r.mt << " " << std::setw(6) << r.ml << " " << std::setw(6)
       << r.fp << " " << std::setw(6) << r.fn << " " << std::setw(6) << r.idsw << " " << std::setw(6) << r.frag
       << " " << std::setw(6) << std::setprecision(2) << r.faf << "\n";
    return os.str();
}

std::string per_frame_csv(const EvalReport& r) {
    std::ostringstream os;
    os << "frame,gt,hyp,matches,fp,fn,idsw,mota_frame,mota_cumulative\n";
    os << std::setprecision(6);
    long errors = 0, gts = 0;
    for (const auto& f : r.per_frame) {
        const int e = f.fp + f.fn + f.idsw;
        errors += e;
        gts += f.gt;
        const double frame_mota = 1.0 - static_cast<double>(e) / std::max(f.gt, 1);
        const double cum = 1.0 - static_cast<double>(errors) / std::max<long>(gts, 1);
        os << f.frame << "," << f.gt << "," << f.hyp << "," << f.matches << "," << f.fp << "," << f.fn << ","
           << f.idsw << "," << frame_mota << "," << cum << "\n";
    }
    return os.str();
}

} // namespace gmphd
