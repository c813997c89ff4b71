#include "mls/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "mls/spatial.hpp"

namespace mls {

std::vector<Link> links_of(const RoundConfig& round) {
    std::vector<Link> out;
    out.reserve(round.size());
    for (const auto& t : round) out.push_back(t.link());
    return out;
}

Eigen::MatrixXd gain_matrix(const std::vector<Link>& links, const ModelParams& model) {
    const auto n = static_cast<Eigen::Index>(links.size());
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
    const double half = model.alpha / 2.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto& ll = links[static_cast<std::size_t>(l)];
        const auto own = dist2_tenths(ll.from, ll.to);
        if (own == 0) throw DomainError("gain_matrix: link " + std::to_string(l) + " has co-located endpoints");
        const double beta = model.beta_at(ll.receiver);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == l) continue;
            const auto cross = dist2_tenths(links[static_cast<std::size_t>(k)].from, ll.to);
            if (cross == 0) {
                throw DomainError("gain_matrix: sender of link " + std::to_string(k) +
                                  " is co-located with receiver of link " + std::to_string(l));
            }
            F(l, k) = beta * std::pow(static_cast<double>(own) / static_cast<double>(cross), half);
        }
    }
    return F;
}

SpectralEstimate spectral_radius(const Eigen::MatrixXd& F, double tol, int max_iter) {
    SpectralEstimate est;
    const auto n = F.rows();
    if (n == 0) {
        est.converged = true;
        return est;
    }
    const double gersh = F.rowwise().sum().maxCoeff();
    if (gersh == 0.0) {
        est.converged = true;
        return est;
    }
    // The shift keeps every iterate strictly positive and breaks periodicity.
    const double eps = 0.5 * gersh;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    double lo = 0.0;
    double hi = gersh;
    int it = 0;
    for (; it < max_iter; ++it) {
        const Eigen::VectorXd y = F * x + eps * x;
        double cw_lo = std::numeric_limits<double>::infinity();
        double cw_hi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = y(i) / x(i);
            cw_lo = std::min(cw_lo, r);
            cw_hi = std::max(cw_hi, r);
        }
        lo = std::max(lo, cw_lo - eps);
        hi = std::min(hi, cw_hi - eps);
        x = y / y.maxCoeff();
        if (hi - lo <= tol * std::max(1.0, hi)) {
            est.converged = true;
            ++it;
            break;
        }
    }
    est.iterations = it;
    est.lower = std::max(0.0, lo);
    est.upper = std::max(est.lower, hi);
    est.rho = 0.5 * (est.lower + est.upper);
    return est;
}

std::string to_string(FeasibilityStatus s) {
    switch (s) {
        case FeasibilityStatus::Feasible: return "feasible";
        case FeasibilityStatus::Infeasible: return "infeasible";
        case FeasibilityStatus::InfeasibleWithinTolerance: return "infeasible-within-tolerance";
        case FeasibilityStatus::Structural: return "structural-conflict";
    }
    return "infeasible";
}

namespace {

std::string structural_problem(const std::vector<Link>& links) {
    std::unordered_set<NodeId> used;
    for (std::size_t i = 0; i < links.size(); ++i) {
        for (NodeId v : {links[i].sender, links[i].receiver}) {
            if (!used.insert(v).second) {
                return "node " + std::to_string(v) + " appears in more than one role";
            }
        }
        if (dist2_tenths(links[i].from, links[i].to) == 0) {
            return "link " + std::to_string(i) + " has co-located endpoints";
        }
        for (std::size_t k = 0; k < links.size(); ++k) {
            if (k != i && dist2_tenths(links[k].from, links[i].to) == 0) {
                return "sender of link " + std::to_string(k) + " sits on receiver of link " + std::to_string(i);
            }
        }
    }
    return {};
}

}  // namespace

FeasibilityResult round_feasible(const std::vector<Link>& links, const ModelParams& model, double boundary_tol) {
    FeasibilityResult res;
    if (auto why = structural_problem(links); !why.empty()) {
        res.status = FeasibilityStatus::Structural;
        res.reason = why;
        res.spectrum.rho = res.spectrum.lower = res.spectrum.upper = std::numeric_limits<double>::infinity();
        return res;
    }
    res.spectrum = spectral_radius(gain_matrix(links, model));
    const auto& s = res.spectrum;
    if (s.upper < 1.0 - boundary_tol) {
        res.feasible = true;
        res.status = FeasibilityStatus::Feasible;
    } else if (s.lower > 1.0 + boundary_tol) {
        res.status = FeasibilityStatus::Infeasible;
        res.reason = "spectral radius exceeds 1";
    } else if (s.lower >= 1.0 - boundary_tol && s.upper <= 1.0 + boundary_tol) {
        res.status = FeasibilityStatus::InfeasibleWithinTolerance;
        res.reason = "spectral radius equals 1 within tolerance";
    } else {
        // Unconverged enclosure straddling 1: settle with the direct test
        // p = (I - F)^-1 1 > 0 and F p < p.
        const Eigen::MatrixXd F = gain_matrix(links, model);
        const auto n = F.rows();
        const Eigen::VectorXd p =
            (Eigen::MatrixXd::Identity(n, n) - F).fullPivLu().solve(Eigen::VectorXd::Ones(n));
        const Eigen::VectorXd fp = F * p;
        bool ok = true;
        for (Eigen::Index i = 0; i < n; ++i) ok = ok && p(i) > 0.0 && fp(i) < p(i) * (1.0 - boundary_tol);
        res.feasible = ok;
        res.status = ok ? FeasibilityStatus::Feasible : FeasibilityStatus::InfeasibleWithinTolerance;
        if (!ok) res.reason = "spectral radius not separated from 1";
    }
    return res;
}

PowerSolution synthesize_powers(const std::vector<Link>& links, const ModelParams& model, double margin) {
    if (!(margin >= 0.0)) throw InputError("margin must be nonnegative");
    if (auto why = structural_problem(links); !why.empty()) {
        throw InfeasibleError("links cannot share a round: " + why, std::numeric_limits<double>::infinity());
    }
    PowerSolution sol;
    if (links.empty()) return sol;
    const Eigen::MatrixXd F = gain_matrix(links, model);
    const auto spec = spectral_radius(F);
    sol.rho = spec.rho;
    if (spec.upper * (1.0 + margin) >= 1.0) {
        throw InfeasibleError("no power assignment reaches the requested margin (rho = " + std::to_string(spec.rho) +
                                  ")",
                              spec.rho);
    }
    const auto n = F.rows();
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - (1.0 + margin) * F;
    Eigen::VectorXd p = A.fullPivLu().solve(Eigen::VectorXd::Ones(n));
    if (p.minCoeff() <= 0.0) throw InfeasibleError("power solve produced a non-positive entry", spec.rho);
    p /= p.minCoeff();

    // With noise, scale up until noise uses at most half of each link's slack.
    double scale = 1.0;
    const double half = model.alpha / 2.0;
    const Eigen::VectorXd slack = p - (1.0 + margin) * (F * p);
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto& lk = links[static_cast<std::size_t>(l)];
        const double eta = (1.0 + margin) * model.beta_at(lk.receiver) * model.noise_at(lk.receiver) *
                           std::pow(static_cast<double>(dist2_tenths(lk.from, lk.to)) / 100.0, half);
        if (eta > 0.0) scale = std::max(scale, 2.0 * eta / slack(l));
    }
    p *= scale;

    RoundConfig round;
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto& lk = links[static_cast<std::size_t>(l)];
        round.push_back({lk.sender, lk.receiver, lk.from, lk.to, p(l)});
        sol.powers.push_back(p(l));
    }
    const auto rep = verify_round(round, model);
    if (!rep.success()) {
        throw InfeasibleError("synthesized powers failed certified verification", spec.rho);
    }
    sol.achieved_margin = rep.worst_margin();
    return sol;
}

namespace {

// (F p)_l + eta_l for every link, where eta is the normalized noise.
std::vector<double> normalized_load(const RoundConfig& round, const std::vector<double>& p, const ModelParams& model,
                                    std::size_t direct_limit) {
    const std::size_t n = round.size();
    const double half = model.alpha / 2.0;
    std::vector<double> out(n, 0.0);
    std::optional<KdTree> tree;
    if (n > direct_limit) {
        std::vector<KdTree::Item> items;
        items.reserve(n);
        for (std::size_t i = 0; i < n; ++i) items.push_back({round[i].from, p[i], i});
        tree.emplace(std::move(items));
    }
    for (std::size_t l = 0; l < n; ++l) {
        const auto& t = round[l];
        double interf = 0.0;
        if (tree) {
            interf = tree->path_loss_sum(t.to, model.alpha, 0.05, l).sum.mid();
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                if (k == l) continue;
                interf += p[k] / std::pow(static_cast<double>(dist2_tenths(round[k].from, t.to)) / 100.0, half);
            }
        }
        const double own = std::pow(static_cast<double>(dist2_tenths(t.from, t.to)) / 100.0, half);
        out[l] = model.beta_at(t.receiver) * own * (interf + model.noise_at(t.receiver));
    }
    return out;
}

}  // namespace

FmResult foschini_miljanic(const RoundConfig& round, const ModelParams& model, const FmOptions& opts) {
    FmResult res;
    const std::size_t n = round.size();
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = round[i].power;
    res.powers = p;
    if (n == 0) {
        res.converged = true;
        return res;
    }
    const double g = 1.0 + opts.target_margin;
    constexpr double kRaise = 0.02;

    auto load = normalized_load(round, p, model, opts.direct_limit);
    std::vector<double> nu(n);
    for (std::size_t l = 0; l < n; ++l) nu[l] = std::max(p[l] - g * load[l], kRaise * p[l]);

    for (int it = 0; it < opts.max_iter; ++it) {
        bool all_ok = true;
        for (std::size_t l = 0; l < n; ++l) all_ok = all_ok && p[l] > g * load[l];
        if (all_ok) {
            res.converged = true;
            res.iterations = it;
            res.powers = p;
            return res;
        }
        for (std::size_t l = 0; l < n; ++l) p[l] = g * load[l] + nu[l];
        load = normalized_load(round, p, model, opts.direct_limit);
    }
    res.iterations = opts.max_iter;
    res.powers = p;
    return res;
}

}  // namespace mls
