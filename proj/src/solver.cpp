// Multi-start solver for the fundamental equations
//   lambda_i = u_i / (sum_{j~i} v_j)^r = v_i / (sum_{j~i} u_j)^r.
//
// Unknowns live in log coordinates a = log u, b = log v plus a log-scale c,
// since lambda only matters up to a positive factor:
//   a_i - r log (A e^b)_i - log lambda_i - c = 0
//   b_i - r log (A e^a)_i - log lambda_i - c = 0
//   log(sum e^a + sum e^b) - log 2 = 0
// The invariant system is the same with a = b (q + 1 unknowns).

#include "homgibbs/treegibbs.hpp"

#include "homgibbs/parallel.hpp"
#include "homgibbs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace homgibbs {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

struct System {
    const ConstraintGraph* h = nullptr;
    unsigned r = 1;
    bool invariant = false;
    std::vector<double> log_lambda;

    std::size_t q() const { return h->size(); }
    std::size_t dim() const { return invariant ? q() + 1 : 2 * q() + 1; }
};

/// Residual F(x) and, when requested, its Jacobian.
template <class T>
void evaluate(const System& sys, const Vec<T>& x, Vec<T>& f, Mat<T>* jac)
{
    using std::exp;
    using std::log;
    const auto q = sys.q();
    const auto n = sys.dim();
    const T r = T(sys.r);
    f.resize(n);
    if (jac)
        jac->setZero(n, n);
    const std::size_t blocks = sys.invariant ? 1 : 2;
    // Block k holds log-weights at offset k*q; its equations read the other block.
    Vec<T> ex(blocks * q);
    for (std::size_t k = 0; k < blocks * q; ++k)
        ex[k] = exp(x[k]);
    const std::size_t cidx = blocks * q;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t self = blk * q;
        const std::size_t other = sys.invariant ? 0 : (1 - blk) * q;
        for (Node i = 0; i < q; ++i) {
            T s = 0;
            for (auto j : sys.h->neighbors(i))
                s += ex[other + j];
            f[self + i] = x[self + i] - r * log(s) - T(sys.log_lambda[i]) - x[cidx];
            if (jac) {
                (*jac)(self + i, self + i) += T(1);
                for (auto j : sys.h->neighbors(i))
                    (*jac)(self + i, other + j) -= r * ex[other + j] / s;
                (*jac)(self + i, cidx) = T(-1);
            }
        }
    }
    T total = 0;
    for (std::size_t k = 0; k < blocks * q; ++k)
        total += ex[k];
    // Invariant: sum w = 1. Semi-invariant: sum u + sum v = 2.
    f[cidx] = log(total) - (sys.invariant ? T(0) : log(T(2)));
    if (jac)
        for (std::size_t k = 0; k < blocks * q; ++k)
            (*jac)(cidx, k) = ex[k] / total;
}

template <class T>
T max_abs(const Vec<T>& v)
{
    using std::abs;
    T m = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k)
        m = std::max<T>(m, abs(v[k]));
    return m;
}

/// Damped Newton. Returns the final max-norm residual.
template <class T>
T newton(const System& sys, Vec<T>& x, unsigned max_steps, const T& target)
{
    using std::isfinite;
    const auto n = static_cast<Eigen::Index>(sys.dim());
    Vec<T> f(n), f_try(n), x_try(n);
    Mat<T> jac(n, n);
    evaluate(sys, x, f, &jac);
    T norm = f.norm();
    for (unsigned step = 0; step < max_steps; ++step) {
        if (max_abs(f) < target)
            break;
        Eigen::PartialPivLU<Mat<T>> lu(jac);
        Vec<T> d = lu.solve(-f);
        const T big = max_abs(d);
        if (!(big == big))
            break;
        if (big > T(2))
            d *= T(2) / big;
        T alpha = 1;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            x_try = x + alpha * d;
            evaluate<T>(sys, x_try, f_try, nullptr);
            const T norm_try = f_try.norm();
            if (norm_try == norm_try && norm_try < norm * (T(1) - T(1e-4) * alpha)) {
                accepted = true;
                break;
            }
            alpha /= 2;
        }
        if (!accepted)
            break;
        x = x_try;
        evaluate(sys, x, f, &jac);
        norm = f.norm();
        if (max_abs(x) > T(600))
            break;
    }
    return max_abs(f);
}

/// Alternating fixed-point sweeps u <- lambda (A v)^r, v <- lambda (A u)^r with
/// renormalisation. Returns log coordinates for Newton, or nullopt if a weight underflows.
std::optional<Vec<double>> fixed_point(const System& sys, Vec<double> x, unsigned sweeps)
{
    const auto q = sys.q();
    const std::size_t blocks = sys.invariant ? 1 : 2;
    std::vector<double> w(blocks * q), next(blocks * q);
    for (std::size_t k = 0; k < blocks * q; ++k)
        w[k] = std::exp(x[k]);
    std::vector<double> lam(q);
    for (Node i = 0; i < q; ++i)
        lam[i] = std::exp(sys.log_lambda[i]);
    const double target_total = sys.invariant ? 1.0 : 2.0;
    for (unsigned it = 0; it < sweeps; ++it) {
        double total = 0;
        for (std::size_t blk = 0; blk < blocks; ++blk) {
            const std::size_t other = sys.invariant ? 0 : (1 - blk) * q;
            for (Node i = 0; i < q; ++i) {
                double s = 0;
                for (auto j : sys.h->neighbors(i))
                    s += w[other + j];
                next[blk * q + i] = lam[i] * std::pow(s, static_cast<double>(sys.r));
                total += next[blk * q + i];
            }
        }
        double change = 0;
        for (std::size_t k = 0; k < blocks * q; ++k) {
            next[k] *= target_total / total;
            if (!(next[k] > 1e-250))
                return std::nullopt;
            change = std::max(change, std::abs(next[k] - w[k]));
        }
        w.swap(next);
        if (change < 1e-15)
            break;
    }
    Vec<double> out(x.size());
    for (std::size_t k = 0; k < blocks * q; ++k)
        out[k] = std::log(w[k]);
    out[blocks * q] = x[blocks * q];
    return out;
}

struct Candidate {
    std::vector<double> u, v;
};

Candidate to_candidate(const System& sys, const Vec<double>& x)
{
    const auto q = sys.q();
    Candidate c;
    for (Node i = 0; i < q; ++i) {
        c.u.push_back(std::exp(x[i]));
        c.v.push_back(std::exp(x[sys.invariant ? i : q + i]));
    }
    // sum u + sum v = 2
    double total = 0;
    for (Node i = 0; i < q; ++i)
        total += c.u[i] + c.v[i];
    for (Node i = 0; i < q; ++i) {
        c.u[i] *= 2 / total;
        c.v[i] *= 2 / total;
    }
    return c;
}

double distance(const std::vector<double>& u1, const std::vector<double>& v1, const std::vector<double>& u2,
                const std::vector<double>& v2)
{
    double d = 0;
    for (std::size_t i = 0; i < u1.size(); ++i)
        d = std::max({d, std::abs(u1[i] - u2[i]), std::abs(v1[i] - v2[i])});
    return d;
}

/// Projective residual: spread of log(u_i / (A v)_i^r / lambda_i) and the
/// mirrored quantities around their common mean.
double projective_residual(const ConstraintGraph& h, unsigned r, std::span<const double> lambda,
                           const std::vector<double>& u, const std::vector<double>& v, std::vector<double>* induced)
{
    const auto q = h.size();
    std::vector<double> dev;
    if (induced)
        induced->assign(q, 0.0);
    for (Node i = 0; i < q; ++i) {
        double su = 0, sv = 0;
        for (auto j : h.neighbors(i)) {
            su += u[j];
            sv += v[j];
        }
        const double lu = std::log(u[i]) - r * std::log(sv);
        const double lv = std::log(v[i]) - r * std::log(su);
        dev.push_back(lu - std::log(lambda[i]));
        dev.push_back(lv - std::log(lambda[i]));
        if (induced)
            (*induced)[i] = std::exp(lu);
    }
    const double mean = std::accumulate(dev.begin(), dev.end(), 0.0) / static_cast<double>(dev.size());
    double worst = 0;
    for (auto d : dev)
        worst = std::max(worst, std::abs(d - mean));
    if (induced) {
        const double total = std::accumulate(induced->begin(), induced->end(), 0.0);
        for (auto& x : *induced)
            x /= total;
    }
    return worst;
}

Vec<double> start_point(const System& sys, std::size_t k, const Rng& base)
{
    const auto q = sys.q();
    const std::size_t blocks = sys.invariant ? 1 : 2;
    Vec<double> x = Vec<double>::Zero(static_cast<Eigen::Index>(sys.dim()));
    auto rng = base.split(k);
    for (std::size_t blk = 0; blk < blocks; ++blk)
        for (Node i = 0; i < q; ++i) {
            double lw = 0;
            switch (k) {
            case 0:  // uniform weights
                break;
            case 1:  // proportional to lambda
                lw = sys.log_lambda[i];
                break;
            case 2:  // lambda on one side, uniform on the other
                lw = blk == 0 ? sys.log_lambda[i] : 0.0;
                break;
            default:  // log-uniform on [1e-3, 1e3]
                lw = std::log(1e-3) + rng.uniform() * (std::log(1e3) - std::log(1e-3));
                break;
            }
            x[static_cast<Eigen::Index>(blk * q + i)] = lw;
        }
    return x;
}

/// Automorphisms of H that fix lambda (up to a relative 1e-12), for q <= 8.
std::vector<std::vector<Node>> lambda_automorphisms(const ConstraintGraph& h, std::span<const double> lambda)
{
    std::vector<std::vector<Node>> out;
    const auto q = h.size();
    if (q > 8)
        return out;
    std::vector<Node> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (Node i = 0; i < q && ok; ++i) {
            ok = std::abs(lambda[perm[i]] - lambda[i]) <= 1e-12 * std::max(lambda[i], lambda[perm[i]]);
            for (Node j = 0; j < q && ok; ++j)
                ok = h.adjacent(i, j) == h.adjacent(perm[i], perm[j]);
        }
        if (ok)
            out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

std::size_t SolveResult::invariant_count() const
{
    return static_cast<std::size_t>(
        std::count_if(solutions.begin(), solutions.end(), [](const GibbsSolution& s) { return s.invariant; }));
}

SolveResult solve_fundamental(const ConstraintGraph& h, unsigned r, std::span<const double> lambda,
                              const SolveOptions& options)
{
    if (r == 0)
        throw std::invalid_argument("branching factor r must be at least 1");
    if (lambda.size() != h.size())
        throw std::invalid_argument("activity vector has " + std::to_string(lambda.size()) + " entries, expected " +
                                    std::to_string(h.size()));
    if (!is_connected(h) || h.edges().empty())
        throw std::invalid_argument("solve_fundamental needs a connected constraint graph with an edge");
    const double lambda_total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    for (auto l : lambda)
        if (!(l > 0) || !std::isfinite(l))
            throw std::invalid_argument("activities must be positive and finite");

    SolveResult result;
    result.r = r;
    for (auto l : lambda)
        result.lambda.push_back(l / lambda_total);
    result.double_components = is_bipartite(h) ? 2 : 1;

    System sys;
    sys.h = &h;
    sys.r = r;
    sys.invariant = options.invariant_only;
    for (auto l : result.lambda)
        sys.log_lambda.push_back(std::log(l));

    // Each start contributes up to two converged candidates: direct Newton and
    // fixed-point iteration followed by Newton.
    const Rng base(options.seed, 0x501E);
    std::vector<std::array<std::optional<Vec<double>>, 2>> found(options.starts);
    parallel_for(options.starts, options.threads, [&](std::size_t k) {
        const auto x0 = start_point(sys, k, base);
        Vec<double> direct = x0;
        if (newton<double>(sys, direct, options.newton_iter, options.tol) < options.tol)
            found[k][0] = direct;
        if (auto fp = fixed_point(sys, x0, options.max_iter)) {
            if (newton<double>(sys, *fp, options.newton_iter, options.tol) < options.tol)
                found[k][1] = *fp;
        }
    });

    auto polish = [&](const Vec<double>& x) {
        Vec<Quad> xq(x.size());
        for (Eigen::Index k = 0; k < x.size(); ++k)
            xq[k] = Quad(x[k]);
        newton<Quad>(sys, xq, 200, Quad("1e-30"));
        Vec<double> out(x.size());
        for (Eigen::Index k = 0; k < x.size(); ++k)
            out[k] = xq[k].convert_to<double>();
        return out;
    };

    // Near-degenerate roots can leave u and v slightly apart; invariant classes
    // are re-solved with u = v imposed.
    System inv = sys;
    inv.invariant = true;
    auto polish_invariant = [&](const Candidate& c) {
        Vec<Quad> xq(inv.dim());
        double total = 0;
        for (Node i = 0; i < h.size(); ++i)
            total += c.u[i] + c.v[i];
        for (Node i = 0; i < h.size(); ++i)
            xq[i] = Quad(std::log((c.u[i] + c.v[i]) / total));
        xq[h.size()] = 0;
        newton<Quad>(inv, xq, 200, Quad("1e-30"));
        Vec<double> out(inv.dim());
        for (Eigen::Index k = 0; k < out.size(); ++k)
            out[k] = xq[k].convert_to<double>();
        return to_candidate(inv, out);
    };

    const double tol = options.dedup_tol;
    auto match = [&](const Candidate& c) -> std::pair<std::optional<std::size_t>, bool> {
        for (std::size_t s = 0; s < result.solutions.size(); ++s) {
            const auto& sol = result.solutions[s];
            if (distance(c.u, c.v, sol.u, sol.v) < tol)
                return {s, false};
            if (distance(c.v, c.u, sol.u, sol.v) < tol)
                return {s, true};
        }
        return {std::nullopt, false};
    };

    for (const auto& pair : found)
        for (const auto& x : pair) {
            if (!x)
                continue;
            ++result.candidates;
            auto cand = to_candidate(sys, *x);
            auto [hit, mirrored] = match(cand);
            if (!hit) {
                cand = to_candidate(sys, polish(*x));
                std::tie(hit, mirrored) = match(cand);
            }
            if (hit) {
                if (mirrored && !result.solutions[*hit].invariant)
                    result.solutions[*hit].mirror_found = true;
                continue;
            }
            GibbsSolution sol;
            sol.invariant = distance(cand.u, cand.u, cand.v, cand.v) < tol;
            if (sol.invariant && !sys.invariant)
                cand = polish_invariant(cand);
            sol.u = cand.u;
            sol.v = sol.invariant ? cand.u : cand.v;
            sol.residual = projective_residual(h, r, result.lambda, sol.u, sol.v, &sol.lambda_out);
            result.solutions.push_back(std::move(sol));
        }
    if (result.solutions.empty())
        throw std::runtime_error("no solution of the fundamental equations found within budget");

    // Orbits under automorphisms of H fixing lambda, together with the swap.
    const auto autos = lambda_automorphisms(h, result.lambda);
    std::vector<std::size_t> orbit(result.solutions.size());
    std::iota(orbit.begin(), orbit.end(), 0);
    for (std::size_t a = 0; a < result.solutions.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) {
            if (orbit[b] != b)
                continue;
            const auto& sa = result.solutions[a];
            const auto& sb = result.solutions[b];
            for (const auto& perm : autos) {
                std::vector<double> pu(h.size()), pv(h.size());
                for (Node i = 0; i < h.size(); ++i) {
                    pu[perm[i]] = sa.u[i];
                    pv[perm[i]] = sa.v[i];
                }
                if (distance(pu, pv, sb.u, sb.v) < tol || distance(pv, pu, sb.u, sb.v) < tol) {
                    orbit[a] = b;
                    break;
                }
            }
            if (orbit[a] != a)
                break;
        }
    result.symmetry_classes = 0;
    for (std::size_t a = 0; a < orbit.size(); ++a)
        result.symmetry_classes += orbit[a] == a ? 1 : 0;
    if (autos.empty())
        result.symmetry_classes = result.solutions.size();
    return result;
}

nlohmann::json to_json(const SolveResult& result)
{
    nlohmann::json j;
    j["r"] = result.r;
    j["lambda"] = result.lambda;
    j["candidates"] = result.candidates;
    j["solution_classes"] = result.solutions.size();
    j["invariant_count"] = result.invariant_count();
    j["semi_invariant_count"] = result.semi_invariant_count();
    j["symmetry_classes"] = result.symmetry_classes;
    j["double_components"] = result.double_components;
    j["measure_count"] = result.measure_count();
    j["solutions"] = nlohmann::json::array();
    for (const auto& s : result.solutions) {
        nlohmann::json js;
        js["u"] = s.u;
        js["v"] = s.v;
        js["lambda_out"] = s.lambda_out;
        js["residual"] = s.residual;
        js["invariant"] = s.invariant;
        if (!s.invariant)
            js["mirror_found"] = s.mirror_found;
        j["solutions"].push_back(js);
    }
    return j;
}

// ---------------------------------------------------------------- families and sweeps

LambdaFamily hinge_family()
{
    return {"hinge", [](double t) { return std::vector<double>{t, 1.0, t}; }};
}

LambdaFamily hard_core_family()
{
    return {"hard_core", [](double t) { return std::vector<double>{t, 1.0}; }};
}

LambdaFamily complete_ray_family(std::size_t q)
{
    return {"K" + std::to_string(q) + "-ray", [q](double t) {
                std::vector<double> lam(q, 1.0);
                lam[0] = t;
                return lam;
            }};
}

TransitionReport count_transition(const ConstraintGraph& h, unsigned r, const LambdaFamily& family,
                                  std::span<const double> ts, CountKind kind, const SolveOptions& options,
                                  double bracket_tol)
{
    auto opts = options;
    if (kind == CountKind::invariant)
        opts.invariant_only = true;
    auto count_at = [&](double t) -> std::size_t {
        const auto lam = family.at(t);
        const auto res = solve_fundamental(h, r, lam, opts);
        switch (kind) {
        case CountKind::invariant:
            return res.invariant_count();
        case CountKind::all_classes:
            return res.solutions.size();
        case CountKind::measures:
            return res.measure_count();
        }
        return 0;
    };
    TransitionReport rep;
    for (auto t : ts)
        rep.samples.push_back({t, count_at(t)});
    for (std::size_t k = 0; k + 1 < rep.samples.size(); ++k) {
        auto lo = rep.samples[k];
        auto hi = rep.samples[k + 1];
        if (lo.count == hi.count)
            continue;
        while (hi.t - lo.t > bracket_tol) {
            const double mid = 0.5 * (lo.t + hi.t);
            const auto c = count_at(mid);
            if (c == lo.count)
                lo = {mid, c};
            else
                hi = {mid, c};
        }
        rep.brackets.push_back({lo.t, hi.t, lo.count, hi.count});
    }
    return rep;
}

}  // namespace homgibbs
