#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {
namespace {

constexpr double tolerance = 1e-13;

std::size_t sz(std::int64_t v) { return static_cast<std::size_t>(v); }

bool is_graph(const iclh::Dataset& ds) { return ds.is_graph(); }

/// Clusters of the rows and, separately, of the columns of the dense matrix.
struct Axes {
    std::vector<int> row_label;
    std::vector<int> col_label;
    int clusters = 0;
};

Axes axes(const iclh::Dataset& ds, const iclh::Partition& z) {
    Axes a;
    a.clusters = z.k();
    const Dense x = dense(ds);
    a.row_label.resize(sz(x.rows));
    a.col_label.resize(sz(x.cols));
    for (int i = 0; i < x.rows; ++i) a.row_label[sz(i)] = z[sz(i)];
    for (int j = 0; j < x.cols; ++j) a.col_label[sz(j)] = ds.is_bipartite() ? z[sz(ds.n() + j)] : z[sz(j)];
    return a;
}

}  // namespace

Dense dense(const iclh::Dataset& ds) {
    Dense d;
    d.rows = ds.n();
    d.cols = ds.d();
    d.x.assign(sz(d.rows) * sz(d.cols), 0);
    for (const auto& e : ds.entries()) {
        d.x[sz(e.row) * sz(d.cols) + sz(e.col)] = e.value;
        if (ds.kind() == iclh::DatasetKind::UndirectedGraph) d.x[sz(e.col) * sz(d.cols) + sz(e.row)] = e.value;
    }
    return d;
}

double beta_moment(double a, double b, double p, double q) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto kernel = [](double a1, double b1) {
        return [a1, b1](double v, double xc) {
            // On the right half xc is the exact distance 1 - v.
            const double w = v <= 0.5 ? 1.0 - v : xc;
            return std::pow(v, a1 - 1.0) * std::pow(w, b1 - 1.0);
        };
    };
    const auto num_f = kernel(a + p, b + q);
    const auto den_f = kernel(a, b);
    const double num = integrator.integrate(num_f, 0.0, 1.0, tolerance);
    const double den = integrator.integrate(den_f, 0.0, 1.0, tolerance);
    return num / den;
}

double log_dirichlet_moment(std::span<const std::int64_t> counts, double a) {
    const std::size_t m = counts.size();
    double remaining = 0.0;
    for (const auto c : counts) remaining += static_cast<double>(c);
    double out = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        remaining -= static_cast<double>(counts[j]);
        const double b = a * static_cast<double>(m - 1 - j);
        out += std::log(beta_moment(a, b, static_cast<double>(counts[j]), remaining));
    }
    return out;
}

double log_gamma_block(std::int64_t nu, double cells, double beta) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double rate = cells + 1.0 / beta;
    // Substituting t = rate * lambda keeps the integrand of order one.
    auto f = [nu](double t) {
        if (t <= 0.0) return nu == 0 ? 1.0 : 0.0;
        if (!std::isfinite(t)) return 0.0;
        return std::exp(static_cast<double>(nu) * std::log(t) - t);
    };
    const double integral = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), tolerance);
    return std::log(integral) - static_cast<double>(nu + 1) * std::log(rate) - std::log(beta);
}

double log_phi(std::span<const std::int64_t> degrees) {
    double total = 0.0;
    for (const auto d : degrees) total += static_cast<double>(d);
    return total * std::log(static_cast<double>(degrees.size())) + log_dirichlet_moment(degrees, 1.0);
}

double log_factorial(std::int64_t n) {
    double out = 0.0;
    for (std::int64_t v = 2; v <= n; ++v) out += std::log(static_cast<double>(v));
    return out;
}

double log_marginal_mom(const iclh::Dataset& ds, const iclh::Partition& z, double beta) {
    const Dense x = dense(ds);
    std::vector<std::vector<std::int64_t>> counts(sz(z.k()), std::vector<std::int64_t>(sz(x.cols), 0));
    double out = 0.0;
    for (int i = 0; i < x.rows; ++i) {
        std::int64_t row_total = 0;
        for (int j = 0; j < x.cols; ++j) {
            counts[sz(z[sz(i)])][sz(j)] += x.at(i, j);
            row_total += x.at(i, j);
            out -= log_factorial(x.at(i, j));
        }
        out += log_factorial(row_total);
    }
    for (const auto& c : counts) out += log_dirichlet_moment(c, beta);
    return out;
}

double log_marginal_bernoulli(const iclh::Dataset& ds, const iclh::Partition& z, double eta0, double zeta0) {
    const Dense x = dense(ds);
    const Axes a = axes(ds, z);
    const auto k = sz(a.clusters);
    std::vector<double> ones(k * k, 0.0), cells(k * k, 0.0);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) {
            if (is_graph(ds) && i == j) continue;
            const std::size_t b = sz(a.row_label[sz(i)]) * k + sz(a.col_label[sz(j)]);
            ones[b] += static_cast<double>(x.at(i, j));
            cells[b] += 1.0;
        }
    }
    double out = 0.0;
    for (std::size_t b = 0; b < k * k; ++b) {
        if (cells[b] == 0.0) continue;
        out += std::log(beta_moment(eta0, zeta0, ones[b], cells[b] - ones[b]));
    }
    return out;
}

double log_marginal_poisson(const iclh::Dataset& ds, const iclh::Partition& z, double beta) {
    const Dense x = dense(ds);
    const Axes a = axes(ds, z);
    const auto k = sz(a.clusters);
    std::vector<std::int64_t> nu(k * k, 0);
    std::vector<double> cells(k * k, 0.0);
    double out = 0.0;
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) {
            const std::size_t b = sz(a.row_label[sz(i)]) * k + sz(a.col_label[sz(j)]);
            nu[b] += x.at(i, j);
            cells[b] += 1.0;
            out -= log_factorial(x.at(i, j));
        }
    }
    for (std::size_t b = 0; b < k * k; ++b) {
        if (cells[b] == 0.0) continue;
        out += log_gamma_block(nu[b], cells[b], beta);
    }
    for (const auto& g : phi_groups(ds, z)) out += log_phi(g);
    return out;
}

std::vector<std::vector<std::int64_t>> phi_groups(const iclh::Dataset& ds, const iclh::Partition& z) {
    const Dense x = dense(ds);
    const Axes a = axes(ds, z);
    const auto k = sz(a.clusters);
    std::vector<std::vector<std::int64_t>> out_deg(k), in_deg(k);
    for (int i = 0; i < x.rows; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < x.cols; ++j) s += x.at(i, j);
        out_deg[sz(a.row_label[sz(i)])].push_back(s);
    }
    for (int j = 0; j < x.cols; ++j) {
        std::int64_t s = 0;
        for (int i = 0; i < x.rows; ++i) s += x.at(i, j);
        in_deg[sz(a.col_label[sz(j)])].push_back(s);
    }
    std::vector<std::vector<std::int64_t>> groups;
    for (auto& g : out_deg) {
        if (!g.empty()) groups.push_back(std::move(g));
    }
    for (auto& g : in_deg) {
        if (!g.empty()) groups.push_back(std::move(g));
    }
    return groups;
}

McEstimate phi_monte_carlo(const std::vector<std::vector<std::int64_t>>& groups, std::uint64_t seed, int samples) {
    if (samples < 2) throw std::invalid_argument("need at least two samples");
    std::mt19937_64 engine(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> e;
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < samples; ++s) {
        double value = 1.0;
        for (const auto& g : groups) {
            e.resize(g.size());
            double total = 0.0;
            for (auto& v : e) {
                v = expo(engine);
                total += v;
            }
            const double n = static_cast<double>(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) value *= std::pow(n * e[i] / total, static_cast<double>(g[i]));
        }
        sum += value;
        sum_sq += value * value;
    }
    const double m = static_cast<double>(samples);
    const double mean = sum / m;
    const double var = std::max(sum_sq / m - mean * mean, 0.0) * m / (m - 1.0);
    return {mean, std::sqrt(var / m)};
}

}  // namespace oracle
