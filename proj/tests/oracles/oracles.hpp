#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iclh/dataset.hpp"
#include "iclh/partition.hpp"

// Brute-force references for the closed-form marginals. Everything here
// integrates the model's priors numerically; nothing calls lgamma or the
// library's likelihood code.
namespace oracle {

/// Dense copy of the observation matrix the models see: rows x cols for
/// matrices, n x n ordered pairs (undirected graphs mirrored) for graphs.
struct Dense {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> x;
    std::int64_t at(int i, int j) const { return x[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
};

Dense dense(const iclh::Dataset& ds);

/// E[v^p (1 - v)^q] for v ~ Beta(a, b), both integrals by tanh-sinh quadrature.
double beta_moment(double a, double b, double p, double q);

/// log E[prod_j theta_j^counts_j] for theta ~ Dirichlet(a, ..., a), through
/// stick-breaking into independent Beta factors.
double log_dirichlet_moment(std::span<const std::int64_t> counts, double a);

/// log of the integral over lambda of lambda^nu exp(-cells lambda) against an
/// exponential prior with mean beta (exp-sinh quadrature).
double log_gamma_block(std::int64_t nu, double cells, double beta);

/// log E[prod_i (n u_i)^d_i] for u ~ uniform on the simplex, by quadrature.
double log_phi(std::span<const std::int64_t> degrees);

/// log n! by repeated multiplication.
double log_factorial(std::int64_t n);

/// log p(X | Z) with the multinomial coefficients, mixture of multinomials.
double log_marginal_mom(const iclh::Dataset& ds, const iclh::Partition& z, double beta);

/// Binary block models: Beta(eta0, zeta0) per block. Graph blocks skip the
/// diagonal pairs i == j.
double log_marginal_bernoulli(const iclh::Dataset& ds, const iclh::Partition& z, double eta0, double zeta0);

/// Degree-corrected Poisson models, including the 1/x! factors.
double log_marginal_poisson(const iclh::Dataset& ds, const iclh::Partition& z, double beta);

/// Degree vectors of every cluster for the simplex terms: out-degrees (row
/// sums) then in-degrees (column sums), one vector per cluster and direction.
std::vector<std::vector<std::int64_t>> phi_groups(const iclh::Dataset& ds, const iclh::Partition& z);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of prod_groups E[prod_i (n u_i)^d_i], sampling every
/// group's simplex point independently from normalised exponentials.
McEstimate phi_monte_carlo(const std::vector<std::vector<std::int64_t>>& groups, std::uint64_t seed, int samples);

}  // namespace oracle
