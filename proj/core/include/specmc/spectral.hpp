/*
 * Copyright 2026 The specmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPECMC_SPECTRAL_HPP
#define SPECMC_SPECTRAL_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "specmc/chain.hpp"
#include "specmc/kernel.hpp"

namespace specmc
{

enum class GramVariant
{
    with_diagonal,  // (1/n) h(X_i, X_j)
    zero_diagonal,  // (1/n) (1 - delta_ij) h(X_i, X_j)
};

const char* to_string(GramVariant variant) noexcept;

struct EmpiricalGram
{
    GramVariant variant = GramVariant::with_diagonal;
    Eigen::MatrixXd entries;
    std::size_t non_finite_entries = 0;
    double max_abs_entry = 0.0;  // over all entries, +inf when any is infinite

    std::size_t size() const noexcept { return static_cast<std::size_t>(entries.rows()); }
    bool finite() const noexcept { return non_finite_entries == 0; }
};

/// Throws InvalidArgument for an empty path. Non-finite entries are counted, not rejected.
EmpiricalGram build_gram(std::span<const double> states, const KernelSpec& kernel,
                         GramVariant variant);
EmpiricalGram build_gram(const RegenerationTrace& trace, const KernelSpec& kernel,
                         GramVariant variant);

/**
 * Eigenvalues of a dense symmetric matrix, nonincreasing.
 *
 * Householder tridiagonalization plus implicit symmetric QR (Eigen's
 * SelfAdjointEigenSolver). Rejects input that is non-finite or asymmetric
 * beyond 1e-12 relative to max |entry|; throws NonConvergence if the QR
 * iteration stalls.
 */
std::vector<double> eig_sym(const Eigen::MatrixXd& matrix);

struct EigenPairs
{
    std::vector<double> values;  // nonincreasing
    Eigen::MatrixXd vectors;     // column k pairs with values[k]
    double max_residual = 0.0;   // max_k ||A v_k - lambda_k v_k|| / ||A||_2 bound
};

EigenPairs eig_sym_pairs(const Eigen::MatrixXd& matrix);

/**
 * Cyclic Jacobi eigenvalues, nonincreasing. Independent of eig_sym and
 * meant for cross-checks at small sizes. Stops when the off-diagonal
 * Frobenius mass falls below 1e-12 of the total; caps at 64 n sweeps.
 */
std::vector<double> eig_sym_jacobi(Eigen::MatrixXd matrix);

/**
 * delta_2(a, b) = inf over permutations of the l2 distance between the
 * zero-padded sequences. Both inputs are padded to length |a| + |b|,
 * sorted nonincreasing and matched in order, which attains the infimum by
 * the rearrangement inequality. Rejects non-finite inputs.
 */
double delta2(std::span<const double> a, std::span<const double> b);

/// Frobenius norm of a - b; throws InvalidArgument on a shape mismatch.
double hs_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double hs_distance(const EmpiricalGram& a, const EmpiricalGram& b);

enum class SpectrumRoute
{
    automatic,   // factored when available for the full matrix, else compressed
    dense,       // n x n matrix
    compressed,  // exact reduction over groups of bitwise-equal states
    factored,    // r x r similarity through an exact finite factorization
};

const char* to_string(SpectrumRoute route) noexcept;
SpectrumRoute parse_spectrum_route(std::string_view name);

struct SpectrumEstimate
{
    std::vector<double> eigenvalues;  // nonincreasing; omitted eigenvalues are zero
    std::size_t dimension = 0;        // n
    GramVariant variant = GramVariant::with_diagonal;
    SpectrumRoute route = SpectrumRoute::dense;
    bool divergent = false;           // a matrix entry was non-finite
    double top_lower_bound = 0.0;     // max |entry| <= max |eigenvalue|
};

/**
 * Spectrum of H~_n or H_n for the given path.
 *
 * compressed: with distinct values u_j of multiplicity c_j, the span of
 * group indicators is invariant and carries the k x k matrix
 * (1/n) sqrt(c_j c_l) h(u_j, u_l) (diagonal (c_j - [zero_diagonal]) h(u_j, u_j) / n);
 * its complement contributes eigenvalue 0 (with_diagonal) or -h(u_j, u_j)/n
 * (zero_diagonal) with multiplicity c_j - 1.
 *
 * factored: with h = sum_r w_r g_r(x) g_r(y) and G = (1/n) Phi^T Phi,
 * the nonzero spectrum of H~_n is that of G^{1/2} W G^{1/2}
 * (W^{1/2} G W^{1/2} when all w_r >= 0). Only valid for with_diagonal.
 */
SpectrumEstimate gram_spectrum(std::span<const double> states, const KernelSpec& kernel,
                               GramVariant variant, SpectrumRoute route = SpectrumRoute::automatic);

/// Spectrum of an already-built matrix; flags a divergent estimate for non-finite entries.
SpectrumEstimate gram_spectrum(const EmpiricalGram& gram);

/// (1/n) (sum_i h(X_i, X_i)^2)^{1/2} = ||H~_n - H_n||_HS.
double diagonal_removal_bound(std::span<const double> states, const KernelSpec& kernel);

/// `rank,eigenvalue` rows (rank from 1), 17 significant digits.
void write_spectrum_csv(std::ostream& out, std::span<const double> eigenvalues);
std::vector<double> read_spectrum_csv(std::istream& in);

/// `i,j,value` triplets for every entry.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

}  // namespace specmc

#endif  // SPECMC_SPECTRAL_HPP
