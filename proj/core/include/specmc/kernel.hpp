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

#ifndef SPECMC_KERNEL_HPP
#define SPECMC_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specmc/chain.hpp"

namespace specmc
{

using KernelFunction = std::function<double(double, double)>;

/**
 * Mercer data h(x, y) = sum_i lambda_i phi_i(x) phi_i(y), with phi_i
 * orthonormal in L2(Uniform(0, 1)).
 *
 * `eigenvalues` holds lambda_0..lambda_R. For infinite expansions the list is
 * truncated at the first R with sum_{i>R} lambda_i^2 < 1e-16 and the tail
 * masses are recorded so reconstruction can be checked against
 * sum_{i>R} |lambda_i| sup|phi|^2.
 */
struct MercerExpansion
{
    std::vector<double> eigenvalues;
    std::function<double(std::size_t, double)> eigenfunction;
    double eigenfunction_sup_sq = 0.0;  // sup_i sup_x phi_i(x)^2
    double tail_l2 = 0.0;               // sum_{i>R} lambda_i^2
    double tail_abs = 0.0;              // sum_{i>R} |lambda_i|
    bool finite_rank = true;            // expansion equals h pointwise

    bool positive() const noexcept;
    double truncation_bound() const noexcept { return tail_abs * eigenfunction_sup_sq; }
};

/// Exact finite factorization h(x, y) = sum_r w_r g_r(x) g_r(y); the g_r
/// need not be orthonormal.
struct Factorization
{
    std::vector<double> weights;
    std::function<void(double, std::span<double>)> features;

    std::size_t rank() const noexcept { return weights.size(); }
};

struct KernelSpec
{
    std::string id;
    KernelFunction h;
    std::function<double(double)> majorant;  // |h(x, y)| <= F(x) F(y); empty if unknown
    std::optional<MercerExpansion> mercer;
    std::optional<Factorization> factorization;
    std::optional<std::vector<double>> known_spectrum;  // spectrum of the integral operator
    std::optional<double> bounded_diag;                 // sup_x h(x, x)
    bool positive = false;
};

KernelSpec zero_kernel();
KernelSpec constant_kernel(double c);

/// h(x, y) = sum_{k=1}^{R} lambda_k 2 cos(k pi x) cos(k pi y).
KernelSpec cosine_kernel(std::vector<double> lambdas);

/// Infinite cosine expansion with lambda_k = lambda0 ratio^(k-1), evaluated
/// in closed form.
KernelSpec cosine_series_kernel(double lambda0, double ratio);

/// h(x, y) = exp(-(x - y)^2 / width).
KernelSpec gaussian_kernel(double width);

/// h(x, y) = (x y + c)^degree.
KernelSpec polynomial_kernel(double c, unsigned degree);

/**
 * h(x, x) = x^-3 and h(x, y) = 0 for x != y, where x = y means bitwise
 * floating-point equality. Majorant F(x) = x^-3/2. The integral operator is
 * zero because the diagonal is a null set.
 */
KernelSpec diagonal_kernel();

/// Reads a `index,lambda` CSV (header required, indices 1..R in order).
std::vector<double> read_lambdas_csv(std::istream& in);

/**
 * Spectrum of the integral operator f -> int h(., y) f(y) law(dy), sorted
 * nonincreasing, finite support.
 *
 * Uses the known spectrum, else the Mercer eigenvalues when `law` is
 * Uniform(0, 1), else a Nystrom approximation: eigenvalues of
 * [sqrt(w_i) h(t_i, t_j) sqrt(w_j)] over Gauss-Legendre nodes weighted by
 * the density. The Nystrom result at `quadrature_order` must agree with
 * the one at twice the order to `tolerance` in delta_2, else
 * NonConvergence is thrown. The higher-order result is returned.
 */
std::vector<double> true_spectrum(const KernelSpec& kernel, const StationaryLaw& law,
                                  std::size_t quadrature_order = 64, double tolerance = 1e-8);

/// Nystrom eigenvalues at one order, without the convergence check.
std::vector<double> nystrom_spectrum(const KernelSpec& kernel, const StationaryLaw& law,
                                     std::size_t order);

/// x -> (sqrt(lambda_i) phi_i(x))_{i <= R} for a positive kernel with Mercer data.
class FeatureMap
{
public:
    /// Throws InvalidArgument without Mercer data or with a negative eigenvalue.
    explicit FeatureMap(const KernelSpec& kernel);

    std::size_t dimension() const noexcept { return roots_.size(); }
    std::vector<double> eval(double x) const;
    void eval(double x, std::span<double> out) const;

private:
    std::vector<double> roots_;
    std::function<double(std::size_t, double)> eigenfunction_;
};

inline std::vector<double> feature_embed(const FeatureMap& map, double x) { return map.eval(x); }

struct MajorantReport
{
    double max_slack = 0.0;  // max of |h(x, y)| - F(x) F(y) over the sample
    double worst_x = 0.0;
    double worst_y = 0.0;
    std::size_t pairs = 0;
    bool passed() const noexcept { return max_slack <= 0.0; }
};

/**
 * Checks |h(x, y)| <= F(x) F(y) with no tolerance. Half of the pairs lie on
 * the diagonal y = x, the rest are independent uniform pairs.
 */
MajorantReport validate_majorant(const KernelSpec& kernel, std::size_t sample_pairs,
                                 std::uint64_t seed);

/// max |h(x, y) - h(y, x)| over random pairs.
double symmetry_defect(const KernelSpec& kernel, std::size_t pairs, std::uint64_t seed);

/// max |h(x, y) - sum_{i <= R} lambda_i phi_i(x) phi_i(y)| over random pairs.
double mercer_reconstruction_error(const KernelSpec& kernel, std::size_t pairs, std::uint64_t seed);

/// pi(x)pi(y)-weighted double integral of g(h(x, y)) by tensor Gauss-Legendre.
double pi2_integral(const KernelSpec& kernel, const StationaryLaw& law, std::size_t order,
                    const std::function<double(double)>& transform = {});

/// int F^2 d pi by Gauss-Legendre; requires a majorant.
double pi_majorant_squared(const KernelSpec& kernel, const StationaryLaw& law, std::size_t order);

}  // namespace specmc

#endif  // SPECMC_KERNEL_HPP
