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

#include "specmc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <string>

#include "specmc/error.hpp"
#include "specmc/numeric.hpp"
#include "specmc/quadrature.hpp"
#include "specmc/spectral.hpp"

namespace specmc
{
namespace
{
// Built-in majorants are inflated by this relative margin so that the exact
// pointwise bound survives rounding in cases of mathematical equality.
constexpr double kMajorantMargin = 1.0 + 1e-12;

double cosine_eigenfunction(std::size_t i, double x)
{
    return std::numbers::sqrt2 * std::cos(static_cast<double>(i + 1) * std::numbers::pi * x);
}

double binomial(unsigned n, unsigned k)
{
    double result = 1.0;
    for (unsigned i = 1; i <= k; ++i)
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    return result;
}
}  // namespace

bool MercerExpansion::positive() const noexcept
{
    return std::all_of(eigenvalues.begin(), eigenvalues.end(), [](double l) { return l >= 0.0; });
}

KernelSpec zero_kernel()
{
    KernelSpec kernel;
    kernel.id = "zero";
    kernel.h = [](double, double) { return 0.0; };
    kernel.majorant = [](double) { return 0.0; };
    MercerExpansion mercer;
    mercer.eigenfunction = cosine_eigenfunction;
    mercer.eigenfunction_sup_sq = 2.0;
    kernel.mercer = mercer;
    kernel.factorization = Factorization{{}, [](double, std::span<double>) {}};
    kernel.known_spectrum = std::vector<double>{};
    kernel.bounded_diag = 0.0;
    kernel.positive = true;
    return kernel;
}

KernelSpec constant_kernel(double c)
{
    KernelSpec kernel;
    kernel.id = "constant";
    kernel.h = [c](double, double) { return c; };
    const double root = std::sqrt(std::abs(c)) * kMajorantMargin;
    kernel.majorant = [root](double) { return root; };
    MercerExpansion mercer;
    mercer.eigenvalues = {c};
    mercer.eigenfunction = [](std::size_t, double) { return 1.0; };
    mercer.eigenfunction_sup_sq = 1.0;
    kernel.mercer = mercer;
    kernel.factorization = Factorization{{c}, [](double, std::span<double> out) { out[0] = 1.0; }};
    if (c >= 0.0)
        kernel.bounded_diag = c;
    kernel.positive = c >= 0.0;
    return kernel;
}

KernelSpec cosine_kernel(std::vector<double> lambdas)
{
    for (double l : lambdas)
        if (!std::isfinite(l))
            throw InvalidArgument("cosine_kernel: eigenvalues must be finite");
    KernelSpec kernel;
    kernel.id = "cosine";
    kernel.h = [lambdas](double x, double y) {
        double sum = 0.0;
        for (std::size_t k = 0; k < lambdas.size(); ++k)
            sum += lambdas[k] * cosine_eigenfunction(k, x) * cosine_eigenfunction(k, y);
        return sum;
    };
    kernel.majorant = [lambdas](double x) {
        double sum = 0.0;
        for (std::size_t k = 0; k < lambdas.size(); ++k)
        {
            const double phi = cosine_eigenfunction(k, x);
            sum += std::abs(lambdas[k]) * phi * phi;
        }
        return std::sqrt(sum) * kMajorantMargin;
    };
    MercerExpansion mercer;
    mercer.eigenvalues = lambdas;
    mercer.eigenfunction = cosine_eigenfunction;
    mercer.eigenfunction_sup_sq = 2.0;
    kernel.mercer = mercer;
    kernel.factorization = Factorization{lambdas, [r = lambdas.size()](double x, std::span<double> out) {
                                             for (std::size_t k = 0; k < r; ++k)
                                                 out[k] = cosine_eigenfunction(k, x);
                                         }};
    kernel.positive = mercer.positive();
    if (kernel.positive)
    {
        double total = 0.0;
        for (double l : lambdas)
            total += l;
        kernel.bounded_diag = 2.0 * total;  // attained at x = 0
    }
    return kernel;
}

KernelSpec cosine_series_kernel(double lambda0, double ratio)
{
    if (!(ratio > 0.0 && ratio < 1.0))
        throw InvalidArgument("cosine_series_kernel: ratio must lie in (0, 1)");
    if (!std::isfinite(lambda0))
        throw InvalidArgument("cosine_series_kernel: lambda0 must be finite");
    // sum_{k>=1} r^(k-1) cos(k t) = (cos t - r) / (1 - 2 r cos t + r^2)
    auto series = [ratio](double t) {
        const double c = std::cos(t);
        return (c - ratio) / (1.0 - 2.0 * ratio * c + ratio * ratio);
    };
    KernelSpec kernel;
    kernel.id = "cosine_series";
    kernel.h = [lambda0, series](double x, double y) {
        return lambda0 * (series(std::numbers::pi * (x - y)) + series(std::numbers::pi * (x + y)));
    };
    const double abs0 = std::abs(lambda0);
    kernel.majorant = [abs0, series](double x) {
        // sum_k |lambda_k| phi_k(x)^2 in closed form.
        return std::sqrt(abs0 * (series(0.0) + series(2.0 * std::numbers::pi * x))) * kMajorantMargin;
    };

    MercerExpansion mercer;
    mercer.eigenfunction = cosine_eigenfunction;
    mercer.eigenfunction_sup_sq = 2.0;
    mercer.finite_rank = false;
    const double r2 = ratio * ratio;
    double lambda = lambda0;
    std::size_t kept = 0;
    // tail after keeping R terms: lambda0^2 r^(2R) / (1 - r^2)
    while (true)
    {
        const double tail = lambda0 * lambda0 * std::pow(r2, static_cast<double>(kept)) / (1.0 - r2);
        if (tail < 1e-16)
        {
            mercer.tail_l2 = tail;
            mercer.tail_abs = abs0 * std::pow(ratio, static_cast<double>(kept)) / (1.0 - ratio);
            break;
        }
        mercer.eigenvalues.push_back(lambda);
        lambda *= ratio;
        ++kept;
    }
    kernel.mercer = mercer;
    kernel.positive = lambda0 >= 0.0;
    if (kernel.positive)
        kernel.bounded_diag = 2.0 * lambda0 / (1.0 - ratio);
    return kernel;
}

KernelSpec gaussian_kernel(double width)
{
    if (!(width > 0.0))
        throw InvalidArgument("gaussian_kernel: width must be positive");
    KernelSpec kernel;
    kernel.id = "gaussian";
    kernel.h = [width](double x, double y) { return std::exp(-(x - y) * (x - y) / width); };
    kernel.majorant = [](double) { return 1.0; };
    kernel.bounded_diag = 1.0;
    kernel.positive = true;
    return kernel;
}

KernelSpec polynomial_kernel(double c, unsigned degree)
{
    if (!std::isfinite(c))
        throw InvalidArgument("polynomial_kernel: offset must be finite");
    KernelSpec kernel;
    kernel.id = "polynomial";
    const auto d = static_cast<double>(degree);
    kernel.h = [c, degree](double x, double y) {
        const double base = x * y + c;
        double value = 1.0;
        for (unsigned i = 0; i < degree; ++i)
            value *= base;
        return value;
    };
    const double abs_c = std::abs(c);
    kernel.majorant = [abs_c, d](double x) { return std::pow(x * x + abs_c, 0.5 * d) * kMajorantMargin; };

    Factorization factors;
    std::vector<unsigned> powers;
    for (unsigned k = 0; k <= degree; ++k)
    {
        const double weight = binomial(degree, k) * std::pow(c, static_cast<double>(degree - k));
        if (weight != 0.0)
        {
            factors.weights.push_back(weight);
            powers.push_back(k);
        }
    }
    factors.features = [powers](double x, std::span<double> out) {
        for (std::size_t r = 0; r < powers.size(); ++r)
            out[r] = std::pow(x, static_cast<double>(powers[r]));
    };
    kernel.factorization = std::move(factors);
    kernel.positive = c >= 0.0;
    if (c >= 0.0)
        kernel.bounded_diag = std::pow(1.0 + c, d);
    return kernel;
}

KernelSpec diagonal_kernel()
{
    KernelSpec kernel;
    kernel.id = "diagonal";
    // The diagonal is computed as F(x) F(x) so that |h(x, x)| = F(x)^2 holds bitwise.
    auto root = [](double x) { return 1.0 / (x * std::sqrt(x)); };
    kernel.h = [root](double x, double y) {
        if (x != y)
            return 0.0;
        const double f = root(x);
        return f * f;
    };
    kernel.majorant = root;
    kernel.known_spectrum = std::vector<double>{};
    return kernel;
}

std::vector<double> read_lambdas_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "index,lambda")
        throw InvalidArgument("lambda CSV: missing `index,lambda` header");
    std::vector<double> lambdas;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidArgument("lambda CSV: malformed row '" + line + "'");
        const double index = parse_double(line.substr(0, comma));
        if (index != static_cast<double>(lambdas.size() + 1))
            throw InvalidArgument("lambda CSV: indices must run 1, 2, ... in order");
        lambdas.push_back(parse_double(line.substr(comma + 1)));
    }
    return lambdas;
}

std::vector<double> nystrom_spectrum(const KernelSpec& kernel, const StationaryLaw& law,
                                     std::size_t order)
{
    if (!law.density)
        throw InvalidArgument("nystrom_spectrum: law has no density");
    const auto rule = gauss_legendre(order);
    std::vector<double> root_weight(order);
    for (std::size_t i = 0; i < order; ++i)
        root_weight[i] = std::sqrt(rule.weights[i] * law.density(rule.nodes[i]));
    const auto n = static_cast<Eigen::Index>(order);
    Eigen::MatrixXd matrix(n, n);
    for (std::size_t j = 0; j < order; ++j)
        for (std::size_t i = j; i < order; ++i)
        {
            const double value = root_weight[i] * kernel.h(rule.nodes[i], rule.nodes[j]) * root_weight[j];
            matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
        }
    if (!matrix.allFinite())
        throw NonConvergence("nystrom_spectrum: kernel is not finite on the quadrature grid");
    return eig_sym(matrix);
}

std::vector<double> true_spectrum(const KernelSpec& kernel, const StationaryLaw& law,
                                  std::size_t quadrature_order, double tolerance)
{
    if (kernel.known_spectrum)
    {
        auto spectrum = *kernel.known_spectrum;
        std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
        return spectrum;
    }
    if (kernel.mercer && law.is_lebesgue)
    {
        auto spectrum = kernel.mercer->eigenvalues;
        std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
        return spectrum;
    }
    if (!law.density)
        throw InvalidArgument("true_spectrum: kernel '" + kernel.id
                              + "' has no Mercer data for this law and the law has no density");
    if (quadrature_order == 0)
        throw InvalidArgument("true_spectrum: quadrature order must be positive");
    const auto coarse = nystrom_spectrum(kernel, law, quadrature_order);
    const auto fine = nystrom_spectrum(kernel, law, 2 * quadrature_order);
    const double change = delta2(coarse, fine);
    if (!(change < tolerance))
        throw NonConvergence("true_spectrum: Nystrom spectra at orders " + std::to_string(quadrature_order)
                             + " and " + std::to_string(2 * quadrature_order) + " differ by "
                             + format_double(change) + " in delta_2");
    return fine;
}

FeatureMap::FeatureMap(const KernelSpec& kernel)
{
    if (!kernel.mercer)
        throw InvalidArgument("FeatureMap: kernel '" + kernel.id + "' has no Mercer data");
    for (double lambda : kernel.mercer->eigenvalues)
    {
        if (lambda < 0.0)
            throw InvalidArgument("FeatureMap: negative eigenvalue, feature map undefined");
        roots_.push_back(std::sqrt(lambda));
    }
    eigenfunction_ = kernel.mercer->eigenfunction;
}

void FeatureMap::eval(double x, std::span<double> out) const
{
    if (out.size() != roots_.size())
        throw InvalidArgument("FeatureMap::eval: output size mismatch");
    for (std::size_t i = 0; i < roots_.size(); ++i)
        out[i] = roots_[i] * eigenfunction_(i, x);
}

std::vector<double> FeatureMap::eval(double x) const
{
    std::vector<double> out(roots_.size());
    eval(x, out);
    return out;
}

MajorantReport validate_majorant(const KernelSpec& kernel, std::size_t sample_pairs,
                                 std::uint64_t seed)
{
    if (!kernel.majorant)
        throw InvalidArgument("validate_majorant: kernel '" + kernel.id + "' has no majorant");
    Philox rng(seed);
    MajorantReport report;
    report.max_slack = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < sample_pairs; ++p)
    {
        const double x = rng.uniform();
        const double y = (p % 2 == 0) ? x : rng.uniform();
        const double slack = std::abs(kernel.h(x, y)) - kernel.majorant(x) * kernel.majorant(y);
        if (slack > report.max_slack || std::isnan(slack))
        {
            report.max_slack = std::isnan(slack) ? std::numeric_limits<double>::infinity() : slack;
            report.worst_x = x;
            report.worst_y = y;
        }
    }
    report.pairs = sample_pairs;
    return report;
}

double symmetry_defect(const KernelSpec& kernel, std::size_t pairs, std::uint64_t seed)
{
    Philox rng(seed);
    double worst = 0.0;
    for (std::size_t p = 0; p < pairs; ++p)
    {
        const double x = rng.uniform();
        const double y = rng.uniform();
        worst = std::max(worst, std::abs(kernel.h(x, y) - kernel.h(y, x)));
    }
    return worst;
}

double mercer_reconstruction_error(const KernelSpec& kernel, std::size_t pairs, std::uint64_t seed)
{
    if (!kernel.mercer)
        throw InvalidArgument("mercer_reconstruction_error: kernel '" + kernel.id + "' has no Mercer data");
    const auto& mercer = *kernel.mercer;
    Philox rng(seed);
    double worst = 0.0;
    for (std::size_t p = 0; p < pairs; ++p)
    {
        const double x = rng.uniform();
        const double y = rng.uniform();
        double partial = 0.0;
        for (std::size_t i = 0; i < mercer.eigenvalues.size(); ++i)
            partial += mercer.eigenvalues[i] * mercer.eigenfunction(i, x) * mercer.eigenfunction(i, y);
        worst = std::max(worst, std::abs(kernel.h(x, y) - partial));
    }
    return worst;
}

double pi2_integral(const KernelSpec& kernel, const StationaryLaw& law, std::size_t order,
                    const std::function<double(double)>& transform)
{
    if (!law.density)
        throw InvalidArgument("pi2_integral: law has no density");
    const auto rule = gauss_legendre(order);
    std::vector<double> weights(order);
    for (std::size_t i = 0; i < order; ++i)
        weights[i] = rule.weights[i] * law.density(rule.nodes[i]);
    std::vector<double> rows(order);
    for (std::size_t i = 0; i < order; ++i)
    {
        double row = 0.0;
        for (std::size_t j = 0; j < order; ++j)
        {
            const double h = kernel.h(rule.nodes[i], rule.nodes[j]);
            row += weights[j] * (transform ? transform(h) : h);
        }
        rows[i] = weights[i] * row;
    }
    return pairwise_sum(rows);
}

double pi_majorant_squared(const KernelSpec& kernel, const StationaryLaw& law, std::size_t order)
{
    if (!kernel.majorant)
        throw InvalidArgument("pi_majorant_squared: kernel '" + kernel.id + "' has no majorant");
    if (!law.density)
        throw InvalidArgument("pi_majorant_squared: law has no density");
    const auto rule = gauss_legendre(order);
    double sum = 0.0;
    for (std::size_t i = 0; i < order; ++i)
    {
        const double f = kernel.majorant(rule.nodes[i]);
        sum += rule.weights[i] * law.density(rule.nodes[i]) * f * f;
    }
    return sum;
}

}  // namespace specmc
