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

#include "specmc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "specmc/error.hpp"
#include "specmc/numeric.hpp"

namespace specmc
{

const char* to_string(GramVariant variant) noexcept
{
    return variant == GramVariant::with_diagonal ? "with_diagonal" : "zero_diagonal";
}

const char* to_string(SpectrumRoute route) noexcept
{
    switch (route)
    {
    case SpectrumRoute::automatic:
        return "auto";
    case SpectrumRoute::dense:
        return "dense";
    case SpectrumRoute::compressed:
        return "compressed";
    case SpectrumRoute::factored:
        return "factored";
    }
    return "unknown";
}

SpectrumRoute parse_spectrum_route(std::string_view name)
{
    if (name == "auto")
        return SpectrumRoute::automatic;
    if (name == "dense")
        return SpectrumRoute::dense;
    if (name == "compressed")
        return SpectrumRoute::compressed;
    if (name == "factored")
        return SpectrumRoute::factored;
    throw InvalidArgument("unknown spectrum route '" + std::string(name) + "'");
}

EmpiricalGram build_gram(std::span<const double> states, const KernelSpec& kernel,
                         GramVariant variant)
{
    const std::size_t n = states.size();
    if (n == 0)
        throw InvalidArgument("build_gram: empty path");
    EmpiricalGram gram;
    gram.variant = variant;
    gram.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        const auto jj = static_cast<Eigen::Index>(j);
        for (std::size_t i = j; i < n; ++i)
        {
            const auto ii = static_cast<Eigen::Index>(i);
            double value = 0.0;
            if (i != j || variant == GramVariant::with_diagonal)
                value = kernel.h(states[i], states[j]) * scale;
            gram.entries(ii, jj) = value;
            gram.entries(jj, ii) = value;
            if (!std::isfinite(value))
                gram.non_finite_entries += (i == j) ? 1 : 2;
            const double magnitude = std::isnan(value) ? 0.0 : std::abs(value);
            gram.max_abs_entry = std::max(gram.max_abs_entry, magnitude);
        }
    }
    return gram;
}

EmpiricalGram build_gram(const RegenerationTrace& trace, const KernelSpec& kernel,
                         GramVariant variant)
{
    return build_gram(trace.states(), kernel, variant);
}

namespace
{
void check_symmetric_finite(const Eigen::MatrixXd& m)
{
    if (m.rows() != m.cols())
        throw InvalidArgument("eig_sym: matrix is not square");
    if (m.size() == 0)
        return;
    if (!m.allFinite())
        throw InvalidArgument("eig_sym: matrix has non-finite entries");
    const double scale = m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidArgument("eig_sym: matrix is not symmetric");
}

std::vector<double> descending(const Eigen::VectorXd& ascending)
{
    std::vector<double> values(ascending.data(), ascending.data() + ascending.size());
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}
}  // namespace

std::vector<double> eig_sym(const Eigen::MatrixXd& matrix)
{
    check_symmetric_finite(matrix);
    if (matrix.size() == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NonConvergence("eig_sym: symmetric QR iteration did not converge");
    return descending(solver.eigenvalues());
}

EigenPairs eig_sym_pairs(const Eigen::MatrixXd& matrix)
{
    check_symmetric_finite(matrix);
    EigenPairs pairs;
    if (matrix.size() == 0)
        return pairs;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw NonConvergence("eig_sym_pairs: symmetric QR iteration did not converge");
    const Eigen::Index n = matrix.rows();
    pairs.values.resize(static_cast<std::size_t>(n));
    pairs.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        pairs.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(n - 1 - k);
        pairs.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    const double norm = std::max(std::abs(pairs.values.front()), std::abs(pairs.values.back()));
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const double lambda = pairs.values[static_cast<std::size_t>(k)];
        const double residual = (matrix * pairs.vectors.col(k) - lambda * pairs.vectors.col(k)).norm();
        pairs.max_residual = std::max(pairs.max_residual, norm > 0.0 ? residual / norm : residual);
    }
    return pairs;
}

std::vector<double> eig_sym_jacobi(Eigen::MatrixXd a)
{
    check_symmetric_finite(a);
    const Eigen::Index n = a.rows();
    if (n == 0)
        return {};
    const double total = a.squaredNorm();
    const std::size_t max_sweeps = 64 * static_cast<std::size_t>(n);
    bool converged = false;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep)
    {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q)
                off += 2.0 * a(p, q) * a(p, q);
        if (off <= 1e-24 * total)
        {
            converged = true;
            break;
        }
        for (Eigen::Index p = 0; p < n; ++p)
        {
            for (Eigen::Index q = p + 1; q < n; ++q)
            {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index r = 0; r < n; ++r)
                {
                    if (r == p || r == q)
                        continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = c * arp - s * arq;
                    a(r, q) = a(q, r) = s * arp + c * arq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }
    if (!converged)
        throw NonConvergence("eig_sym_jacobi: sweep cap reached");
    return descending(a.diagonal());
}

double delta2(std::span<const double> a, std::span<const double> b)
{
    const std::size_t length = a.size() + b.size();
    std::vector<double> pa(length, 0.0), pb(length, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (!std::isfinite(a[i]))
            throw InvalidArgument("delta2: non-finite entry in first spectrum");
        pa[i] = a[i];
    }
    for (std::size_t i = 0; i < b.size(); ++i)
    {
        if (!std::isfinite(b[i]))
            throw InvalidArgument("delta2: non-finite entry in second spectrum");
        pb[i] = b[i];
    }
    std::sort(pa.begin(), pa.end(), std::greater<>());
    std::sort(pb.begin(), pb.end(), std::greater<>());
    std::vector<double> squares(length);
    for (std::size_t i = 0; i < length; ++i)
        squares[i] = (pa[i] - pb[i]) * (pa[i] - pb[i]);
    return std::sqrt(pairwise_sum(squares));
}

double hs_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("hs_distance: dimension mismatch");
    return (a - b).norm();
}

double hs_distance(const EmpiricalGram& a, const EmpiricalGram& b)
{
    return hs_distance(a.entries, b.entries);
}

namespace
{
void sort_descending(std::vector<double>& values)
{
    std::sort(values.begin(), values.end(), std::greater<>());
}

SpectrumEstimate dense_spectrum(std::span<const double> states, const KernelSpec& kernel,
                                GramVariant variant)
{
    auto estimate = gram_spectrum(build_gram(states, kernel, variant));
    estimate.route = SpectrumRoute::dense;
    return estimate;
}

SpectrumEstimate compressed_spectrum(std::span<const double> states, const KernelSpec& kernel,
                                     GramVariant variant)
{
    const std::size_t n = states.size();
    std::vector<double> sorted(states.begin(), states.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> values;
    std::vector<double> counts;
    for (std::size_t i = 0; i < n;)
    {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i])
            ++j;
        values.push_back(sorted[i]);
        counts.push_back(static_cast<double>(j - i));
        i = j;
    }

    const std::size_t k = values.size();
    const double scale = 1.0 / static_cast<double>(n);
    const double self_weight = variant == GramVariant::zero_diagonal ? 1.0 : 0.0;
    SpectrumEstimate estimate;
    estimate.dimension = n;
    estimate.variant = variant;
    estimate.route = SpectrumRoute::compressed;

    Eigen::MatrixXd reduced(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    std::vector<double> diagonal(k);
    bool finite = true;
    for (std::size_t j = 0; j < k; ++j)
    {
        for (std::size_t l = j; l < k; ++l)
        {
            // A singleton group has no copy of h(u, u) in H_n.
            if (j == l && variant == GramVariant::zero_diagonal && counts[j] < 2.0)
            {
                diagonal[j] = 0.0;
                reduced(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 0.0;
                continue;
            }
            const double h = kernel.h(values[j], values[l]);
            if (!std::isfinite(h))
                finite = false;
            double entry_magnitude = std::abs(h) * scale;
            double reduced_entry;
            if (j == l)
            {
                diagonal[j] = h;
                reduced_entry = (counts[j] - self_weight) * h * scale;
            }
            else
            {
                reduced_entry = std::sqrt(counts[j] * counts[l]) * h * scale;
            }
            if (!std::isnan(entry_magnitude))
                estimate.top_lower_bound = std::max(estimate.top_lower_bound, entry_magnitude);
            reduced(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = reduced_entry;
            reduced(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = reduced_entry;
        }
    }
    if (!finite)
    {
        estimate.divergent = true;
        return estimate;
    }

    estimate.eigenvalues = eig_sym(reduced);
    if (variant == GramVariant::zero_diagonal)
    {
        for (std::size_t j = 0; j < k; ++j)
        {
            const auto copies = static_cast<std::size_t>(counts[j]) - 1;
            estimate.eigenvalues.insert(estimate.eigenvalues.end(), copies, -diagonal[j] * scale);
        }
        sort_descending(estimate.eigenvalues);
    }
    return estimate;
}

SpectrumEstimate factored_spectrum(std::span<const double> states, const KernelSpec& kernel)
{
    const auto& factors = *kernel.factorization;
    const std::size_t n = states.size();
    const auto r = static_cast<Eigen::Index>(factors.rank());
    SpectrumEstimate estimate;
    estimate.dimension = n;
    estimate.variant = GramVariant::with_diagonal;
    estimate.route = SpectrumRoute::factored;
    if (r == 0)
        return estimate;

    Eigen::MatrixXd phi(static_cast<Eigen::Index>(n), r);
    std::vector<double> row(static_cast<std::size_t>(r));
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        factors.features(states[i], row);
        double diag = 0.0;
        for (Eigen::Index c = 0; c < r; ++c)
        {
            phi(static_cast<Eigen::Index>(i), c) = row[static_cast<std::size_t>(c)];
            diag += factors.weights[static_cast<std::size_t>(c)] * row[static_cast<std::size_t>(c)]
                    * row[static_cast<std::size_t>(c)];
        }
        if (!std::isnan(diag))
            estimate.top_lower_bound = std::max(estimate.top_lower_bound, std::abs(diag) * scale);
    }
    if (!phi.allFinite())
    {
        estimate.divergent = true;
        estimate.top_lower_bound = std::numeric_limits<double>::infinity();
        return estimate;
    }

    const Eigen::MatrixXd gram = (phi.transpose() * phi) * scale;
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(factors.weights.data(), r);
    Eigen::MatrixXd similar;
    if ((w.array() >= 0.0).all())
    {
        const Eigen::VectorXd root = w.cwiseSqrt();
        similar = root.asDiagonal() * gram * root.asDiagonal();
    }
    else
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        if (solver.info() != Eigen::Success)
            throw NonConvergence("factored spectrum: Gram eigensolve failed");
        const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        const Eigen::MatrixXd half = solver.eigenvectors() * roots.asDiagonal()
                                     * solver.eigenvectors().transpose();
        similar = half * w.asDiagonal() * half;
    }
    similar = 0.5 * (similar + similar.transpose());
    estimate.eigenvalues = eig_sym(similar);
    return estimate;
}
}  // namespace

SpectrumEstimate gram_spectrum(const EmpiricalGram& gram)
{
    SpectrumEstimate estimate;
    estimate.dimension = gram.size();
    estimate.variant = gram.variant;
    estimate.route = SpectrumRoute::dense;
    estimate.top_lower_bound = gram.max_abs_entry;
    if (!gram.finite())
    {
        estimate.divergent = true;
        return estimate;
    }
    estimate.eigenvalues = eig_sym(gram.entries);
    return estimate;
}

SpectrumEstimate gram_spectrum(std::span<const double> states, const KernelSpec& kernel,
                               GramVariant variant, SpectrumRoute route)
{
    if (states.empty())
        throw InvalidArgument("gram_spectrum: empty path");
    if (route == SpectrumRoute::automatic)
    {
        route = (variant == GramVariant::with_diagonal && kernel.factorization)
                    ? SpectrumRoute::factored
                    : SpectrumRoute::compressed;
    }
    switch (route)
    {
    case SpectrumRoute::dense:
        return dense_spectrum(states, kernel, variant);
    case SpectrumRoute::compressed:
        return compressed_spectrum(states, kernel, variant);
    case SpectrumRoute::factored:
        if (!kernel.factorization)
            throw InvalidArgument("factored route: kernel '" + kernel.id + "' has no exact factorization");
        if (variant != GramVariant::with_diagonal)
            throw InvalidArgument("factored route applies to the with_diagonal matrix only");
        return factored_spectrum(states, kernel);
    case SpectrumRoute::automatic:
        break;
    }
    throw InvalidArgument("gram_spectrum: unsupported route");
}

double diagonal_removal_bound(std::span<const double> states, const KernelSpec& kernel)
{
    if (states.empty())
        throw InvalidArgument("diagonal_removal_bound: empty path");
    std::vector<double> squares(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
    {
        const double d = kernel.h(states[i], states[i]);
        squares[i] = d * d;
    }
    return std::sqrt(pairwise_sum(squares)) / static_cast<double>(states.size());
}

void write_spectrum_csv(std::ostream& out, std::span<const double> eigenvalues)
{
    out << "rank,eigenvalue\n";
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        out << (i + 1) << ',' << format_double(eigenvalues[i]) << '\n';
}

std::vector<double> read_spectrum_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "rank,eigenvalue")
        throw InvalidArgument("spectrum CSV: missing `rank,eigenvalue` header");
    std::vector<double> values;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidArgument("spectrum CSV: malformed row '" + line + "'");
        const auto rank = static_cast<std::size_t>(parse_double(line.substr(0, comma)));
        if (rank != values.size() + 1)
            throw InvalidArgument("spectrum CSV: ranks must be consecutive from 1");
        values.push_back(parse_double(line.substr(comma + 1)));
    }
    return values;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix)
{
    out << "i,j,value\n";
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < matrix.cols(); ++j)
            out << i << ',' << j << ',' << format_double(matrix(i, j)) << '\n';
}

}  // namespace specmc
