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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "specmc/error.hpp"
#include "specmc/kernel.hpp"
#include "specmc/quadrature.hpp"
#include "specmc/spectral.hpp"

namespace specmc
{
namespace
{

std::vector<KernelSpec> bounded_kernels()
{
    return {zero_kernel(),
            constant_kernel(0.7),
            cosine_kernel({1.0, 0.5, 0.25}),
            cosine_kernel({0.8, -0.3}),
            cosine_series_kernel(1.0, 0.5),
            gaussian_kernel(0.1),
            polynomial_kernel(0.5, 3)};
}

TEST(Kernels, AreSymmetric)
{
    auto kernels = bounded_kernels();
    kernels.push_back(diagonal_kernel());
    for (const auto& k : kernels)
        EXPECT_LE(symmetry_defect(k, 5000, 1), 1e-14) << k.id;
}

TEST(Kernels, MajorantsHold)
{
    auto kernels = bounded_kernels();
    kernels.push_back(diagonal_kernel());
    for (const auto& k : kernels)
    {
        const auto report = validate_majorant(k, 20000, 2);
        EXPECT_TRUE(report.passed()) << k.id << " slack " << report.max_slack << " at (" << report.worst_x
                                     << ", " << report.worst_y << ")";
    }
}

TEST(Kernels, BrokenMajorantIsReported)
{
    auto k = gaussian_kernel(0.1);
    k.majorant = [](double) { return 0.9; };
    const auto report = validate_majorant(k, 1000, 3);
    EXPECT_FALSE(report.passed());
    EXPECT_DOUBLE_EQ(report.worst_x, report.worst_y);  // the diagonal is where it breaks
}

TEST(Kernels, HilbertSchmidtBoundedByMajorant)
{
    const auto law = uniform_law();
    for (const auto& k : bounded_kernels())
    {
        const double hs = pi2_integral(k, law, 64, [](double h) { return h * h; });
        const double f2 = pi_majorant_squared(k, law, 64);
        EXPECT_LE(hs, f2 * f2 * (1.0 + 1e-12)) << k.id;
    }
}

TEST(CosineKernel, MercerDataIsExact)
{
    const auto k = cosine_kernel({1.0, 0.5, 0.25});
    EXPECT_LE(mercer_reconstruction_error(k, 2000, 4), 1e-14);
    EXPECT_TRUE(k.mercer->finite_rank);
    EXPECT_DOUBLE_EQ(*k.bounded_diag, 3.5);
    EXPECT_DOUBLE_EQ(k.h(0.0, 0.0), 3.5);
    // pi x pi (h^2) = sum lambda^2 for orthonormal eigenfunctions
    EXPECT_NEAR(pi2_integral(k, uniform_law(), 64, [](double h) { return h * h; }), 1.3125, 1e-12);
    EXPECT_NEAR(pi2_integral(k, uniform_law(), 64), 0.0, 1e-12);
}

TEST(CosineSeriesKernel, TruncationWithinBound)
{
    const auto k = cosine_series_kernel(1.0, 0.5);
    ASSERT_TRUE(k.mercer);
    EXPECT_FALSE(k.mercer->finite_rank);
    EXPECT_LT(k.mercer->tail_l2, 1e-16);
    const double err = mercer_reconstruction_error(k, 2000, 5);
    EXPECT_LE(err, k.mercer->truncation_bound() + 1e-12);
    EXPECT_LT(err, 1e-6);
}

TEST(FeatureMap, InnerProductReproducesKernel)
{
    const auto k = cosine_kernel({1.0, 0.5, 0.25});
    const FeatureMap f(k);
    EXPECT_EQ(f.dimension(), 3u);
    for (double x : {0.1, 0.37, 0.9})
        for (double y : {0.05, 0.5, 0.77})
        {
            const auto fx = feature_embed(f, x);
            const auto fy = feature_embed(f, y);
            double dot = 0.0;
            for (std::size_t i = 0; i < fx.size(); ++i)
                dot += fx[i] * fy[i];
            EXPECT_NEAR(dot, k.h(x, y), 1e-14);
        }
    EXPECT_THROW(FeatureMap(cosine_kernel({1.0, -0.5})), InvalidArgument);
    EXPECT_THROW(FeatureMap(gaussian_kernel(0.1)), InvalidArgument);
}

TEST(PolynomialKernel, FactorizationMatchesKernel)
{
    const auto k = polynomial_kernel(-0.4, 4);
    ASSERT_TRUE(k.factorization);
    std::vector<double> g(k.factorization->rank());
    for (double x : {0.1, 0.6})
        for (double y : {0.3, 0.95})
        {
            double value = 0.0;
            std::vector<double> gy(g.size());
            k.factorization->features(x, g);
            k.factorization->features(y, gy);
            for (std::size_t r = 0; r < g.size(); ++r)
                value += k.factorization->weights[r] * g[r] * gy[r];
            EXPECT_NEAR(value, k.h(x, y), 1e-14);
        }
    EXPECT_FALSE(k.positive);
    EXPECT_DOUBLE_EQ(polynomial_kernel(0.0, 1).h(0.5, 0.5), 0.25);
}

TEST(DiagonalKernel, DiagonalAndOffDiagonal)
{
    const auto k = diagonal_kernel();
    for (double x : {1e-3, 0.1, 0.5, 0.999})
    {
        EXPECT_NEAR(k.h(x, x), std::pow(x, -3.0), 1e-14 * std::pow(x, -3.0));
        EXPECT_EQ(k.h(x, x), k.majorant(x) * k.majorant(x));
        EXPECT_EQ(k.h(x, std::nextafter(x, 1.0)), 0.0);
    }
    EXPECT_FALSE(k.bounded_diag);
    EXPECT_TRUE(true_spectrum(k, uniform_law()).empty());
}

TEST(TrueSpectrum, KnownAndMercerRoutes)
{
    EXPECT_EQ(true_spectrum(cosine_kernel({0.25, 1.0, 0.5}), uniform_law()),
              (std::vector<double>{1.0, 0.5, 0.25}));
    EXPECT_TRUE(true_spectrum(zero_kernel(), uniform_law()).empty());
}

TEST(TrueSpectrum, NystromGaussianConvergesToReference)
{
    const auto k = gaussian_kernel(0.1);
    const auto coarse = nystrom_spectrum(k, uniform_law(), 64);
    const auto fine = nystrom_spectrum(k, uniform_law(), 128);
    EXPECT_LT(delta2(coarse, fine), 1e-8);
    const auto spectrum = true_spectrum(k, uniform_law());
    // Reference: 400-point Gauss-Legendre Nystrom computed independently.
    EXPECT_NEAR(spectrum[0], 0.48011143021628244, 1e-10);
    EXPECT_NEAR(spectrum[1], 0.3034639834103268, 1e-10);
    EXPECT_NEAR(spectrum[2], 0.14393927460292955, 1e-10);
    EXPECT_NEAR(spectrum[3], 0.05261575811181162, 1e-10);
    double trace = 0.0;
    for (double l : spectrum)
        trace += l;
    EXPECT_NEAR(trace, 1.0, 1e-10);  // int h(x, x) dx = 1
}

TEST(TrueSpectrum, NonLebesgueLawUsesNystrom)
{
    const auto k = cosine_kernel({1.0, 0.5});
    const auto beta = beta_law(2.0, 2.0);
    const auto spectrum = true_spectrum(k, beta);
    EXPECT_LT(delta2(spectrum, nystrom_spectrum(k, beta, 128)), 1e-15);
    EXPECT_GT(delta2(spectrum, std::vector<double>{1.0, 0.5}), 1e-3);
}

TEST(TrueSpectrum, RoughKernelFailsToConverge)
{
    KernelSpec k = gaussian_kernel(1e-5);  // too narrow for 8 or 16 nodes
    EXPECT_THROW(true_spectrum(k, uniform_law(), 8), NonConvergence);
}

TEST(ReadLambdasCsv, ParsesAndValidates)
{
    std::istringstream good("index,lambda\n1,1.0\n2,0.5\n3,0.25\n");
    EXPECT_EQ(read_lambdas_csv(good), (std::vector<double>{1.0, 0.5, 0.25}));
    std::istringstream no_header("1,1.0\n");
    EXPECT_THROW(read_lambdas_csv(no_header), InvalidArgument);
    std::istringstream gap("index,lambda\n1,1.0\n3,0.5\n");
    EXPECT_THROW(read_lambdas_csv(gap), InvalidArgument);
}

TEST(KernelFactories, RejectBadParameters)
{
    EXPECT_THROW(gaussian_kernel(0.0), InvalidArgument);
    EXPECT_THROW(cosine_series_kernel(1.0, 1.0), InvalidArgument);
    EXPECT_THROW(cosine_kernel({NAN}), InvalidArgument);
    EXPECT_THROW(polynomial_kernel(INFINITY, 2), InvalidArgument);
}

TEST(Quadrature, IntegratesPolynomialsExactly)
{
    const auto rule = gauss_legendre(8, 0.0, 1.0);
    for (int p = 0; p <= 15; ++p)
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * std::pow(rule.nodes[i], p);
        EXPECT_NEAR(sum, 1.0 / (p + 1), 1e-15) << "degree " << p;
    }
}

TEST(GramMatrix, PositiveKernelsGivePositiveSemidefiniteMatrices)
{
    const auto trace = simulate(refresh_chain(), 300, Start::at(0.5), 7);
    for (const auto& k : {cosine_kernel({1.0, 0.5, 0.25}), gaussian_kernel(0.1), cosine_series_kernel(1.0, 0.5),
                          polynomial_kernel(1.0, 2)})
    {
        const auto values = eig_sym(build_gram(trace, k, GramVariant::with_diagonal).entries);
        EXPECT_GE(values.back(), -1e-12) << k.id;
    }
}

}  // namespace
}  // namespace specmc
