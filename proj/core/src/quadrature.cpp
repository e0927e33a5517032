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

#include "specmc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "specmc/error.hpp"

namespace specmc
{

QuadratureRule gauss_legendre(std::size_t order, double lo, double hi)
{
    if (order == 0)
        throw InvalidArgument("gauss_legendre: order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);

    const auto n = static_cast<double>(order);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    // Roots are symmetric; Newton from the Tricomi initial guess on each half.
    for (std::size_t i = 0; i < (order + 1) / 2; ++i)
    {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 1; k <= order; ++k)
            {
                const double p2 = p1;
                p1 = p0;
                const auto kk = static_cast<double>(k);
                p0 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p2) / kk;
            }
            derivative = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / derivative;
            z -= dz;
            if (std::abs(dz) < 1e-15)
                break;
        }
        const double w = 2.0 / ((1.0 - z * z) * derivative * derivative);
        rule.nodes[i] = mid - half * z;
        rule.nodes[order - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[order - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace specmc
