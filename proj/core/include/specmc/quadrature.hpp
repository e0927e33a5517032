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

#ifndef SPECMC_QUADRATURE_HPP
#define SPECMC_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace specmc
{

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order mapped to (lo, hi). Exact for
/// polynomials of degree <= 2 order - 1.
QuadratureRule gauss_legendre(std::size_t order, double lo = 0.0, double hi = 1.0);

}  // namespace specmc

#endif  // SPECMC_QUADRATURE_HPP
