/*
Copyright 2026 The srnf-wfr Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include "srnf/all.hpp"

#include <random>
#include <string>
#include <vector>

namespace srnf::fixtures
{

inline Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(g(rng), g(rng), g(rng));
    } while (v.norm() < 1e-3);
    return v.normalized();
}

/** Random measure on S2 with `count` atoms and masses in [lo, hi] */
inline DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t count,
                                      double lo = 0.1, double hi = 3.0)
{
    std::uniform_real_distribution<double> mass(lo, hi);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < count; ++i) {
        atoms.push_back({random_unit(rng), mass(rng)});
    }
    return normalize(DiscreteMeasure(Manifold::S2, std::move(atoms)));
}

inline Mat3 random_rotation(std::mt19937_64& rng)
{
    const Vec3 axis = random_unit(rng);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    return Eigen::AngleAxisd(angle(rng), axis).toRotationMatrix();
}

inline DiscreteMeasure measure(std::vector<Atom> atoms)
{
    return DiscreteMeasure(Manifold::S2, std::move(atoms));
}

inline const std::string kCubeOff = R"(OFF
8 12 0
0 0 0
1 0 0
0 1 0
1 1 0
0 0 1
1 0 1
0 1 1
1 1 1
3 0 2 1
3 1 2 3
3 4 5 6
3 5 7 6
3 0 1 4
3 1 5 4
3 2 6 3
3 3 6 7
3 0 4 2
3 2 4 6
3 1 3 5
3 3 7 5
)";

}  // namespace srnf::fixtures
