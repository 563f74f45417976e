#pragma once

#include "knapp/flat_quotient.hpp"
#include "knapp/sphere_quotient.hpp"

namespace knapp {

// Named covering-data presets.
SphereQuotient preset_sphere(int n);
SphereQuotient preset_rp(int n);
SphereQuotient preset_lens(int p, int q);  // S^3 / Z_p with twist q, gcd(p,q) = 1
SphereQuotient preset_quaternion();        // S^3 / {+-1, +-i, +-j, +-k}
FlatQuotient preset_torus(const MatN& basis);
FlatQuotient preset_klein_bottle();  // unit square lattice, glide (x1,x2) -> (-x1, x2+1/2)

}  // namespace knapp
