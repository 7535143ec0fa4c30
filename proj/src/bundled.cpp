#include "finsler/scenario.hpp"

namespace finsler {

namespace {

const char* kSpherePoint = R"(
id = sphere-point
description = Round 2-sphere about a point: saturation of the tube volume bound and the focal value.

[metric]
family = round-sphere

[submanifold]
family = point
x1 = 1.5707963267948966
x2 = 0.3

[checks]
names = invariants, jacobi_model, thm_4_8, thm_1_1, cor_1_3, prop_8_1, prop_8_2

[hypothesis]
delta = 1.0
d = 3.141592653589793
l = 0.0
verify_delta = 1
delta_abs = 1.0
known_injectivity = 3.141592653589793

[jacobi]
theta1 = 1.0471975511965976
t_max = 3.4
nodes = 1001
expected_focal = 3.141592653589793

[numeric]
seed = 42
theta_res = 48
sphere_res = 24
volume_nodes = 48, 24
t_samples = 33
samples = 120
)";

const char* kSphereEquator = R"(
id = sphere-equator
description = Great circle on the round 2-sphere: tube bound and length bound saturate together.

[metric]
family = round-sphere

[submanifold]
family = distance-circle
r0 = 1.5707963267948966
rc = 0.9
theta0 = 0.3

[checks]
names = invariants, thm_1_1, thm_4_8, cor_1_2, prop_8_3

[hypothesis]
delta = 1.0
d = 3.141592653589793
l = 0.0
verify_delta = 1

[geodesic]
x1 = 1.5707963267948966
x2 = 1.8707963267948966
d1 = 0.78332690962748341
d2 = -0.62160996827066445
period = 6.283185307179586

[jacobi]
u1 = 0.8
theta1 = 0.0
t_max = 1.75
nodes = 801

[numeric]
seed = 42
theta_res = 48
sphere_res = 24
volume_nodes = 48, 24
u_res = 12
samples = 120
)";

const char* kSphereCircle = R"(
id = sphere-circle
description = Distance circle on the round 2-sphere: umbilic comparison model with equality.

[metric]
family = round-sphere

[submanifold]
family = distance-circle
r0 = 0.8
theta0 = 0.0

[checks]
names = invariants, jacobi_model, thm_4_8, prop_8_3

[hypothesis]
delta = 1.0
d = 3.141592653589793
verify_delta = 1

[jacobi]
u1 = 0.9
theta1 = 0.0
t_max = 2.6
nodes = 801
expected_focal = model

[numeric]
seed = 42
theta_res = 48
sphere_res = 24
volume_nodes = 48, 24
u_res = 12
samples = 120
)";

const char* kRandersSphere = R"(
id = randers-sphere
description = Non-reversible perturbation of the round sphere: strict comparison margins.

[metric]
family = sphere-randers
eps = 0.1

[submanifold]
family = point
x1 = 1.3
x2 = 0.4

[checks]
names = invariants, thm_4_8, thm_1_1, cor_1_2, thm_6_1, t_bound, prop_8_1, prop_8_2, prop_8_3, prop_8_4

[hypothesis]
delta = 0.5
d = 3.3
l = auto
verify_delta = 1

[geodesic]
x1 = 1.5707963267948966
x2 = 0.0
d1 = 0.0
d2 = 1.0
period = 6.283185307179586

[jacobi]
theta1 = 1.9
t_max = 4.0
nodes = 1001

[thm_6_1]
alpha_family = round-sphere

[numeric]
seed = 42
theta_res = 48
sphere_res = 24
volume_nodes = 48, 24
t_samples = 33
samples = 150
write_density_grid = 1
)";

const char* kRandersFlatLine = R"(
id = randers-flat-line
description = Flat Randers space about a line: fiber measures against the uniformity caps.

[metric]
family = flat-randers
dim = 3
b1 = 0.5

[submanifold]
family = line
x1 = 0.0
d1 = 0.0
d2 = 1.0
len = 2.0

[checks]
names = invariants, prop_8_1, prop_8_2, prop_8_3, prop_8_4

[jacobi]
u1 = 0.2
theta1 = 0.7
t_max = 2.0
nodes = 401

[numeric]
seed = 42
theta_res = 64
sphere_res = 24
volume_nodes = 6, 6, 6
samples = 150
)";

const char* kFlatTorus = R"(
id = flat-torus
description = Unit flat 2-torus about a closed geodesic: flat-case bounds and the strip tube.

[metric]
family = flat-torus
dim = 2
side = 1.0

[submanifold]
family = closed-line
x2 = 0.5
d1 = 1.0
len = 1.0

[checks]
names = invariants, thm_1_1, cor_1_2, cor_1_3, tube_density

[hypothesis]
delta = 0.0
d = 0.7071067811865476
l = 0.0
verify_delta = 1
known_injectivity = 0.5
delta_abs = 0.0

[geodesic]
x1 = 0.25
x2 = 0.5
d1 = 1.0
d2 = 0.0
period = 1.0

[jacobi]
u1 = 0.3
theta1 = 0.0
t_max = 1.5
nodes = 301

[tube]
t1 = 0.2
reference = box
lo1 = 0.0
hi1 = 1.0
lo2 = 0.3
hi2 = 0.7
theta_res = 8
u_res = 8
t_nodes = 17

[numeric]
seed = 42
theta_res = 32
sphere_res = 16
volume_nodes = 10, 10
u_res = 10
samples = 120
)";

const char* kExampleProduct = R"(
id = example-product
description = Product of the round sphere with a circle plus a parallel one-form: the fiber geodesic against all length bounds.

[metric]
family = product-sphere-circle
eps = 0.3

[submanifold]
family = circle-fiber
r = 1.5707963267948966
theta = 0.4

[checks]
names = invariants, thm_1_1, cor_1_2, thm_6_1, t_bound, prop_8_1, prop_8_3, prop_8_4

[hypothesis]
delta = 0.0
d = 18.84955592153876
l = auto
verify_delta = 1
diam_estimate = 1

[geodesic]
x1 = 1.5707963267948966
x2 = 0.4
x3 = 0.2
d1 = 0.0
d2 = 0.0
d3 = -1.0
period = 6.283185307179586

[jacobi]
u1 = 0.2
theta1 = 0.9
t_max = 3.0
nodes = 401

[thm_6_1]
alpha_family = product-sphere-circle
eps = 0.0

[numeric]
seed = 42
theta_res = 32
sphere_res = 16
volume_nodes = 28, 12, 8
u_res = 10
samples = 120
)";

const char* kExampleSweep = R"(
id = example-sweep
description = One-form strength sweep on the sphere-circle product: invariant volume, shrinking fiber length.

[metric]
family = product-sphere-circle
eps = 0.0

[checks]
names = example_sweep

[sweep]
eps = 0.0, 0.3, 0.6, 0.9

[numeric]
seed = 42
sphere_res = 16
volume_nodes = 28, 12, 8
samples = 100
)";

std::vector<std::pair<std::string, std::string>> build_index() {
  std::vector<std::pair<std::string, std::string>> idx;
  for (const char* text : {kSpherePoint, kSphereEquator, kSphereCircle, kRandersSphere,
                           kRandersFlatLine, kFlatTorus, kExampleProduct, kExampleSweep}) {
    Scenario sc = parse_scenario(text);
    idx.emplace_back(sc.id, sc.description);
  }
  return idx;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& bundled_scenario_index() {
  static const auto idx = build_index();
  return idx;
}

std::string bundled_scenario_text(const std::string& id) {
  for (const char* text : {kSpherePoint, kSphereEquator, kSphereCircle, kRandersSphere,
                           kRandersFlatLine, kFlatTorus, kExampleProduct, kExampleSweep}) {
    Scenario sc = parse_scenario(text);
    if (sc.id == id) return text;
  }
  raise(Err::ConfigError, "unknown bundled scenario: " + id);
}

}  // namespace finsler
