#include "guppy/dataset.hpp"

namespace guppy {

// 16 exemplars rated against Furniture (A), Household Appliances (B), and
// their conjunction; published good-example probabilities at 3 decimals.
// The mu_ab column sums to 1.001 due to that rounding, which is why the
// bundled tolerance is wider than the computed-table default.
ProbabilityTable load_bundled_dataset() {
    ProbabilityTable t;
    t.exemplar_names = {
        "Filing Cabinet", "Clothes Washer", "Vacuum Cleaner", "Hifi",
        "Heated Waterbed", "Sewing Chest",   "Floor Mat",      "Coffee Table",
        "Piano",           "Rug",            "Painting",       "Chair",
        "Fridge",          "Desk Lamp",      "Cooking Stove",  "TV",
    };
    t.mu_a = {0.079, 0.026, 0.017, 0.056, 0.089, 0.075, 0.052, 0.100,
              0.084, 0.056, 0.057, 0.099, 0.042, 0.066, 0.037, 0.065};
    t.mu_b = {0.040, 0.118, 0.118, 0.079, 0.050, 0.058, 0.023, 0.025,
              0.020, 0.019, 0.014, 0.030, 0.117, 0.079, 0.118, 0.092};
    t.mu_ab = {0.062, 0.078, 0.051, 0.090, 0.082, 0.061, 0.031, 0.050,
               0.043, 0.028, 0.021, 0.047, 0.085, 0.085, 0.088, 0.099};
    return t;
}

} // namespace guppy
