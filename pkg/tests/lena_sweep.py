"""Reference Lena sweep shared by the acceptance tests and the golden freezer."""

from spdenoise.bench import Scenario, run_sweep

RATIOS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]
SEEDS = [1, 2, 3]
KEEP_FRACTION = 0.2
SCENARIO_METHODS = {
    "original": ["imat", "median3", "amf", "noisy"],
    "sparsified": ["imat"],
}


def run_scenario(lena, scenario: Scenario, methods):
    """Mean PSNR over base seeds 1, 2, 3 (one trial each) per method and ratio."""
    reports = [run_sweep([("lena", lena)], RATIOS, methods, scenario,
                         trials_per_cell=1, base_seed=s) for s in SEEDS]
    table = {}
    for m in methods:
        table[m] = [
            sum(rep.mean_psnr("lena", r, m) for rep in reports) / len(reports) for r in RATIOS
        ]
    return table, reports


def lena_sweep(lena) -> dict:
    s1, _ = run_scenario(lena, Scenario(), SCENARIO_METHODS["original"])
    s2, _ = run_scenario(lena, Scenario(KEEP_FRACTION), SCENARIO_METHODS["sparsified"])
    return {"original": s1, "sparsified": s2}
