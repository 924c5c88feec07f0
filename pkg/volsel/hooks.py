app_name = "volsel"
app_title = "VolSel"
app_publisher = "volsel developers"
app_description = "Hypervolume subset selection: exact solvers, greedy, grid-shifting approximation scheme and hardness instances"
app_license = "MIT"
app_version = "0.1.0"

# Solvers
# -------
# algorithm tag -> callable(points, k, ...) returning a Solution (eptas: EptasResult)
solvers = {
    "brute": "volsel.api.exact.volsel_brute",
    "exact2d": "volsel.api.exact.volsel_exact_2d",
    "greedy": "volsel.api.greedy.volsel_greedy",
    "eptas": "volsel.api.eptas.eptas_solve",
}

# Hypervolume engines
# -------------------
hv_engines = {
    "sweep": "volsel.api.hypervolume.hv_sweep",
    "ie": "volsel.api.hypervolume.hv_inclusion_exclusion",
    "estimate": "volsel.api.hypervolume.hv_estimate",
}

# Verification suites
# -------------------
# `volsel verify lemmas --which <name>`
verify_suites = {
    "boundary": "volsel.tasks.check_boundary_lemma",
    "rounding": "volsel.tasks.check_rounding_lemma",
    "independence": "volsel.tasks.check_independence_lemma",
    "independence2": "volsel.tasks.check_combined_independence_lemma",
    "allp": "volsel.tasks.check_all_p_lemma",
    "reduction": "volsel.tasks.check_reduction_lemma",
}
