"""
API Module for volsel

This module contains the public operations for:
- Point sets: domination, Pareto filtering, CSV I/O, anchor translation
- Hypervolume: inclusion-exclusion, sweep, Monte Carlo estimate, contributions
- Exact solvers: brute force and the 2D staircase program
- Greedy selection
- The grid-shifting approximation scheme
- Hardness instance generation and verification
"""
