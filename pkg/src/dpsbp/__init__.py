"""dpsbp: dual-pairing summation-by-parts laboratory.

A library plus CLI for entropy-stable split-form discretizations of
nonlinear conservation laws (Burgers, shallow water in 1D/2D) built on
dual-pairing SBP operator pairs with volume upwinding, together with
linearization, eigen-spectrum stability analysis, and turbulence
diagnostics.
"""

__version__ = "0.1.0"
