"""Exactly solvable time-dependent two-channel problems and their phases.

Construction pipeline:
    spectral data -> transparent potential (bargmann) -> effective field
    (fields) -> rotating-frame dynamics (evolution) -> gauge-rotated picture
    (gauge) -> total/dynamical/geometric/Aharonov-Anandan phases (phases),
plus the x-independent cranked spin model (spinmodel), all cross-checked by
independent brute-force propagators (oracle) and a batch verification suite
(verify) surfaced through the CLI (cli).
"""

__version__ = "0.1.0"
