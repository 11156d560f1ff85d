"""Search-based unit-test generation engine: Python surface.

The compiled extension provides Subject (load/generate/mutation analysis),
the crossover primitives (sbx_pair, string_splice), and the statistics kit
(wilcoxon, a12, classify_effect).
"""

try:
    from ._hmxforge import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # pragma: no cover - in-tree build on PYTHONPATH
    from _hmxforge import *  # noqa: F401,F403

__all__ = [
    "Subject",
    "sbx_pair",
    "string_splice",
    "wilcoxon",
    "a12",
    "classify_effect",
    "SubjectLoadError",
    "ConfigError",
]
