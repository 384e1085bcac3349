"""Inner loops of the learners.

The compiled ``_core`` module is used when it was built; ``REFSCOUT_PURE=1``
forces the pure fallback. Both produce bit-identical results.
"""
import os

BACKEND = "python"
if os.environ.get("REFSCOUT_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._core import best_split, pegasos_epoch, tree_apply  # type: ignore[import-not-found]

        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._fallback import best_split, pegasos_epoch, tree_apply

__all__ = ["BACKEND", "best_split", "pegasos_epoch", "tree_apply"]
