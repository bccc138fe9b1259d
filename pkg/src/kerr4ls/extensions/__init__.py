"""Numerical kernels, compiled when possible.

``jacobi_fast`` is the Cython build of the cyclic Jacobi eigensolver and
``jacobi_slow`` its pure-Python twin. Setting ``KERR4LS_PURE_PYTHON=1``
forces the fallback.
"""
import os

if os.environ.get("KERR4LS_PURE_PYTHON"):
    from kerr4ls.extensions import jacobi_slow as jacobi
    BACKEND = "python"
else:
    try:
        from kerr4ls.extensions import jacobi_fast as jacobi
        BACKEND = "cython"
    except ImportError:
        from kerr4ls.extensions import jacobi_slow as jacobi
        BACKEND = "python"

__all__ = ["jacobi", "BACKEND"]
