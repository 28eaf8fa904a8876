"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
twin. Set ``SIMPLEST_QUARTIC_PURE=1`` to force the fallback.
"""

import os
from array import array

from . import _kernels_py

if os.environ.get("SIMPLEST_QUARTIC_PURE") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def sieve_primes(n: int) -> list[int]:
    return _impl.sieve_primes(n)


def strip_primes(n: int, primes) -> int:
    return _impl.strip_primes(n, primes)


def mark_classes(mask: bytearray, lo: int, moduli, residues) -> None:
    if _impl is _kernels_py:
        _impl.mark_classes(mask, lo, moduli, residues)
    else:
        _impl.mark_classes(mask, lo, array("q", moduli), array("q", residues))
