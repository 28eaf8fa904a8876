# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: prime sieve, squarefree trial division, class marking.

Semantics match ``_kernels_py`` exactly; ``kernels`` picks one at import.
"""

from libc.stdlib cimport malloc, free


def sieve_primes(long long n):
    """All primes <= n, ascending."""
    cdef long long i, j
    cdef unsigned char *comp
    if n < 2:
        return []
    comp = <unsigned char *> malloc(n + 1)
    if comp == NULL:
        raise MemoryError()
    try:
        for i in range(n + 1):
            comp[i] = 0
        i = 2
        while i * i <= n:
            if not comp[i]:
                j = i * i
                while j <= n:
                    comp[j] = 1
                    j += i
            i += 1
        out = []
        for i in range(2, n + 1):
            if not comp[i]:
                out.append(i)
        return out
    finally:
        free(comp)


def strip_primes(n, primes):
    """Remove every listed prime from n; 0 if some listed prime divides n twice.

    Only n < 2**63 takes the typed path; larger n fall back to Python ints.
    """
    cdef unsigned long long v, p
    if n >= (1 << 63):
        for q in primes:
            if n % q == 0:
                n //= q
                if n % q == 0:
                    return 0
        return n
    v = n
    for q in primes:
        p = q
        if v % p == 0:
            v //= p
            if v % p == 0:
                return 0
    return v


def mark_classes(unsigned char[:] mask, long long lo, long long[:] moduli,
                 long long[:] residues):
    """Zero mask[m - lo] for every m in range with m = residues[k] mod moduli[k]."""
    cdef Py_ssize_t k, n = mask.shape[0]
    cdef long long q, start, idx
    for k in range(moduli.shape[0]):
        q = moduli[k]
        start = (residues[k] - lo) % q
        if start < 0:
            start += q
        idx = start
        while idx < n:
            mask[idx] = 0
            idx += q
