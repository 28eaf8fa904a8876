"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``."""


def sieve_primes(n):
    """All primes <= n, ascending."""
    if n < 2:
        return []
    comp = bytearray(n + 1)
    i = 2
    while i * i <= n:
        if not comp[i]:
            comp[i * i :: i] = b"\x01" * len(range(i * i, n + 1, i))
        i += 1
    return [k for k in range(2, n + 1) if not comp[k]]


def strip_primes(n, primes):
    """Remove every listed prime from n; 0 if some listed prime divides n twice."""
    for p in primes:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
    return n


def mark_classes(mask, lo, moduli, residues):
    """Zero mask[m - lo] for every m in range with m = residues[k] mod moduli[k]."""
    n = len(mask)
    for q, r in zip(moduli, residues):
        start = (r - lo) % q
        if start < n:
            mask[start::q] = bytes(len(range(start, n, q)))
