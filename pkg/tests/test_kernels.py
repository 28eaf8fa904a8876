import os
import subprocess
import sys
from array import array

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplest_quartic import _kernels_py as py
from simplest_quartic import kernels

cy = pytest.importorskip("simplest_quartic._kernels")


def test_backend_selected():
    forced = os.environ.get("SIMPLEST_QUARTIC_PURE") == "1"
    assert kernels.BACKEND == ("python" if forced else "cython")


def test_pure_env_forces_python():
    env = dict(os.environ, SIMPLEST_QUARTIC_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import simplest_quartic as s; print(s.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("n", [0, 1, 2, 3, 100, 7919, 10**5])
def test_sieve_parity(n):
    assert cy.sieve_primes(n) == py.sieve_primes(n)


@given(st.integers(1, 2**80))
@settings(max_examples=300)
def test_strip_parity(n):
    primes = py.sieve_primes(300)
    assert cy.strip_primes(n, primes) == py.strip_primes(n, primes)


@given(st.integers(1, 10**6), st.integers(0, 3000))
@settings(max_examples=50, deadline=None)
def test_mark_parity(lo, length):
    primes = [p for p in py.sieve_primes(60) if p > 2]
    moduli = [p * p for p in primes]
    residues = [(7 * p) % (p * p) for p in primes]
    a, b = bytearray(b"\x01") * length, bytearray(b"\x01") * length
    py.mark_classes(a, lo, moduli, residues)
    cy.mark_classes(b, lo, array("q", moduli), array("q", residues))
    assert a == b
    for k in range(length):
        hit = any((lo + k - r) % q == 0 for q, r in zip(moduli, residues))
        assert a[k] == (0 if hit else 1)
