# cython: language_level=3
# cython: binding=False
"""Compiled sparse term-map kernels (twin of ``_kernels_py``).

Keys are packed exponent integers, values are exact int/Fraction
coefficients.  Only the dict plumbing is compiled; coefficient
arithmetic stays on arbitrary-precision Python objects, so results are
bit-identical to the pure-Python kernels.
"""
from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.object cimport PyObject


def convolve(dict a, dict b, shift=0):
    """Product of two term maps: out[ka + kb + shift] += a[ka] * b[kb]."""
    cdef dict out = {}
    cdef dict small = a
    cdef dict big = b
    cdef PyObject *cur
    if len(a) > len(b):
        small = b
        big = a
    for ka, va in small.items():
        base = ka + shift
        for kb, vb in big.items():
            k = base + kb
            cur = PyDict_GetItem(out, k)
            if cur == NULL:
                PyDict_SetItem(out, k, va * vb)
            else:
                PyDict_SetItem(out, k, (<object> cur) + va * vb)
    strip_zeros(out)
    return out


def convolve_into(dict acc, dict a, dict b, shift=0):
    """In-place multiply-accumulate: acc += a * b (zeros not stripped)."""
    cdef PyObject *cur
    for ka, va in a.items():
        base = ka + shift
        for kb, vb in b.items():
            k = base + kb
            cur = PyDict_GetItem(acc, k)
            if cur == NULL:
                PyDict_SetItem(acc, k, va * vb)
            else:
                PyDict_SetItem(acc, k, (<object> cur) + va * vb)
    return acc


def add_into(dict acc, dict b, scale=1):
    """In-place scaled addition: acc += scale * b (zeros left in place)."""
    cdef PyObject *cur
    cdef bint unit = scale == 1
    for k, v in b.items():
        cur = PyDict_GetItem(acc, k)
        if cur == NULL:
            PyDict_SetItem(acc, k, v if unit else scale * v)
        else:
            PyDict_SetItem(acc, k, (<object> cur) + (v if unit else scale * v))
    return acc


def strip_zeros(dict d):
    """Drop exact-zero coefficients so term maps stay canonical."""
    cdef list dead = [k for k, v in d.items() if not v]
    for k in dead:
        del d[k]
    return d
