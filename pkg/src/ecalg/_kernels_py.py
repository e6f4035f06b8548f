"""Pure-Python sparse term-map kernels.

A term map is a dict whose keys are packed exponent integers (adding two
keys multiplies the underlying monomials) and whose values are exact
coefficients (int or Fraction).  These four functions are the hot inner
loops of every polynomial operation in the package; ``_kernels_cy`` is a
compiled twin with identical semantics.
"""


def convolve(a, b, shift=0):
    """Product of two term maps: out[ka + kb + shift] += a[ka] * b[kb].

    The result never stores zero coefficients.  ``shift`` compensates for
    biased exponent packings (Laurent keys carry a constant offset that
    would otherwise double under key addition).
    """
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ka, va in a.items():
        base = ka + shift
        for kb, vb in b.items():
            k = base + kb
            cur = out.get(k)
            if cur is None:
                out[k] = va * vb
            else:
                out[k] = cur + va * vb
    strip_zeros(out)
    return out


def convolve_into(acc, a, b, shift=0):
    """In-place multiply-accumulate: acc += a * b.

    May leave zero coefficients behind; callers strip once at the end of
    an accumulation loop.
    """
    for ka, va in a.items():
        base = ka + shift
        for kb, vb in b.items():
            k = base + kb
            cur = acc.get(k)
            if cur is None:
                acc[k] = va * vb
            else:
                acc[k] = cur + va * vb
    return acc


def add_into(acc, b, scale=1):
    """In-place scaled addition: acc += scale * b (zeros left in place)."""
    if scale == 1:
        for k, v in b.items():
            cur = acc.get(k)
            if cur is None:
                acc[k] = v
            else:
                acc[k] = cur + v
    else:
        for k, v in b.items():
            cur = acc.get(k)
            if cur is None:
                acc[k] = scale * v
            else:
                acc[k] = cur + scale * v
    return acc


def strip_zeros(d):
    """Drop exact-zero coefficients so term maps stay canonical."""
    dead = [k for k, v in d.items() if not v]
    for k in dead:
        del d[k]
    return d
