"""Shared small instances for the test modules."""
import numpy as np

from skewps.fields import field
from skewps.maps import SkewAuto
from skewps.qelem import MatRing
from skewps.skew import SkewDatum

F4 = field(2, 2)


def f4_datum(prec=8, xcap=16):
    """M_2(F_4((pi))), sigma = conj(c) o Frob with c = 1 + pi e_12, t = c."""
    R = MatRing(F4, 2, prec)
    c = R.parse("[[1, pi],[0, 1]]")
    return SkewDatum(R, SkewAuto(R, 1, c), c, xcap=xcap)


def frobenius_datum(prec=12, xcap=16):
    R = MatRing(F4, 1, prec)
    return SkewDatum(R, SkewAuto(R, 1), -R.one(), xcap=xcap)


def trivial_datum(p=2, prec=12, xcap=16):
    R = MatRing(field(p, 1), 1, prec)
    return SkewDatum(R, SkewAuto(R), -R.one(), xcap=xcap)


def rng_of(seed):
    return np.random.default_rng(seed)
