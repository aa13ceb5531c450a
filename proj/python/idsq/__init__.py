"""Infinite divisibility of shifted squared Gaussian pairs.

Rationals are passed as strings ("3/2") or ints; reports come back as dicts.
"""

import json
from fractions import Fraction

from . import _idsq

__all__ = ["classify", "coefficient", "scan", "verdict", "critical", "ek_criterion", "bapat", "run_cli"]


def _q(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def _problem(cov, shift):
    return json.dumps({"cov": [[_q(v) for v in row] for row in cov], "shift": [_q(v) for v in shift]})


def classify(cov, shift):
    return json.loads(_idsq.classify(_problem(cov, shift)))


def coefficient(a, b, shift_case, t, j, k):
    """Exact (P_jk, Q_jk) as Fractions for the canonical problem."""
    p, q = _idsq.coefficient(_q(a), _q(b), shift_case, _q(t), j, k)
    return Fraction(p), Fraction(q)


def scan(cov, shift, alpha=1, t=64, B="1/2", mode="float", threads=0):
    return json.loads(_idsq.scan(_problem(cov, shift), _q(alpha), _q(t), _q(B), mode, threads))


def verdict(cov, shift, alpha=1, ladder=(16, 32, 64, 128), B="1/2", mode="float", threads=0):
    return json.loads(_idsq.verdict(_problem(cov, shift), _q(alpha), [_q(t) for t in ladder], _q(B), mode, threads))


def critical(cov, shift, ladder=(16, 32, 64, 128), B="1/2", drift_tol=0.05, mode="float", threads=0):
    return json.loads(
        _idsq.critical(_problem(cov, shift), [_q(t) for t in ladder], _q(B), drift_tol, mode, threads))


def ek_criterion(gamma, c):
    return _idsq.ek_criterion([[_q(v) for v in row] for row in gamma], [_q(v) for v in c])


def bapat(gamma):
    """(verdict, signature witness or None)."""
    return _idsq.bapat([[_q(v) for v in row] for row in gamma])


def run_cli(*args):
    """Runs the command line in-process; returns (exit_code, stdout, stderr)."""
    return _idsq.run_cli([str(a) for a in args])
