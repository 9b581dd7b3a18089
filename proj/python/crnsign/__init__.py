"""Sign-pattern analysis and sign fixing of chemical reaction networks.

Reports are the same JSON objects the ``crnsign`` command writes, decoded to
dicts. Exact matrices appear as rows of ``"p/q"`` strings; ``fractions()``
turns them into ``Fraction`` rows.
"""

import json
from fractions import Fraction

from ._crnsign import Network, ParseError, parse, run_cli
from . import _crnsign

__all__ = [
    "Network",
    "ParseError",
    "parse",
    "load",
    "fractions",
    "analyze",
    "bad_classes",
    "kernels",
    "deficiency",
    "sign_fix",
    "altfix",
    "run_cli",
]


def load(path, permissive=False):
    with open(path, encoding="utf-8") as f:
        return parse(f.read(), permissive)


def fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def analyze(network, samples=100, seed=0):
    return {
        "network": json.loads(_crnsign.network_report(network)),
        "signcheck": json.loads(_crnsign.signcheck_report(network, samples, seed)),
        "badclasses": bad_classes(network),
    }


def bad_classes(network):
    return json.loads(_crnsign.badclasses_report(network))


def kernels(network):
    return json.loads(_crnsign.kernels_report(network))


def deficiency(network):
    return json.loads(_crnsign.deficiency_report(network))


def sign_fix(network, order=None, rate=1.0):
    """Returns (fixed network, report). `order` lists class numbers from 0."""
    fixed, text = _crnsign.sign_fix(network, order, rate)
    return fixed, json.loads(text)


def altfix(network):
    """Single-step alternative fix. It does not preserve the equilibria."""
    return json.loads(_crnsign.altfix_report(network))
