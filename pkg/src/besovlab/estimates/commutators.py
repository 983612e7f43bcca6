"""Commutator-norm scans.

Each variant names a bracket ``[f, D_q] g`` (``f * D_q g - D_q (f g)``), the
dyadic weight applied to its block norm, the two Besov norms it is divided
by, and the sequence norm used to summarize ``c_q``.  Variants come in four
families:

``local/*``   weight ``2^{q sigma}``, ``B^sigma_{2,1}`` norms, l1 summary
``ut-*`` etc. brackets involving time derivatives, weight ``2^{q(sigma-1+eps)}``, l2
``high/*``    weight ``2^{q(sigma+eps)}``, ``B^{sigma+eps}_{2,2}`` norms, l2
``low/*``     ``q = -1`` only, measured in ``L^{2N/(N+2)}`` (``N > 2``)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..euler.model import PhysicalParams, State
from ..lp.grid import (AnyField, Field, VectorField, divergence, gradient_tensor, lp_norm,
                       multiply, partial, spectral_gradient)
from ..lp.partition import DyadicPartition, besov_from_blocks, block_l2_norms, dyadic_block
from .diagnostics import EPS, time_derivative_state


@dataclass(frozen=True)
class Norm:
    """``||field||_{B^{shift}_{2,r}}`` (shift relative to sigma/eps) or ``||field||_inf``."""

    field: str
    kind: str  # "besov" or "sup"
    offset: float = 0.0
    use_eps: bool = False
    r: float = 2.0

    def smoothness(self, sigma: float, eps: float) -> float:
        return sigma + self.offset + (eps if self.use_eps else 0.0)

    def label(self) -> str:
        if self.kind == "sup":
            return f"||{self.field}||_inf"
        shift = ("sigma" + (f"{self.offset:+g}" if self.offset else "")
                 + ("+eps" if self.use_eps else ""))
        r = "1" if self.r == 1 else "2"
        return f"||{self.field}||_B^{{{shift}}}_{{2,{r}}}"


@dataclass(frozen=True)
class Variant:
    name: str
    left: str          # multiplier inside the bracket: "m", "u", "mt", "ut"
    right: str         # differentiated field
    op: str            # "div", "grad", "dot-grad"
    weight_offset: float
    weight_eps: bool
    norms: tuple[Norm, Norm]
    summary: str       # "l1" or "l2"
    low_only: bool = False

    def weight_smoothness(self, sigma: float, eps: float) -> float:
        return sigma + self.weight_offset + (eps if self.weight_eps else 0.0)


def _b(field: str, offset: float = 0.0, eps: bool = True, r: float = 2.0) -> Norm:
    return Norm(field, "besov", offset=offset, use_eps=eps, r=r)


def _sup(field: str) -> Norm:
    return Norm(field, "sup")


def _local(name, left, right, op, n1, n2):
    return Variant(name, left, right, op, 0.0, False, (n1, n2), "l1")


def _time(name, left, right, op, n1, n2):
    return Variant(name, left, right, op, -1.0, True, (n1, n2), "l2")


def _high(name, left, right, op, n1, n2, low_only=False):
    return Variant(name, left, right, op, 0.0, True, (n1, n2), "l2", low_only)


_S1 = dict(eps=False, r=1.0)

VARIANTS: dict[str, Variant] = {v.name: v for v in [
    _local("local/m-divu", "m", "u", "div", _b("m", **_S1), _b("u", **_S1)),
    _local("local/m-gradm", "m", "m", "grad", _sup("grad m"), _b("m", **_S1)),
    _local("local/u-gradm", "u", "m", "dot-grad", _b("u", **_S1), _b("m", **_S1)),
    _local("local/u-gradu", "u", "u", "dot-grad", _sup("grad u"), _b("u", **_S1)),
    _time("ut-gradm", "ut", "m", "dot-grad", _b("ut", -1), _b("grad m", -1)),
    _time("u-gradmt", "u", "mt", "dot-grad", _b("u"), _b("mt", -1)),
    _time("ut-gradu", "ut", "u", "dot-grad", _b("ut", -1), _b("u")),
    _time("u-gradut", "u", "ut", "dot-grad", _b("u"), _b("ut", -1)),
    _time("mt-divu", "mt", "u", "div", _b("mt", -1), _b("u")),
    _time("m-divut", "m", "ut", "div", _b("m"), _b("ut", -1)),
    _time("mt-gradm", "mt", "m", "grad", _b("mt", -1), _b("grad m", -1)),
    _time("m-gradmt", "m", "mt", "grad", _b("m"), _b("mt", -1)),
    _high("high/u-gradu", "u", "u", "dot-grad", _b("u"), _b("grad u", -1)),
    _high("high/m-gradm", "m", "m", "grad", _b("grad m", -1), _b("m")),
    _high("high/u-gradm", "u", "m", "dot-grad", _b("u"), _b("m")),
    _high("low/u-gradm", "u", "m", "dot-grad", _b("u"), _b("grad m", -1), low_only=True),
    _high("high/m-divu", "m", "u", "div", _b("m"), _b("u")),
    _high("low/m-divu", "m", "u", "div", _b("m"), _b("u"), low_only=True),
]}


@dataclass
class CommutatorScanReport:
    variant: str
    c_q: list[float]
    block_norms: list[float]
    normalization: dict[str, float]
    summary: str
    statistic: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def scan_fields(s: State, params: PhysicalParams) -> dict[str, AnyField]:
    """The four fields the variants draw from: ``m``, ``u`` and their time derivatives."""
    ut = time_derivative_state(s, params)
    return {"m": s.m, "u": s.u, "mt": ut.m, "ut": ut.u}


def _derived(fields: dict[str, AnyField], key: str) -> AnyField:
    if key in fields:
        return fields[key]
    if key == "grad m":
        return spectral_gradient(fields["m"])
    if key == "grad u":
        return gradient_tensor(fields["u"])
    raise KeyError(key)


def _commutator(part: DyadicPartition, f: Field, g: Field, q: int, dealiased: bool) -> Field:
    return (multiply(f, dyadic_block(part, g, q), dealiased)
            - dyadic_block(part, multiply(f, g, dealiased), q))


def bracket(part: DyadicPartition, variant: Variant, fields: dict[str, AnyField], q: int,
            dealiased: bool = False) -> AnyField:
    """The commutator of ``variant`` at block ``q``."""
    f, g = fields[variant.left], fields[variant.right]
    if variant.op == "div":
        return _commutator(part, f, divergence(g), q, dealiased)
    if variant.op == "grad":
        return VectorField([_commutator(part, f, d, q, dealiased)
                            for d in spectral_gradient(g)])
    if variant.op == "dot-grad":
        targets = list(g) if isinstance(g, VectorField) else [g]
        comps = []
        for h in targets:
            acc = Field.zeros(part.grid)
            for j, uj in enumerate(f):
                acc = acc + _commutator(part, uj, partial(h, j), q, dealiased)
            comps.append(acc)
        return comps[0] if len(comps) == 1 else VectorField(comps)
    raise ValueError(f"unknown bracket operator {variant.op!r}")


def normalization(part: DyadicPartition, variant: Variant, fields: dict[str, AnyField],
                  sigma: float, eps: float) -> dict[str, float]:
    out = {}
    for n in variant.norms:
        f = _derived(fields, n.field)
        if n.kind == "sup":
            out[n.label()] = f.sup()
        else:
            out[n.label()] = besov_from_blocks(block_l2_norms(part, f),
                                               n.smoothness(sigma, eps), n.r)
    return out


def commutator_scan(part: DyadicPartition, fields: dict[str, AnyField], variant: str,
                    sigma: float | None = None, eps: float = EPS,
                    dealiased: bool = False) -> CommutatorScanReport:
    """``c_q = weight_q ||bracket_q|| / (product of the variant's two norms)``.

    Products are exact (not dealiased) by default; inputs are expected to be
    band-limited well inside the grid so this is alias-free.
    """
    if variant not in VARIANTS:
        raise KeyError(f"unknown commutator variant {variant!r}; known: {sorted(VARIANTS)}")
    v = VARIANTS[variant]
    dim = part.grid.dim
    if sigma is None:
        sigma = 1.0 + dim / 2.0
    if v.low_only and dim <= 2:
        raise ValueError(f"variant {variant} needs dimension > 2")
    norms = normalization(part, v, fields, sigma, eps)
    denom = math.prod(norms.values())
    if not denom > 0:
        raise ValueError(f"variant {variant}: zero-norm input ({norms})")
    w = v.weight_smoothness(sigma, eps)
    qs = [-1] if v.low_only else list(part.indices)
    p = 2.0 * dim / (dim + 2) if v.low_only else 2.0
    block = [lp_norm(bracket(part, v, fields, q, dealiased), p) for q in qs]
    c = [2.0 ** (q * w) * b / denom for q, b in zip(qs, block)]
    arr = np.asarray(c)
    stat = float(arr.sum()) if v.summary == "l1" else float(np.sqrt(np.sum(arr**2)))
    return CommutatorScanReport(variant, [float(x) for x in c], [float(x) for x in block],
                                norms, v.summary, stat)


def scan_all(part: DyadicPartition, fields: dict[str, AnyField], sigma: float | None = None,
             eps: float = EPS, variants=None) -> dict[str, CommutatorScanReport]:
    names = list(VARIANTS) if variants is None else list(variants)
    if part.grid.dim <= 2:
        names = [n for n in names if not VARIANTS[n].low_only]
    return {n: commutator_scan(part, fields, n, sigma, eps) for n in names}
