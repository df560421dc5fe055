"""
Continuous hopping profiles J(x) on [0, 1] and their lattice samplings.

A profile plays the role of the space-time metric: site ``i`` of an
``N``-site chain sits at ``x = i/N`` and link ``i`` (between sites ``i``
and ``i+1``) carries the hopping ``J(i/N)``.

Built-in kinds
--------------
minkowski   J(x) = 1
rindler     J(x) = c + x,                c >= 0
sine        J(x) = J0 + J1 cos(2 pi x),  J0 > 0, |J1| < J0
rainbow     J(x) = exp(-h |x - 1/2|),    h >= 0
custom      monotone-cubic interpolation of a positive (x, J) table
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ValidationError

KINDS = ("minkowski", "rindler", "sine", "rainbow", "custom")

_FD_STEP = 1e-5


class Derivatives(tuple):
    """``(J, J', J'')`` triple with a ``kink`` flag.

    Unpacks like a plain 3-tuple. ``kink`` is True when the point sits on a
    derivative discontinuity and the reported derivatives are averages of
    the one-sided limits.
    """

    def __new__(cls, value, first, second, kink=False):
        self = super().__new__(cls, (value, first, second))
        self.kink = kink
        return self


@dataclass(frozen=True)
class HoppingProfile:
    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    table: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown profile kind {self.kind!r}")
        params = {k: float(v) for k, v in dict(self.params).items()}
        object.__setattr__(self, "params", params)
        if self.kind == "rindler":
            if params.setdefault("c", 0.0) < 0:
                raise ValidationError("rindler offset c must be >= 0")
        elif self.kind == "sine":
            J0 = params.setdefault("J0", 1.0)
            J1 = params.setdefault("J1", 0.5)
            if J0 <= 0 or abs(J1) >= J0:
                raise ValidationError("sine profile needs J0 > 0 and |J1| < J0")
        elif self.kind == "rainbow":
            if params.setdefault("h", 0.0) < 0:
                raise ValidationError("rainbow h must be >= 0")
        elif self.kind == "custom":
            self._init_table()

    def _init_table(self):
        if self.table is None:
            raise ValidationError("custom profile needs an (x, J) table")
        x, J = (np.asarray(a, dtype=float) for a in self.table)
        if x.ndim != 1 or x.shape != J.shape or x.size < 2:
            raise ValidationError("custom table must be two equal-length columns")
        if np.any(np.diff(x) <= 0):
            raise ValidationError("custom table x must be strictly increasing")
        if not (np.isclose(x[0], 0.0) and np.isclose(x[-1], 1.0)):
            raise ValidationError("custom table must span [0, 1]")
        if np.any(J <= 0):
            raise ValidationError("custom table J must be strictly positive")
        x[0], x[-1] = 0.0, 1.0
        x.setflags(write=False)
        J.setflags(write=False)
        object.__setattr__(self, "table", (x, J))
        interp = PchipInterpolator(x, J, extrapolate=False)
        object.__setattr__(self, "_interp", interp)
        dense = interp(np.linspace(0.0, 1.0, 10_001))
        if not np.all(dense > 0):
            raise ValidationError("custom profile is not positive on [0, 1]")

    @property
    def kinks(self):
        """Interior points where J is not differentiable."""
        if self.kind == "rainbow" and self.params["h"] > 0:
            return (0.5,)
        return ()

    @property
    def label(self):
        """Filesystem-friendly identifier, e.g. ``rainbow_h4``."""
        if self.kind in ("minkowski", "custom"):
            return self.kind
        parts = [self.kind] + [f"{k}{_fmt(v)}" for k, v in sorted(self.params.items())]
        return "_".join(parts)


def _fmt(v):
    return f"{v:g}"


def minkowski():
    return HoppingProfile("minkowski")


def rindler(c=0.0):
    return HoppingProfile("rindler", {"c": c})


def sine(J0=1.0, J1=0.5):
    return HoppingProfile("sine", {"J0": J0, "J1": J1})


def rainbow(h):
    return HoppingProfile("rainbow", {"h": h})


def custom(x, J):
    return HoppingProfile("custom", table=(np.array(x, dtype=float), np.array(J, dtype=float)))


def load_custom_csv(path):
    """Read a two-column ``x, J`` CSV (header optional) into a custom profile."""
    xs, Js = [], []
    with open(Path(path), newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                xs.append(float(row[0]))
                Js.append(float(row[1]))
            except ValueError:
                if xs:
                    raise ValidationError(f"bad row in {path}: {row}") from None
    return custom(xs, Js)


def from_config(block):
    """Build a profile from a ``{kind: ..., <param>: ...}`` mapping."""
    block = dict(block)
    kind = block.pop("kind", None)
    if kind == "custom":
        if "csv" in block:
            return load_custom_csv(block["csv"])
        return custom(block["x"], block["J"])
    if kind is None:
        raise ValidationError("profile block needs a 'kind'")
    return HoppingProfile(kind, block)


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("profile evaluated outside [0, 1]")
    return x


def eval_profile(profile: HoppingProfile, x):
    """Evaluate J(x). Accepts scalars or arrays; ``x`` must lie in [0, 1]."""
    x = _check_domain(x)
    p = profile.params
    kind = profile.kind
    if kind == "minkowski":
        out = np.ones_like(x)
    elif kind == "rindler":
        out = p["c"] + x
    elif kind == "sine":
        out = p["J0"] + p["J1"] * np.cos(2 * np.pi * x)
    elif kind == "rainbow":
        out = np.exp(-p["h"] * np.abs(x - 0.5))
    else:
        out = profile._interp(x)
    return out if out.ndim else float(out)


def eval_derivatives(profile: HoppingProfile, x: float) -> Derivatives:
    """Return ``(J, J', J'')`` at a scalar point.

    Built-in kinds use closed forms. Custom tables use centred finite
    differences with step 1e-5, shifted inward near the domain edges.
    At the rainbow kink the one-sided first derivatives are averaged
    (giving 0) and the result carries ``kink=True``.
    """
    x = float(_check_domain(x))
    p = profile.params
    kind = profile.kind
    if kind == "minkowski":
        return Derivatives(1.0, 0.0, 0.0)
    if kind == "rindler":
        return Derivatives(p["c"] + x, 1.0, 0.0)
    if kind == "sine":
        w = 2 * np.pi
        J0, J1 = p["J0"], p["J1"]
        return Derivatives(
            J0 + J1 * np.cos(w * x), -w * J1 * np.sin(w * x), -w * w * J1 * np.cos(w * x)
        )
    if kind == "rainbow":
        h = p["h"]
        J = float(np.exp(-h * abs(x - 0.5)))
        if x == 0.5:
            return Derivatives(J, 0.0, h * h * J, kink=h > 0)
        s = 1.0 if x > 0.5 else -1.0
        return Derivatives(J, -h * s * J, h * h * J)

    step = _FD_STEP
    c = min(max(x, step), 1.0 - step)
    f = profile._interp
    lo, mid, hi = (float(v) for v in f(np.array([c - step, c, c + step])))
    J = float(f(x))
    return Derivatives(J, (hi - lo) / (2 * step), (hi - 2 * mid + lo) / step**2)


def sample_chain(profile: HoppingProfile, N: int) -> np.ndarray:
    """Hoppings ``J(i/N)`` for links ``i = 1..N-1`` of an ``N``-site chain."""
    if int(N) != N or N < 2 or N % 2:
        raise DomainError(f"chain length must be an even integer >= 2, got {N}")
    N = int(N)
    i = np.arange(1, N)
    if profile.kind == "rainbow":
        # integer distance to the centre keeps the sampling exactly palindromic
        J = np.exp(-profile.params["h"] * (np.abs(2 * i - N) / (2 * N)))
    else:
        J = np.asarray(eval_profile(profile, i / N), dtype=float)
    if np.any(J <= 0):
        raise ValidationError("sampled hoppings must be positive")
    return J
