"""
## Test signals on [-1, 1] for projection experiments.

Importables
    SignalKind, Signal
    sinc_signal           sin(ax)/(ax)
    bessel_kernel_signal  c K_alpha(cx), band-limited with transform ω_alpha(t/c) on [-c, c]
    sobolev_signal        Σ_{k<=kmax} X_k k^{-s} cos(k pi x), X_k from gpswf_core.rng
    user_samples          piecewise-linear interpolant of (x, value) samples
    load_user_samples     same, from a two-column CSV
    parse_signal_spec     "sinc:a=40" | "kernel" | "sobolev:s=1.0,seed=42,kmax=1000" | "file:PATH"

A Signal also carries `bandwidth`, the highest angular frequency it contains (used to size
quadrature rules), and `parity` when it is known to be even or odd.

*Tested by: tests/test_signals.py*
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gpswf_core.errors import DomainError
from gpswf_core.rng import standard_normals
from gpswf_core.specfun import kernel_K

# sample grids are assumed to resolve features at about this many points per unit length
_SAMPLE_BANDWIDTH_FACTOR = 0.5


class SignalKind(StrEnum):
    SINC = "sinc"
    BESSEL_KERNEL = "bessel_kernel"
    SOBOLEV = "sobolev"
    USER_SAMPLES = "user_samples"


@dataclass(frozen=True)
class Signal:
    """A real function on [-1, 1] with the parameters that produced it."""

    kind: SignalKind
    params: dict[str, Any]
    bandwidth: float
    parity: Literal["even", "odd"] | None
    func: Callable[[NDArray[np.float64]], NDArray[np.float64]] = field(repr=False)

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        xx = np.asarray(x, dtype=np.float64)
        if np.any(~(np.abs(xx) <= 1.0)):
            raise DomainError("signals are defined on [-1, 1]")
        return self.func(xx)

    @property
    def label(self) -> str:
        if not self.params:
            return self.kind.value
        body = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind.value}:{body}"


def sinc_signal(a: float) -> Signal:
    """f(x) = sin(ax)/(ax) with f(0) = 1."""
    if not a > 0.0:
        raise DomainError(f"sinc width must be > 0, got {a}")
    return Signal(
        kind=SignalKind.SINC,
        params={"a": a},
        bandwidth=a,
        parity="even",
        func=lambda x: np.sinc(a * x / np.pi),
    )


def bessel_kernel_signal(alpha: float, c: float) -> Signal:
    """g(x) = c K_alpha(cx); g(0) = c ∫ω_alpha."""
    if alpha <= -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")
    if not c > 0.0:
        raise DomainError(f"c must be > 0, got {c}")
    return Signal(
        kind=SignalKind.BESSEL_KERNEL,
        params={"alpha": alpha, "c": c},
        bandwidth=c,
        parity="even",
        func=lambda x: c * np.asarray(kernel_K(alpha, c * x)),
    )


def sobolev_signal(s: float, seed: int, kmax: int) -> Signal:
    """B_s(x) = Σ_{k=1}^{kmax} X_k k^{-s} cos(k pi x); X_k the k-th normal of the seeded stream."""
    if kmax < 1:
        raise DomainError(f"kmax must be >= 1, got {kmax}")
    k = np.arange(1, kmax + 1, dtype=np.float64)
    amplitudes = standard_normals(seed, kmax) * k**-s
    freqs = np.pi * k

    def func(x: NDArray[np.float64]) -> NDArray[np.float64]:
        flat = x.reshape(-1)
        out = np.cos(np.outer(flat, freqs)) @ amplitudes
        return out.reshape(x.shape)

    return Signal(
        kind=SignalKind.SOBOLEV,
        params={"s": s, "seed": seed, "kmax": kmax},
        bandwidth=float(freqs[-1]),
        parity="even",
        func=func,
    )


def user_samples(x: ArrayLike, values: ArrayLike, *, source: str = "") -> Signal:
    """
    Linear interpolation through samples (x_i, v_i), x_i in [-1, 1]. Points outside the
    sampled range take the nearest end value.
    """
    xs = np.asarray(x, dtype=np.float64).reshape(-1)
    vs = np.asarray(values, dtype=np.float64).reshape(-1)
    if xs.size != vs.size or xs.size < 2:
        raise DomainError("user samples need at least two (x, value) pairs")
    if np.any(~(np.abs(xs) <= 1.0)) or not np.all(np.isfinite(vs)):
        raise DomainError("user samples need x in [-1, 1] and finite values")
    order = np.argsort(xs, kind="stable")
    xs, vs = xs[order], vs[order]
    if np.any(np.diff(xs) <= 0.0):
        raise DomainError("user sample abscissae must be distinct")
    spacing = float(np.min(np.diff(xs)))
    return Signal(
        kind=SignalKind.USER_SAMPLES,
        params={"path": source} if source else {},
        bandwidth=_SAMPLE_BANDWIDTH_FACTOR * math.pi / spacing,
        parity=None,
        func=lambda t: np.interp(t, xs, vs),
    )


def load_user_samples(path: Path) -> Signal:
    """Two-column CSV (x, value); a header row and '#' comments are skipped."""
    if not path.is_file():
        raise FileNotFoundError(f"sample file not found: {path}")
    data = np.genfromtxt(path, delimiter=",", comments="#", dtype=np.float64, ndmin=2)
    if data.shape[1] != 2:
        raise DomainError(f"{path}: expected two columns (x, value), got {data.shape[1]}")
    data = data[np.all(np.isfinite(data), axis=1)]
    return user_samples(data[:, 0], data[:, 1], source=str(path))


def _parse_fields(body: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for part in filter(None, body.split(",")):
        key, sep, value = part.partition("=")
        if not sep or not key.strip():
            raise DomainError(f"malformed signal field {part!r} (expected key=value)")
        fields[key.strip()] = value.strip()
    return fields


def parse_signal_spec(spec: str, *, alpha: float, c: float, seed: int | None = None) -> Signal:
    """
    Build a Signal from its one-token description. `seed` replaces the sobolev default seed
    (a seed written in the token still wins).

        sinc:a=40                           (a defaults to 40)
        kernel                              c K_alpha(c x) for the family's alpha, c
        sobolev:s=1.0,seed=42,kmax=1000     (these are the defaults)
        file:PATH                           two-column CSV
    """
    name, _, body = spec.partition(":")
    name = name.strip()
    if name == "file":
        if not body:
            raise DomainError("file: signal needs a path")
        return load_user_samples(Path(body))
    fields = _parse_fields(body)
    try:
        if name == "sinc":
            _only(fields, {"a"}, spec)
            return sinc_signal(float(fields.get("a", "40")))
        if name == "kernel":
            _only(fields, set(), spec)
            return bessel_kernel_signal(alpha, c)
        if name == "sobolev":
            _only(fields, {"s", "seed", "kmax"}, spec)
            return sobolev_signal(
                float(fields.get("s", "1.0")),
                int(fields.get("seed", str(42 if seed is None else seed))),
                int(fields.get("kmax", "1000")),
            )
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError(f"bad number in signal spec {spec!r}: {e}") from e
    raise DomainError(f"unknown signal kind {name!r} (sinc, kernel, sobolev, file)")


def _only(fields: dict[str, str], allowed: set[str], spec: str) -> None:
    extra = sorted(set(fields) - allowed)
    if extra:
        raise DomainError(f"unknown field(s) {extra} in signal spec {spec!r}")
