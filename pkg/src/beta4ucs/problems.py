"""Synthetic benchmark generators over the unit hypercube.

Each generator draws uniform samples from [0,1]^d and labels them with a
deterministic rule.  Bit-style problems binarize every coordinate at 0.5
(bit = 1 iff x >= 0.5).  The rotated checkerboard ignores the sample
count and emits its full 101x101 evaluation grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset


@dataclass(frozen=True)
class ProblemSpec:
    """Named benchmark plus its size parameters."""

    kind: str
    n_bits: int = 0
    dims: int = 3
    divisions: int = 5
    blocks: int = 3
    block_bits: int = 3
    grid: int = 101
    stripe_width: float = 0.5

    def __post_init__(self):
        if self.kind not in ("mux", "chk", "cmx", "maj", "carry", "rchk"):
            raise ValueError(f"unknown problem kind {self.kind!r}")
        if self.kind == "mux":
            k = _mux_address_bits(self.n_bits)
            if k is None:
                raise ValueError("multiplexer size must be k + 2^k for integer k")
        if self.kind == "carry" and (self.n_bits < 2 or self.n_bits % 2):
            raise ValueError("carry size must be a positive even number")
        if self.kind == "maj" and self.n_bits < 1:
            raise ValueError("majority size must be positive")
        if self.kind == "chk" and (self.dims < 1 or self.divisions < 1):
            raise ValueError("checkerboard needs positive dims and divisions")
        if self.kind == "cmx":
            if _mux_address_bits(self.block_bits) is None:
                raise ValueError("block size must be k + 2^k for integer k")
            if self.blocks < 1:
                raise ValueError("need at least one block")

    @property
    def n_dims(self) -> int:
        if self.kind in ("mux", "maj", "carry"):
            return self.n_bits
        if self.kind == "chk":
            return self.dims
        if self.kind == "cmx":
            return self.blocks * self.block_bits
        return 2

    @property
    def n_classes(self) -> int:
        if self.kind == "cmx":
            return 2 ** self.blocks
        return 2


def _mux_address_bits(n: int) -> int | None:
    for k in range(1, 16):
        if k + 2 ** k == n:
            return k
    return None


def _bits(x: np.ndarray) -> np.ndarray:
    return (x >= 0.5).astype(np.int64)


def label_multiplexer(x: np.ndarray, n_bits: int) -> np.ndarray:
    """Selected data bit; address bits come first, most significant first."""
    k = _mux_address_bits(n_bits)
    b = _bits(x)
    addr = np.zeros(len(x), dtype=np.int64)
    for i in range(k):
        addr = addr * 2 + b[:, i]
    return b[np.arange(len(x)), k + addr]


def label_checkerboard(x: np.ndarray, divisions: int, eps: float = 1e-9) -> np.ndarray:
    """Parity of the cell-index sum; the top edge folds into the last cell."""
    cells = np.floor(np.minimum(x, 1.0 - eps) * divisions).astype(np.int64)
    return cells.sum(axis=1) % 2


def label_concat_multiplexer(x: np.ndarray, blocks: int, block_bits: int) -> np.ndarray:
    """Concatenation of per-block multiplexer outputs, first block most
    significant."""
    out = np.zeros(len(x), dtype=np.int64)
    for b in range(blocks):
        seg = x[:, b * block_bits:(b + 1) * block_bits]
        out = out * 2 + label_multiplexer(seg, block_bits)
    return out


def label_majority(x: np.ndarray, n_bits: int) -> np.ndarray:
    return (_bits(x).sum(axis=1) * 2 > n_bits).astype(np.int64)


def label_carry(x: np.ndarray, n_bits: int) -> np.ndarray:
    """Carry-out of adding the two (n_bits/2)-bit operands, MSB first."""
    half = n_bits // 2
    b = _bits(x)
    a = np.zeros(len(x), dtype=np.int64)
    c = np.zeros(len(x), dtype=np.int64)
    for i in range(half):
        a = a * 2 + b[:, i]
        c = c * 2 + b[:, half + i]
    return (a + c >= 2 ** half).astype(np.int64)


def label_rotated_checkerboard(x: np.ndarray, stripe_width: float = 0.5) -> np.ndarray:
    """Parity of the stripe indices after rotating -45 degrees about the
    center, which yields diagonal stripes of the given width."""
    theta = -math.pi / 4.0
    cx = x[:, 0] - 0.5
    cy = x[:, 1] - 0.5
    u = math.cos(theta) * cx - math.sin(theta) * cy + 0.5
    v = math.sin(theta) * cx + math.cos(theta) * cy + 0.5
    w = stripe_width
    return ((np.floor(u / w) + np.floor(v / w)).astype(np.int64)) % 2


def label(spec: ProblemSpec, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != spec.n_dims:
        raise ValueError(f"expected {spec.n_dims}-dimensional inputs")
    if spec.kind == "mux":
        return label_multiplexer(x, spec.n_bits)
    if spec.kind == "chk":
        return label_checkerboard(x, spec.divisions)
    if spec.kind == "cmx":
        return label_concat_multiplexer(x, spec.blocks, spec.block_bits)
    if spec.kind == "maj":
        return label_majority(x, spec.n_bits)
    if spec.kind == "carry":
        return label_carry(x, spec.n_bits)
    return label_rotated_checkerboard(x, spec.stripe_width)


def generate(spec: ProblemSpec, n_samples: int, seed: int) -> Dataset:
    """Uniform labeled samples; the rotated checkerboard always returns
    its full evaluation grid instead."""
    if spec.kind == "rchk":
        g = spec.grid
        ticks = np.arange(g) / (g - 1)
        xx, yy = np.meshgrid(ticks, ticks, indexing="ij")
        X = np.column_stack([xx.ravel(), yy.ravel()])
    else:
        if n_samples < 1:
            raise ValueError("n_samples must be positive")
        rng = np.random.default_rng(seed)
        X = rng.random((n_samples, spec.n_dims))
    y = label(spec, X)
    class_names = [str(c) for c in range(spec.n_classes)]
    return Dataset(X, y, class_names=class_names)


def parse_problem(name: str) -> ProblemSpec:
    """Map a short problem name like ``mux20`` or ``chk3x5`` to its spec."""
    name = name.strip().lower()
    if name.startswith("mux"):
        return ProblemSpec("mux", n_bits=int(name[3:] or 20))
    if name.startswith("chk"):
        body = name[3:] or "3x5"
        dims, divisions = (int(t) for t in body.split("x"))
        return ProblemSpec("chk", dims=dims, divisions=divisions)
    if name.startswith("cmx"):
        body = name[3:] or "3x3"
        blocks, block_bits = (int(t) for t in body.split("x"))
        return ProblemSpec("cmx", blocks=blocks, block_bits=block_bits)
    if name.startswith("maj"):
        return ProblemSpec("maj", n_bits=int(name[3:] or 11))
    if name.startswith("carry"):
        return ProblemSpec("carry", n_bits=int(name[5:] or 12))
    if name in ("rchk", "rotated"):
        return ProblemSpec("rchk")
    raise ValueError(f"unknown problem name {name!r}")
