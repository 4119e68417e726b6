"""Kernel selection: compiled extension when available, pure Python otherwise.

The compiled path runs in int64 and is entered only when an exact,
precomputed bound proves that no intermediate can reach 2^62, so both
paths return bit-identical arbitrary-precision results. Set DUALBALL_PURE=1
to force the pure path.
"""

from __future__ import annotations

import os
from array import array

from . import _kernels_py

try:
    from . import _speedups
except ImportError:  # extension not built; pure fallback
    _speedups = None

HAVE_SPEEDUPS = _speedups is not None
_active = None if os.environ.get("DUALBALL_PURE") else _speedups

INT64_GUARD = 2**62

_MISSING = object()


def active_kernel() -> str:
    return "compiled" if _active is not None else "pure"


def _packed(prog):
    """Lazily build (and cache) the flat int64 form of a compiled program.

    Returns None when the program's constants do not fit in int64; the
    caller then stays on the pure path forever.
    """
    cached = getattr(prog, "_packed_cache", _MISSING)
    if cached is not _MISSING:
        return cached
    packed = None
    if _speedups is not None:
        try:
            ops = array("q")
            for op, arg in prog.ops:
                ops.append({"leaf": 0, "add": 1, "max": 2}[op])
                ops.append(arg)
            kinds = array("q")
            ms = array("q")
            mat_off = array("q")
            dat_off = array("q")
            dat_cnt = array("q")
            mat = array("q")
            dat = array("q")
            for transform, kind, data in prog.leaves:
                kinds.append(kind)
                if transform is None:
                    ms.append(prog.dim)
                    mat_off.append(-1)
                else:
                    ms.append(len(transform))
                    mat_off.append(len(mat))
                    for row in transform:
                        mat.extend(row)
                dat_off.append(len(dat))
                if kind == 2:  # vertices: data rows are points
                    dat_cnt.append(len(data))
                    for p in data:
                        dat.extend(p)
                else:
                    dat_cnt.append(len(data))
                    dat.extend(data)
            depth = 0
            peak = 1
            for op, arg in prog.ops:
                depth += 1 if op == "leaf" else 1 - arg
                peak = max(peak, depth)
            packed = _speedups.PackedProgram(
                prog.dim, ops, kinds, ms, mat_off, mat, dat_off, dat_cnt, dat, peak
            )
        except OverflowError:
            packed = None
    object.__setattr__(prog, "_packed_cache", packed)
    return packed


def eval_int(prog, x) -> int:
    """N(x) for integer x via the active kernel; exact in all cases."""
    if _active is not None:
        mx = max(abs(c) for c in x)
        if prog.unit_bound * mx < INT64_GUARD:
            packed = _packed(prog)
            if packed is not None:
                return _speedups.eval_point(packed, array("q", x))
    return _kernels_py.eval_int(prog, x)


class PointTable:
    """Integer point set prepared for fast support queries."""

    def __init__(self, points):
        self.points = tuple(tuple(int(c) for c in p) for p in points)
        self.dim = len(self.points[0]) if self.points else 0
        self.max_abs = max((abs(c) for p in self.points for c in p), default=0)
        self._flat = None
        if _speedups is not None and self.points:
            try:
                self._flat = array("q", [c for p in self.points for c in p])
            except OverflowError:
                self._flat = None

    def support(self, x):
        """(max <x,p>, attaining indices) over the table's points."""
        if (
            _active is not None
            and self._flat is not None
            and self.dim
            and self.dim * self.max_abs * max((abs(c) for c in x), default=0)
            < INT64_GUARD
        ):
            return _speedups.support_point(
                self._flat, len(self.points), self.dim, array("q", x)
            )
        return _kernels_py.support_int(self.points, x)


def certify_sweep(prog, table: PointTable, radius: int):
    """Sweep the lattice ball comparing oracle and support values."""
    if (
        _active is not None
        and table._flat is not None
        and prog.unit_bound * radius < INT64_GUARD
        and prog.dim * table.max_abs * radius < INT64_GUARD
    ):
        packed = _packed(prog)
        if packed is not None:
            ok, checked, cx = _speedups.certify_sweep(
                packed, table._flat, len(table.points), radius
            )
            return ok, checked, cx
    return _kernels_py.certify_sweep(prog, table.points, radius)
