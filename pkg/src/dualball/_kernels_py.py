"""Pure-Python evaluation kernels (arbitrary-precision reference path).

These are the semantic reference for the optional compiled kernels in
``_speedups``: same inputs, bit-identical outputs, including the lattice
sweep order of ``certify_sweep``.
"""

from __future__ import annotations


def eval_int(prog, x) -> int:
    """Evaluate a compiled seminorm program at an integer point."""
    stack = []
    for op, arg in prog.ops:
        if op == "leaf":
            transform, kind, data = prog.leaves[arg]
            u = x if transform is None else [
                sum(a * b for a, b in zip(row, x)) for row in transform
            ]
            if kind == 0:  # weighted l1
                v = sum(a * abs(c) for a, c in zip(data, u))
            elif kind == 1:  # weighted linf
                v = max(a * abs(c) for a, c in zip(data, u))
            else:  # vertices: max |<u, p>| over generators
                v = max(abs(sum(a * b for a, b in zip(u, p))) for p in data)
            stack.append(v)
        elif op == "add":
            s = 0
            for _ in range(arg):
                s += stack.pop()
            stack.append(s)
        else:  # max
            m = stack.pop()
            for _ in range(arg - 1):
                c = stack.pop()
                if c > m:
                    m = c
            stack.append(m)
    return stack[0]


def support_int(points, x):
    """Max of <x, p> over integer points, with all attaining indices."""
    best = None
    argmax = []
    for i, p in enumerate(points):
        v = sum(a * b for a, b in zip(x, p))
        if best is None or v > best:
            best = v
            argmax = [i]
        elif v == best:
            argmax.append(i)
    return best, argmax


def sweep_order(dim, radius):
    """Lattice ball sweep: shells of increasing max-norm, descending
    lexicographic within each shell. Yields tuples."""
    import itertools

    for m in range(radius + 1):
        for x in itertools.product(range(m, -m - 1, -1), repeat=dim):
            if max(abs(c) for c in x) == m:
                yield x


def certify_sweep(prog, points, radius):
    """Compare oracle value and support over the lattice ball.

    Returns (ok, checked_count, counterexample) where the counterexample is
    (x, oracle_value, support_value) at the first mismatch in sweep order.
    """
    checked = 0
    for x in sweep_order(prog.dim, radius):
        checked += 1
        nval = eval_int(prog, x)
        sval, _ = support_int(points, x)
        if nval != sval:
            return False, checked, (x, nval, sval)
    return True, checked, None
