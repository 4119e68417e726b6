# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels. Callers guarantee (via an exact precomputed
bound) that no intermediate value can overflow; overflow is therefore a
caller bug, not a runtime concern here."""

from cpython cimport array
import array


cdef long long _iabs(long long v) nogil:
    return -v if v < 0 else v


cdef class PackedProgram:
    cdef long long[::1] ops
    cdef long long[::1] kinds
    cdef long long[::1] ms
    cdef long long[::1] mat_off
    cdef long long[::1] mat
    cdef long long[::1] dat_off
    cdef long long[::1] dat_cnt
    cdef long long[::1] dat
    cdef long long[::1] stack
    cdef long long[::1] scratch
    cdef public int dim
    cdef int n_ops

    def __init__(self, dim, ops, kinds, ms, mat_off, mat, dat_off, dat_cnt, dat,
                 stack_peak):
        self.dim = dim
        self.ops = ops
        self.kinds = kinds
        self.ms = ms
        self.mat_off = mat_off
        self.mat = array.array('q', mat) if len(mat) else array.array('q', [0])
        self.dat_off = dat_off
        self.dat_cnt = dat_cnt
        self.dat = array.array('q', dat) if len(dat) else array.array('q', [0])
        self.stack = array.array('q', [0] * max(1, stack_peak))
        cdef long long max_m = dim
        cdef Py_ssize_t i
        for i in range(len(ms)):
            if ms[i] > max_m:
                max_m = ms[i]
        self.scratch = array.array('q', [0] * max_m)
        self.n_ops = len(ops) // 2

    cdef long long eval(self, long long* x) nogil:
        cdef Py_ssize_t sp = 0, i, j, r, c
        cdef long long op, arg, kind, m, off, cnt, v, acc, best
        cdef long long* u
        for i in range(self.n_ops):
            op = self.ops[2 * i]
            arg = self.ops[2 * i + 1]
            if op == 0:  # leaf
                kind = self.kinds[arg]
                m = self.ms[arg]
                off = self.mat_off[arg]
                if off < 0:
                    u = x
                else:
                    for r in range(m):
                        acc = 0
                        for c in range(self.dim):
                            acc += self.mat[off + r * self.dim + c] * x[c]
                        self.scratch[r] = acc
                    u = &self.scratch[0]
                off = self.dat_off[arg]
                cnt = self.dat_cnt[arg]
                if kind == 0:  # weighted l1
                    v = 0
                    for j in range(m):
                        v += self.dat[off + j] * _iabs(u[j])
                elif kind == 1:  # weighted linf
                    v = 0
                    for j in range(m):
                        acc = self.dat[off + j] * _iabs(u[j])
                        if j == 0 or acc > v:
                            v = acc
                else:  # vertices
                    v = 0
                    for r in range(cnt):
                        acc = 0
                        for j in range(m):
                            acc += self.dat[off + r * m + j] * u[j]
                        acc = _iabs(acc)
                        if acc > v:
                            v = acc
                self.stack[sp] = v
                sp += 1
            elif op == 1:  # add
                acc = 0
                for j in range(arg):
                    sp -= 1
                    acc += self.stack[sp]
                self.stack[sp] = acc
                sp += 1
            else:  # max
                sp -= 1
                best = self.stack[sp]
                for j in range(arg - 1):
                    sp -= 1
                    if self.stack[sp] > best:
                        best = self.stack[sp]
                self.stack[sp] = best
                sp += 1
        return self.stack[0]


def eval_point(PackedProgram prog, x):
    cdef array.array xa = x
    cdef long long[::1] xv = xa
    return prog.eval(&xv[0])


def support_point(verts, Py_ssize_t n, Py_ssize_t d, x):
    cdef array.array va = verts
    cdef array.array xa = x
    cdef long long[::1] vv = va
    cdef long long[::1] xv = xa
    cdef long long best = 0, v
    cdef Py_ssize_t i, j
    cdef bint have = False
    argmax = []
    for i in range(n):
        v = 0
        for j in range(d):
            v += vv[i * d + j] * xv[j]
        if not have or v > best:
            best = v
            have = True
            argmax = [i]
        elif v == best:
            argmax.append(i)
    return best, argmax


def certify_sweep(PackedProgram prog, verts, Py_ssize_t n, long long radius):
    """Shells of increasing max-norm, descending lex inside each shell;
    identical order to the pure-Python twin."""
    cdef array.array va = verts
    cdef long long[::1] vv = va
    cdef Py_ssize_t d = prog.dim
    cdef array.array xa = array.array('q', [0] * d)
    cdef long long[::1] x = xa
    cdef long long m, nval, sval, v, checked = 0
    cdef Py_ssize_t i, j
    cdef bint inner, done
    for m in range(radius + 1):
        for j in range(d):
            x[j] = m
        done = False
        while not done:
            inner = True
            for j in range(d):
                if x[j] == m or x[j] == -m:
                    inner = False
                    break
            if not inner:
                checked += 1
                nval = prog.eval(&x[0])
                sval = 0
                for i in range(n):
                    v = 0
                    for j in range(d):
                        v += vv[i * d + j] * x[j]
                    if i == 0 or v > sval:
                        sval = v
                if nval != sval:
                    return False, checked, (tuple(xa), nval, sval)
            # descending-lex odometer step over [-m, m]^d
            j = d - 1
            while j >= 0 and x[j] == -m:
                x[j] = m
                j -= 1
            if j < 0:
                done = True
            else:
                x[j] -= 1
    return True, checked, None
