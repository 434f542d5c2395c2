"""Finite differences on bounded axes and batched tridiagonal solves."""

import numpy as np


def diff4(f, h, axis):
    """Fourth-order first derivative along a bounded axis.

    Centered five-point stencil in the interior, one-sided
    fourth-order closures on the two nodes nearest each end.
    """
    g = np.moveaxis(np.asarray(f, dtype=float), axis, -1)
    n = g.shape[-1]
    if n < 5:
        raise ValueError("need at least 5 nodes for the 4th-order stencil")
    d = np.empty_like(g)
    d[..., 2:-2] = g[..., :-4] - 8 * g[..., 1:-3] + 8 * g[..., 3:-1] - g[..., 4:]
    d[..., 0] = -25 * g[..., 0] + 48 * g[..., 1] - 36 * g[..., 2] + 16 * g[..., 3] - 3 * g[..., 4]
    d[..., 1] = -3 * g[..., 0] - 10 * g[..., 1] + 18 * g[..., 2] - 6 * g[..., 3] + g[..., 4]
    d[..., -1] = 25 * g[..., -1] - 48 * g[..., -2] + 36 * g[..., -3] - 16 * g[..., -4] + 3 * g[..., -5]
    d[..., -2] = 3 * g[..., -1] + 10 * g[..., -2] - 18 * g[..., -3] + 6 * g[..., -4] - g[..., -5]
    d /= 12.0 * h
    return np.moveaxis(d, -1, axis)


class BatchedTridiagonal:
    """A stack of tridiagonal systems factored once, solved many times.

    ``lower``, ``diag``, ``upper`` have shape ``(m, nb)``: row index
    first, batch second. ``lower[i]`` couples row i to row i-1 and
    ``upper[i]`` couples row i to row i+1; ``lower[0]`` and
    ``upper[-1]`` are ignored.
    """

    def __init__(self, lower, diag, upper):
        self.lower = np.array(lower, dtype=float)
        self.diag = np.array(diag, dtype=float)
        self.upper = np.array(upper, dtype=float)
        m = self.diag.shape[0]
        self.denom = np.empty_like(self.diag)
        self.cprime = np.zeros_like(self.diag)
        self.denom[0] = self.diag[0]
        for i in range(1, m):
            self.cprime[i - 1] = self.upper[i - 1] / self.denom[i - 1]
            self.denom[i] = self.diag[i] - self.lower[i] * self.cprime[i - 1]
        if np.any(self.denom == 0):
            raise np.linalg.LinAlgError("singular tridiagonal system")

    def solve(self, rhs):
        m = self.diag.shape[0]
        d = np.array(rhs, dtype=np.result_type(rhs, float))
        d[0] /= self.denom[0]
        for i in range(1, m):
            d[i] -= self.lower[i] * d[i - 1]
            d[i] /= self.denom[i]
        for i in range(m - 2, -1, -1):
            d[i] -= self.cprime[i] * d[i + 1]
        return d

    def matvec(self, x):
        y = self.diag * x
        y[1:] += self.lower[1:] * x[:-1]
        y[:-1] += self.upper[:-1] * x[1:]
        return y
