"""Regenerates the frozen oracle values used by the Rust tests.

    python3 crates/core/tests/fixtures/make_oracles.py

Problems are drawn from a 64-bit LCG that the tests reimplement, so both
sides see bit-identical inputs.
"""
import numpy as np
from pathlib import Path

HERE = Path(__file__).parent
MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state * 6364136223846793005 + 1442695040888963407) & MASK
        return (self.state >> 11) / float(1 << 53)

    def uniform(self, lo, hi):
        return lo + (hi - lo) * self.next()


def ols_problem(k, n=50, p=3):
    g = Lcg(1000 + k)
    x = np.array([[g.uniform(-1.0, 1.0) for _ in range(p)] for _ in range(n)])
    w = np.array([g.uniform(-2.0, 2.0) for _ in range(p)])
    b = g.uniform(-1.0, 1.0)
    y = np.array([x[i] @ w + b + 0.1 * g.uniform(-1.0, 1.0) for i in range(n)])
    return x, y


def ols_oracle():
    rows = ["problem,intercept,w0,w1,w2"]
    for k in range(100):
        x, y = ols_problem(k)
        a = np.hstack([np.ones((x.shape[0], 1)), x])
        coef = np.linalg.pinv(a) @ y
        rows.append(",".join([str(k)] + [repr(float(c)) for c in coef]))
    (HERE / "ols_pinv_oracle.csv").write_text("\n".join(rows) + "\n")


def brr_script(x, y, a=1e-6, b=1e-6, max_iter=300, tol=1e-3, lambda_init=1.0):
    n = len(y)
    xm, ym = x.mean(axis=0), y.mean()
    xc, yc = x - xm, y - ym
    alpha = 1.0 / (np.var(yc) + np.finfo(float).eps)
    lam = lambda_init
    eig, vecs = np.linalg.eigh(xc.T @ xc)
    eig = np.maximum(eig, 0.0)
    prev = None
    it = 0
    for it in range(1, max_iter + 1):
        # posterior mean without the eigenbasis shortcut
        s = np.linalg.inv(lam * np.eye(x.shape[1]) + alpha * xc.T @ xc)
        coef = alpha * s @ xc.T @ yc
        sse = float(np.sum((yc - xc @ coef) ** 2))
        gamma = float(np.sum(alpha * eig / (lam + alpha * eig)))
        lam = (gamma + 2 * a) / (float(coef @ coef) + 2 * b)
        alpha = (n - gamma + 2 * a) / (sse + 2 * b)
        if prev is not None and np.max(np.abs(prev - coef)) < tol:
            break
        prev = coef
    s = np.linalg.inv(lam * np.eye(x.shape[1]) + alpha * xc.T @ xc)
    coef = alpha * s @ xc.T @ yc
    return coef, ym - xm @ coef, alpha, lam, it


def brr_oracle():
    x = np.array([[0.1], [0.5], [0.9], [1.4], [2.0]])
    y = np.array([0.3, 0.8, 1.1, 1.9, 2.2])
    coef, intercept, alpha, lam, it = brr_script(x, y)
    lines = [
        f"weight={float(coef[0])!r}",
        f"intercept={float(intercept)!r}",
        f"alpha={float(alpha)!r}",
        f"lambda={float(lam)!r}",
        f"iterations={it}",
    ]
    (HERE / "brr_5x1_oracle.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    ols_oracle()
    brr_oracle()
