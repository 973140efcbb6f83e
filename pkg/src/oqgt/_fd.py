"""Finite-difference derivatives of array-valued functions of one real variable."""

from __future__ import annotations

import numpy as np


def central(f, x: float, h: float) -> np.ndarray:
    return (np.asarray(f(x + h)) - np.asarray(f(x - h))) / (2.0 * h)


def ridders(f, x: float, h: float, con: float = 1.4, ntab: int = 10, safe: float = 2.0):
    """Polynomial extrapolation of central differences to zero step.

    Returns ``(derivative, error_estimate)``. ``h`` is the initial (largest)
    step; it is shrunk by ``con`` per tableau row. Stops once the error
    estimate grows by ``safe`` over the best so far.
    """
    con2 = con * con
    tab = [[central(f, x, h)]]
    best = tab[0][0]
    err = np.inf
    for i in range(1, ntab):
        h /= con
        row = [central(f, x, h)]
        fac = con2
        for j in range(1, i + 1):
            row.append((row[j - 1] * fac - tab[i - 1][j - 1]) / (fac - 1.0))
            fac *= con2
            e = max(np.max(np.abs(row[j] - row[j - 1])),
                    np.max(np.abs(row[j] - tab[i - 1][j - 1])))
            if e <= err:
                err = e
                best = row[j]
        tab.append(row)
        if np.max(np.abs(row[i] - tab[i - 1][i - 1])) >= safe * err:
            break
    return best, float(err)
