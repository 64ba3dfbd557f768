"""Shared fixtures and independent oracles.

The oracles here recompute quantities with plain numpy loops and closed-form
formulas, never through the library's own assembly paths, so tests compare
two independent routes.
"""

import numpy as np
import pytest

from gframe.algebra import AlgebraDescriptor
from gframe.frames import GFrameSystem
from gframe.generate import unit_interval_system
from gframe.hilbert import AdjointableOperator
from gframe.measure import MeasureSpace


def naive_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Triple-loop matrix product."""
    n, m = a.shape[0], b.shape[1]
    out = np.zeros((n, m), dtype=np.complex128)
    for i in range(n):
        for j in range(m):
            acc = 0.0 + 0.0j
            for k in range(a.shape[1]):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def eig2x2_hermitian(m: np.ndarray):
    """Eigenvalues of a 2x2 Hermitian matrix by the quadratic formula."""
    tr = float(np.real(m[0, 0] + m[1, 1]))
    det = float(np.real(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]))
    disc = np.sqrt(max(tr * tr / 4.0 - det, 0.0))
    return tr / 2.0 - disc, tr / 2.0 + disc


def brute_force_frame_operator_flat(system: GFrameSystem) -> np.ndarray:
    """Weighted sum of flattened factor products, using raw numpy only."""
    fc = system.controls.C.flat()
    fcp = system.controls.Cp.flat()
    total = None
    for label, weight in system.measure.atoms:
        fl = system.family[label].flat()
        term = weight * (fc @ fl @ fl.conj().T @ fcp)
        total = term if total is None else total + term
    return total


def brute_force_multiplier_flat(gamma, lam, theta, measure) -> np.ndarray:
    total = None
    for label, weight in measure.atoms:
        term = weight * complex(gamma[label]) * (theta[label].flat() @ lam[label].flat().conj().T)
        total = term if total is None else total + term
    return total


@pytest.fixture
def m2():
    return AlgebraDescriptor("matrix", 2)


@pytest.fixture
def diag3():
    return AlgebraDescriptor("diagonal", 3)


@pytest.fixture
def identity_system(m2):
    """Single atom of weight one, identity member, identity controls."""
    measure = MeasureSpace((("w0", 1.0),))
    eye = AdjointableOperator.identity(m2, 2)
    return GFrameSystem(measure, {"w0": eye}, eye, eye)


@pytest.fixture
def unit_interval():
    return unit_interval_system(1.0, 1.0, 3, 11)


@pytest.fixture
def unit_interval_23():
    return unit_interval_system(2.0, 3.0, 3, 11)


def tight_line_system(scale: float = 1.0, rank: int = 3, nodes: int = 11) -> GFrameSystem:
    """Diagonal family w -> scale * w * identity; tight bounds scale/sqrt(3)."""
    from gframe.measure import simpson_unit_interval

    measure, positions = simpson_unit_interval(nodes)
    desc = AlgebraDescriptor("diagonal", rank)
    family = {}
    for label, w in zip(measure.labels, positions):
        family[label] = AdjointableOperator(
            desc, (scale * w * np.ones(rank, dtype=np.complex128)).reshape(1, 1, rank))
    eye = AdjointableOperator.identity(desc, 1)
    return GFrameSystem(measure, family, eye, eye)
