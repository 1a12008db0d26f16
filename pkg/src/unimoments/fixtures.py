"""Worked-example matrices, built from exact closed forms.

The same matrices ship as JSON under ``fixtures/`` for the CLI; the test
suite checks that both agree.
"""
import json
from importlib import resources

import numpy as np

R2 = 1 / np.sqrt(2)
R3 = 1 / np.sqrt(3)


def x4_frame():
    """Four unit vectors in C^2 whose Gram matrix is the rank-2 extreme point X4."""
    return np.array([[1, 0], [0, 1], [R2, R2], [1j * R2, R2]], dtype=complex).T


def x4():
    return np.array(
        [
            [1, 0, R2, 1j * R2],
            [0, 1, R2, R2],
            [R2, R2, 1, (1 + 1j) / 2],
            [-1j * R2, R2, (1 - 1j) / 2, 1],
        ],
        dtype=complex,
    )


def x4_skew():
    """(X4 - conj X4)/2."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 3], m[2, 3] = 1j * R2, 0.5j
    return m - m.T


def x4_skew_rotated():
    """Skew part of X4 after conjugation by diag(1, 1, 1, exp(-i pi/4))."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 3], m[1, 3] = 0.5j, -0.5j
    return m - m.T


X4_ROTATION = np.array([1, 1, 1, np.exp(-1j * np.pi / 4)])


def ex3_frame():
    return np.array([[1, 0], [0, 1], [R2, R2]]).T


def ex3():
    """Real rank-2 matrix that is extreme among real correlation matrices."""
    return np.array([[1, 0, R2], [0, 1, R2], [R2, R2, 1]])


def ex3_rank_one_terms():
    """The two complex rank-one matrices averaging to :func:`ex3`."""
    a = np.array(
        [
            [1, 1j, (1 + 1j) * R2],
            [-1j, 1, (1 - 1j) * R2],
            [(1 - 1j) * R2, (1 + 1j) * R2, 1],
        ]
    )
    return a, a.conj()


def f6_frame():
    return np.array(
        [
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [R2, R2, 0],
            [0, R2, R2],
            [R3, R3, R3],
        ]
    ).T


def f6():
    """Real rank-3 6x6 correlation matrix that is not a moment matrix of commuting unitaries."""
    s, t, u = R2, R3, np.sqrt(2 / 3)
    return np.array(
        [
            [1, 0, 0, s, 0, t],
            [0, 1, 0, s, s, t],
            [0, 0, 1, 0, s, t],
            [s, s, 0, 1, 0.5, u],
            [0, s, s, 0.5, 1, u],
            [t, t, t, u, u, 1],
        ]
    )


def f6_kernel():
    """Kernel vectors v1, v2, v3 as columns."""
    return np.array(
        [
            [R2, R2, 0, -1, 0, 0],
            [0, R2, R2, 0, -1, 0],
            [R3, R3, R3, 0, 0, -1],
        ]
    ).T


BUILDERS = {"x4": x4, "ex3": ex3, "f6": f6}


def load(name):
    """Load a shipped fixture matrix from its JSON file."""
    from .serialize import matrix_from_json

    text = resources.files(__package__).joinpath("fixtures", f"{name}.json").read_text()
    return matrix_from_json(json.loads(text))
