"""Native bilinear plausibility model over averaged word embeddings.

A term is encoded by averaging the embeddings of its in-vocabulary words
(v, dimension d), then nonlinearly transformed to u = tanh(W v + b)
(dimension r).  A triple's raw plausibility is the bilinear form
u1^T M_R u2; the logistic sigmoid squashes it into (0, 1).  Weights use our
own decimal-text serialization, so no ML framework is involved.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .relations import ALL_RELATIONS, Relation

_FLOAT_MIN = sys.float_info.min
_BELOW_ONE = 1.0 - sys.float_info.epsilon / 2


def sigmoid(x: float) -> float:
    """Numerically stable logistic, clamped into the open interval (0, 1)."""
    if x >= 0:
        value = 1.0 / (1.0 + np.exp(-x))
    else:
        ex = np.exp(x)
        value = ex / (1.0 + ex)
    return float(min(max(value, _FLOAT_MIN), _BELOW_ONE))


def sigmoid_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    ex = np.exp(x[~positive])
    out[~positive] = ex / (1.0 + ex)
    return np.clip(out, _FLOAT_MIN, _BELOW_ONE)


@dataclass(frozen=True)
class TermEncoding:
    """Averaged vector v, transformed vector u, and the OOV ratio of the term."""

    v: np.ndarray
    u: np.ndarray
    oov_fraction: float


class ModelFormatError(ValueError):
    """The model file failed strict parsing."""


class BilinearModel:
    """Embeddings, transform W (r x d), bias b (r) and per-relation M_R (r x r)."""

    def __init__(
        self,
        embeddings: Mapping[str, np.ndarray],
        transform: np.ndarray,
        bias: np.ndarray,
        relation_matrices: Mapping[Relation, np.ndarray],
    ):
        self.transform = np.asarray(transform, dtype=np.float64)
        if self.transform.ndim != 2:
            raise ValueError("transform W must be a 2-d matrix")
        self.r, self.d = self.transform.shape
        self.bias = np.asarray(bias, dtype=np.float64)
        if self.bias.shape != (self.r,):
            raise ValueError(f"bias must have shape ({self.r},)")
        self.embeddings: dict[str, np.ndarray] = {}
        for word, vector in embeddings.items():
            arr = np.asarray(vector, dtype=np.float64)
            if arr.shape != (self.d,):
                raise ValueError(f"embedding for {word!r} must have shape ({self.d},)")
            self.embeddings[word] = arr
        self.relation_matrices: dict[Relation, np.ndarray] = {}
        for relation in ALL_RELATIONS:
            if relation not in relation_matrices:
                raise ValueError(f"missing relation matrix for {relation.value}")
            mat = np.asarray(relation_matrices[relation], dtype=np.float64)
            if mat.shape != (self.r, self.r):
                raise ValueError(
                    f"relation matrix {relation.value} must have shape ({self.r}, {self.r})"
                )
            self.relation_matrices[relation] = mat


def encode_term(text: str, model: BilinearModel) -> TermEncoding:
    """Mean in-vocabulary word embedding, then u = tanh(W v + b).

    Unknown words are skipped; a fully out-of-vocabulary term gets the zero
    vector (oov_fraction 1.0) rather than failing.
    """
    words = text.lower().split()
    vectors = [model.embeddings[w] for w in words if w in model.embeddings]
    if vectors:
        v = np.mean(vectors, axis=0)
        oov_fraction = 1.0 - len(vectors) / len(words)
    else:
        v = np.zeros(model.d)
        oov_fraction = 1.0
    u = np.tanh(model.transform @ v + model.bias)
    return TermEncoding(v=v, u=u, oov_fraction=oov_fraction)


def bilinear_form(t1: str, relation: Relation, t2: str, model: BilinearModel) -> float:
    """Raw (pre-sigmoid) plausibility u1^T M_R u2."""
    matrix = model.relation_matrices.get(relation)
    if matrix is None:
        raise KeyError(f"no relation matrix for {relation.value}")
    u1 = encode_term(t1, model).u
    u2 = encode_term(t2, model).u
    return float(u1 @ matrix @ u2)


# ---------------------------------------------------------------------------
# Weight serialization (decimal text, exact round-trip via repr)


def _write_matrix_rows(fh, matrix: np.ndarray) -> None:
    for row in np.atleast_2d(matrix):
        fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def write_model(model: BilinearModel, fh) -> None:
    fh.write("defmine-bilinear-model v1\n")
    fh.write(f"d {model.d}\n")
    fh.write(f"r {model.r}\n")
    fh.write("relations " + " ".join(rel.value for rel in ALL_RELATIONS) + "\n")
    fh.write(f"embeddings {len(model.embeddings)}\n")
    for word in sorted(model.embeddings):
        if any(ch.isspace() for ch in word):
            raise ValueError(f"embedding word {word!r} contains whitespace")
        fh.write(word + " " + " ".join(repr(float(x)) for x in model.embeddings[word]) + "\n")
    fh.write("W\n")
    _write_matrix_rows(fh, model.transform)
    fh.write("b\n")
    _write_matrix_rows(fh, model.bias)
    for relation in ALL_RELATIONS:
        fh.write(f"M {relation.value}\n")
        _write_matrix_rows(fh, model.relation_matrices[relation])


def read_model(lines: Iterable[str]) -> BilinearModel:
    it = iter(enumerate(lines, start=1))

    def next_line() -> tuple[int, str]:
        try:
            lineno, raw = next(it)
        except StopIteration:
            raise ModelFormatError("unexpected end of model file") from None
        return lineno, raw.rstrip("\n")

    lineno, header = next_line()
    if header != "defmine-bilinear-model v1":
        raise ModelFormatError(f"line {lineno}: bad model header")

    def expect_scalar(name: str) -> int:
        lineno, line = next_line()
        parts = line.split()
        if len(parts) != 2 or parts[0] != name:
            raise ModelFormatError(f"line {lineno}: expected '{name} <int>'")
        return int(parts[1])

    d = expect_scalar("d")
    r = expect_scalar("r")
    lineno, rel_line = next_line()
    rel_parts = rel_line.split()
    if rel_parts[0] != "relations":
        raise ModelFormatError(f"line {lineno}: expected relation list")
    relations = [Relation.parse(name) for name in rel_parts[1:]]

    n_embeddings = expect_scalar("embeddings")
    embeddings: dict[str, np.ndarray] = {}
    for _ in range(n_embeddings):
        lineno, line = next_line()
        parts = line.split()
        if len(parts) != 1 + d:
            raise ModelFormatError(f"line {lineno}: embedding row needs {d} values")
        embeddings[parts[0]] = np.array([float(x) for x in parts[1:]])

    def read_block(rows: int, cols: int, what: str) -> np.ndarray:
        block = np.empty((rows, cols))
        for i in range(rows):
            lineno, line = next_line()
            parts = line.split()
            if len(parts) != cols:
                raise ModelFormatError(f"line {lineno}: {what} row needs {cols} values")
            block[i] = [float(x) for x in parts]
        return block

    lineno, marker = next_line()
    if marker != "W":
        raise ModelFormatError(f"line {lineno}: expected 'W'")
    transform = read_block(r, d, "W")
    lineno, marker = next_line()
    if marker != "b":
        raise ModelFormatError(f"line {lineno}: expected 'b'")
    bias = read_block(1, r, "b")[0]
    matrices: dict[Relation, np.ndarray] = {}
    for relation in relations:
        lineno, marker = next_line()
        if marker != f"M {relation.value}":
            raise ModelFormatError(f"line {lineno}: expected 'M {relation.value}'")
        matrices[relation] = read_block(r, r, f"M {relation.value}")
    return BilinearModel(embeddings, transform, bias, matrices)


def load_model(path) -> BilinearModel:
    with open(path, encoding="utf-8") as fh:
        return read_model(fh)


def save_model(model: BilinearModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_model(model, fh)
