"""Finite-dimensional graded path algebras presented by quivers with relations.

A presentation lists vertices, arrows with integer degrees, and homogeneous
relations between parallel paths.  Building an algebra runs a deterministic
rewriting-system completion (deglex order, capped path length) and produces a
normal-form path basis with a full structure-constant table, the grading
data, the radical, and the opposite algebra.

Path convention: the word ``(a, b)`` is the path that applies ``a`` first and
``b`` second, so a right module acts by ``m * (a b) = (m * a) * b`` and the
arrow ``a : v -> w`` satisfies ``a = e_v a e_w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactla import FieldSpec, Mat, row_basis, vstack

DEFAULT_LENGTH_CAP = 30
_MAX_BASIS = 4096
_MAX_RULES = 5000


class AlgebraError(ValueError):
    pass


class UnknownSymbolError(AlgebraError):
    """A relation or arrow refers to an undeclared vertex or arrow."""


class InhomogeneousRelationError(AlgebraError):
    """A relation mixes paths of different endpoints or total degrees."""


class CapExceededError(AlgebraError):
    """The quotient is not finite-dimensional within the configured path cap."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int
    degree: int


@dataclass(frozen=True)
class QuiverPresentation:
    """Quiver with arrow degrees and relations, all by index.

    ``relations`` is a tuple of relations; each relation is a tuple of terms
    ``(coefficient, word)`` where ``word`` is a tuple of arrow indices.
    Coefficients are ints or Fractions and are coerced by the base field at
    build time.
    """

    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    relations: Tuple[Tuple[Tuple[object, Tuple[int, ...]], ...], ...]

    @staticmethod
    def make(
        vertices: Sequence[str],
        arrows: Sequence[tuple],
        relations: Sequence[Sequence[tuple]] = (),
    ) -> "QuiverPresentation":
        """Build a presentation from names.

        ``arrows``: (name, source_name, target_name, degree) tuples.
        ``relations``: each a list of (coefficient, path) terms with ``path``
        a sequence of arrow names.
        """
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise AlgebraError("duplicate vertex names")
        vidx = {v: i for i, v in enumerate(vertices)}
        arrow_objs = []
        aidx = {}
        for name, src, tgt, deg in arrows:
            if src not in vidx:
                raise UnknownSymbolError(f"arrow {name}: unknown vertex {src!r}")
            if tgt not in vidx:
                raise UnknownSymbolError(f"arrow {name}: unknown vertex {tgt!r}")
            if name in aidx:
                raise AlgebraError(f"duplicate arrow name {name!r}")
            aidx[name] = len(arrow_objs)
            arrow_objs.append(Arrow(name, vidx[src], vidx[tgt], int(deg)))
        rels = []
        for terms in relations:
            rel = []
            for coeff, path in terms:
                word = []
                for aname in path:
                    if aname not in aidx:
                        raise UnknownSymbolError(f"relation uses unknown arrow {aname!r}")
                    word.append(aidx[aname])
                rel.append((coeff, tuple(word)))
            rels.append(tuple(rel))
        return QuiverPresentation(vertices, tuple(arrow_objs), tuple(rels))

    def opposite(self) -> "QuiverPresentation":
        arrows = tuple(Arrow(a.name, a.target, a.source, a.degree) for a in self.arrows)
        relations = tuple(
            tuple((c, tuple(reversed(w))) for c, w in rel) for rel in self.relations
        )
        return QuiverPresentation(self.vertices, arrows, relations)


def _word_source(pres: QuiverPresentation, word: Tuple[int, ...]) -> Optional[int]:
    return pres.arrows[word[0]].source if word else None


def _word_target(pres: QuiverPresentation, word: Tuple[int, ...]) -> Optional[int]:
    return pres.arrows[word[-1]].target if word else None


def _word_degree(pres: QuiverPresentation, word: Tuple[int, ...]) -> int:
    return sum(pres.arrows[a].degree for a in word)


def _word_composable(pres: QuiverPresentation, word: Tuple[int, ...]) -> bool:
    return all(
        pres.arrows[word[i]].target == pres.arrows[word[i + 1]].source
        for i in range(len(word) - 1)
    )


def _deglex_key(word: Tuple[int, ...]) -> tuple:
    return (len(word), word)


class _Rewriter:
    """Deterministic rewriting by lead -> tail rules in deglex order."""

    def __init__(self, field: FieldSpec, cap: int):
        self.field = field
        self.cap = cap
        self.rules: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = {}

    def _find_lead(self, word: Tuple[int, ...]) -> Optional[tuple]:
        for lead in self.rules:
            L = len(lead)
            if L > len(word):
                continue
            for i in range(len(word) - L + 1):
                if word[i : i + L] == lead:
                    return lead, i
        return None

    def reduce(self, poly: Dict[Tuple[int, ...], object]) -> Dict[Tuple[int, ...], object]:
        field = self.field
        out: Dict[Tuple[int, ...], object] = {}
        work = dict(poly)
        while work:
            word = max(work, key=_deglex_key)
            coeff = work.pop(word)
            if coeff == field.zero:
                continue
            hit = self._find_lead(word)
            if hit is None:
                out[word] = field.coerce(out.get(word, field.zero) + coeff)
                if out[word] == field.zero:
                    del out[word]
                continue
            lead, i = hit
            tail = self.rules[lead]
            for tword, tcoeff in tail.items():
                new = word[:i] + tword + word[i + len(lead) :]
                c = field.coerce(coeff * tcoeff)
                work[new] = field.coerce(work.get(new, field.zero) + c)
                if work[new] == field.zero:
                    del work[new]
        return out

    def add_rule(self, poly: Dict[Tuple[int, ...], object]) -> bool:
        """Normalize a polynomial and install it as a rule; False if it reduced to 0."""
        poly = self.reduce(poly)
        if not poly:
            return False
        lead = max(poly, key=_deglex_key)
        if len(lead) > self.cap:
            raise CapExceededError(
                f"completion produced a path of length {len(lead)} > cap {self.cap}"
            )
        inv = self.field.inv(poly[lead])
        tail = {
            w: self.field.coerce(-c * inv) for w, c in poly.items() if w != lead
        }
        self.rules[lead] = tail
        if len(self.rules) > _MAX_RULES:
            raise CapExceededError("rewriting system exceeded the rule cap")
        return True

    def complete(self):
        """Buchberger-style closure under overlap ambiguities."""
        changed = True
        while changed:
            changed = False
            # inter-reduce: a lead containing another lead as proper subword is redundant
            leads = sorted(self.rules, key=_deglex_key)
            for lead in leads:
                others = {l: t for l, t in self.rules.items() if l != lead}
                tmp = _Rewriter(self.field, self.cap)
                tmp.rules = others
                if tmp._find_lead(lead) is not None:
                    poly = dict(self.rules[lead])
                    poly[lead] = self.field.one
                    del self.rules[lead]
                    if self.add_rule(poly):
                        changed = True
                    break
            if changed:
                continue
            pairs = [(u, v) for u in list(self.rules) for v in list(self.rules)]
            for u, v in pairs:
                for k in range(1, min(len(u), len(v))):
                    if u[len(u) - k :] == v[:k]:
                        # overlap word u + v[k:]
                        left = {}
                        for w, c in self.rules[u].items():
                            left[w + v[k:]] = c
                        right = {}
                        for w, c in self.rules[v].items():
                            right[u[: len(u) - k] + w] = c
                        spoly = dict(left)
                        for w, c in right.items():
                            spoly[w] = self.field.coerce(
                                spoly.get(w, self.field.zero) - c
                            )
                        if self.add_rule(spoly):
                            changed = True
                if changed:
                    break


class GradedAlgebra:
    """A finite-dimensional graded basic algebra with a normal-form path basis."""

    def __init__(self, presentation: QuiverPresentation, field: FieldSpec, cap: int,
                 rewriter: _Rewriter, basis: List[Tuple[int, Tuple[int, ...]]]):
        self.presentation = presentation
        self.field = field
        self.cap = cap
        self._rewriter = rewriter
        # basis entries: (source_vertex, word); target/degree derived
        self.basis = basis
        self.basis_index = {b: i for i, b in enumerate(basis)}
        self.dim = len(basis)
        self._mult_table: Dict[Tuple[int, int], Tuple[Tuple[int, object], ...]] = {}
        self._opposite: Optional[GradedAlgebra] = None
        self._build_tables()

    # -- static data ---------------------------------------------------------

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.presentation.vertices

    @property
    def arrows(self) -> Tuple[Arrow, ...]:
        return self.presentation.arrows

    @property
    def num_vertices(self) -> int:
        return len(self.presentation.vertices)

    def path_source(self, i: int) -> int:
        src, word = self.basis[i]
        return src

    def path_target(self, i: int) -> int:
        src, word = self.basis[i]
        return self.presentation.arrows[word[-1]].target if word else src

    def path_degree(self, i: int) -> int:
        return _word_degree(self.presentation, self.basis[i][1])

    def path_length(self, i: int) -> int:
        return len(self.basis[i][1])

    def _build_tables(self):
        pres = self.presentation
        self.degrees = tuple(self.path_degree(i) for i in range(self.dim))
        self.d = max((abs(n) for n in self.degrees), default=0)
        self.radical_indices = tuple(
            i for i in range(self.dim) if self.path_length(i) > 0
        )
        self.vertex_unit_index = {}
        for i, (src, word) in enumerate(self.basis):
            if not word:
                self.vertex_unit_index[src] = i
        self.arrow_basis_index = {}
        for a_idx in range(len(pres.arrows)):
            key = (pres.arrows[a_idx].source, (a_idx,))
            self.arrow_basis_index[a_idx] = self.basis_index[key]
        self.is_positively_graded = all(n >= 0 for n in self.degrees)

    # -- elements --------------------------------------------------------------

    def zero_element(self) -> np.ndarray:
        a = self.field.empty(1, self.dim)
        return a.reshape(self.dim)

    def unit(self) -> np.ndarray:
        x = self.zero_element()
        for v in range(self.num_vertices):
            x[self.vertex_unit_index[v]] = self.field.one
        return x

    def vertex_idempotent(self, v: int) -> np.ndarray:
        x = self.zero_element()
        x[self.vertex_unit_index[v]] = self.field.one
        return x

    def element_from_word(self, source: int, word: Tuple[int, ...]) -> np.ndarray:
        """The class of a path, reduced to the normal-form basis."""
        if not _word_composable(self.presentation, word):
            raise AlgebraError(f"word {word} is not composable")
        if word and self.presentation.arrows[word[0]].source != source:
            raise AlgebraError("word source mismatch")
        poly = self._rewriter.reduce({tuple(word): self.field.one})
        x = self.zero_element()
        for w, c in poly.items():
            x[self.basis_index[(source, w)]] = c
        return x

    def multiply_basis(self, i: int, j: int) -> Tuple[Tuple[int, object], ...]:
        """Structure constants: basis_i * basis_j as ((index, coeff), ...)."""
        hit = self._mult_table.get((i, j))
        if hit is not None:
            return hit
        si, wi = self.basis[i]
        sj, wj = self.basis[j]
        if self.path_target(i) != sj:
            out: Tuple[Tuple[int, object], ...] = ()
        else:
            poly = self._rewriter.reduce({wi + wj: self.field.one})
            out = tuple(
                (self.basis_index[(si, w)], c) for w, c in sorted(poly.items())
            )
        self._mult_table[(i, j)] = out
        return out

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = self.zero_element()
        for i in range(self.dim):
            if x[i] == self.field.zero:
                continue
            for j in range(self.dim):
                if y[j] == self.field.zero:
                    continue
                for k, c in self.multiply_basis(i, j):
                    out[k] = self.field.coerce(out[k] + x[i] * y[j] * c)
        return out

    def element_degree(self, x: np.ndarray) -> Optional[int]:
        """Degree of a homogeneous element, None for 0 or mixed."""
        degs = {self.degrees[i] for i in range(self.dim) if x[i] != self.field.zero}
        if not degs:
            return None
        if len(degs) > 1:
            return None
        return degs.pop()

    # -- gradings and ideals -----------------------------------------------------

    def homogeneous_component(self, n: int) -> List[int]:
        """Indices of basis paths spanning R_n."""
        return [i for i in range(self.dim) if self.degrees[i] == n]

    def degree_at_least(self, t: int) -> List[int]:
        """Indices of basis paths spanning the ideal R_{>=t} (homogeneous)."""
        return [i for i in range(self.dim) if self.degrees[i] >= t]

    def radical_nilpotency_index(self) -> int:
        """Least t with J^t = 0."""
        field = self.field
        rows = []
        for i in self.radical_indices:
            row = field.empty(1, self.dim)
            row[0, i] = field.one
            rows.append(Mat(field, row, copy=False))
        cur = row_basis(vstack(rows)) if rows else Mat.zeros(field, 0, self.dim)
        t = 1
        while cur.rows > 0:
            nxt_rows = []
            for r in range(cur.rows):
                for a_idx in range(len(self.arrows)):
                    y = self.multiply(cur.a[r, :], self._arrow_element(a_idx))
                    if np.any(y != field.zero):
                        nxt_rows.append(Mat(field, y.reshape(1, -1)))
            cur = row_basis(vstack(nxt_rows)) if nxt_rows else Mat.zeros(field, 0, self.dim)
            t += 1
            if t > self.dim + 1:
                raise AlgebraError("radical is not nilpotent; algebra build is inconsistent")
        return t

    def _arrow_element(self, a_idx: int) -> np.ndarray:
        x = self.zero_element()
        x[self.arrow_basis_index[a_idx]] = self.field.one
        return x

    # -- the opposite algebra -------------------------------------------------

    def opposite(self) -> "GradedAlgebra":
        if self._opposite is None:
            op = build(self.presentation.opposite(), self.field, cap=self.cap)
            self._opposite = op
            op._opposite = self
        return self._opposite

    def op_element(self, x: np.ndarray) -> np.ndarray:
        """Image of an element under the canonical anti-isomorphism R -> R^op."""
        op = self.opposite()
        out = op.zero_element()
        for i in range(self.dim):
            if x[i] == self.field.zero:
                continue
            src, word = self.basis[i]
            op_source = self.path_target(i)
            vec = op.element_from_word(op_source, tuple(reversed(word)))
            out = out + vec * x[i]
            out = self.field.normalize(out)
        return out

    def same_as(self, other: "GradedAlgebra") -> bool:
        return self is other or (
            self.field == other.field and self.presentation == other.presentation
        )

    def __repr__(self):
        return (
            f"GradedAlgebra(dim={self.dim}, vertices={len(self.vertices)}, "
            f"arrows={len(self.arrows)}, field={self.field}, d={self.d})"
        )


def build(presentation: QuiverPresentation, field: FieldSpec,
          cap: int = DEFAULT_LENGTH_CAP) -> GradedAlgebra:
    """Construct the graded algebra presented by a quiver with relations.

    Raises :class:`InhomogeneousRelationError` when a relation mixes endpoints
    or degrees, and :class:`CapExceededError` when the quotient is not
    finite-dimensional within the path-length cap.
    """
    pres = presentation
    for r_idx, rel in enumerate(pres.relations):
        if not rel:
            raise AlgebraError(f"relation #{r_idx} is empty")
        sources = set()
        targets = set()
        degrees = set()
        for coeff, word in rel:
            if not word:
                raise InhomogeneousRelationError(
                    f"relation #{r_idx} contains an empty path"
                )
            if not _word_composable(pres, word):
                raise AlgebraError(f"relation #{r_idx}: path {word} is not composable")
            sources.add(_word_source(pres, word))
            targets.add(_word_target(pres, word))
            degrees.add(_word_degree(pres, word))
        if len(sources) > 1 or len(targets) > 1:
            raise InhomogeneousRelationError(
                f"relation #{r_idx} combines non-parallel paths: {rel}"
            )
        if len(degrees) > 1:
            raise InhomogeneousRelationError(
                f"relation #{r_idx} combines paths of degrees {sorted(degrees)}: {rel}"
            )
        if any(len(word) < 2 for _, word in rel):
            raise AlgebraError(
                f"relation #{r_idx} contains a path of length < 2; "
                "relations must live inside paths of length >= 2"
            )

    rw = _Rewriter(field, cap)
    for rel in pres.relations:
        poly: Dict[Tuple[int, ...], object] = {}
        for coeff, word in rel:
            c = field.coerce(coeff)
            poly[word] = field.coerce(poly.get(word, field.zero) + c)
        rw.add_rule(poly)
    rw.complete()

    # enumerate irreducible words per source vertex (BFS by length)
    basis: List[Tuple[int, Tuple[int, ...]]] = []
    frontier: List[Tuple[int, Tuple[int, ...]]] = []
    for v in range(len(pres.vertices)):
        basis.append((v, ()))
        frontier.append((v, ()))
    by_target: Dict[int, List[int]] = {}
    for a_idx, a in enumerate(pres.arrows):
        by_target.setdefault(a.source, []).append(a_idx)
    leads = set(rw.rules)
    while frontier:
        new_frontier = []
        for src, word in frontier:
            tail_vertex = pres.arrows[word[-1]].target if word else src
            for a_idx in by_target.get(tail_vertex, []):
                w = word + (a_idx,)
                # only new subwords of w are its suffixes
                if any(w[i:] in leads for i in range(len(w))):
                    continue
                if len(w) >= cap:
                    raise CapExceededError(
                        f"irreducible path of length {len(w)} reaches the cap {cap}; "
                        "quotient is not finite-dimensional within the cap"
                    )
                basis.append((src, w))
                new_frontier.append((src, w))
                if len(basis) > _MAX_BASIS:
                    raise CapExceededError("basis size cap exceeded")
        frontier = new_frontier

    basis.sort(key=lambda b: (len(b[1]), b))
    return GradedAlgebra(pres, field, cap, rw, basis)
