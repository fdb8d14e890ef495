"""Finite-dimensional fully group-graded algebras over F_p with
symmetrizing forms.

An Algebra is a structure-constant algebra: sc[i, j, k] is the coefficient
of basis vector k in the product b_i * b_j.  A GradedAlgebra attaches a
group and a grading map basis index -> group element; the basis is kept in
group-element-major order so every graded component is a contiguous index
slice.  Constructors cover group algebras and crossed products whose base
is a full matrix ring (which includes twisted group algebras via a 1x1
matrix base).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import groups as _groups
from .errors import SpecError, ValidationError
from .exactfield import PrimeField


@dataclass(eq=False)
class Algebra:
    """Unital associative algebra given by structure constants."""

    field: PrimeField
    dim: int
    sc: np.ndarray          # shape (d, d, d)
    unit: np.ndarray        # shape (d,)
    kind: str | None = None
    trace_vector: np.ndarray | None = None   # canonical trace-like functional, if any
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        d = self.dim
        if self.sc.shape != (d, d, d) or self.unit.shape != (d,):
            raise ValidationError("structure constant shapes inconsistent")

    # -- products ----------------------------------------------------------

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.field.contract("i,j,ijk->k", x, y, self.sc)

    def left_mult(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x*y."""
        return self.field.contract("i,ijk->kj", x, self.sc)

    def right_mult(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> y*x."""
        return self.field.contract("j,ijk->ki", x, self.sc)

    @property
    def basis_left_mults(self) -> np.ndarray:
        """L[i] = matrix of left multiplication by b_i; L[i][k, j] = sc[i, j, k]."""
        if "lmul" not in self._cache:
            self._cache["lmul"] = np.ascontiguousarray(self.sc.transpose(0, 2, 1))
        return self._cache["lmul"]

    @property
    def basis_right_mults(self) -> np.ndarray:
        """R[j] = matrix of right multiplication by b_j; R[j][k, i] = sc[i, j, k]."""
        if "rmul" not in self._cache:
            self._cache["rmul"] = np.ascontiguousarray(self.sc.transpose(1, 2, 0))
        return self._cache["rmul"]

    @property
    def mult_matrix(self) -> np.ndarray:
        """Multiplication as a matrix k^(d*d) -> k^d, mu[k, i*d+j] = sc[i,j,k]."""
        d = self.dim
        return np.ascontiguousarray(self.sc.transpose(2, 0, 1).reshape(d, d * d))

    def center(self):
        """RREF basis of {z : z*a = a*z for all a} (exact subspace)."""
        L = self.basis_left_mults
        R = self.basis_right_mults
        # z central iff for every basis a: (L_a - R_a) z = 0
        rows = (L - R).reshape(self.dim * self.dim, self.dim) % self.field.p
        return self.field.kernel(rows)

    def validate(self) -> None:
        f = self.field
        d = self.dim
        lhs = f.contract("ijm,mlk->ijlk", self.sc, self.sc)
        rhs = f.contract("jlm,imk->ijlk", self.sc, self.sc)
        if not np.array_equal(lhs, rhs):
            i, j, l = (int(v) for v in np.argwhere((lhs != rhs).any(axis=3))[0])
            raise ValidationError(f"not associative at basis triple ({i},{j},{l})")
        left_unit = f.contract("i,ijk->kj", self.unit, self.sc)
        right_unit = f.contract("j,ijk->ki", self.unit, self.sc)
        if not np.array_equal(left_unit, f.eye(d)) or not np.array_equal(right_unit, f.eye(d)):
            raise ValidationError("unit vector is not a two-sided identity")

    def structurally_equal(self, other: "Algebra") -> bool:
        return (
            self.field == other.field
            and self.dim == other.dim
            and np.array_equal(self.sc, other.sc)
            and np.array_equal(self.unit, other.unit)
        )


def matrix_algebra(field: PrimeField, n: int) -> Algebra:
    """M_n(k) with the elementary-matrix basis E_ab, row-major index a*n+b."""
    d = n * n
    sc = field.zeros((d, d, d))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                sc[a * n + b, b * n + c, a * n + c] = 1
    unit = field.zeros(d)
    for a in range(n):
        unit[a * n + a] = 1
    trace = field.zeros(d)
    for a in range(n):
        trace[a * n + a] = 1
    alg = Algebra(field=field, dim=d, sc=sc, unit=unit, kind="matrix", trace_vector=trace)
    alg.validate()
    return alg


@dataclass(eq=False)
class GradedAlgebra:
    """Algebra with a group grading; basis blocks follow group index order."""

    algebra: Algebra
    group: _groups.FiniteGroup
    grading: np.ndarray          # basis index -> group element, non-decreasing
    kind: str | None = None
    parent: "GradedAlgebra | None" = None
    parent_indices: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.grading) != self.algebra.dim:
            raise ValidationError("grading length must equal the algebra dimension")
        if self.algebra.dim and (np.diff(self.grading) < 0).any():
            raise ValidationError("basis must be ordered group-element-major")
        if self.algebra.dim and (self.grading.min() < 0 or self.grading.max() >= self.group.order):
            raise ValidationError("grading values out of range")
        self._validate_containment()

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def component_indices(self, g: int) -> np.ndarray:
        return np.nonzero(self.grading == g)[0]

    def indices_for(self, elements) -> np.ndarray:
        mask = np.isin(self.grading, np.array(sorted(elements), dtype=np.int64))
        return np.nonzero(mask)[0]

    def _validate_containment(self) -> None:
        """R_g * R_h lands inside R_{gh}, and the unit sits in R_1."""
        sc = self.algebra.sc
        grad = self.grading
        grp = self.group
        for i in range(self.dim):
            for j in range(self.dim):
                support = np.nonzero(sc[i, j])[0]
                target = grp.mul(int(grad[i]), int(grad[j]))
                if support.size and (grad[support] != target).any():
                    raise ValidationError(
                        f"product of basis {i} and {j} leaves component {target}"
                    )
        unit_support = np.nonzero(self.algebra.unit)[0]
        if unit_support.size and (self.grading[unit_support] != 0).any():
            raise ValidationError("unit is not homogeneous of degree 1")


@dataclass(frozen=True)
class FullyGradedReport:
    ok: bool
    failures: tuple            # (g, h, expected_dim, achieved_rank)


def check_fully_graded(a: GradedAlgebra) -> FullyGradedReport:
    """Check R_g * R_h = R_{gh} (equality of spans) for every pair g, h."""
    f = a.field
    failures = []
    idx = {g: a.component_indices(g) for g in range(a.group.order)}
    for g in range(a.group.order):
        for h in range(a.group.order):
            gh = a.group.mul(g, h)
            target = idx[gh]
            rows = []
            for i in idx[g]:
                for j in idx[h]:
                    rows.append(a.algebra.sc[i, j][target])
            if rows:
                rank = f.rank(np.array(rows, dtype=np.int64))
            else:
                rank = 0
            if rank != len(target):
                failures.append((g, h, len(target), rank))
    return FullyGradedReport(ok=not failures, failures=tuple(failures))


def group_algebra(group: _groups.FiniteGroup, p: int) -> GradedAlgebra:
    """kG with basis the group elements and grading the identity map."""
    f = PrimeField(p)
    n = group.order
    sc = f.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            sc[i, j, group.mul(i, j)] = 1
    unit = f.zeros(n)
    unit[0] = 1
    alg = Algebra(field=f, dim=n, sc=sc, unit=unit, kind="group")
    alg.validate()
    ga = GradedAlgebra(algebra=alg, group=group, grading=np.arange(n), kind="group")
    report = check_fully_graded(ga)
    if not report.ok:
        raise ValidationError("group algebra failed the fully-graded check (bug)")
    return ga


def crossed_product(
    group: _groups.FiniteGroup,
    base: Algebra,
    action: list[np.ndarray] | None = None,
    cocycle: list[list[np.ndarray]] | None = None,
) -> GradedAlgebra:
    """Crossed product of a base algebra by a group action and a 2-cocycle.

    Basis is base-basis x group, ordered group-element-major: index
    g*dim(base) + i carries degree g.  Multiplication:
    (a ox g)(b ox h) = a * action[g](b) * cocycle[g][h] ox gh.

    With trivial action and trivial cocycle and base = k this is the group
    algebra; a nontrivial cocycle over a 1-dim base gives a twisted group
    algebra.
    """
    f = base.field
    n = group.order
    db = base.dim
    if action is None:
        action = [f.eye(db) for _ in range(n)]
    action = [f.arr(m) for m in action]
    if cocycle is None:
        cocycle = [[base.unit.copy() for _ in range(n)] for _ in range(n)]
    cocycle = [[f.arr(v) for v in row] for row in cocycle]

    if len(action) != n or any(m.shape != (db, db) for m in action):
        raise ValidationError("action must give one base automorphism matrix per group element")
    if not np.array_equal(action[0], f.eye(db)):
        raise ValidationError("action of the identity must be the identity map")
    for g in range(n):
        if f.inverse(action[g]) is None:
            raise ValidationError(f"action not automorphism: matrix for element {g} is singular")
        if not np.array_equal(f.matmul(action[g], base.unit), base.unit):
            raise ValidationError(f"action not automorphism: element {g} moves the unit")
        prod_of_images = f.contract(
            "ri,sj,ijk->rsk", action[g], action[g], base.sc
        )
        image_of_prod = f.contract("ijm,km->ijk", base.sc, action[g])
        # image_of_prod[i,j,k] = action[g](b_i b_j)_k
        if not np.array_equal(prod_of_images, image_of_prod):
            raise ValidationError(f"action not automorphism: element {g} is not multiplicative")

    if len(cocycle) != n or any(len(row) != n for row in cocycle):
        raise ValidationError("cocycle must be an n x n array of base elements")
    for g in range(n):
        if not np.array_equal(cocycle[0][g], base.unit) or not np.array_equal(cocycle[g][0], base.unit):
            raise ValidationError("cocycle is not normalized at the identity")
        for h in range(n):
            if f.inverse(base.left_mult(cocycle[g][h])) is None:
                raise ValidationError(f"cocycle value at ({g},{h}) is not a unit")
    for g in range(n):
        for h in range(n):
            for l in range(n):
                lhs = base.multiply(
                    f.matmul(action[g], cocycle[h][l]), cocycle[g][group.mul(h, l)]
                )
                rhs = base.multiply(cocycle[g][h], cocycle[group.mul(g, h)][l])
                if not np.array_equal(lhs, rhs):
                    raise ValidationError(
                        f"cocycle condition violated at triple ({g},{h},{l})"
                    )

    d = db * n
    sc = f.zeros((d, d, d))
    for g in range(n):
        for h in range(n):
            gh = group.mul(g, h)
            # (E_i ox g)(E_j ox h) = E_i * action[g](E_j) * cocycle[g][h] ox gh
            twisted = f.contract("rj,irk->ijk", action[g], base.sc)
            # twisted[i,j,:] = E_i * action[g](E_j)
            prod = f.contract("ijm,s,msk->ijk", twisted, cocycle[g][h], base.sc)
            sc[g * db:(g + 1) * db, h * db:(h + 1) * db, gh * db:(gh + 1) * db] = prod
    unit = f.zeros(d)
    unit[:db] = base.unit
    alg = Algebra(field=f, dim=d, sc=sc, unit=unit, kind=f"crossed:{base.kind}",
                  trace_vector=None)
    alg.validate()
    grading = np.repeat(np.arange(n), db)
    ga = GradedAlgebra(algebra=alg, group=group, grading=grading,
                       kind=f"crossed:{base.kind}")
    ga._cache["base"] = base
    report = check_fully_graded(ga)
    if not report.ok:
        raise ValidationError(f"crossed product is not fully graded: {report.failures[:3]}")
    return ga


def component_subalgebra(a: GradedAlgebra, h: _groups.Subgroup) -> GradedAlgebra:
    """R_H: the sum of the components over a subgroup, as a graded algebra
    over the subgroup relabelled to 0..|H|-1.  Results are cached on ``a``."""
    if h.group is not a.group:
        raise ValidationError("subgroup belongs to a different group")
    cache = a._cache.setdefault("subalgebras", {})
    if h.key in cache:
        return cache[h.key]
    idx = a.indices_for(h.elements)
    local_group, to_parent = h.as_group()
    pos = {int(e): i for i, e in enumerate(to_parent)}
    sub_sc = a.algebra.sc[np.ix_(idx, idx, idx)].copy()
    unit = a.algebra.unit[idx].copy()
    alg = Algebra(field=a.field, dim=len(idx), sc=sub_sc, unit=unit, kind=a.algebra.kind,
                  trace_vector=None)
    alg.validate()
    grading = np.array([pos[int(a.grading[i])] for i in idx], dtype=np.int64)
    sub = GradedAlgebra(algebra=alg, group=local_group, grading=grading, kind=a.kind,
                        parent=a, parent_indices=idx)
    if a.kind and a.kind.startswith("crossed") and "base" in a._cache:
        sub._cache["base"] = a._cache["base"]
    cache[h.key] = sub
    return sub


@dataclass(frozen=True, eq=False)
class SymmetrizingForm:
    """Linear functional s with s(ab) = s(ba) and invertible Gram matrix."""

    vector: np.ndarray
    gram: np.ndarray
    source: str


def _gram(a: Algebra, s: np.ndarray) -> np.ndarray:
    return a.field.contract("ijk,k->ij", a.sc, s)


def _is_symmetric_nondegenerate(a: Algebra, s: np.ndarray):
    gram = _gram(a, s)
    if not np.array_equal(gram, gram.T):
        return None
    if a.field.inverse(gram) is None:
        return None
    return gram


def symmetrizing_form(a: GradedAlgebra, seed: int = 0) -> SymmetrizingForm:
    """Canonical symmetrizing form for the algebras in scope.

    Primary choice: compose the projection onto the identity component with
    the coefficient-of-identity functional (group algebras) or the matrix
    trace (matrix-ring base).  If that fails the symmetry/nondegeneracy
    verification, fall back to solving s(ab) = s(ba) and scanning the
    solution basis, then seeded random combinations, for a nondegenerate
    functional.
    """
    f = a.field
    d = a.dim
    candidates = []
    ident_idx = a.component_indices(0)
    if a.kind == "group":
        s = f.zeros(d)
        s[0] = 1
        candidates.append(("canonical", s))
    elif a.kind and a.kind.startswith("crossed") and "base" in a._cache:
        base = a._cache["base"]
        if base.trace_vector is not None and len(ident_idx) == base.dim:
            s = f.zeros(d)
            s[ident_idx] = base.trace_vector
            candidates.append(("canonical", s))
    elif a.algebra.trace_vector is not None and len(ident_idx) == d:
        # trivially graded matrix ring: the trace itself
        candidates.append(("canonical", a.algebra.trace_vector.copy()))
    for source, s in candidates:
        gram = _is_symmetric_nondegenerate(a.algebra, s)
        if gram is not None:
            return SymmetrizingForm(vector=s, gram=gram, source=source)

    # fallback: all symmetric functionals form the kernel of the rows
    # s . (c_ij - c_ji) = 0
    sc = a.algebra.sc
    rows = (sc - sc.transpose(1, 0, 2)).reshape(d * d, d) % f.p
    space = f.kernel(rows)
    for row in space.basis:
        gram = _is_symmetric_nondegenerate(a.algebra, row)
        if gram is not None:
            return SymmetrizingForm(vector=row.copy(), gram=gram, source="search")
    rng = np.random.default_rng(seed)
    for _ in range(64):
        coeff = rng.integers(0, f.p, size=space.dim)
        s = f.matmul(coeff[None, :], space.basis)[0]
        gram = _is_symmetric_nondegenerate(a.algebra, s)
        if gram is not None:
            return SymmetrizingForm(vector=s, gram=gram, source="search")
    raise ValidationError("not symmetric (within search budget)")


@dataclass(frozen=True, eq=False)
class UnitDecomposition:
    """Pairs (a_i, b_i), homogeneous of degree g and g^-1, with sum a_i b_i = 1."""

    degree: int
    pairs: tuple          # tuple of (vector, vector) in full algebra coordinates


def unit_decomposition(a: GradedAlgebra, g: int, variant: int = 0) -> UnitDecomposition:
    """Solve sum_i a_i b_i = 1 over R_g x R_{g^-1} pairs.

    ``variant`` > 0 adds the given kernel basis vector of the pairing system
    to the canonical solution, producing a different valid decomposition
    (used to verify choice independence downstream).
    """
    f = a.field
    ginv = a.group.inv(g)
    gi = a.component_indices(g)
    hi = a.component_indices(ginv)
    cols = [(i, j) for i in gi for j in hi]
    if not cols:
        raise ValidationError(f"components at degree {g} or its inverse are zero")
    sys = np.stack([a.algebra.sc[i, j] for (i, j) in cols], axis=1) % f.p
    x = f.solve(sys, a.algebra.unit)
    if x is None:
        raise ValidationError(
            f"no unit decomposition at degree {g}: algebra is not fully graded"
        )
    if variant:
        ker = f.kernel(sys)
        if variant > ker.dim:
            raise ValidationError(f"only {ker.dim} independent variants available")
        x = (x + ker.basis[variant - 1]) % f.p
    pairs = []
    for c, (i, j) in enumerate(cols):
        if x[c]:
            av = f.zeros(a.dim)
            av[i] = x[c]
            bv = f.zeros(a.dim)
            bv[j] = 1
            pairs.append((av, bv))
    total = f.zeros(a.dim)
    for av, bv in pairs:
        total = (total + a.algebra.multiply(av, bv)) % f.p
    if not np.array_equal(total, a.algebra.unit):
        raise ValidationError("unit decomposition failed the substitution check (bug)")
    return UnitDecomposition(degree=g, pairs=tuple(pairs))


def trivially_graded(alg: Algebra) -> GradedAlgebra:
    """View a plain algebra as graded by the trivial group."""
    return GradedAlgebra(
        algebra=alg, group=_groups.cyclic(1),
        grading=np.zeros(alg.dim, dtype=np.int64), kind=alg.kind,
    )


# -- specification files ---------------------------------------------------

def algebra_from_spec(spec: dict) -> GradedAlgebra:
    """Build a graded algebra from the JSON description format.

    {"field": {"p": 2}, "group": {"kind": ..., ...},
     "algebra": {"kind": "group_algebra"} |
                {"kind": "crossed_product", "base": {"kind": "matrix", "n": 2},
                 "action": [...], "cocycle": [[...]]}}

    Structural problems (missing keys, unknown kinds) raise SpecError;
    mathematical ones (bad table, bad cocycle) raise ValidationError.
    """
    try:
        p = int(spec["field"]["p"])
        gspec = dict(spec["group"])
        aspec = dict(spec["algebra"])
        akind = aspec.pop("kind")
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"specification missing required field: {exc}") from exc
    if "kind" not in gspec and "table" in gspec:
        gspec["kind"] = "table"
    gkind = gspec.pop("kind", None)
    if gkind not in ("cyclic", "dihedral", "symmetric", "product", "table"):
        raise SpecError(f"unknown group kind {gkind!r}")
    group = _groups.build(gkind, **gspec)
    if akind == "group_algebra":
        return group_algebra(group, p)
    if akind == "crossed_product":
        f = PrimeField(p)
        bspec = dict(aspec.get("base") or {})
        bkind = bspec.get("kind")
        if bkind != "matrix":
            raise SpecError(f"unsupported crossed-product base kind {bkind!r}")
        base = matrix_algebra(f, int(bspec["n"]))
        action = aspec.get("action")
        cocycle = aspec.get("cocycle")
        return crossed_product(group, base, action, cocycle)
    raise SpecError(f"unknown algebra kind {akind!r}")
