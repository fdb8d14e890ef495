"""Bimodules over pairs of structure-constant algebras.

Covers everything the verification pipeline needs: carriers cut out of a
graded algebra by cosets and double cosets, tensor products over the middle
algebra materialized as quotient presentations, linear duals, hom spaces,
projectivity via explicit splittings of free covers, direct-sum
decompositions along double cosets, and the explicit mutually inverse
multiplication/unit-decomposition isomorphisms between a double-coset
carrier and the corresponding tensor product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import galg, groups as _groups
from .errors import ValidationError
from .exactfield import PrimeField, QuotientPresentation, Subspace, subspace_from_rows


@dataclass(eq=False)
class Bimodule:
    """A vector space with commuting left and right algebra actions.

    left_action[i] is the matrix of the i-th left-algebra basis element,
    right_action[j] of the j-th right-algebra basis element; both act on
    column vectors from the left.
    """

    left: galg.Algebra
    right: galg.Algebra
    dim: int
    left_action: np.ndarray      # (dim left, dim, dim)
    right_action: np.ndarray     # (dim right, dim, dim)
    label: str = ""
    parent: object = None
    parent_indices: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def field(self) -> PrimeField:
        return self.left.field

    def validate(self) -> None:
        f = self.field
        d = self.dim
        L, R = self.left_action, self.right_action
        if L.shape != (self.left.dim, d, d) or R.shape != (self.right.dim, d, d):
            raise ValidationError("action tensor shapes inconsistent")
        if not np.array_equal(f.contract("i,ipq->pq", self.left.unit, L), f.eye(d)):
            raise ValidationError("left unit does not act as the identity")
        if not np.array_equal(f.contract("j,jpq->pq", self.right.unit, R), f.eye(d)):
            raise ValidationError("right unit does not act as the identity")
        lhs = f.contract("ipq,jqr->ijpr", L, L)
        rhs = f.contract("ijk,kpr->ijpr", self.left.sc, L)
        if not np.array_equal(lhs, rhs):
            raise ValidationError("left action is not an algebra map")
        lhs = f.contract("jpq,iqr->ijpr", R, R)
        rhs = f.contract("ijk,kpr->ijpr", self.right.sc, R)
        if not np.array_equal(lhs, rhs):
            raise ValidationError("right action is not a right representation")
        lhs = f.contract("ipq,jqr->ijpr", L, R)
        rhs = f.contract("jpq,iqr->ijpr", R, L)
        if not np.array_equal(lhs, rhs):
            raise ValidationError("left and right actions do not commute")

    def left_op(self, avec: np.ndarray) -> np.ndarray:
        return self.field.contract("i,ipq->pq", avec, self.left_action)

    def right_op(self, bvec: np.ndarray) -> np.ndarray:
        return self.field.contract("j,jpq->pq", bvec, self.right_action)

    def __repr__(self) -> str:
        return f"Bimodule({self.label or 'dim %d' % self.dim})"


@dataclass(eq=False)
class BimoduleMap:
    """A linear map commuting with both actions."""

    source: Bimodule
    target: Bimodule
    matrix: np.ndarray

    def validate(self) -> None:
        f = self.source.field
        m = self.matrix
        if m.shape != (self.target.dim, self.source.dim):
            raise ValidationError("bimodule map has the wrong shape")
        for name, src_act, tgt_act in (
            ("left", self.source.left_action, self.target.left_action),
            ("right", self.source.right_action, self.target.right_action),
        ):
            lhs = f.contract("pq,aqr->apr", m, src_act)
            rhs = f.contract("apq,qr->apr", tgt_act, m)
            if not np.array_equal(lhs, rhs):
                raise ValidationError(f"map does not commute with the {name} action")

    def compose(self, other: "BimoduleMap") -> "BimoduleMap":
        """self after other."""
        if other.target is not self.source:
            raise ValidationError("composition mismatch")
        f = self.source.field
        return BimoduleMap(other.source, self.target, f.matmul(self.matrix, other.matrix))

    def is_isomorphism(self) -> bool:
        return (
            self.source.dim == self.target.dim
            and self.source.field.inverse(self.matrix) is not None
        )

    def inverse(self) -> "BimoduleMap":
        inv = self.source.field.inverse(self.matrix)
        if inv is None:
            raise ValidationError("map is not invertible")
        return BimoduleMap(self.target, self.source, inv)


def regular(a: galg.Algebra) -> Bimodule:
    """The algebra as a bimodule over itself by multiplication."""
    m = Bimodule(
        left=a, right=a, dim=a.dim,
        left_action=a.basis_left_mults.copy(),
        right_action=a.basis_right_mults.copy(),
        label="regular",
    )
    m.validate()
    return m


def graded_carrier(
    rg: galg.GradedAlgebra,
    carrier: tuple[int, ...],
    left_sub: _groups.Subgroup,
    right_sub: _groups.Subgroup,
    label: str = "",
) -> Bimodule:
    """The sum of the graded components over ``carrier`` with the left/right
    component subalgebras acting by multiplication.  Requires the carrier set
    to be stable: left_sub * carrier * right_sub inside carrier."""
    grp = rg.group
    cset = set(carrier)
    for l in left_sub.elements:
        for x in carrier:
            if grp.mul(l, x) not in cset:
                raise ValidationError("carrier is not stable under the left subgroup")
    for x in carrier:
        for r in right_sub.elements:
            if grp.mul(x, r) not in cset:
                raise ValidationError("carrier is not stable under the right subgroup")
    idx = rg.indices_for(carrier)
    left_alg = galg.component_subalgebra(rg, left_sub)
    right_alg = galg.component_subalgebra(rg, right_sub)
    lmul = rg.algebra.basis_left_mults
    rmul = rg.algebra.basis_right_mults
    li = left_alg.parent_indices
    ri = right_alg.parent_indices
    left_action = lmul[np.ix_(li, idx, idx)].copy()
    right_action = rmul[np.ix_(ri, idx, idx)].copy()
    m = Bimodule(
        left=left_alg.algebra, right=right_alg.algebra, dim=len(idx),
        left_action=left_action, right_action=right_action,
        label=label, parent=rg, parent_indices=idx,
    )
    m.validate()
    return m


def side_restricted(
    rg: galg.GradedAlgebra,
    left_sub: _groups.Subgroup,
    right_sub: _groups.Subgroup,
) -> Bimodule:
    """The whole graded algebra with multiplication actions restricted to the
    chosen left and right component subalgebras."""
    return graded_carrier(
        rg, tuple(range(rg.group.order)), left_sub, right_sub,
        label=f"carrier G as ({left_sub.elements})-({right_sub.elements})",
    )


def truncation(
    rg: galg.GradedAlgebra,
    k: _groups.Subgroup,
    g: int,
    h: _groups.Subgroup,
    left_sub: _groups.Subgroup | None = None,
    right_sub: _groups.Subgroup | None = None,
) -> Bimodule:
    """The double-coset carrier: components over KgH with R_K acting on the
    left and R_H on the right (overridable with smaller subgroups)."""
    carrier = _groups.double_coset(k, g, h)
    return graded_carrier(
        rg, carrier, left_sub or k, right_sub or h,
        label=f"carrier {carrier}",
    )


def dual(m: Bimodule) -> Bimodule:
    """The linear dual with actions (b . f . a)(x) = f(a x b)."""
    left_action = np.ascontiguousarray(m.right_action.transpose(0, 2, 1))
    right_action = np.ascontiguousarray(m.left_action.transpose(0, 2, 1))
    out = Bimodule(
        left=m.right, right=m.left, dim=m.dim,
        left_action=left_action, right_action=right_action,
        label=f"dual({m.label})" if m.label else "dual",
    )
    out.validate()
    return out


def direct_sum(*parts: Bimodule) -> Bimodule:
    """Block direct sum of bimodules over the same algebra pair."""
    if not parts:
        raise ValidationError("direct_sum needs at least one part")
    first = parts[0]
    f = first.field
    for p in parts[1:]:
        if not (p.left.structurally_equal(first.left) and p.right.structurally_equal(first.right)):
            raise ValidationError("direct summands must share the algebra pair")
    dim = sum(p.dim for p in parts)
    left_action = f.zeros((first.left.dim, dim, dim))
    right_action = f.zeros((first.right.dim, dim, dim))
    off = 0
    for p in parts:
        sl = slice(off, off + p.dim)
        left_action[:, sl, sl] = p.left_action
        right_action[:, sl, sl] = p.right_action
        off += p.dim
    out = Bimodule(left=first.left, right=first.right, dim=dim,
                   left_action=left_action, right_action=right_action,
                   label="(+)".join(p.label or "?" for p in parts))
    out.validate()
    return out


@dataclass(eq=False)
class TensorPresentation:
    """M (x)_B N presented as a quotient of M (x)_k N by the balancing
    relations span{m b (x) n - m (x) b n}; ambient index of (i, j) is
    i * dim(N) + j."""

    m: Bimodule
    n: Bimodule
    relations: Subspace
    pres: QuotientPresentation

    @property
    def ambient_dim(self) -> int:
        return self.m.dim * self.n.dim

    def ambient_index(self, i: int, j: int) -> int:
        return i * self.n.dim + j

    def to_quotient(self, vec: np.ndarray) -> np.ndarray:
        return self.pres.to_quotient(vec)

    def lift(self, qvec: np.ndarray) -> np.ndarray:
        return self.pres.lift(qvec)


def tensor_over(m: Bimodule, n: Bimodule) -> tuple[Bimodule, TensorPresentation]:
    """Tensor product over the middle algebra, with its presentation."""
    if not (m.right is n.left or m.right.structurally_equal(n.left)):
        raise ValidationError("inner algebras do not match")
    f = m.field
    dm, dn, db = m.dim, n.dim, m.right.dim
    eye_m, eye_n = f.eye(dm), f.eye(dn)
    # relation (b, i, j): (e_i . b) ox e_j - e_i ox (b . e_j)
    rel = (
        f.contract("bki,jl->bijkl", m.right_action, eye_n)
        - f.contract("ik,blj->bijkl", eye_m, n.left_action)
    ) % f.p
    relations = subspace_from_rows(f, rel.reshape(db * dm * dn, dm * dn),
                                   ambient_dim=dm * dn)
    pres = f.quotient(relations)
    proj, sect = pres.projection, pres.section

    def induced(ambient_ops):
        q = pres.quotient_dim
        out = f.zeros((len(ambient_ops), q, q))
        for a, op in enumerate(ambient_ops):
            if relations.dim:
                moved = f.matmul(op, relations.basis.T)
                if relations.reduce_rows(moved.T).any():
                    raise ValidationError("relations not stable under outer action")
            out[a] = f.matmul(proj, f.matmul(op, sect))
        return out

    left_ops = [f.kronecker(m.left_action[a], eye_n) for a in range(m.left.dim)]
    right_ops = [f.kronecker(eye_m, n.right_action[c]) for c in range(n.right.dim)]
    module = Bimodule(
        left=m.left, right=n.right, dim=pres.quotient_dim,
        left_action=induced(left_ops), right_action=induced(right_ops),
        label=f"({m.label})ox({n.label})",
    )
    module.validate()
    return module, TensorPresentation(m=m, n=n, relations=relations, pres=pres)


def hom_space(m: Bimodule, n: Bimodule) -> list[BimoduleMap]:
    """RREF-canonical basis of the space of bimodule maps M -> N."""
    if not (m.left.structurally_equal(n.left) and m.right.structurally_equal(n.right)):
        raise ValidationError("hom space needs the same algebra pair")
    f = m.field
    dm, dn = m.dim, n.dim
    rows = []
    for src_act, tgt_act in (
        (m.left_action, n.left_action),
        (m.right_action, n.right_action),
    ):
        for a in range(src_act.shape[0]):
            block = (
                f.kronecker(f.eye(dn), src_act[a].T)
                - f.kronecker(tgt_act[a], f.eye(dm))
            ) % f.p
            rows.append(block)
    if rows:
        system = np.concatenate(rows, axis=0)
    else:
        system = f.zeros((0, dn * dm))
    ker = f.kernel(system)
    out = []
    for row in ker.basis:
        bm = BimoduleMap(m, n, row.reshape(dn, dm).copy())
        bm.validate()
        out.append(bm)
    return out


def left_module_hom_space(m: Bimodule, a: galg.Algebra) -> np.ndarray:
    """Basis (stacked 3-d array) of left-module maps M -> A (A regular)."""
    f = m.field
    rows = []
    for i in range(a.dim):
        block = (
            f.kronecker(f.eye(a.dim), m.left_action[i].T)
            - f.kronecker(a.basis_left_mults[i], f.eye(m.dim))
        ) % f.p
        rows.append(block)
    ker = f.kernel(np.concatenate(rows, axis=0))
    return ker.basis.reshape(ker.dim, a.dim, m.dim).copy()


@dataclass(eq=False)
class SplittingResult:
    """Outcome of the free-cover splitting search."""

    projective: bool
    side: str
    generated_by: np.ndarray        # generator order used (module basis indices)
    cover_map: np.ndarray | None    # pi: F -> M
    splitting: np.ndarray | None    # sigma: M -> F with pi sigma = id, or None


def _one_sided_hom_basis(m: Bimodule, side: str) -> np.ndarray:
    """Basis of one-sided module maps M -> algebra (regular), cached."""
    key = ("module_homs", side)
    if key in m._cache:
        return m._cache[key]
    f = m.field
    alg = m.left if side == "left" else m.right
    act = m.left_action if side == "left" else m.right_action
    reg = alg.basis_left_mults if side == "left" else alg.basis_right_mults
    da, dm = alg.dim, m.dim
    rows = []
    for a in range(da):
        block = (
            f.kronecker(f.eye(da), act[a].T) - f.kronecker(reg[a], f.eye(dm))
        ) % f.p
        rows.append(block)
    ker = f.kernel(np.concatenate(rows, axis=0))
    basis = ker.basis.reshape(ker.dim, da, dm).copy()
    m._cache[key] = basis
    return basis


def is_projective(m: Bimodule, side: str, generator_order=None) -> SplittingResult:
    """Decide one-sided projectivity by splitting the free cover built on the
    module's own basis vectors (in index order unless overridden).

    The splitting is sought blockwise: each block of sigma is a one-sided
    module map M -> algebra, so sigma is a combination of the hom basis and
    pi sigma = id becomes a small inhomogeneous system with the canonical
    (free variables 0) solution."""
    if side not in ("left", "right"):
        raise ValidationError("side must be 'left' or 'right'")
    f = m.field
    alg = m.left if side == "left" else m.right
    act = m.left_action if side == "left" else m.right_action
    da, dm = alg.dim, m.dim
    gens = np.arange(dm) if generator_order is None else np.asarray(generator_order)
    if sorted(int(x) for x in gens) != list(range(dm)):
        raise ValidationError("generator_order must be a permutation of the basis")
    # F = alg^{#gens}, basis (gen position j, algebra basis a) -> j * da + a
    pi = f.zeros((dm, dm * da))
    for j, gen in enumerate(gens):
        pi[:, j * da:(j + 1) * da] = act[:, :, gen].T
    homs = _one_sided_hom_basis(m, side)
    nh = homs.shape[0]
    if nh == 0 and dm > 0:
        return SplittingResult(False, side, gens, pi, None)
    # columns of the small system: vec(pi_j @ hom_t) over (j, t)
    cols = f.zeros((dm * dm, dm * nh))
    for j in range(dm):
        pj = pi[:, j * da:(j + 1) * da]
        for t in range(nh):
            cols[:, j * nh + t] = f.matmul(pj, homs[t]).reshape(-1)
    x = f.solve(cols, f.eye(dm).reshape(-1))
    if x is None:
        return SplittingResult(False, side, gens, pi, None)
    coeff = x.reshape(dm, nh)
    sigma = f.contract("jt,tak->jak", coeff, homs).reshape(dm * da, dm)
    if not np.array_equal(f.matmul(pi, sigma), f.eye(dm)):
        raise ValidationError("splitting verification failed (bug)")
    return SplittingResult(True, side, gens, pi, sigma)


def decompose_by_double_cosets(
    rg: galg.GradedAlgebra,
    k: _groups.Subgroup,
    h: _groups.Subgroup,
):
    """Internal direct-sum decomposition of R_G as an R_K - R_H bimodule by
    double cosets: returns [(rep, summand, inclusion map)] and the whole."""
    whole = side_restricted(rg, k, h)
    f = rg.field
    out = []
    total = 0
    for rep in _groups.double_coset_reps(k, h):
        part = truncation(rg, k, rep, h)
        incl = f.zeros((whole.dim, part.dim))
        for local, parent in enumerate(part.parent_indices):
            incl[parent, local] = 1
        bm = BimoduleMap(part, whole, incl)
        bm.validate()
        out.append((rep, part, bm))
        total += part.dim
    if total != whole.dim:
        raise ValidationError("double-coset pieces do not fill the module (bug)")
    return whole, out


# -- multiplication isomorphisms for the double-coset carriers --------------


def _mult_forward(rg, tensor_module: Bimodule, tensor: TensorPresentation,
                  target: Bimodule) -> BimoduleMap:
    """Multiplication map (tensor quotient) -> target carrier."""
    f = rg.field
    m, n = tensor.m, tensor.n
    sc = rg.algebra.sc
    tgt_idx = {int(pidx): pos for pos, pidx in enumerate(target.parent_indices)}
    amb = f.zeros((target.dim, tensor.ambient_dim))
    for i, pi in enumerate(m.parent_indices):
        for j, pj in enumerate(n.parent_indices):
            prod = sc[pi, pj]
            for kk in np.nonzero(prod)[0]:
                if int(kk) not in tgt_idx:
                    raise ValidationError("product leaves the target carrier")
                amb[tgt_idx[int(kk)], tensor.ambient_index(i, j)] = prod[kk]
    if tensor.relations.dim and f.matmul(amb, tensor.relations.basis.T).any():
        raise ValidationError("multiplication does not kill the balancing relations")
    fwd = BimoduleMap(
        source=tensor_module, target=target,
        matrix=f.matmul(amb, tensor.pres.section),
    )
    fwd.validate()
    return fwd


def _psi_matrix(rg, tensor: TensorPresentation, source: Bimodule, degree_for) -> np.ndarray:
    """Matrix of r -> sum_i a_i ox (b_i r), with the unit decomposition taken
    at degree_for(x) where x is the grading of the source basis vector."""
    f = rg.field
    m, n = tensor.m, tensor.n
    mpos = {int(pi): i for i, pi in enumerate(m.parent_indices)}
    npos = {int(pj): j for j, pj in enumerate(n.parent_indices)}
    amb_cols = f.zeros((tensor.ambient_dim, source.dim))
    for y, py in enumerate(source.parent_indices):
        x = int(rg.grading[py])
        dec = galg.unit_decomposition(rg, degree_for(x))
        basis_vec = f.zeros(rg.dim)
        basis_vec[py] = 1
        col = f.zeros(tensor.ambient_dim)
        for av, bv in dec.pairs:
            br = rg.algebra.multiply(bv, basis_vec)
            left = f.zeros(m.dim)
            for pidx in np.nonzero(av)[0]:
                if int(pidx) not in mpos:
                    raise ValidationError("unit decomposition leaves the left carrier")
                left[mpos[int(pidx)]] = av[pidx]
            rightv = f.zeros(n.dim)
            for pidx in np.nonzero(br)[0]:
                if int(pidx) not in npos:
                    raise ValidationError("unit decomposition leaves the right carrier")
                rightv[npos[int(pidx)]] = br[pidx]
            col = (col + np.outer(left, rightv).reshape(-1)) % f.p
        amb_cols[:, y] = col
    return f.matmul(tensor.pres.projection, amb_cols)


@dataclass(eq=False)
class MultIso:
    """A mutually inverse pair: multiplication map and its unit-decomposition
    inverse, between a tensor product and a double-coset carrier."""

    tensor_module: Bimodule
    tensor: TensorPresentation
    carrier: Bimodule
    forward: BimoduleMap          # tensor -> carrier, r1 ox r2 -> r1 r2
    inverse: BimoduleMap          # carrier -> tensor


def _build_mult_iso(rg, left_mod, right_mod, carrier, degree_for) -> MultIso:
    f = rg.field
    tensor_module, tensor = tensor_over(left_mod, right_mod)
    forward = _mult_forward(rg, tensor_module, tensor, carrier)
    inv_matrix = _psi_matrix(rg, tensor, carrier, degree_for)
    inverse = BimoduleMap(source=carrier, target=tensor_module, matrix=inv_matrix)
    inverse.validate()
    if not np.array_equal(
        f.matmul(forward.matrix, inverse.matrix), f.eye(carrier.dim)
    ):
        raise ValidationError("multiplication map and its inverse do not compose to id")
    if not np.array_equal(
        f.matmul(inverse.matrix, forward.matrix), f.eye(tensor_module.dim)
    ):
        raise ValidationError("inverse and multiplication map do not compose to id")
    return MultIso(tensor_module=tensor_module, tensor=tensor, carrier=carrier,
                   forward=forward, inverse=inverse)


def mult_iso_double_coset(
    rg: galg.GradedAlgebra,
    k: _groups.Subgroup,
    g: int,
    h: _groups.Subgroup,
) -> MultIso:
    """R_K (x)_{R_[K cap gHg^-1]} R_[gH]  ~  R_[KgH] as R_K - R_H bimodules.

    The inverse is assembled componentwise: a basis vector of degree x = t g z
    (t in K, z in H) goes to sum a_i ox b_i x with 1 = sum a_i b_i taken at the
    minimal such t."""
    grp = rg.group
    meet = _groups.intersect(k, _groups.conjugate_subgroup(g, h))
    left_mod = truncation(rg, k, 0, k, left_sub=k, right_sub=meet)
    coset_gh = tuple(sorted(grp.mul(g, e) for e in h.elements))
    right_mod = graded_carrier(rg, coset_gh, meet, h, label="coset carrier")
    carrier = truncation(rg, k, g, h)
    gh_set = set(coset_gh)

    def degree_for(x: int) -> int:
        for t in k.elements:
            if grp.mul(grp.inv(t), x) in gh_set:
                return t
        raise ValidationError("carrier element misses the double coset (bug)")

    return _build_mult_iso(rg, left_mod, right_mod, carrier, degree_for)


def mult_iso_conjugate_chain(
    rg: galg.GradedAlgebra,
    g: int,
    h_elt: int,
    h: _groups.Subgroup,
) -> MultIso:
    """R_[g(hHh^-1)] (x)_{R_[hHh^-1]} R_[hH]  ~  R_[ghH], with the inverse
    r -> sum a_i ox b_i r built from a unit decomposition at degree g."""
    grp = rg.group
    conj_h = _groups.conjugate_subgroup(h_elt, h)
    gh = grp.mul(g, h_elt)
    conj_gh = _groups.conjugate_subgroup(gh, h)
    left_carrier = tuple(sorted(grp.mul(g, e) for e in conj_h.elements))
    left_mod = graded_carrier(rg, left_carrier, conj_gh, conj_h, label="left chain")
    right_carrier = tuple(sorted(grp.mul(h_elt, e) for e in h.elements))
    right_mod = graded_carrier(rg, right_carrier, conj_h, h, label="right chain")
    target_carrier = tuple(sorted(grp.mul(gh, e) for e in h.elements))
    carrier = graded_carrier(rg, target_carrier, conj_gh, h, label="target chain")
    return _build_mult_iso(rg, left_mod, right_mod, carrier, lambda x: g)


# -- isomorphism testing -----------------------------------------------------


@dataclass(frozen=True)
class IsoVerdict:
    status: str                  # "isomorphic" | "not isomorphic" | "inconclusive"
    reason: str
    witness: np.ndarray | None = None


def iso_check(m: Bimodule, n: Bimodule, seed: int = 0, budget: int = 128) -> IsoVerdict:
    """Three-valued isomorphism test: dimension, hom space, then a scan of
    basis homs followed by seeded random combinations for an invertible one."""
    if m.dim != n.dim:
        return IsoVerdict("not isomorphic", "dimension mismatch")
    homs = hom_space(m, n)
    if not homs:
        if m.dim == 0:
            return IsoVerdict("isomorphic", "both zero",
                              witness=m.field.zeros((0, 0)))
        return IsoVerdict("not isomorphic", "empty hom space")
    f = m.field
    for bm in homs:
        if f.inverse(bm.matrix) is not None:
            return IsoVerdict("isomorphic", "basis hom", witness=bm.matrix)
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        coeff = rng.integers(0, f.p, size=len(homs))
        cand = sum(int(c) * bm.matrix for c, bm in zip(coeff, homs)) % f.p
        if f.inverse(cand) is not None:
            return IsoVerdict("isomorphic", "random combination", witness=cand)
    return IsoVerdict("inconclusive", f"budget {budget} exhausted")
