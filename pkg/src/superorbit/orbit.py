"""Coadjoint orbits of regular semisimple elements.

The central routine, :func:`superdiagonalize`, conjugates an even supermatrix
W over a Grassmann ring to diagonal form one odd degree at a time.  Writing
``g = g0 + g1 + ...``, ``W = W0 + W1 + ...`` and ``D = D0 + D1 + ...`` by odd
degree, order 0 is a classical rational eigenproblem and every later order
reduces to ``X0 Y - Y X0 + Dn = Kn`` with ``Y = gn g0^-1``, solved entrywise by
dividing by eigenvalue differences.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import NonRegularError, NotInOrbitError, ParityError, SignatureError, UnsupportedFieldError
from .liesuper import PoissonRing, build
from .superring import EVEN, RingSignature, SuperPolynomial, to_scalar
from .supermatrix import SuperMatrix, diag, mat_inverse, power_sums, zeros


@dataclass(frozen=True)
class OrbitSpec:
    """Target diagonal element ``X0 = diag(lambdas)`` of gl/sl/osp(m|n)."""

    kind: str
    m: int
    n: int
    lambdas: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        lam = tuple(to_scalar(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if self.kind not in ("gl", "sl", "osp"):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if len(lam) != self.m + self.n:
            raise SignatureError(f"expected {self.m + self.n} eigenvalues, got {len(lam)}")
        if len(set(lam)) != len(lam):
            raise NonRegularError("eigenvalues of X0 must be pairwise distinct")
        if self.kind == "sl" and sum(lam[: self.m]) - sum(lam[self.m:]) != 0:
            raise SignatureError("X0 must be supertraceless for sl")

    @property
    def size(self) -> int:
        return self.m + self.n

    def powers(self) -> list[int]:
        """Exponents k of the invariants str(M^k) cutting out the orbit."""
        if self.kind == "osp":
            return [2 * i for i in range(1, self.size // 2 + 1)]
        return list(range(1, self.size + 1))

    def x0(self, ring: RingSignature) -> SuperMatrix:
        return diag(ring, self.m, self.n, self.lambdas)

    def to_json(self) -> dict:
        return {"kind": self.kind, "m": self.m, "n": self.n, "lambda": [str(x) for x in self.lambdas]}

    @classmethod
    def from_json(cls, data) -> OrbitSpec:
        return cls(data["kind"], int(data["m"]), int(data["n"]), tuple(to_scalar(x) for x in data["lambda"]))


def orbit_invariants(spec: OrbitSpec) -> list[Fraction]:
    """``c_k = str(X0^k)`` for the exponents of :meth:`OrbitSpec.powers`."""
    sgn = [1] * spec.m + [-1] * spec.n
    return [sum((s * lam ** k for s, lam in zip(sgn, spec.lambdas)), Fraction(0)) for k in spec.powers()]


def _power_sums_at(w: SuperMatrix, powers: Sequence[int]) -> list[SuperPolynomial]:
    top = max(powers)
    allp = power_sums(w, top)
    return [allp[k - 1] for k in powers]


def membership_check(w: SuperMatrix, spec: OrbitSpec) -> tuple[bool, list[SuperPolynomial]]:
    """Whether the power-sum invariants of W equal those of X0, plus the computed values."""
    if (w.m, w.n) != (spec.m, spec.n):
        raise SignatureError("matrix shape does not match the orbit")
    if w.parity != EVEN:
        raise ParityError("orbit points are even supermatrices")
    values = _power_sums_at(w, spec.powers())
    ok = all(v == c for v, c in zip(values, orbit_invariants(spec)))
    return ok, values


@dataclass
class Diagonalization:
    g: SuperMatrix
    d: SuperMatrix
    g_pieces: list[SuperMatrix]
    d_pieces: list[SuperMatrix]
    residuals: list[int]
    member: bool
    invariants: list[SuperPolynomial] = field(default_factory=list)

    @property
    def rigid(self) -> bool:
        """True when every correction D_n (n >= 1) vanishes, i.e. D = X0."""
        return all(p.is_zero() for p in self.d_pieces[1:])

    def to_json(self) -> dict:
        from .serialize import matrix_to_json

        return {
            "g": matrix_to_json(self.g),
            "D": matrix_to_json(self.d),
            "perOrderResiduals": self.residuals,
            "corrections": [matrix_to_json(p) for p in self.d_pieces[1:]],
            "member": self.member,
            "rigid": self.rigid,
        }


def _left_eigenvector(block: list[list[Fraction]], lam: Fraction) -> list[Fraction] | None:
    k = len(block)
    shifted_t = [[block[j][i] - (lam if i == j else 0) for j in range(k)] for i in range(k)]
    ns = linalg.nullspace(shifted_t, k)
    if len(ns) != 1:
        return None
    return ns[0]


def _classify_failure(block: list[list[Fraction]], wanted: Sequence[Fraction]) -> Exception:
    cp = linalg.charpoly(block)
    roots = linalg.rational_roots(cp)
    if len(roots) < len(block):
        return UnsupportedFieldError("body has eigenvalues outside the rationals")
    if len(set(roots)) < len(roots):
        return NonRegularError("body has a repeated eigenvalue")
    return NotInOrbitError(f"body spectrum {sorted(roots)} differs from {sorted(wanted)}")


def _order_zero(w0: list[list[Fraction]], spec: OrbitSpec) -> list[list[Fraction]]:
    """Rows of g0: left eigenvectors of the body, block by block."""
    m, n = spec.m, spec.n
    size = m + n
    g0 = [[Fraction(0)] * size for _ in range(size)]
    for lo, hi in ((0, m), (m, size)):
        if lo == hi:
            continue
        block = [row[lo:hi] for row in w0[lo:hi]]
        for i in range(lo, hi):
            vec = _left_eigenvector(block, spec.lambdas[i])
            if vec is None:
                raise _classify_failure(block, spec.lambdas[lo:hi])
            for j, v in enumerate(vec):
                g0[i][lo + j] = v
    return g0


def superdiagonalize(w: SuperMatrix, spec: OrbitSpec) -> Diagonalization:
    """Find g, D with ``g W = D g`` and D diagonal, order by order in the odd generators."""
    if (w.m, w.n) != (spec.m, spec.n):
        raise SignatureError("matrix shape does not match the orbit")
    if w.parity != EVEN:
        raise ParityError("superdiagonalize needs an even supermatrix")
    ring = w.ring
    top = ring.n_odd
    pieces = [w.odd_component(k) for k in range(top + 1)]
    if w.map(lambda x: x.odd_component(0) - x.odd_component(0).constant_term()).term_count():
        raise UnsupportedFieldError("body of W must be numeric")
    w0 = pieces[0].numeric()
    lam = spec.lambdas
    size = spec.size
    x0 = spec.x0(ring)
    g0 = SuperMatrix(ring, spec.m, spec.n, _order_zero(w0, spec), EVEN)
    g0_inv = mat_inverse(g0)
    gs = [g0]
    ds = [x0]
    for order in range(1, top + 1):
        k = zeros(ring, spec.m, spec.n)
        for j in range(order):
            k = k + gs[j] @ pieces[order - j]
        for j in range(1, order):
            k = k - ds[j] @ gs[order - j]
        k = k @ g0_inv
        rows_y = [[ring.zero()] * size for _ in range(size)]
        rows_d = [[ring.zero()] * size for _ in range(size)]
        for a in range(size):
            for b in range(size):
                if a == b:
                    rows_d[a][a] = k[a, a]
                elif k[a, b]:
                    rows_y[a][b] = k[a, b].scale(1 / (lam[a] - lam[b]))
        y = SuperMatrix(ring, spec.m, spec.n, rows_y, EVEN)
        gs.append(y @ g0)
        ds.append(SuperMatrix(ring, spec.m, spec.n, rows_d, EVEN))
    residuals = []
    for order in range(top + 1):
        lhs = zeros(ring, spec.m, spec.n)
        for j in range(order + 1):
            lhs = lhs + gs[j] @ pieces[order - j] - ds[j] @ gs[order - j]
        residuals.append(lhs.term_count())
    g = gs[0]
    for p in gs[1:]:
        g = g + p
    d = ds[0]
    for p in ds[1:]:
        d = d + p
    member, values = membership_check(w, spec)
    return Diagonalization(g, d, gs, ds, residuals, member, values)


def vandermonde_criterion(lambdas: Sequence, m: int, n: int) -> dict:
    """Determinant of the signed power matrix against the product of differences.

    Rows are powers 0..m+n-1 of the eigenvalues, the last n columns negated, so
    ``det = (-1)^n * prod_{i>j} (l_i - l_j)``.
    """
    lam = [to_scalar(x) for x in lambdas]
    size = m + n
    if len(lam) != size:
        raise SignatureError(f"expected {size} eigenvalues")
    mat = [[(lam[j] ** k) * (1 if j < m else -1) for j in range(size)] for k in range(size)]
    det = linalg.det(mat)
    prod = Fraction(1)
    for i in range(size):
        for j in range(i):
            prod *= lam[i] - lam[j]
    sign = (det / prod) if prod else None
    return {
        "det": det,
        "product": prod,
        "sign": sign,
        "expectedSign": (-1) ** n,
        "statedSign": (-1) ** (n * m),
        "distinct": len(set(lam)) == len(lam),
    }


# -- Ad-invariance of the supertrace powers ---------------------------------

@dataclass
class InvarianceReport:
    kind: str
    shape: tuple[int, int]
    results: dict[int, bool]
    g: SuperMatrix | None = None

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def to_json(self) -> dict:
        return {"kind": self.kind, "shape": list(self.shape), "ok": self.ok,
                "powers": {str(k): v for k, v in self.results.items()}}


def random_unipotent_factor(ring: RingSignature, m: int, n: int, odd_gens: Sequence[int], rng: random.Random) -> SuperMatrix:
    """``I + N`` with N an even supermatrix linear in the given odd generators."""
    size = m + n
    rows = [[ring.const(int(i == j)) for j in range(size)] for i in range(size)]
    for a in range(size):
        for b in range(size):
            if (a < m) != (b < m):
                for t in odd_gens:
                    c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                    rows[a][b] = rows[a][b] + ring.odd(t).scale(c)
    return SuperMatrix(ring, m, n, rows, EVEN)


def random_numeric_invertible(m: int, n: int, rng: random.Random) -> list[list[Fraction]]:
    size = m + n
    while True:
        mat = [[Fraction(0)] * size for _ in range(size)]
        for a in range(size):
            for b in range(size):
                if (a < m) == (b < m):
                    mat[a][b] = Fraction(rng.randint(-3, 3))
        if linalg.det(mat) != 0:
            return mat


def ad_invariance_check(kind: str, m: int, n: int, kmax: int, n_theta: int = 1, seed: int = 0) -> InvarianceReport:
    """Check ``str((g M g^-1)^k) == str(M^k)`` identically for a generic M and a random g."""
    alg = build(kind, m, n)
    shape = alg.shape
    s, r = alg.n_even, alg.n_odd
    base = PoissonRing(alg)
    ring = RingSignature(s, r + n_theta)
    # re-home the generic element into the ring carrying the extra odd parameters
    mm = base.generic_element().map(lambda x: _embed(x, ring), ring=ring)
    rng = random.Random(seed)
    num = SuperMatrix(ring, shape[0], shape[1], random_numeric_invertible(shape[0], shape[1], rng), EVEN)
    g = num @ random_unipotent_factor(ring, shape[0], shape[1], range(r + 1, r + n_theta + 1), rng)
    conj = g @ mm @ mat_inverse(g)
    left = power_sums(conj, kmax)
    right = power_sums(mm, kmax)
    results = {k: left[k - 1] == right[k - 1] for k in range(1, kmax + 1)}
    return InvarianceReport(kind, shape, results, g)


def _embed(x: SuperPolynomial, ring: RingSignature) -> SuperPolynomial:
    """Include a polynomial into a ring with the same even and more odd generators."""
    return SuperPolynomial(ring, dict(x.items()))


# -- Syzygy certificate verifier -------------------------------------------

def syzygy_verify(q: Sequence[SuperPolynomial], f: Sequence[SuperPolynomial],
                  F: Sequence[Sequence[SuperPolynomial]]) -> dict[str, bool]:
    """Check ``sum f_i q_i = 0``, ``F`` antisymmetric and ``f_i = sum_j F_ij q_j``."""
    if len(q) != len(f) or len(F) != len(q) or any(len(row) != len(q) for row in F):
        raise SignatureError("certificate dimensions do not match")
    ring = q[0].ring
    k = len(q)
    total = ring.zero()
    for fi, qi in zip(f, q):
        total = total + fi * qi
    anti = all(F[i][j] == -F[j][i] for i in range(k) for j in range(k))
    lifted = all(f[i] == sum((F[i][j] * q[j] for j in range(k)), ring.zero()) for i in range(k))
    out = {"relation": not total, "antisymmetric": anti, "lifted": lifted}
    out["ok"] = all(out.values())
    return out
