"""Built-in spaces with known classifications, for regression testing.

Each registry space bundles a norm spec, named witness vectors whose
claimed values re-verify at load time (1e-9), the expected verdict class
per property, and the seeds the checkers need to reproduce the known
failures (witness vectors, and asymptotic-family flags where a failure is
only attained in a limit that a finite truncation approaches).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bpb import modulus_identity
from .monotonicity import HNAP, SM, UM, UMOE, WM, classify
from .norms import (Disk, DirectSum, FacetNorm, HullOfPieces, Lp, NormSpec,
                    PointSet, PolytopeBall, absolute_check, dual_norm, norm)
from .riesz import neg_part, pos_part

LOAD_TOL = 1e-9

INF = float("inf")


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class RegistrySpace:
    name: str
    spec: NormSpec
    expected: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    claims: tuple = ()
    checker_seeds: dict = field(default_factory=dict)
    asymptotic_sm_family: bool = False
    asymptotic_wm_family: bool = False
    delta: object = modulus_identity
    notes: str = ""

    def classify(self, **kw) -> dict:
        return classify(self.spec, witnesses=self.checker_seeds,
                        asymptotic_wm_family=self.asymptotic_wm_family,
                        asymptotic_sm_family=self.asymptotic_sm_family, **kw)

    def expected_mismatches(self, result: dict) -> list:
        out = []
        for prop, want in self.expected.items():
            got = result["reports"][prop].verdict_class()
            if got != want:
                out.append((prop, want, got))
        return out


def verify_claims(spec: NormSpec, claims, tol: float = LOAD_TOL) -> None:
    """Re-verify stored numeric claims; raises on any mismatch."""
    for claim in claims:
        kind = claim[0]
        if kind == "norm":
            _, x, val = claim
            got = float(norm(spec, np.asarray(x, float)))
        elif kind == "dual_norm":
            _, x, val = claim
            got = float(dual_norm(spec, np.asarray(x, float)))
        elif kind == "norm_plus":
            _, x, val = claim
            got = float(norm(spec, pos_part(np.asarray(x, float))))
        elif kind == "norm_minus":
            _, x, val = claim
            got = float(norm(spec, neg_part(np.asarray(x, float))))
        elif kind == "pairing":
            _, x, f, val = claim
            got = float(np.dot(np.asarray(f, float), np.asarray(x, float)))
        elif kind == "split_sum":
            _, x, f, val = claim
            xv, fv = np.asarray(x, float), np.asarray(f, float)
            got = (float(dual_norm(spec, pos_part(fv))) * float(norm(spec, pos_part(xv)))
                   + float(dual_norm(spec, neg_part(fv))) * float(norm(spec, neg_part(xv))))
        else:
            raise RegistryError(f"unknown claim kind {kind!r}")
        if abs(got - float(val)) > tol:
            raise RegistryError(
                f"witness claim {claim!r} re-verification failed: got {got!r}")


def _finalize(rs: RegistrySpace) -> RegistrySpace:
    rep = absolute_check(rs.spec, samples=256, seed=0)
    if not rep.ok:
        raise RegistryError(f"registry space {rs.name} is not absolute: {rep}")
    verify_claims(rs.spec, rs.claims)
    return rs


# ---------------------------------------------------------------------------
# the 3-D space with an attaining pair whose parts do not attain


def example_hnap3d() -> RegistrySpace:
    """R^3 with ||(r, s, t)|| = max(|r|, |s|, (2/3)(|r| + |s|)) + |t|.

    Carries the attaining pair x = (3/4, -3/4, 0), f = (2/3, -2/3, 1) whose
    split sum is 5/4, refuting hereditary attainment; the space is still
    weakly monotone (every finite-dimensional lattice is).
    """
    two3 = Fraction(2, 3)
    factor2d = FacetNorm(functionals=((1, 0), (0, 1), (two3, two3)), sign_flips=True)
    spec = DirectSum(parts=((factor2d, (0, 1)), (Lp(1, 1), (2,))), outer=Lp(1, 2))
    x = (0.75, -0.75, 0.0)
    f = (2.0 / 3.0, -2.0 / 3.0, 1.0)
    claims = (
        ("norm", x, 1.0),
        ("dual_norm", f, 1.0),
        ("pairing", x, f, 1.0),
        ("norm_plus", x, 0.75),
        ("norm_minus", x, 0.75),
        ("split_sum", x, f, 1.25),
    )
    return _finalize(RegistrySpace(
        name="example-hnap-3d",
        spec=spec,
        expected={HNAP: "fails", WM: "holds"},
        witnesses={"x": np.asarray(x), "f": np.asarray(f)},
        claims=claims,
        checker_seeds={HNAP: ((x, f),)},
        notes="attaining pair with split sum 5/4 > 1",
    ))


# ---------------------------------------------------------------------------
# the 3-D hull space that is not strongly monotone


SM3D_R_GRID = (0.5, 0.6, 0.69, 0.7, 0.707)


def _sm3d_z(r: float) -> np.ndarray:
    s = 1.0 / math.sqrt(2.0)
    return 0.5 * np.array([r + s, math.sqrt(1.0 - r * r) + s, -s])


def example_sm3d() -> RegistrySpace:
    """R^3 normed by the hull of the three coordinate unit disks and the
    corners (+-1, +-1, +-1)/sqrt(2).

    The witnesses z(r) = ((r, sqrt(1-r^2), 0) + (1, 1, -1)/sqrt(2))/2 have
    negative-part norm 1/(2 sqrt(2)) while their positive-part norms
    approach 1 as r -> 1/sqrt(2), so neither strong monotonicity nor the
    orthogonal-elements modulus survives.  The dual norm evaluates to
    max(plane projections in l2, l1/sqrt(2)).
    """
    s = 1.0 / math.sqrt(2.0)
    corners = tuple((a * s, b * s, c * s) for a in (1, -1) for b in (1, -1) for c in (1, -1))
    spec = HullOfPieces(pieces=(Disk(axes=(0, 1)), Disk(axes=(0, 2)),
                                Disk(axes=(1, 2)), PointSet(points=corners)), n=3)
    zs = {f"z_{r}": _sm3d_z(r) for r in SM3D_R_GRID}
    claims = tuple(("norm_minus", z, 1.0 / (2.0 * math.sqrt(2.0))) for z in zs.values())
    family = tuple(zs.values())
    return _finalize(RegistrySpace(
        name="example-sm-3d",
        spec=spec,
        expected={UM: "fails", UMOE: "fails", SM: "fails", WM: "holds"},
        witnesses=zs,
        claims=claims,
        checker_seeds={UMOE: family, SM: family, UM: family, WM: family},
        asymptotic_sm_family=True,
        notes="recombination of the positive part escapes the sphere along e3; "
              "the witness family approaches the diagonal with a constant "
              "recombination gap",
    ))


def sm3d_dual_closed_form(f) -> float:
    """The attached closed form for the dual norm of the hull space."""
    fv = np.asarray(f, dtype=float)
    return max(
        math.hypot(fv[0], fv[1]), math.hypot(fv[0], fv[2]), math.hypot(fv[1], fv[2]),
        float(np.abs(fv).sum()) / math.sqrt(2.0),
    )


def sm3d_support_oracle(f, coarse: int = 256, refine: int = 48) -> float:
    """Independent support-function maximization over the hull-space ball.

    Walks the extreme points of the ball directly: each coordinate disk is
    scanned on an angle grid and polished by golden-section, and the
    corners are evaluated exactly.  Never consults the dual-norm formula.
    """
    fv = np.asarray(f, dtype=float)
    s = 1.0 / math.sqrt(2.0)
    best = -np.inf
    for a in (1, -1):
        for b in (1, -1):
            for c in (1, -1):
                best = max(best, s * (a * fv[0] + b * fv[1] + c * fv[2]))
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        def val(theta, i=i, j=j):
            return fv[i] * math.cos(theta) + fv[j] * math.sin(theta)

        thetas = np.linspace(0.0, 2.0 * math.pi, coarse, endpoint=False)
        vals = fv[i] * np.cos(thetas) + fv[j] * np.sin(thetas)
        k = int(np.argmax(vals))
        span = 2.0 * math.pi / coarse
        lo, hi = thetas[k] - span, thetas[k] + span
        c1 = hi - gr * (hi - lo)
        c2 = lo + gr * (hi - lo)
        for _ in range(refine):
            if val(c1) < val(c2):
                lo, c1 = c1, c2
                c2 = lo + gr * (hi - lo)
            else:
                hi, c2 = c2, c1
                c1 = hi - gr * (hi - lo)
        best = max(best, val(0.5 * (lo + hi)))
    return float(best)


# ---------------------------------------------------------------------------
# the truncated block renorming that loses weak monotonicity in the limit


def default_alphas(n_blocks: int) -> tuple:
    return tuple(1.0 - 2.0 ** (-(k + 2)) for k in range(n_blocks))


def truncated_renorm(n_blocks: int = 8, alphas=None) -> RegistrySpace:
    """R^{2N} with blockwise 2-D polytope norms aggregated in l2.

    Block k has unit ball conv{+-e1, +-e2, (+-alpha_k, +-1/2)}; the witness
    z_k puts (alpha_k, -1/2) in block k.  Admissible points (norm equal to
    the positive-part norm equal to 1) are positive here, so every z_k sits
    at distance at least 1/2 from them while ||z_k+|| = alpha_k -> 1: the
    truncations exhibit the gap, and the checkers read the witness family
    asymptotically.
    """
    if n_blocks < 1:
        raise RegistryError("need at least one block")
    alphas = default_alphas(n_blocks) if alphas is None else tuple(float(a) for a in alphas)
    if len(alphas) != n_blocks or any(not 0 < a < 1 for a in alphas) or \
            any(alphas[i] >= alphas[i + 1] for i in range(len(alphas) - 1)):
        raise RegistryError("alphas must be strictly increasing in (0, 1)")
    parts = []
    for k, a in enumerate(alphas):
        block = PolytopeBall(vertices=((1, 0), (0, 1), (a, 0.5)), sign_flips=True)
        parts.append((block, (2 * k, 2 * k + 1)))
    spec = DirectSum(parts=tuple(parts), outer=Lp(2, n_blocks))
    dim = 2 * n_blocks
    zs = {}
    claims = []
    for k, a in enumerate(alphas):
        z = np.zeros(dim)
        z[2 * k] = a
        z[2 * k + 1] = -0.5
        zs[f"z_{k + 1}"] = z
        claims += [("norm", z, 1.0), ("norm_plus", z, a), ("norm_minus", z, 0.5)]
    family = tuple(zs.values())
    return _finalize(RegistrySpace(
        name=f"truncated-renorm-{n_blocks}",
        spec=spec,
        expected={SM: "fails", WM: "fails"},
        witnesses=zs,
        claims=tuple(claims),
        checker_seeds={WM: family, SM: family},
        asymptotic_sm_family=True,
        asymptotic_wm_family=True,
        notes="weak-monotonicity gap 1/2 exhibited by the block witnesses",
    ))


# ---------------------------------------------------------------------------
# lp spaces and random absolute polytopes


def _lp_delta(p):
    if p == INF or float(p) == 1.0:
        return modulus_identity
    pv = float(p)

    def delta(eps: float) -> float:
        # orthogonal-elements modulus of the p-norm: ||x||^p splits over
        # disjoint parts, so ||x+|| > (1 - eps^p)^(1/p) forces ||x-|| < eps
        return 1.0 - (1.0 - eps ** pv) ** (1.0 / pv)

    return delta


def lp_space(p, n: int) -> RegistrySpace:
    spec = Lp(p, n)
    p = spec.p
    if p == INF:
        expected = {SM: "holds", WM: "holds", HNAP: "holds"}
        if n >= 2:
            expected[UM] = "fails"
            expected[UMOE] = "fails"
        label = "inf"
    else:
        expected = {UM: "holds", UMOE: "holds", SM: "holds", WM: "holds", HNAP: "holds"}
        label = f"{p:g}"
    e1 = np.zeros(n)
    e1[0] = 1.0
    return _finalize(RegistrySpace(
        name=f"lp-{label}-{n}",
        spec=spec,
        expected=expected,
        witnesses={"e1": e1},
        claims=(("norm", e1, 1.0), ("dual_norm", e1, 1.0)),
        delta=_lp_delta(p),
    ))


def random_absolute_polytope(dim: int, seed: int) -> RegistrySpace:
    """Seeded random normalized absolute polytope ball: sign-flip closure of
    random positive-orthant vertices together with the unit vectors."""
    if dim not in (2, 3, 4):
        raise RegistryError("random polytopes support dim in {2, 3, 4}")
    rng = np.random.Generator(np.random.PCG64(seed))
    count = int(rng.integers(2, 5))
    pts = rng.uniform(0.3, 1.0, size=(count, dim))
    verts = [tuple(p) for p in pts] + [tuple(np.eye(dim)[i]) for i in range(dim)]
    spec = PolytopeBall(vertices=tuple(verts), sign_flips=True)
    expected = {HNAP: "holds", SM: "holds"} if dim == 2 else {}
    e1 = np.zeros(dim)
    e1[0] = 1.0
    return _finalize(RegistrySpace(
        name=f"random-poly-{dim}d-s{seed}",
        spec=spec,
        expected=expected,
        witnesses={"e1": e1},
        claims=(("norm", e1, 1.0),),
    ))


def random_absolute_2d(seed: int) -> RegistrySpace:
    rs = random_absolute_polytope(2, seed)
    return RegistrySpace(**{**rs.__dict__, "name": f"random-2d-s{seed}"})


# ---------------------------------------------------------------------------
# lookup


_FIXED = {
    "example-hnap-3d": example_hnap3d,
    "example-sm-3d": example_sm3d,
}


def names() -> list:
    return ["example-hnap-3d", "example-sm-3d", "truncated-renorm-8",
            "lp-1-3", "lp-2-3", "lp-inf-2", "lp-inf-3",
            "random-2d-s0", "random-2d-s1", "random-2d-s2"]


def get(name: str) -> RegistrySpace:
    if name in _FIXED:
        return _FIXED[name]()
    m = re.fullmatch(r"lp-(inf|[0-9.]+)-([0-9]+)", name)
    if m:
        p = INF if m.group(1) == "inf" else float(m.group(1))
        return lp_space(p, int(m.group(2)))
    m = re.fullmatch(r"truncated-renorm-([0-9]+)", name)
    if m:
        return truncated_renorm(int(m.group(1)))
    m = re.fullmatch(r"random-2d-s([0-9]+)", name)
    if m:
        return random_absolute_2d(int(m.group(1)))
    m = re.fullmatch(r"random-poly-([234])d-s([0-9]+)", name)
    if m:
        return random_absolute_polytope(int(m.group(1)), int(m.group(2)))
    raise RegistryError(f"unknown registry space {name!r} "
                        f"(known: {', '.join(names())}, lp-P-N, "
                        "truncated-renorm-N, random-2d-sS, random-poly-Dd-sS)")


def default_registry() -> list:
    return [get(n) for n in names()]
