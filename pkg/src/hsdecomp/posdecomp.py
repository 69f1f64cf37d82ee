"""Positivity-structured decompositions of superoperators.

Given a positive (semi)definite superoperator in LR-sum form, the
routines here normalize its factors so the positivity is visible term by
term: one-sum and two-sum rescalings, the diagonal-block necessary
condition, the negative-leading-term decomposition of a positive
definite operator, and the zeta-certificate rewrite that removes the
leading negative term when a certificate exists.

Scalar parameters that the existence arguments merely assert ("large
enough", "small enough") are computed from generalized eigenvalue
pencils: the minimal feasible value with a 2x margin for growth
parameters, and a geometric shrink starting at 1/8 with floor 2^-40 for
the pencil offsets. Every chosen parameter is recorded in a
:class:`DecompositionTrace` so a decomposition can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

from .core import (
    DEFAULT_TOL,
    PositivityClass,
    as_square_matrix,
    classify_hermitian,
    frob_norm,
    hermitian_part,
    hermitian_unit,
    matrix_unit,
    skew_part,
)
from .exceptions import (
    CertificateInvalidError,
    DegenerateFactorError,
    InputError,
    NoProgressError,
    NotPositiveDefiniteError,
    NotPositiveError,
    NotSelfadjointError,
)
from .pencil import pencil_extremes
from .superop import LRSum, LRTerm, left_blocks, to_liouville

__all__ = [
    "SignedTerm",
    "SignedLRSum",
    "ZetaCertificate",
    "ZetaCheckResult",
    "TraceStep",
    "DecompositionTrace",
    "one_sum_positive",
    "two_sum_pd",
    "diag_blocks",
    "pd_decompose",
    "zeta_check",
    "zeta_transform",
    "find_zeta_certificate",
    "counterexample_superop",
]

_COMPLEX = np.complex128

_EPS_START = 0.125
_EPS_FLOOR = 2.0**-40


@dataclass(frozen=True, slots=True)
class SignedTerm:
    sign: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError(f"sign must be +1 or -1, got {self.sign!r}")
        a = as_square_matrix(self.a, "a")
        b = as_square_matrix(self.b, "b")
        if a.shape != b.shape:
            raise InputError(
                f"term factors disagree in dimension: {a.shape[0]} vs {b.shape[0]}"
            )
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True, slots=True)
class SignedLRSum:
    """LR-sum with signed terms; at most one negative sign, always first."""

    dim: int
    terms: tuple[SignedTerm, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InputError(f"dim must be a positive integer, got {self.dim!r}")
        terms = tuple(
            t if isinstance(t, SignedTerm) else SignedTerm(*t) for t in self.terms
        )
        negatives = [i for i, t in enumerate(terms) if t.sign == -1]
        if len(negatives) > 1:
            raise InputError("at most one negative term is allowed")
        if negatives and negatives[0] != 0:
            raise InputError("the negative term must come first")
        for t in terms:
            if t.dim != self.dim:
                raise InputError(f"term dimension {t.dim} does not match dim {self.dim}")
        object.__setattr__(self, "terms", terms)

    @property
    def has_negative(self) -> bool:
        return bool(self.terms) and self.terms[0].sign == -1

    def as_lrsum(self) -> LRSum:
        """Fold the signs into the left factors."""
        return LRSum(self.dim, tuple(LRTerm(t.sign * t.a, t.b) for t in self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[SignedTerm]:
        return iter(self.terms)


@dataclass(frozen=True, slots=True)
class ZetaCertificate:
    """Positive scalars, one per non-negative term of a signed sum."""

    zetas: tuple[float, ...]

    def __post_init__(self):
        zetas = tuple(float(z) for z in self.zetas)
        if not zetas:
            raise InputError("certificate needs at least one zeta")
        if any(not z > 0 for z in zetas):
            raise InputError("all zetas must be positive")
        object.__setattr__(self, "zetas", zetas)


@dataclass(frozen=True, slots=True)
class ZetaCheckResult:
    """Margins of a certificate check; truthy iff the certificate is valid.

    ``b_margins[n]`` is the smallest eigenvalue of b_{n+2} - zeta b_1
    (each must be positive definite); ``a_margin`` the smallest eigenvalue
    of -a_1 + sum zeta_n a_n (must be positive semidefinite).
    """

    ok: bool
    b_margins: tuple[float, ...]
    a_margin: float

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, slots=True)
class TraceStep:
    name: str
    data: dict[str, Any]


@dataclass(frozen=True, slots=True)
class DecompositionTrace:
    steps: tuple[TraceStep, ...]

    def step(self, name: str) -> TraceStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    def has(self, name: str) -> bool:
        return any(s.name == name for s in self.steps)


class _Tracer:
    def __init__(self):
        self._steps: list[TraceStep] = []

    def add(self, name: str, **data) -> None:
        self._steps.append(TraceStep(name, data))

    def freeze(self) -> DecompositionTrace:
        return DecompositionTrace(tuple(self._steps))


def _is_pd(x, tol: float) -> bool:
    return classify_hermitian(x, tol).kind is PositivityClass.POSITIVE_DEFINITE


def _is_psd(x, tol: float) -> bool:
    return classify_hermitian(x, tol).is_psd


def _lambda_min(x) -> float:
    return float(np.linalg.eigvalsh(hermitian_part(x))[0])


def _nonvanishing_vector(x: np.ndarray, tol: float) -> tuple[np.ndarray, complex]:
    """Unit vector f with <f, x f> != 0, preferring the extreme Hermitian direction.

    Falls back to the extreme direction of the skew part when the
    Hermitian part is negligible (purely imaginary numerical range).
    """
    scale = frob_norm(x)
    if scale == 0.0:
        raise DegenerateFactorError("factor is exactly zero")
    threshold = tol * max(1.0, scale)
    for part in (hermitian_part(x), 1j * skew_part(x)):
        w, v = np.linalg.eigh(part)
        f = v[:, int(np.argmax(np.abs(w)))]
        value = complex(f.conj() @ x @ f)
        if abs(value) > threshold:
            return f, value
    raise DegenerateFactorError("quadratic form of the factor vanishes numerically")


def _shrink_offset(t0: float, conditions, tracer: _Tracer, label: str) -> tuple[float, float, int]:
    """Pick t = (1 - eps) t0 with eps shrinking geometrically until ``conditions(t)``.

    Returns (t, eps, shrink_count); raises NoProgressError below the floor.
    """
    eps = _EPS_START
    shrinks = 0
    while True:
        t = (1.0 - eps) * t0
        if conditions(t):
            return t, eps, shrinks
        eps /= 2.0
        shrinks += 1
        if eps < _EPS_FLOOR:
            tracer.add(label, t0=t0, eps=eps, shrinks=shrinks, failed=True)
            raise NoProgressError(
                f"{label}: offset search below floor {_EPS_FLOOR}", trace=tracer.freeze()
            )


def _grow_margin(required: float, predicate, tracer: _Tracer, label: str) -> float:
    """Minimal feasible scalar (from a pencil bound) doubled, grown further if needed."""
    value = 2.0 * max(0.0, required)
    if predicate(value):
        return value
    bump = max(1.0, abs(required))
    for _ in range(64):
        value = 2.0 * value + bump
        if predicate(value):
            return value
    tracer.add(label, required=required, failed=True)
    raise NoProgressError(f"{label}: margin search stalled", trace=tracer.freeze())


def one_sum_positive(a, b, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray, DecompositionTrace]:
    """Rescale a one-term PSD superoperator so both factors are PSD.

    The superoperator eta -> a eta b must be nonzero and positive
    semidefinite. With f0 a direction on which the quadratic form of b
    does not vanish and alpha = <f0, b f0>, the pair (alpha a, b / alpha)
    represents the same superoperator with both factors positive
    semidefinite -- positive definite whenever the superoperator is.
    """
    a = as_square_matrix(a, "a")
    b = as_square_matrix(b, "b")
    s = LRSum.from_pairs([(a, b)])
    m = to_liouville(s)
    report = classify_hermitian(m, tol)
    tracer = _Tracer()
    tracer.add("classify", kind=report.kind.value, lambda_min=report.lambda_min)
    if frob_norm(m) <= tol:
        raise NotPositiveError("superoperator is zero")
    if not report.is_psd:
        raise NotPositiveError(
            f"superoperator classifies {report.kind.value}, not positive semidefinite"
        )
    if frob_norm(a) == 0.0 or frob_norm(b) == 0.0:
        raise DegenerateFactorError("zero factor with nonzero superoperator")
    f0, alpha = _nonvanishing_vector(b, tol)
    a_hat = alpha * a
    b_hat = b / alpha
    tracer.add(
        "rescale",
        f0=f0,
        alpha=alpha,
        lambda_min_a=_lambda_min(a_hat),
        lambda_min_b=_lambda_min(b_hat),
    )
    return a_hat, b_hat, tracer.freeze()


def _one_sum_fallback(
    p: np.ndarray, q: np.ndarray, dim: int, tol: float, tracer: _Tracer, note: str
) -> SignedLRSum:
    """Degenerate two-sum path: one term vanished, rescale the survivor."""
    a_hat, b_hat, sub = one_sum_positive(p, q, tol)
    tracer.add("one_sum_fallback", note=note, sub_steps=[s.name for s in sub.steps])
    pad = SignedTerm(1, np.zeros((dim, dim), dtype=_COMPLEX), np.eye(dim, dtype=_COMPLEX))
    return SignedLRSum(dim, (SignedTerm(1, a_hat, b_hat), pad))


def two_sum_pd(a1, b1, a2, b2, tol: float = DEFAULT_TOL) -> tuple[SignedLRSum, DecompositionTrace]:
    """Normalize a two-term positive definite superoperator.

    Returns two plus-signed terms with both left factors positive
    semidefinite (jointly of trivial kernel) and both right factors
    positive definite, representing the same superoperator.

    The construction works in three stages:

    1. Fold: while some right factor is not positive definite, pick g0 on
       which the other term's left factor has nonvanishing quadratic form
       and absorb the induced scalar combination, which makes that right
       factor a positive definite combination.
    2. Right pencil: with both right factors positive definite, take
       t0 = smallest eigenvalue of the pencil (b2, b1) and t = (1-eps) t0
       with eps shrinking from 1/8 until both b2 - t b1 and a1 + t a2 are
       positive definite, then regroup as (a1 + t a2, b1), (a2, b2 - t b1).
    3. Left mirror (only when the remaining left factor is not already
       PSD): fold once on the left side to make both left factors
       positive definite, then run the mirrored pencil step on the left
       factors to restore positive definiteness of the disturbed right
       factor.

    Raises
    ------
    NotPositiveDefiniteError
        If the two-term superoperator does not classify positive definite.
    NoProgressError
        If an offset search stalls (carries the partial trace).
    """
    terms = [
        (as_square_matrix(a1, "a1"), as_square_matrix(b1, "b1")),
        (as_square_matrix(a2, "a2"), as_square_matrix(b2, "b2")),
    ]
    dim = terms[0][0].shape[0]
    s = LRSum.from_pairs(terms)
    m = to_liouville(s)
    report = classify_hermitian(m, tol)
    tracer = _Tracer()
    tracer.add("classify", kind=report.kind.value, lambda_min=report.lambda_min)
    if not report.is_pd:
        raise NotPositiveDefiniteError(
            f"superoperator classifies {report.kind.value}, not positive definite"
        )
    factor_scale = max(1.0, max(frob_norm(x) for pair in terms for x in pair))

    def near_zero(x) -> bool:
        return frob_norm(x) <= tol * factor_scale

    # stage 1: make both right factors positive definite
    for _ in range(2):
        bad = [i for i, (_, q) in enumerate(terms) if not _is_pd(q, tol)]
        if not bad:
            break
        if bad[0] != 0:
            terms.reverse()
            tracer.add("swap")
        (p1, q1), (p2, q2) = terms
        if near_zero(p1):
            return _one_sum_fallback(p2, q2, dim, tol, tracer, "left factor vanished"), tracer.freeze()
        g0, beta1 = _nonvanishing_vector(p1, tol)
        beta2 = complex(g0.conj() @ p2 @ g0)
        terms = [
            (p1 / beta1, beta1 * q1 + beta2 * q2),
            (p2 - (beta2 / beta1) * p1, q2),
        ]
        tracer.add("fold_right", g0=g0, beta1=beta1, beta2=beta2)
    if not all(_is_pd(q, tol) for _, q in terms):
        raise NoProgressError("right factors not positive definite after folding",
                              trace=tracer.freeze())

    (p1, q1), (p2, q2) = terms
    if near_zero(p2):
        return _one_sum_fallback(p1, q1, dim, tol, tracer, "second term vanished"), tracer.freeze()

    # stage 2: right-factor pencil
    t0 = pencil_extremes(q2, q1).lambda_min
    t, eps, shrinks = _shrink_offset(
        t0,
        lambda t_: _is_pd(q2 - t_ * q1, tol) and _is_pd(p1 + t_ * p2, tol),
        tracer,
        "right_pencil",
    )
    terms = [(p1 + t * p2, q1), (p2, q2 - t * q1)]
    tracer.add(
        "right_pencil",
        t0=t0,
        t=t,
        eps=eps,
        shrinks=shrinks,
        lambda_min_combined_a=_lambda_min(terms[0][0]),
        lambda_min_offset_b=_lambda_min(terms[1][1]),
    )

    # stage 3: mirrored fix of the remaining left factor
    (p1, q1), (p2, q2) = terms
    if _is_psd(p2, tol):
        tracer.add("left_stage_skipped", reason="second left factor already PSD")
    else:
        w, v = np.linalg.eigh(hermitian_part(q2))
        f0 = v[:, -1]
        delta_u = complex(f0.conj() @ q2 @ f0).real
        delta_g = complex(f0.conj() @ q1 @ f0).real
        combined = delta_u * p2 + delta_g * p1
        q_mixed = q1 - (delta_g / delta_u) * q2
        tracer.add("fold_left", f0=f0, delta_u=delta_u, delta_g=delta_g)
        s0 = pencil_extremes(combined, p1).lambda_min
        s_off, eps, shrinks = _shrink_offset(
            s0,
            lambda s_: _is_pd(q_mixed + s_ * (q2 / delta_u), tol)
            and _is_pd(combined - s_ * p1, tol),
            tracer,
            "left_pencil",
        )
        terms = [
            (p1, q_mixed + s_off * (q2 / delta_u)),
            (combined - s_off * p1, q2 / delta_u),
        ]
        tracer.add("left_pencil", s0=s0, s=s_off, eps=eps, shrinks=shrinks)

    signed = SignedLRSum(dim, tuple(SignedTerm(1, p, q) for p, q in terms))
    return signed, tracer.freeze()


def diag_blocks(s: LRSum, tol: float = DEFAULT_TOL) -> list[tuple[np.ndarray, Any]]:
    """Diagonal coefficient blocks of the basis decomposition, classified.

    For a selfadjoint superoperator the blocks paired with the diagonal
    matrix units inherit its positivity: every block of a PSD operator is
    PSD, and for a positive definite operator each block's greatest lower
    bound is at least the operator's.
    """
    m = to_liouville(s)
    report = classify_hermitian(m, tol)
    if not report.is_hermitian:
        raise NotSelfadjointError("superoperator is not selfadjoint")
    blocks = left_blocks(m)
    out = []
    for n in range(s.dim):
        block = np.ascontiguousarray(blocks[n, n])
        out.append((block, classify_hermitian(block, tol)))
    return out


def _eps_hat_blocks(m: np.ndarray, d: int) -> dict[tuple[int, int], np.ndarray]:
    """Right factors of the selfadjoint basis decomposition, keyed 0-based."""
    blocks = left_blocks(m)
    return {
        (n, mm): (0.5 - 0.5j) * blocks[n, mm] + (0.5 + 0.5j) * blocks[mm, n]
        for n in range(d)
        for mm in range(d)
    }


def pd_decompose(s: LRSum, tol: float = DEFAULT_TOL) -> tuple[SignedLRSum, DecompositionTrace]:
    """Negative-leading-term decomposition of a positive definite superoperator.

    Returns a signed sum -a1 eta b1 + sum_{n>=2} a_n eta b_n representing
    the same superoperator, with a1, a2 positive definite, the remaining
    left factors positive semidefinite, and every right factor positive
    definite.

    The construction proceeds in four stages:

    1. Basis stage: compute the selfadjoint basis decomposition's
       coefficient blocks; the two leading diagonal blocks are positive
       definite with greatest lower bound at least that of the operator.
    2. Pencil stage: t0 = smallest eigenvalue of the pencil of the second
       diagonal block against the first, f its minimizing eigenvector;
       the scalars gamma_nm = <f, block_nm f> assemble a positive
       definite combined left factor once t = (1-eps) t0 is backed off
       until both it and the offset block are positive definite.
    3. Margin stage: scalars beta_nm (and alpha) taken as the minimal
       pencil-feasible values doubled turn every remaining right factor
       positive definite and isolate a single negative term.
    4. Lift stage: scalars lambda_nm make each off-diagonal Hermitian
       basis element plus lambda times the negative term's left factor
       positive semidefinite, absorbing the indefiniteness.

    Raises
    ------
    NotPositiveDefiniteError
        If the input does not classify positive definite.
    NoProgressError
        If any margin or offset search stalls (carries the trace).
    """
    m = to_liouville(s)
    report = classify_hermitian(m, tol)
    tracer = _Tracer()
    tracer.add("classify", kind=report.kind.value, lambda_min=report.lambda_min)
    if not report.is_pd:
        raise NotPositiveDefiniteError(
            f"superoperator classifies {report.kind.value}, not positive definite"
        )
    d = s.dim
    if d == 1:
        c = m[0, 0].real
        one = np.ones((1, 1), dtype=_COMPLEX)
        signed = SignedLRSum(
            1,
            (
                SignedTerm(-1, one, c * one),
                SignedTerm(1, 2.0 * one, c * one),
            ),
        )
        tracer.add("scalar_case", value=c)
        return signed, tracer.freeze()

    blocks = _eps_hat_blocks(m, d)
    diag1 = blocks[(0, 0)]
    diag2 = blocks[(1, 1)]
    others = [(n, mm) for n in range(d) for mm in range(d) if (n, mm) not in ((0, 0), (1, 1))]

    # pencil stage
    pen = pencil_extremes(diag2, diag1)
    t0 = pen.lambda_min
    f = pen.v_min
    gamma = {nm: complex(f.conj() @ blocks[nm] @ f) for nm in others}
    gamma11 = complex(f.conj() @ diag1 @ f).real
    e11 = matrix_unit(d, 1, 1)
    e22 = matrix_unit(d, 2, 2)
    hat = {nm: hermitian_unit(d, nm[0] + 1, nm[1] + 1) for nm in others}
    gamma_tail = sum(gamma[nm].real * hat[nm] for nm in others)

    def stage2_ok(t_: float) -> bool:
        left = gamma11 * (e11 + t_ * e22) + gamma_tail
        return _is_pd(left, tol) and _is_pd(diag2 - t_ * diag1, tol)

    t, eps, shrinks = _shrink_offset(t0, stage2_ok, tracer, "diag_pencil")
    left_comb = gamma11 * (e11 + t * e22) + gamma_tail
    right1 = diag1 / gamma11
    right2 = diag2 - t * diag1
    tracer.add(
        "diag_pencil",
        t0=t0,
        t=t,
        eps=eps,
        shrinks=shrinks,
        f=f,
        gamma11=gamma11,
        gamma={nm: gamma[nm] for nm in others},
    )

    drop_threshold = 1e-13 * max(1.0, frob_norm(m))
    rest: dict[tuple[int, int], np.ndarray] = {}
    dropped = []
    for nm in others:
        r = blocks[nm] - (gamma[nm] / gamma11) * diag1
        if frob_norm(r) > drop_threshold:
            rest[nm] = r
        else:
            dropped.append(nm)

    # margin stage
    beta: dict[tuple[int, int], float] = {}
    right3: dict[tuple[int, int], np.ndarray] = {}
    for nm in sorted(rest):
        mu = pencil_extremes(rest[nm], right2).lambda_min
        beta[nm] = _grow_margin(
            -mu, lambda b_: _is_pd(b_ * right2 + rest[nm], tol), tracer, f"beta_{nm}"
        )
        right3[nm] = beta[nm] * right2 + rest[nm]
    left2 = e22.copy()
    for nm in sorted(rest):
        left2 = left2 - beta[nm] * hat[nm]
    alpha_req = pencil_extremes(left2, left_comb).lambda_max
    alpha = _grow_margin(
        alpha_req, lambda a_: _is_pd(a_ * left_comb - left2, tol), tracer, "alpha"
    )
    neg_left = alpha * left_comb - left2
    tracer.add("margins", beta=dict(beta), alpha=alpha, dropped=list(dropped))

    # lift stage
    lam: dict[tuple[int, int], float] = {}
    for nm in sorted(rest):
        n, mm = nm
        if n == mm:
            continue
        nu = pencil_extremes(hat[nm], neg_left).lambda_min
        lam[nm] = _grow_margin(
            -nu, lambda l_: _is_psd(hat[nm] + l_ * neg_left, tol), tracer, f"lambda_{nm}"
        )
    tracer.add("lifts", lam=dict(lam))

    neg_right = right2.copy()
    for nm in sorted(lam):
        neg_right = neg_right + lam[nm] * right3[nm]
    out = [
        SignedTerm(-1, neg_left, neg_right),
        SignedTerm(1, left_comb, right1 + alpha * right2),
    ]
    for nm in sorted(rest):
        n, mm = nm
        if n != mm:
            out.append(SignedTerm(1, hat[nm] + lam[nm] * neg_left, right3[nm]))
        else:
            out.append(SignedTerm(1, matrix_unit(d, n + 1, n + 1), right3[nm]))
    return SignedLRSum(d, tuple(out)), tracer.freeze()


def _check_zeta_shape(decomp: SignedLRSum, certificate: ZetaCertificate) -> None:
    if not decomp.terms:
        raise InputError("decomposition has no terms")
    if not decomp.has_negative:
        raise InputError("decomposition must have a negative leading term")
    expected = len(decomp.terms) - 1
    if len(certificate.zetas) != expected:
        raise InputError(
            f"certificate length {len(certificate.zetas)} does not match "
            f"{expected} non-negative terms"
        )


def zeta_check(
    decomp: SignedLRSum, certificate: ZetaCertificate, tol: float = DEFAULT_TOL
) -> ZetaCheckResult:
    """Validate a zeta certificate against a negative-leading decomposition.

    Valid iff every b_n - zeta_n b_1 (n >= 2) is positive definite and
    -a_1 + sum_n zeta_n a_n is positive semidefinite, all at ``tol``.
    """
    _check_zeta_shape(decomp, certificate)
    lead = decomp.terms[0]
    b_margins = []
    ok = True
    for zeta, term in zip(certificate.zetas, decomp.terms[1:]):
        diff = term.b - zeta * lead.b
        rep = classify_hermitian(diff, tol)
        b_margins.append(rep.lambda_min)
        ok = ok and rep.is_pd
    combined = -lead.a
    for zeta, term in zip(certificate.zetas, decomp.terms[1:]):
        combined = combined + zeta * term.a
    rep = classify_hermitian(combined, tol)
    ok = ok and rep.is_psd
    return ZetaCheckResult(ok, tuple(b_margins), rep.lambda_min)


def zeta_transform(
    decomp: SignedLRSum, certificate: ZetaCertificate, tol: float = DEFAULT_TOL
) -> LRSum:
    """Rewrite a certified negative-leading decomposition with no negative term.

    The leading term is replaced by (-a_1 + sum zeta_n a_n, b_1) and each
    remaining pair (a_n, b_n) by (a_n, b_n - zeta_n b_1); the Liouville
    matrix is unchanged identically.
    """
    result = zeta_check(decomp, certificate, tol)
    if not result.ok:
        raise CertificateInvalidError("zeta certificate failed validation", report=result)
    lead = decomp.terms[0]
    combined = -lead.a
    for zeta, term in zip(certificate.zetas, decomp.terms[1:]):
        combined = combined + zeta * term.a
    pairs = [(combined, lead.b)]
    pairs += [
        (term.a, term.b - zeta * lead.b)
        for zeta, term in zip(certificate.zetas, decomp.terms[1:])
    ]
    return LRSum.from_pairs(pairs, decomp.dim)


def find_zeta_certificate(
    decomp: SignedLRSum, tol: float = DEFAULT_TOL, max_halvings: int = 20
) -> ZetaCertificate | None:
    """Search for a valid certificate along the pencil-feasible ray.

    For each non-negative term the pencil of b_n against b_1 bounds the
    feasible zeta_n from above; the search walks zeta_n = (1 - 2^-k) of
    that bound for k = 1..max_halvings and returns the first certificate
    that validates, or None. Larger zetas only help the remaining
    condition (the left factors are PSD for decompositions produced
    here), so failure along this ray means the search family is
    exhausted; it does not prove that no certificate exists.
    """
    _check_zeta_shape(decomp, ZetaCertificate((1.0,) * (len(decomp.terms) - 1)))
    lead_b = decomp.terms[0].b
    if not _is_pd(lead_b, tol):
        return None
    bounds = []
    for term in decomp.terms[1:]:
        bound = pencil_extremes(term.b, lead_b).lambda_min
        if not bound > 0:
            return None
        bounds.append(bound)
    for k in range(1, max_halvings + 1):
        shrink = 1.0 - 2.0**-k
        candidate = ZetaCertificate(tuple(shrink * b for b in bounds))
        if zeta_check(decomp, candidate, tol).ok:
            return candidate
    return None


def counterexample_superop(t: float) -> LRSum:
    """The 2x2 positive definite operator admitting no all-nonnegative LR-sum.

    For t in (0, 1/2) the operator sends eta to

        (eta_11 + (1-t) eta_22) E_11 + t eta_12 E_12
        + t eta_21 E_21 + (eta_22 + (1-t) eta_11) E_22

    whose quadratic form is t ||eta||^2 + (1-t) |eta_11 + eta_22|^2, so it
    is positive definite with greatest lower bound exactly t. Each
    coefficient read eta_nm is realized as the composition
    E_{an} eta E_{mb}.
    """
    t = float(t)
    if not 0.0 < t < 0.5:
        raise InputError(f"t must lie in (0, 1/2), got {t}")
    e = lambda n, m: matrix_unit(2, n, m)
    pairs = [
        (e(1, 1), e(1, 1)),
        ((1 - t) * e(1, 2), e(2, 1)),
        (t * e(1, 1), e(2, 2)),
        (t * e(2, 2), e(1, 1)),
        (e(2, 2), e(2, 2)),
        ((1 - t) * e(2, 1), e(1, 2)),
    ]
    return LRSum.from_pairs(pairs, 2)
