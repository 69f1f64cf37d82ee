"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one ``[acceptance] NN <name> PASS|FAIL`` line (visible
with ``pytest -s``); a FAIL line is followed by the collected problems.
"""

import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np

from hsdecomp import (
    Form,
    FormKind,
    HypothesisViolatedError,
    LRSum,
    PositivityClass,
    adjoint,
    apply_superop,
    build_inner_product,
    classify_form,
    classify_hermitian,
    classify_superop,
    counterexample_superop,
    diag_blocks,
    equivalence_constants,
    eval_form,
    find_zeta_certificate,
    frob_inner,
    from_liouville,
    hermitian_unit,
    identity_superop,
    matrix_unit,
    one_sum_positive,
    pd_decompose,
    selfadjoint_decompose,
    to_liouville,
    two_sum_pd,
    zeta_transform,
)
from hsdecomp.cli import main as cli_main
from helpers import (
    counterexample_form_oracle,
    kernel_disjoint_psd_family,
    random_hermitian,
    random_hermitian_liouville,
    random_lrsum,
    random_matrix,
    random_pd,
    random_pd_liouville,
    random_psd,
    rel_err,
    stacked_kernel_trivial,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _finish(num, name, problems):
    status = "FAIL" if problems else "PASS"
    print(f"[acceptance] {num:02d} {name} {status}")
    assert not problems, f"criterion {num}: " + "; ".join(problems[:5])


def test_criterion_01_basis_orthonormality():
    problems = []
    for d in range(2, 9):
        units = [matrix_unit(d, n, m) for n in range(1, d + 1) for m in range(1, d + 1)]
        hats = [hermitian_unit(d, n, m) for n in range(1, d + 1) for m in range(1, d + 1)]
        for label, family in (("plain", units), ("hermitian", hats)):
            gram = np.array([[frob_inner(x, y) for y in family] for x in family])
            defect = np.max(np.abs(gram - np.eye(d * d)))
            if defect > 1e-12:
                problems.append(f"d={d} {label} gram defect {defect:.2e}")
    _finish(1, "basis orthonormality", problems)


def test_criterion_02_decomposition_round_trip():
    rng = np.random.default_rng(1002)
    problems = []
    for k in range(200):
        d = int(rng.integers(2, 6))
        m = random_matrix(rng, d * d)
        for variant in ("left", "right"):
            err = rel_err(to_liouville(from_liouville(m, variant)), m)
            if err > 1e-10:
                problems.append(f"trial {k} d={d} {variant}: {err:.2e}")
    _finish(2, "decomposition round trip", problems)


def test_criterion_03_adjoint_law():
    rng = np.random.default_rng(1003)
    problems = []
    for k in range(200):
        d = int(rng.integers(2, 5))
        s = random_lrsum(rng, d, int(rng.integers(1, 5)))
        m = to_liouville(s)
        s_adj = adjoint(s)
        defect = np.max(np.abs(to_liouville(s_adj) - m.conj().T))
        if defect > 1e-12:
            problems.append(f"trial {k}: conjugate-transpose defect {defect:.2e}")
        rho, eta = random_matrix(rng, d), random_matrix(rng, d)
        gap = abs(
            frob_inner(apply_superop(s, rho), eta)
            - frob_inner(rho, apply_superop(s_adj, eta))
        )
        if gap > 1e-10 * max(1.0, np.linalg.norm(m)):
            problems.append(f"trial {k}: adjoint identity gap {gap:.2e}")
    _finish(3, "adjoint law", problems)


def test_criterion_04_factor_positivity_suite():
    rng = np.random.default_rng(1004)
    problems = []
    for k in range(100):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 4))
        # (i) Hermitian factors -> Hermitian Liouville
        s = LRSum.from_pairs(
            [(random_hermitian(rng, d), random_hermitian(rng, d)) for _ in range(n)], d
        )
        m = to_liouville(s)
        if np.linalg.norm(m - m.conj().T) > 1e-12 * max(1.0, np.linalg.norm(m)):
            problems.append(f"(i) trial {k}: not Hermitian")
        # (ii) PSD factors -> PSD Liouville
        s = LRSum.from_pairs([(random_psd(rng, d), random_psd(rng, d)) for _ in range(n)], d)
        lo = np.linalg.eigvalsh(to_liouville(s))[0]
        if lo < -1e-10:
            problems.append(f"(ii) trial {k}: lambda_min {lo:.2e}")
        # (iii)/(iv) PD one side, kernel-disjoint PSD other side -> PD
        count = int(rng.integers(2, 4))
        pd_side = [random_pd(rng, d) for _ in range(count)]
        psd_side = kernel_disjoint_psd_family(rng, d, count)
        for label, pairs in (
            ("(iii)", zip(pd_side, psd_side)),
            ("(iv)", zip(psd_side, pd_side)),
        ):
            lo = np.linalg.eigvalsh(to_liouville(LRSum.from_pairs(list(pairs), d)))[0]
            if not lo > 0:
                problems.append(f"{label} trial {k}: lambda_min {lo:.2e}")
    _finish(4, "factor positivity suite", problems)


def test_criterion_05_relaxation_counter_fixture():
    problems = []
    for d in (2, 3, 4):
        s = LRSum.from_pairs(
            [(matrix_unit(d, n, n), matrix_unit(d, n, n)) for n in range(1, d + 1)], d
        )
        rep = classify_superop(s)
        if rep.kind is not PositivityClass.PSD_SINGULAR:
            problems.append(f"d={d}: classified {rep.kind.value}")
        for h in range(1, d + 1):
            for k in range(1, d + 1):
                if h == k:
                    continue
                unit = matrix_unit(d, h, k)
                value = frob_inner(unit, apply_superop(s, unit))
                if value != 0:
                    problems.append(f"d={d} ({h},{k}): form value {value}")
    _finish(5, "relaxation counter-fixture", problems)


def test_criterion_06_selfadjoint_decomposition():
    rng = np.random.default_rng(1006)
    problems = []
    for k in range(100):
        d = int(rng.integers(2, 5))
        m = random_hermitian_liouville(rng, d)
        s = selfadjoint_decompose(from_liouville(m, "left"))
        scale = max(1.0, float(np.linalg.norm(m)))
        for t in s.terms:
            if np.linalg.norm(t.a - t.a.conj().T) > 1e-10:
                problems.append(f"trial {k}: left factor not Hermitian")
                break
            if np.linalg.norm(t.b - t.b.conj().T) > 1e-10 * scale:
                problems.append(f"trial {k}: right factor not Hermitian")
                break
        err = rel_err(to_liouville(s), m)
        if err > 1e-9:
            problems.append(f"trial {k}: reconstruction {err:.2e}")
    _finish(6, "selfadjoint decomposition", problems)


def test_criterion_07_one_and_two_sum():
    rng = np.random.default_rng(1007)
    problems = []
    for k in range(50):
        d = int(rng.integers(2, 5))
        # one-sum: scrambled PSD pair
        a, b = random_psd(rng, d), random_psd(rng, d)
        c = float(rng.choice([-2.0, -0.5, 3.0]))
        a_hat, b_hat, _ = one_sum_positive(c * a, b / c)
        m_ref = to_liouville(LRSum.from_pairs([(a, b)], d))
        if not classify_hermitian(a_hat).is_psd or not classify_hermitian(b_hat).is_psd:
            problems.append(f"one-sum trial {k}: output not PSD")
        err = rel_err(to_liouville(LRSum.from_pairs([(a_hat, b_hat)], d)), m_ref)
        if err > 1e-9:
            problems.append(f"one-sum trial {k}: reconstruction {err:.2e}")
        # two-sum: scrambled PD quadruple
        a1, b1, a2, b2 = (random_pd(rng, d) for _ in range(4))
        c = -3.0
        m_ref = to_liouville(LRSum.from_pairs([(a1, b1), (a2, b2)], d))
        signed, trace = two_sum_pd(a1 * c, b1 / c, a2, b2)
        if not all(classify_hermitian(t.a).is_psd for t in signed.terms):
            problems.append(f"two-sum trial {k}: left factors not PSD")
        if not all(classify_hermitian(t.b).is_pd for t in signed.terms):
            problems.append(f"two-sum trial {k}: right factors not PD")
        err = rel_err(to_liouville(signed.as_lrsum()), m_ref)
        if err > 1e-9:
            problems.append(f"two-sum trial {k}: reconstruction {err:.2e}")
        step = trace.step("right_pencil").data
        if not step["t"] < step["t0"]:
            problems.append(f"two-sum trial {k}: t >= t0")
        if not (step["lambda_min_combined_a"] > 0 and step["lambda_min_offset_b"] > 0):
            problems.append(f"two-sum trial {k}: proof matrices not PD")
    _finish(7, "one-sum / two-sum normalization", problems)


def test_criterion_08_diagonal_blocks():
    rng = np.random.default_rng(1008)
    problems = []
    for k in range(100):
        d = int(rng.integers(2, 5))
        s = from_liouville(random_pd_liouville(rng, d), "left")
        m_a = classify_superop(s).lambda_min
        for n, (_, report) in enumerate(diag_blocks(s)):
            if report.lambda_min < m_a - 1e-8:
                problems.append(
                    f"trial {k} block {n}: glb {report.lambda_min:.3e} < {m_a:.3e} - 1e-8"
                )
    _finish(8, "diagonal block bound", problems)


def test_criterion_09_pd_decompose_and_zeta():
    rng = np.random.default_rng(1009)
    problems = []
    transformed = 0
    for k in range(50):
        d = int(rng.integers(2, 4))
        if k % 2 == 0:
            m = random_pd_liouville(rng, d)
        else:
            h = random_hermitian(rng, d * d)
            m = np.eye(d * d) + 0.15 * h / np.linalg.norm(h)
        s = from_liouville(m, "left")
        signed, _ = pd_decompose(s)
        signs = [t.sign for t in signed.terms]
        if signs[0] != -1 or any(x != 1 for x in signs[1:]):
            problems.append(f"trial {k}: sign pattern {signs}")
        if not classify_hermitian(signed.terms[0].a).is_pd:
            problems.append(f"trial {k}: leading left factor not PD")
        if not classify_hermitian(signed.terms[1].a).is_pd:
            problems.append(f"trial {k}: second left factor not PD")
        if not all(classify_hermitian(t.a).is_psd for t in signed.terms[2:]):
            problems.append(f"trial {k}: tail left factors not PSD")
        if not all(classify_hermitian(t.b).is_pd for t in signed.terms):
            problems.append(f"trial {k}: right factors not PD")
        err = rel_err(to_liouville(signed.as_lrsum()), m)
        if err > 1e-8:
            problems.append(f"trial {k}: reconstruction {err:.2e}")
        cert = find_zeta_certificate(signed)
        if cert is not None:
            transformed += 1
            out = zeta_transform(signed, cert)
            err = rel_err(to_liouville(out), m)
            if err > 1e-10:
                problems.append(f"trial {k}: transform drift {err:.2e}")
            if not all(classify_hermitian(t.a).is_psd for t in out.terms):
                problems.append(f"trial {k}: transformed left factors not PSD")
            if not all(classify_hermitian(t.b).is_pd for t in out.terms):
                problems.append(f"trial {k}: transformed right factors not PD")
            if not stacked_kernel_trivial([t.a for t in out.terms]):
                problems.append(f"trial {k}: transformed kernel intersection nontrivial")
    if transformed == 0:
        problems.append("zeta transform branch never exercised")
    _finish(9, "negative-leading-term decomposition", problems)


def test_criterion_10_counterexample():
    rng = np.random.default_rng(1010)
    problems = []
    for t in (0.1, 0.25, 0.4):
        s = counterexample_superop(t)
        lo = float(np.linalg.eigvalsh(to_liouville(s))[0])
        if abs(lo - t) > 1e-10:
            problems.append(f"t={t}: lambda_min {lo}")
        for _ in range(1000):
            eta = random_matrix(rng, 2)
            value = frob_inner(eta, apply_superop(s, eta))
            expect = counterexample_form_oracle(t, eta)
            if abs(value - expect) > 1e-12 * max(1.0, abs(expect)):
                problems.append(f"t={t}: form identity off by {abs(value - expect):.2e}")
                break
    _finish(10, "counterexample operator", problems)


def test_criterion_11_forms():
    rng = np.random.default_rng(1011)
    problems = []
    eye = np.eye(2, dtype=complex)
    # rejections carry the offending index
    try:
        build_inner_product([eye, np.diag([1.0, -1.0])], [eye, eye])
        problems.append("non-PSD left factor accepted")
    except HypothesisViolatedError as err:
        if err.index != 1:
            problems.append(f"wrong index for left violation: {err.index}")
    try:
        build_inner_product([eye, eye], [eye, matrix_unit(2, 1, 1)])
        problems.append("non-PD right factor accepted")
    except HypothesisViolatedError as err:
        if err.index != 1:
            problems.append(f"wrong index for right violation: {err.index}")
    try:
        build_inner_product(
            [matrix_unit(2, 1, 1), matrix_unit(2, 1, 1)], [eye, eye]
        )
        problems.append("joint kernel accepted")
    except HypothesisViolatedError:
        pass
    # accepted builds satisfy the axioms
    for _ in range(10):
        d = int(rng.integers(2, 4))
        count = int(rng.integers(1, 4))
        phi = build_inner_product(
            [random_psd(rng, d) + 0.05 * np.eye(d) for _ in range(count)],
            [random_pd(rng, d) for _ in range(count)],
        )
        if classify_form(phi).kind is not FormKind.DEFINITE_INNER_PRODUCT:
            problems.append("accepted build does not classify definite")
        for _ in range(5):
            eta, tau = random_matrix(rng, d), random_matrix(rng, d)
            sym = abs(eval_form(phi, eta, tau) - np.conj(eval_form(phi, tau, eta)))
            if sym > 1e-12 * max(1.0, abs(eval_form(phi, eta, tau))):
                problems.append(f"conjugate symmetry off by {sym:.2e}")
            pos = eval_form(phi, eta, eta)
            if not pos.real > 0 or abs(pos.imag) > 1e-12 * max(1.0, pos.real):
                problems.append("positivity failed on random sample")
    # equivalence constants: sampled bounds and attaining witnesses
    phi1 = Form(identity_superop(2))
    phi2 = Form(counterexample_superop(0.25))
    res = equivalence_constants(phi1, phi2)

    def ratio(eta):
        return np.sqrt(
            eval_form(phi2, eta, eta).real / eval_form(phi1, eta, eta).real
        )

    m2 = to_liouville(phi2.op)
    samples = (
        rng.standard_normal((10_000, 4)) + 1j * rng.standard_normal((10_000, 4))
    )
    num = np.einsum("ni,ij,nj->n", samples.conj(), m2, samples).real
    den = np.einsum("ni,ni->n", samples.conj(), samples).real
    ratios = np.sqrt(num / den)
    if ratios.min() < res.c_lo - 1e-9 or ratios.max() > res.c_hi + 1e-9:
        problems.append(
            f"sampled ratios [{ratios.min():.12f}, {ratios.max():.12f}] "
            f"escape [{res.c_lo}, {res.c_hi}]"
        )
    if abs(ratio(res.witness_lo) - res.c_lo) > 1e-9:
        problems.append("lower witness does not attain c_lo")
    if abs(ratio(res.witness_hi) - res.c_hi) > 1e-9:
        problems.append("upper witness does not attain c_hi")
    _finish(11, "forms and equivalence constants", problems)


def test_criterion_12_cli(capsys, monkeypatch):
    problems = []

    def run(args, stdin_text=None, expect=0):
        if stdin_text is not None:
            monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
        code = cli_main(args)
        out, _ = capsys.readouterr()
        if code != expect:
            problems.append(f"{args[0]}: exit {code} != {expect}")
            return None
        return json.loads(out) if out else None

    fx = lambda name: str(FIXTURES / name)
    golden = [
        (["classify", "--in", fx("identity_d2.json")], "class", "PositiveDefinite"),
        (["apply", "--in", fx("apply_input.json")], None, None),
        (["liouville", "--in", fx("identity_d2.json")], None, None),
        (["decompose-basis", "--in", fx("identity_d2.json")], None, None),
        (["decompose-selfadjoint", "--in", fx("identity_d2.json")], None, None),
        (["reduce", "--in", fx("twosum_input.json")], None, None),
        (["adjoint", "--in", fx("identity_d2.json")], None, None),
        (["one-sum", "--in", fx("onesum_input.json")], None, None),
        (["two-sum", "--in", fx("twosum_input.json")], None, None),
        (["pd-decompose", "--in", fx("identity_d2.json")], None, None),
        (["zeta-check", "--in", fx("scalar_zeta.json"), "--zeta", "0.5"], None, None),
        (["zeta-transform", "--in", fx("scalar_zeta.json"), "--zeta", "0.5"], None, None),
        (["counterexample", "--t", "0.25"], None, None),
        (["build-ip", "--in", fx("buildip_input.json")], "class", "DefiniteInnerProduct"),
        (["form-eval", "--in", fx("formeval_input.json")], None, None),
        (["equiv", "--in", fx("equiv_input.json")], None, None),
    ]
    for args, key, expected in golden:
        rep = run(args)
        if rep is not None and key is not None and rep.get(key) != expected:
            problems.append(f"{args[0]}: {key} = {rep.get(key)!r} != {expected!r}")

    # documented zeta-check behavior: explicit invalid certificate still exits 0
    rep = run(["zeta-check", "--in", fx("scalar_zeta.json"), "--zeta", "3"])
    if rep is not None and rep["result"]["ok"] is not False:
        problems.append("zeta-check --zeta 3 should report ok=false")

    # byte stability modulo elapsed_ms
    texts = []
    for _ in range(2):
        rep = run(["pd-decompose", "--in", fx("identity_d2.json")])
        rep.pop("elapsed_ms", None)
        texts.append(json.dumps(rep, sort_keys=True))
    if texts[0] != texts[1]:
        problems.append("pd-decompose reports not byte-stable")

    # pipeline with documented exit codes
    pipeline = subprocess.run(
        f"{sys.executable} -m hsdecomp counterexample --t 0.25 | "
        f"{sys.executable} -m hsdecomp pd-decompose | "
        f"{sys.executable} -m hsdecomp zeta-check",
        shell=True, capture_output=True, text=True,
    )
    if pipeline.returncode != 0:
        problems.append(f"pipeline exit {pipeline.returncode}")
    else:
        rep = json.loads(pipeline.stdout)
        if rep["result"]["ok"] is not False or rep["result"]["searched"] is not True:
            problems.append("pipeline zeta-check should search and report ok=false")
    _finish(12, "command-line surface", problems)
