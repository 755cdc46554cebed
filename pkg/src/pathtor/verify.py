"""Independent checks of the torsion identities on concrete digraphs.

Each check returns a plain dict with an ``ok`` flag so it can be emitted
directly as a JSON report.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .chains import ChainComplex, InnerProduct
from .digraph import Digraph, cartesian_product, join_digraph
from .paths import DEFAULT_MAX_LEN, allowed_paths
from .spectral import betti
from .errors import PathtorError
from .torsion import (analytic_torsion, log_rational, predict_join,
                      predict_product, r_torsion, torsion_report)
from . import exact

REL_TOL = 1e-7


def close_log(log_a: float, log_b: float, tol: float = REL_TOL) -> bool:
    """Relative agreement of two positive numbers given by their logs."""
    return abs(math.expm1(log_a - log_b)) <= tol


def verify_main(graph: Digraph, kind=InnerProduct.STANDARD, reduced: bool = False,
                max_len: int = DEFAULT_MAX_LEN, seed: int = 0) -> dict:
    """Reidemeister torsion against analytic torsion."""
    rep = torsion_report(graph, kind, reduced, max_len, seed)
    t, tau = rep.T, rep.tau_R
    ok = abs(tau - t) <= REL_TOL * max(1.0, t)
    return {"check": "main", "inner": rep.kind.value, "reduced": reduced, "T": t,
            "tau_R": tau, "T_squared": exact.fmt(rep.T_squared),
            "truncated": rep.truncated, "ok": bool(ok)}


def _reports(graph: Digraph, max_len: int, reduced: bool = False):
    pcd = allowed_paths(graph, max_len)
    cc = ChainComplex(pcd, augmented=reduced)
    kinds = (InnerProduct.STANDARD,) if reduced else tuple(InnerProduct)
    return {k: analytic_torsion(cc, k, reduced, seed=None) for k in kinds}


def verify_product(x: Digraph, y: Digraph, max_len: int = DEFAULT_MAX_LEN) -> dict:
    """Box-product torsion against the prediction from the factors."""
    rx = _reports(x, max_len)[InnerProduct.STANDARD]
    ry = _reports(y, max_len)[InnerProduct.STANDARD]
    z = _reports(cartesian_product(x, y), max_len)
    pred = predict_product(rx, ry)
    rows = {}
    for key, kind in (("T", InnerProduct.STANDARD), ("T_normalized", InnerProduct.NORMALIZED)):
        actual = z[kind]
        rows[key] = {
            "computed": actual.T, "predicted": pred.value(key),
            "computed_squared": exact.fmt(actual.T_squared),
            "predicted_squared": exact.fmt(pred.squared[key]),
            "ok": close_log(actual.log_T, pred.log(key)),
        }
    truncated = rx.truncated or ry.truncated or z[InnerProduct.STANDARD].truncated
    return {"check": "product", "truncated": truncated, **rows,
            "ok": all(r["ok"] for r in rows.values())}


def verify_join(x: Digraph, y: Digraph, max_len: int = DEFAULT_MAX_LEN) -> dict:
    """Join torsion, reduced and plain, against the prediction from the factors."""
    if x.n_vertices == 0 or y.n_vertices == 0:
        raise PathtorError("join checks need nonempty digraphs", "bad_parameter")
    rx = _reports(x, max_len, reduced=True)[InnerProduct.STANDARD]
    ry = _reports(y, max_len, reduced=True)[InnerProduct.STANDARD]
    zg = join_digraph(x, y)
    z_red = _reports(zg, max_len, reduced=True)[InnerProduct.STANDARD]
    z = _reports(zg, max_len)[InnerProduct.STANDARD]
    pred = predict_join(rx, ry)
    rows = {}
    for key, actual in (("T_reduced", z_red), ("T", z)):
        rows[key] = {
            "computed": actual.T, "predicted": pred.value(key),
            "computed_squared": exact.fmt(actual.T_squared),
            "predicted_squared": exact.fmt(pred.squared[key]),
            "ok": close_log(actual.log_T, pred.log(key)),
        }
    truncated = rx.truncated or ry.truncated or z.truncated
    return {"check": "join", "truncated": truncated, **rows,
            "ok": all(r["ok"] for r in rows.values())}


def _dims(cc: ChainComplex) -> dict[int, int]:
    return {p: cc.dim(p) for p in cc.degrees}


def verify_kunneth(x: Digraph, y: Digraph, max_len: int = DEFAULT_MAX_LEN) -> dict:
    """Dimension counts of product and join complexes against the factor dimensions."""
    out = {"check": "kunneth"}
    ok = True
    for name, build, shift, augmented in (("product", cartesian_product, 0, False),
                                          ("join", join_digraph, 1, True)):
        cx = ChainComplex(allowed_paths(x, max_len), augmented)
        cy = ChainComplex(allowed_paths(y, max_len), augmented)
        cz = ChainComplex(allowed_paths(build(x, y), max_len), augmented)
        dx, dy, dz = _dims(cx), _dims(cy), _dims(cz)
        predicted: dict[int, int] = {}
        for p, a in dx.items():
            for q, b in dy.items():
                predicted[p + q + shift] = predicted.get(p + q + shift, 0) + a * b
        # a truncated factor loses nothing below its cut-off
        top = min((c.high for c in (cx, cy, cz) if c.truncated), default=math.inf)
        degrees = [r for r in sorted(set(dz) | set(predicted)) if r <= top]
        computed = [dz.get(r, 0) for r in degrees]
        expected = [predicted.get(r, 0) for r in degrees]
        row_ok = computed == expected
        ok &= row_ok
        out[name] = {"degrees": degrees, "computed": computed, "predicted": expected,
                     "ok": row_ok}
    out["ok"] = ok
    return out


def verify_scaling(graph: Digraph, max_len: int = DEFAULT_MAX_LEN, seed: int = 0) -> dict:
    """Rescaling the inner product per degree against the closed-form factor."""
    rng = random.Random(seed)
    cc = ChainComplex(allowed_paths(graph, max_len))
    scale = {p: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for p in cc.degrees}
    base = analytic_torsion(cc, InnerProduct.STANDARD, seed=None)
    scaled = analytic_torsion(cc, InnerProduct.STANDARD, scale=scale, seed=None)
    tau_scaled = r_torsion(cc, InnerProduct.STANDARD, seed=seed, scale=scale).log_tau
    log_factor = sum(0.5 * (-1) ** p * (cc.dim(p) - betti(cc, p)) * log_rational(c)
                     for p, c in scale.items())
    factor_sq = Fraction(1)
    for p, c in scale.items():
        factor_sq *= c ** ((-1) ** p * (cc.dim(p) - betti(cc, p)))
    predicted = base.log_T + log_factor
    ok_t = close_log(scaled.log_T, predicted, 1e-9)
    ok_tau = close_log(tau_scaled, predicted, 1e-9)
    ok_exact = scaled.T_squared == base.T_squared * factor_sq
    return {"check": "scaling", "scale": {str(p): exact.fmt(c) for p, c in scale.items()},
            "T": base.T, "T_scaled": scaled.T, "tau_R_scaled": math.exp(tau_scaled),
            "predicted": math.exp(predicted), "exact": ok_exact,
            "truncated": cc.truncated, "ok": bool(ok_t and ok_tau and ok_exact)}
