"""The claim registry and the runner that executes it."""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from .. import numfield
from . import checks as ck
from .core import FAILED, INCONCLUSIVE, VERIFIED, Claim, VerificationReport, select

SILVER_R = 2 * math.log(1 + math.sqrt(2))
THEOREM_FIELDS_EXTRA = ("golden", "silver")
CASE1_FIELD, CASE1_PRIME = "q5i", 2
COUNTEREXAMPLE_FIELD = "silver"


def table_rows() -> list[dict]:
    with open(numfield.data_dir() / "table1.json") as fh:
        return json.load(fh)["rows"]


def _field(name):
    return lambda: numfield.load_field(name)


def _case1_check():
    fd = numfield.load_field(CASE1_FIELD)
    B, n = numfield.prime_ideals_over(fd, CASE1_PRIME)[0]
    return ck.case1_field(fd, B, n)


def central_window(fd) -> tuple[float, float]:
    """[0.9402, 1.0637] when |eps| >= 1 + sqrt 2, the case-3a window for the golden unit, else [0.98, 1/0.98]."""
    if fd.regulator_ref >= SILVER_R - 1e-9:
        return ck.CENTRAL_2C
    if abs(fd.regulator_ref - 2 * math.log((1 + math.sqrt(5)) / 2)) < 1e-4:
        return ck.GOLDEN_STEP3
    return ck.CENTRAL_3B


def _gpp_check(name):
    def run():
        fd = numfield.load_field(name)
        return ck.gpp_certificate(fd, *central_window(fd))
    return run


def _static_claims() -> list[Claim]:
    C = Claim
    S2 = (ck.CENTRAL_2C, ck.CENTRAL_3B)
    return [
        C("cor-tail-sqrt2", 2.6729e-6, "<", ck.tail_sqrt2, {"a": 2, "M": "4 sqrt 2"}, group="tail"),
        C("cor-tail-sqrt3", 6.3067e-8, "<", ck.tail_sqrt3, {"a": 2, "M": "4 sqrt 3"}, group="tail"),
        C("tail-quadrature-crosscheck", 1e-12, "<=", ck.tail_quadrature_check, {"a": 2}, group="tail",
          summary="closed form against adaptive quadrature; tail(2,16) < tail(2,4 sqrt 3)"),
        C("prop-case1-k0D0", 6.9e-6, ">", ck.case1_k0_trivial, group="case1"),
        C("prop-case1-tail", 2.67287e-6, "<", ck.case1_tail, group="case1"),
        C("case1-q5i", 2.673e-6, "<", _case1_check, {"field": CASE1_FIELD, "prime": CASE1_PRIME}, group="case1"),
        C("lem-lengthB", 11, "<", ck.length_b, {"s": 0.8722}, group="lattice"),
        C("rem-lll-box", 45360, "<=", ck.lll_box_check, {"box": [15, 10, 7, 4]}, group="lattice"),
        C("prop-bj-30", 30.25, ">=", ck.bj_thirty, group="lattice"),
        C("case-2a", 0.0, "<=", ck.case_2a, {"omega": 2}, (0.6436, 1.5538), group="case2"),
        C("case-2b", 0.0, "<=", ck.case_2b, {"omega": 2}, (0.8722, 1.1465), group="case2"),
        C("case-2b-torsion-window", 4 * math.sqrt(2), "<", ck.case_2b_torsion_window, s_interval=(0.8722, 1.1465),
          group="case2"),
        C("case-2b-unit-shell", math.sqrt(2) + math.sqrt(3), ">", ck.case_2b_unit_shell, group="case2"),
        C("lem-T1", -2.22e-5, "<", ck.lem_T1, {"omega": 2}, ck.CENTRAL_2C, group="case2c"),
        C("lem-T2-G", 5.5e-8, "<", ck.lem_T2_G, {"j": 2}, group="case2c"),
        C("lem-T2", 1.65e-6, "<", ck.lem_T2, group="case2c"),
        C("lem-T3-G-norm2", 1.6e-8, "<=", ck.lem_T3_G_norm2, {"j": 2}, group="case2c"),
        C("lem-T3-G-norm3", 1.3e-9, "<=", ck.lem_T3_G_norm3, {"j": 3}, group="case2c"),
        C("lem-T3", 5.2e-7, "<", ck.lem_T3, group="case2c"),
        C("lem-T4", 3.9e-7, "<", ck.lem_T4, {"M": 8}, group="case2c"),
        C("prop-2c", 0.0, "<", ck.prop_2c, {"omega": 2}, ck.CENTRAL_2C, group="case2c"),
        C("lem-pos", 0.0, ">", ck.lem_pos, s_interval=S2[1], group="case3"),
        C("lem-3a-golden", 0.0, ">=", lambda: ck.golden_inertness(numfield.load_field("golden")), group="case3"),
        C("case-3a-step1", 0.0, "<=", ck.case_3a_step1, {"omega": 2}, (0.7862, 1.2720), group="case3"),
        C("case-3a-step1-premise", 4 * math.sqrt(2), ">=", ck.case_3a_step1_premise, s_interval=(0.7862, 1.2720),
          group="case3", informational=True,
          summary="the first step assumes |u eps^(+-1)|^2 >= 4 sqrt 2 on its window"),
        C("case-3a-step2", 0.0, "<=", ck.case_3a_step2, {"omega": 2}, (0.8608, 1.1618), group="case3"),
        C("case-3a-step3", -2.4e-5, "<", ck.case_3a_step3, {"omega": 2}, ck.GOLDEN_STEP3, group="case3"),
        C("lem-disc-bound", 16384, "<=", ck.disc_bound, {"A": [1, 3]}, group="case3"),
        C("lem-rsmall-m3", 8.0, ">=", ck.rsmall_m3, {"R": 0.54}, ck.CENTRAL_3B, group="case3"),
        C("lem-rsmall-composed", 0.0, "<", ck.rsmall_composed, group="case3"),
        C("lem-discK-inert", 0.0, ">=", ck.discK_inert, group="case3"),
        C("lem-discK-statement", 0.0, ">=", lambda: ck.discK_statement(numfield.load_field(COUNTEREXAMPLE_FIELD)),
          {"allowed": [-3, -4, -7, -11]}, group="case3",
          summary="every field with a nonempty B_2 or B_3 has Delta_K in the stated set"),
        C("case2-silver-2a", 0.0, "<=", lambda: ck.case2_field(numfield.load_field("silver"), "2a"),
          {"field": "silver"}, group="field"),
        C("case2-silver-2b", 0.0, "<=", lambda: ck.case2_field(numfield.load_field("silver"), "2b"),
          {"field": "silver"}, group="field"),
        C("case3a-golden-step1", 0.0, "<=", lambda: ck.case3a_field(numfield.load_field("golden"), 1),
          {"field": "golden"}, group="field"),
        C("case3a-golden-step2", 0.0, "<=", lambda: ck.case3a_field(numfield.load_field("golden"), 2),
          {"field": "golden"}, group="field"),
    ]


def _table_claims(rows) -> list[Claim]:
    out = []
    for row in rows:
        r, name = row["row"], row["field"]

        def reg(name=name, row=row):
            return ck.table_regulator(numfield.load_field(name), row)

        def dk(name=name, row=row):
            return ck.table_disc_k(numfield.load_field(name), row)

        def bj(j, name=name, row=row):
            return lambda: ck.table_bj(numfield.load_field(name), row, j)

        def fg(name=name, row=row):
            return ck.table_frak_g(numfield.load_field(name), row)

        p = {"row": r, "field": name}
        out += [
            Claim(f"table1-row-{r}-regulator", row["regulator"], "<=", reg, p, group="table1",
                  summary="|R_F - table| <= 5e-5"),
            Claim(f"table1-row-{r}-disc_k", float(row["disc_k"][0]), ">=", dk, p, group="table1",
                  summary="table Delta_K is a complex quadratic subfield"),
            Claim(f"table1-row-{r}-b2", float(row["b2"]), ">=", bj(2), p, ck.BJ_RANGE_TUPLE, group="table1"),
            Claim(f"table1-row-{r}-b3", float(row["b3"]), ">=", bj(3), p, ck.BJ_RANGE_TUPLE, group="table1"),
            Claim(f"frakg-row-{r}", ck.FRAK_G_BOUND, "<=", fg, dict(p, table=row["frak_g_bound"]),
                  ck.CENTRAL_3B, group="table1"),
        ]
    return out


def _field_claims(rows) -> list[Claim]:
    names = [row["field"] for row in rows] + list(THEOREM_FIELDS_EXTRA)
    out = []
    for name in names:
        p = {"field": name}
        if name.startswith("f"):
            out.append(Claim(f"case3b-{name}-conditions", ck.FRAK_G_BOUND, "<=",
                             lambda name=name: ck.case3b_conditions(numfield.load_field(name)), p,
                             ck.CENTRAL_3B, group="field"))
        out += [
            Claim(f"subfield-{name}", 0.0, ">=", lambda name=name: ck.subfield_consequences(numfield.load_field(name)),
                  p, group="field"),
            Claim(f"thm-{name}-gpp", 0.0, "<", _gpp_check(name), p, group="theorem"),
            Claim(f"thm-{name}-scan", 0.0, ">", lambda name=name: ck.scan_maximum(numfield.load_field(name)),
                  dict(p, samples=512), group="theorem"),
            Claim(f"sym-{name}", 0.0, ">=", lambda name=name: ck.symmetry_and_period(numfield.load_field(name)),
                  dict(p, samples=20, seed=0), group="theorem"),
        ]
    return out


@lru_cache(maxsize=1)
def _registry_cached(data_key: str) -> tuple:
    rows = table_rows()
    claims = _static_claims() + _table_claims(rows) + _field_claims(rows)
    ids = [c.id for c in claims]
    if len(ids) != len(set(ids)):
        raise RuntimeError("duplicate claim ids")
    return tuple(claims)


def registry() -> dict[str, Claim]:
    return {c.id: c for c in _registry_cached(str(numfield.data_dir()))}


def claim_ids(pattern: str | None = None) -> list[str]:
    return sorted(select(registry().keys(), pattern))


def run_claim(claim_id: str) -> VerificationReport:
    claim = registry()[claim_id]
    try:
        return claim.run()
    except Exception as exc:  # noqa: BLE001 - a crash is reported, not fatal to the run
        rep = VerificationReport(claim_id=claim_id, verdict=INCONCLUSIVE, claimed=claim.claimed,
                                 direction=claim.direction,
                                 wall_notes=f"{type(exc).__name__}: {exc}")
        return rep


def run(pattern: str | None = None, workers: int = 1) -> list[VerificationReport]:
    ids = claim_ids(pattern)
    if workers > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run_claim, ids))
    else:
        reports = [run_claim(i) for i in ids]
    return sorted(reports, key=lambda r: r.claim_id)


def exit_code(reports) -> int:
    verdicts = {r.verdict for r in reports}
    if FAILED in verdicts:
        return 1
    if INCONCLUSIVE in verdicts:
        return 2
    return 0
