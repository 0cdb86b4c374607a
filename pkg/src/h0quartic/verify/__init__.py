"""Interval-arithmetic verification of the numeric claims behind the h0 maximum."""
from __future__ import annotations

from .. import numfield
from . import checks
from .checks import interval_eval_G
from .core import FAILED, INCONCLUSIVE, VERIFIED, Claim, VerificationReport, certify_on, decide, sup_search
from .ledger import claim_ids, exit_code, registry, run, run_claim, table_rows


def verify_tail_constants() -> list[VerificationReport]:
    return [run_claim(i) for i in ("cor-tail-sqrt2", "cor-tail-sqrt3", "tail-quadrature-crosscheck")]


def verify_case1(fd, ideal_basis, norm_I) -> VerificationReport:
    return checks.case1_field(fd, ideal_basis, norm_I)


def verify_case2(fd) -> list[VerificationReport]:
    """Sub-reports 2a, 2b and 2c; not applicable (inconclusive) when |eps| < 1 + sqrt 2."""
    em, eps = checks.field_context(fd)
    if eps.hi < checks.SILVER.lo:
        na = VerificationReport(verdict=INCONCLUSIVE, wall_notes="not applicable: |eps| < 1 + sqrt 2")
        return [na, na, na]
    return [checks.case2_field(fd, "2a"), checks.case2_field(fd, "2b"),
            checks.gpp_certificate(fd, *checks.CENTRAL_2C)]


def verify_case3(fd) -> list[VerificationReport]:
    """Golden unit: steps 1-3 of case 3a. Otherwise the case-3b conditions and the g'' certificate."""
    em, eps = checks.field_context(fd)
    if eps.hi >= checks.SILVER.lo:
        return [VerificationReport(verdict=INCONCLUSIVE, wall_notes="not applicable: |eps| >= 1 + sqrt 2")]
    if checks.PHI.contains(eps.mid) or abs(eps.mid - checks.PHI.mid) < 1e-12:
        return [checks.golden_inertness(fd), checks.case3a_field(fd, 1), checks.case3a_field(fd, 2),
                checks.gpp_certificate(fd, *checks.GOLDEN_STEP3)]
    return [checks.case3b_conditions(fd), checks.gpp_certificate(fd, *checks.CENTRAL_3B)]


def verify_table1() -> list[VerificationReport]:
    return run("table1-*,frakg-row-*")


def verify_disc_bound() -> VerificationReport:
    return run_claim("lem-disc-bound")


def verify_subfield_disc(fd) -> VerificationReport:
    return checks.subfield_consequences(fd)


def verify_symmetry_and_period(fd, count: int = 20, seed: int = 0) -> VerificationReport:
    return checks.symmetry_and_period(fd, count, seed)
